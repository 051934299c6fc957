"""Counter-based random streams for reproducible, independent replications.

Every replication draws from its own ``Generator(Philox(child))`` where the
children are spawned from one master ``SeedSequence``, so a master seed fixes
all replications and no two replications share a stream.
"""

from numpy.random import Generator, Philox, SeedSequence


BUFFER_SIZE = 8192


class RandomStream:
    """Buffered uniform and exponential draws from a Philox generator.

    Draws are produced in numpy blocks and handed out one Python float at a
    time; the sequence depends only on the seed.
    """

    def __init__(self, seed: int | SeedSequence = 0, buffer_size: int = BUFFER_SIZE):
        self.seed_sequence = seed if isinstance(seed, SeedSequence) else SeedSequence(seed)
        self.generator = Generator(Philox(self.seed_sequence))
        self._buffer_size = buffer_size
        self._uniforms: list[float] = []
        self._uniform_index = 0
        self._exponentials: list[float] = []
        self._exponential_index = 0

    def uniform(self) -> float:
        """A draw from U[0, 1)."""
        if self._uniform_index >= len(self._uniforms):
            self._uniforms = self.generator.random(self._buffer_size).tolist()
            self._uniform_index = 0
        value = self._uniforms[self._uniform_index]
        self._uniform_index += 1
        return value

    def standard_exponential(self) -> float:
        """A draw from Exp(1)."""
        if self._exponential_index >= len(self._exponentials):
            self._exponentials = self.generator.standard_exponential(self._buffer_size).tolist()
            self._exponential_index = 0
        value = self._exponentials[self._exponential_index]
        self._exponential_index += 1
        return value

    def exponential(self, rate: float) -> float:
        """A draw from Exp(rate)."""
        return self.standard_exponential() / rate


def spawn_seeds(seed: int, count: int) -> list[SeedSequence]:
    """Returns `count` independent child seeds of one master seed.

    Workers build their own `RandomStream` from a child, so only the seed
    crosses the process boundary.
    """
    return SeedSequence(seed).spawn(count)
