"""Optional OpenTelemetry spans around the expensive computations.

Fixed-point tables, ODE integration, the stationary solve, PH(2) fitting and
simulation replications each open one span per call when the host
application has configured a tracer provider. Spans for model-level calls
carry the load parameters through `model_attributes`:

    ```python
    @trace_function(attribute_extractor=model_attributes)
    def fixed_point_table(params, tail_eps=None, k_max=None): ...
    ```

Without the `telemetry` extra every decorator reduces to a plain call.
"""

import functools
import inspect
import logging

from collections.abc import Callable
from typing import Any


logger = logging.getLogger(__name__)

try:
    from opentelemetry import trace
    from opentelemetry.trace import SpanKind, StatusCode
except ImportError:
    logger.debug(
        'OpenTelemetry not installed, spans are disabled. '
        'Install with: pip install "supermarket-ph[telemetry]"'
    )

    class _NoOp:
        """Absorbs every tracing call."""

        def __call__(self, *args: Any, **kwargs: Any) -> Any:
            return self

        def __enter__(self) -> '_NoOp':
            return self

        def __exit__(self, *args: object) -> None:
            pass

        def __getattr__(self, name: str) -> Any:
            return self

    trace = _NoOp()  # type: ignore[assignment]
    SpanKind = _NoOp()  # type: ignore[assignment,misc]
    StatusCode = _NoOp()  # type: ignore[assignment,misc]

__all__ = ['model_attributes', 'trace_class', 'trace_function']

TRACER_NAME = 'supermarket-ph'
ATTRIBUTE_PREFIX = 'supermarket.'

AttributeExtractor = Callable[[Any, tuple, dict, Any, BaseException | None], None]


def _model_argument(args: tuple, kwargs: dict) -> Any:
    for value in (*args, *kwargs.values()):
        if hasattr(value, 'lambda_') and hasattr(value, 'd'):
            return value
    return None


def model_attributes(
    span: Any,
    args: tuple,
    kwargs: dict,
    result: Any,
    exception: BaseException | None,
) -> None:
    """Records lambda, d, rho and the PH order of the model argument on `span`.

    The first positional or keyword argument exposing ``lambda_`` and ``d``
    (a `ModelParams` or `SimConfig`) is used. Table-like results add their
    depth ``K``.
    """
    model = _model_argument(args, kwargs)
    if model is not None:
        span.set_attribute(f'{ATTRIBUTE_PREFIX}lambda', float(model.lambda_))
        span.set_attribute(f'{ATTRIBUTE_PREFIX}d', int(model.d))
        ph = getattr(model, 'ph', None)
        if ph is not None:
            span.set_attribute(f'{ATTRIBUTE_PREFIX}ph.order', int(ph.order))
            span.set_attribute(
                f'{ATTRIBUTE_PREFIX}rho', float(model.lambda_ * ph.mean())
            )
        n = getattr(model, 'n', None)
        if n is not None:
            span.set_attribute(f'{ATTRIBUTE_PREFIX}n', int(n))
    depth = getattr(result, 'K', None)
    if isinstance(depth, int):
        span.set_attribute(f'{ATTRIBUTE_PREFIX}levels', depth)
    if exception is not None:
        span.set_attribute(f'{ATTRIBUTE_PREFIX}error', type(exception).__name__)


def trace_function(
    func: Callable | None = None,
    *,
    span_name: str | None = None,
    kind: Any = SpanKind.INTERNAL,
    attributes: dict[str, Any] | None = None,
    attribute_extractor: AttributeExtractor | None = None,
) -> Callable:
    """Wraps `func` in one span per call.

    Works bare (``@trace_function``) or with options
    (``@trace_function(span_name='simulation.replications')``).

    Args:
        func: The function to wrap; None when called with options.
        span_name: Defaults to ``module.qualname`` of `func`.
        kind: OpenTelemetry span kind.
        attributes: Static attributes set on every span.
        attribute_extractor: Called as
            ``attribute_extractor(span, args, kwargs, result, exception)``
            after the call; its failures are logged, never raised.
    """
    if func is None:
        return functools.partial(
            trace_function,
            span_name=span_name,
            kind=kind,
            attributes=attributes,
            attribute_extractor=attribute_extractor,
        )

    name = span_name or f'{func.__module__}.{func.__name__}'

    @functools.wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        tracer = trace.get_tracer(TRACER_NAME)
        with tracer.start_as_current_span(name, kind=kind) as span:
            for key, value in (attributes or {}).items():
                span.set_attribute(key, value)
            result = None
            error: BaseException | None = None
            try:
                result = func(*args, **kwargs)
                span.set_status(StatusCode.OK)
                return result
            except Exception as e:
                error = e
                span.record_exception(e)
                span.set_status(StatusCode.ERROR, description=str(e))
                raise
            finally:
                if attribute_extractor is not None:
                    try:
                        attribute_extractor(span, args, kwargs, result, error)
                    except Exception as extractor_error:
                        logger.error(
                            'Attribute extraction failed for span %s: %s',
                            name,
                            extractor_error,
                        )

    return wrapper


def trace_class(
    include_list: list[str] | None = None,
    exclude_list: list[str] | None = None,
    kind: Any = SpanKind.INTERNAL,
) -> Callable:
    """Applies `trace_function` to the public methods of a class.

    Dunder methods are skipped. A non-empty `include_list` selects methods
    exclusively; otherwise everything outside `exclude_list` is traced.
    """
    skipped = set(exclude_list or [])

    def decorator(cls: type) -> type:
        for name, method in inspect.getmembers(cls, inspect.isfunction):
            if name.startswith('__') and name.endswith('__'):
                continue
            if include_list:
                if name not in include_list:
                    continue
            elif name in skipped:
                continue
            traced = trace_function(
                span_name=f'{cls.__module__}.{cls.__name__}.{name}', kind=kind
            )(method)
            setattr(cls, name, traced)
        return cls

    return decorator
