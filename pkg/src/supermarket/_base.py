from pydantic import BaseModel, ConfigDict
from pydantic.alias_generators import to_camel


def wire_name(field_name: str) -> str:
    """Maps a Python field name to its JSON name.

    Trailing underscores mark names that shadow keywords (``lambda_``) and
    are dropped; the rest is camelCased, so ``ci_half_width`` becomes
    ``ciHalfWidth``.
    """
    return to_camel(field_name.rstrip('_'))


class SupermarketBaseModel(BaseModel):
    """Base class for every document the package reads or writes.

    Fields accept either the Python name or the wire name on input; output
    always uses the wire name.
    """

    model_config = ConfigDict(
        validate_by_name=True,
        validate_by_alias=True,
        serialize_by_alias=True,
        alias_generator=wire_name,
    )
