from pydantic import BaseModel, ConfigDict


class SchemaBase(BaseModel):
    """Immutable base for DTOs that carry numpy arrays."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)


class ConfigBase(BaseModel):
    """Base for user-supplied config blocks; unknown keys are rejected."""

    model_config = ConfigDict(extra="forbid")
