"""Explicit configuration models for bound computations."""

from pydantic import BaseModel, ConfigDict, Field, field_validator

from factor_bounds.rootbounds import DEFAULT_CAP_BITS

# Graeffe depth used by the bound vectors. Deep enough that root and Mahler
# estimates land within a fraction of a percent of the true values for the
# degrees the comparison tables use.
TABLE_DEPTH = 10


class BoundSettings(BaseModel):
    """Numerical knobs shared by the bound vectors and single-factor bounds."""

    model_config = ConfigDict(frozen=True)

    graeffe_depth: int = Field(
        TABLE_DEPTH,
        ge=0,
        le=32,
        description="Graeffe depth for root bounds and Mahler estimates",
    )
    cap_bits: int = Field(
        DEFAULT_CAP_BITS,
        ge=64,
        description="Coefficient bit size at which Graeffe switches to majorants",
    )
    workers: int = Field(
        1, ge=1, description="Threads used to compute the method vectors"
    )

    @field_validator("cap_bits")
    @classmethod
    def validate_cap_bits(cls, v: int) -> int:
        """
        Validate the Graeffe switch threshold.

        Args:
            v: Proposed threshold in bits.

        Returns:
            int: The validated threshold.

        Raises:
            ValueError: If the threshold is not a multiple of 8.
        """
        if v % 8:
            raise ValueError(
                f"cap_bits must be a multiple of 8, got {v}.\n"
                "Majorant rescaling works on whole bytes of precision."
            )
        return v


DEFAULT_SETTINGS = BoundSettings()
