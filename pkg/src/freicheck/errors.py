"""Exception types shared across the package.

Every failure the library reports deliberately is a ``FreicheckError``; the
class name doubles as the stable machine-readable ``kind`` in CLI JSON output.
"""


class FreicheckError(Exception):
    """Base class for all errors raised by this package."""

    @property
    def kind(self) -> str:
        return type(self).__name__


class DimensionMismatch(FreicheckError):
    """Operand shapes are not conformable."""


class RingMismatch(FreicheckError):
    """Operands live in different rings."""


class IntegerOverflow(FreicheckError):
    """A checked 64-bit arithmetic result left the representable range."""


class IndexOutOfRange(FreicheckError):
    """Row or column index outside the matrix."""


class InvalidEntry(FreicheckError):
    """A scalar is not a valid element of the target ring."""


class InvalidRing(FreicheckError):
    """Malformed ring description: unknown kind, missing or composite modulus."""


class InvalidProbability(FreicheckError):
    """Probability parameter outside the open interval (0, 1)."""


class DuplicateSupport(FreicheckError):
    """Support values of a distribution must be distinct."""


class SupportTooSmall(FreicheckError):
    """A distribution needs at least two support values."""


class InvalidDistribution(FreicheckError):
    """Masses malformed: wrong count, non-positive, or not summing to one."""


class ConfigInvalid(FreicheckError):
    """Invalid verification or analysis configuration."""


class InstanceActuallyEqual(FreicheckError):
    """AB = C holds, so there is no false-accept probability to measure."""


class BudgetExceeded(FreicheckError):
    """Exhaustive enumeration would exceed the configured vector budget."""


class FormatError(FreicheckError):
    """Malformed matrix file."""


class GenerationFailed(FreicheckError):
    """Internal error: the instance generator exhausted its re-roll budget."""
