"""Exception taxonomy shared by all biconf modules."""


class BiconfError(Exception):
    """Base class for all library errors."""


class DomainError(BiconfError):
    """An expression was evaluated outside its positivity domain.

    Raised for ln / real-power of a nonpositive argument and for division
    by (numerically) zero.  Carries the offending subexpression when the
    violation happened inside an expression tree.
    """

    def __init__(self, message, subexpr=None):
        super().__init__(message)
        self.subexpr = subexpr


class InadmissiblePointError(BiconfError):
    """A chart or immersion was evaluated at an inadmissible point."""


class SingularMetricError(BiconfError):
    """A metric matrix was numerically singular at the evaluation point."""


class RankDeficiencyError(BiconfError):
    """The differential of an immersion dropped rank at the evaluation point."""


class PreconditionError(BiconfError):
    """A reduced residual system was called on input outside its class."""


class FlagError(BiconfError):
    """A declared immersion flag (minimal/geodesic/umbilical) failed its
    numeric certificate at an evaluation point."""


class FitError(BiconfError):
    """Profile fitting was attempted on degenerate or insufficient data."""


class ConfigError(BiconfError):
    """Invalid run configuration (CLI or config file)."""
