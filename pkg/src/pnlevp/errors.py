"""Exception types shared across the package."""


class PnlevpError(Exception):
    """Base class for all package-specific errors."""


class BranchCutError(PnlevpError, ValueError):
    """Evaluation point lies on a declared branch cut."""


class SingularMatrixError(PnlevpError, ValueError):
    """Linear solve hit a matrix that is singular to working precision."""


class UnsupportedProblemError(PnlevpError, ValueError):
    """Requested operation is only available for benchmark problems."""


class RankConsistencyError(PnlevpError, ValueError):
    """Loewner matrix ranks disagree across parameter samples.

    Carries the per-parameter ranks in ``ranks``.
    """

    def __init__(self, message, ranks=None):
        super().__init__(message)
        self.ranks = ranks


class RealizationError(PnlevpError, ValueError):
    """Loewner realization failed; try more or different sample points."""


class EvaluationError(PnlevpError, ValueError):
    """Barycentric evaluation failed (denominator underflow or degenerate model)."""


class ModelFormatError(PnlevpError, ValueError):
    """Offline model file is malformed or has an unsupported version."""
