"""Exception types shared across the package."""


class MilpGymError(Exception):
    """Base class for every error raised by this package."""


class LpParseError(MilpGymError):
    """Malformed LP file text.

    Carries the 1-based line and column where parsing gave up.
    """

    def __init__(self, message, line, column=None):
        loc = f"line {line}" if column is None else f"line {line}, column {column}"
        super().__init__(f"{loc}: {message}")
        self.line = line
        self.column = column


class UnsupportedLpFeatureError(LpParseError):
    """LP file uses a construct outside the supported subset."""


class InvalidProblemError(MilpGymError):
    """Problem failed validation; message lists every violation."""


class SimplexFailureError(MilpGymError):
    """Simplex hit a numerical dead end (singular basis, lost feasibility)."""


class UnboundedRelaxationError(MilpGymError):
    """The root LP relaxation is unbounded, so branch and bound cannot start."""


class SolverPhaseError(MilpGymError):
    """Operation called in the wrong solver phase (e.g. branch after FINISHED)."""


class InvalidActionError(MilpGymError):
    """Action is not a member of the current action set."""


class InvalidParameterError(MilpGymError):
    """Unknown solver parameter name or out-of-range value."""


class GeneratorParameterError(MilpGymError):
    """Instance generator parameters cannot yield a well-formed instance."""
