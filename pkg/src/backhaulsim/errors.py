"""Exception hierarchy shared across the simulator.

Each class maps to a CLI exit code: configuration errors exit 2,
infeasible scenarios exit 3, numerical failures exit 4.
"""


class BackhaulError(Exception):
    """Base class for all simulator errors."""

    exit_code = 1


class ConfigurationError(BackhaulError):
    """Invalid parameter values or malformed configuration input."""

    exit_code = 2


class InfeasibleScenarioError(BackhaulError):
    """A scenario that cannot be served, e.g. SBSs unreachable from every gateway.

    ``detail`` carries the offending node/cluster indices when known.
    """

    exit_code = 3

    def __init__(self, message, detail=None):
        super().__init__(message)
        self.detail = detail


class NumericalError(BackhaulError):
    """Numerical routine failed to converge; message carries diagnostics."""

    exit_code = 4
