"""Exception hierarchy for ssdfit.

The CLI maps these onto exit codes, so anything user-facing should raise
one of the classes below rather than a bare Exception.
"""


class SSDFitError(Exception):
    """Base class for all ssdfit errors."""


class DatasetError(SSDFitError):
    """Invalid dataset content or construction."""


class ParseError(DatasetError):
    """Input file could not be parsed; carries the 1-based line number."""

    def __init__(self, line: int | None, message: str):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class EmptyTransformError(DatasetError):
    """Discarding censored observations left nothing to fit."""


class FitError(SSDFitError):
    """A fit could not be computed."""


class NonIdentifiableError(FitError):
    """Likelihood has no finite maximizer (e.g. every row right-censored)."""


class DegenerateDataError(FitError):
    """Data carry no scale information (e.g. all values identical)."""


class DivergenceError(FitError):
    """Optimizer left the plausible parameter region."""


class NotApplicableError(FitError):
    """Estimator cannot handle this kind of data (censored rows present)."""


class NonConvergenceError(SSDFitError):
    """Iterative estimate did not converge; carries the last iterate."""

    def __init__(self, message: str, curve=None):
        self.curve = curve
        super().__init__(message)


class BootstrapError(SSDFitError):
    """Bootstrap analysis failed."""


class AllRefitsFailedError(BootstrapError):
    """Every bootstrap replicate failed to refit."""


class DegenerateBootstrapError(BootstrapError):
    """Bootstrap draws are degenerate (zero-width confidence interval)."""


class NotTrackedError(BootstrapError):
    """Requested quantity was not tracked during the bootstrap run."""
