"""Semantic exception hierarchy shared by all meanlik modules."""


class MeanlikError(Exception):
    """Base class for all meanlik errors."""


class DomainError(MeanlikError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class EvaluationError(MeanlikError, ValueError):
    """A user-supplied function returned a non-finite value where a finite
    one is required; the message names the offending point."""


class DegenerateCurveError(MeanlikError, ValueError):
    """A likelihood curve carries no mass (all node likelihoods vanish)."""


class DegenerateDataError(MeanlikError, ValueError):
    """Data admit no likelihood analysis (e.g. an all-zero series)."""


class DataFormatError(MeanlikError, ValueError):
    """An input file could not be parsed; the message names the line."""
