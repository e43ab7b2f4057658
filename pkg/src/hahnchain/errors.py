"""Exception types raised across the package."""


class InvalidSeries(ValueError):
    """A hypergeometric series does not terminate or divides by a vanishing Pochhammer."""


class IndexOutOfRange(IndexError):
    pass


class NotAGrid(ValueError):
    """Supplied nodes are not roots of the characteristic polynomial."""


class NegativeWeight(ValueError):
    pass


class InvalidParams(ValueError):
    pass


class InvalidSpec(ValueError):
    pass


class ParseError(ValueError):
    pass


class ConvergenceFailure(RuntimeError):
    pass


class PremiseViolated(ValueError):
    """The evolution at the requested time is not a PST time for sites 0 and N-1."""


class InvalidSite(ValueError):
    pass
