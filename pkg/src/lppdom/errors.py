"""Exception types shared across the package."""


class LPPError(Exception):
    pass


class ConfigurationError(LPPError, ValueError):
    """Invalid parameters: distribution, predicate, window or run config."""


class DomainError(LPPError, ValueError):
    """A site, path or configuration outside the admissible domain."""


class PreconditionError(LPPError, ValueError):
    """A lemma was asked about inputs that do not meet its hypotheses.

    Kept distinct from a lemma returning False so negative-control searches
    never masquerade as regressions.
    """


class ResourceGuardError(LPPError, ValueError):
    """Request exceeds an explicit size guard (e.g. path enumeration depth)."""
