"""Exception hierarchy shared by every posetkit module."""


class PosetError(Exception):
    """Base class for all posetkit errors."""


class ParseError(PosetError):
    pass


class CycleError(PosetError):
    """The listed relations do not close to an irreflexive, antisymmetric order."""


class CapExceeded(PosetError):
    """An exhaustive computation was asked for more elements than the cap allows."""


class SelfQuery(PosetError):
    pass


class WidthExceeded(PosetError):
    """No decomposition into the requested number of chains exists.

    Raised when the oracle's answers are inconsistent with the width bound
    the caller supplied (a wrong bound, or a lying oracle).
    """


class NoComparableTopPair(WidthExceeded):
    pass


class InvalidDecomposition(PosetError):
    pass


class InconsistentProbe(PosetError):
    pass


class CandidateOverflow(PosetError):
    pass


class ColorExhausted(PosetError):
    pass


class WitnessMismatch(PosetError):
    pass


class InvalidExtension(PosetError):
    pass


class DomainError(PosetError, ValueError):
    pass
