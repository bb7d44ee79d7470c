"""Exception types raised across the package."""


class SPrecloneError(Exception):
    pass


class InvalidMonoid(SPrecloneError, ValueError):
    """A monoid table that fails one or more axioms.

    `violations` lists every offending instance found, e.g.
    ("assoc", a, b, c) or ("unit", x).
    """

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class NonAssociative(InvalidMonoid):
    pass


class BadUnit(InvalidMonoid):
    pass


class MalformedTable(InvalidMonoid):
    pass


class ArityMismatch(SPrecloneError, ValueError):
    pass


class DomainMismatch(SPrecloneError, ValueError):
    pass


class BadSignum(SPrecloneError, ValueError):
    pass


class BadRowIndex(SPrecloneError, IndexError):
    pass


class BadPartition(SPrecloneError, ValueError):
    pass


class InvalidFamily(SPrecloneError, ValueError):
    pass


class UnsupportedDomain(SPrecloneError, ValueError):
    pass


class CapExceeded(SPrecloneError):
    """A computation would exceed a configured size cap."""

    def __init__(self, what, required, configured):
        super().__init__(f"{what}: requires {required}, cap is {configured}")
        self.what = what
        self.required = required
        self.configured = configured


ArityCapExceeded = CapExceeded


class Unsaturated(SPrecloneError):
    pass
