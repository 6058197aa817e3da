"""Exception types shared across the library."""


class DegenerateGeometryError(ValueError):
    """Anchor geometry cannot support the requested computation."""


class UnlocalizableError(RuntimeError):
    """Too few usable anchors or candidate points remain to fix a position."""


class NoRootError(RuntimeError):
    """Bracketing of the trust-region multiplier failed to find a sign change."""
