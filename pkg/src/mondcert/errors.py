"""Exception types shared across the package."""


class MondcertError(Exception):
    """Base class for errors reported to the user."""


class ResourceLimitExceeded(MondcertError):
    """A configured cap (pair degree, pair count, jet order, time) was hit."""

    def __init__(self, what: str, limit) -> None:
        super().__init__(f"{what} exceeded limit {limit}")
        self.what = what
        self.limit = limit


class GermValidationError(MondcertError):
    """The input is not a germ of the supported shape."""


class NotGenericallyOneToOne(GermValidationError):
    """The map is not injective off a proper analytic subset; no image equation."""
