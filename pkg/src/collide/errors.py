"""Exception types shared across the package.

Plain ``ValueError`` is used for ordinary domain errors (bad argument
values); the classes here mark failures a caller may want to handle
separately.
"""


class CollideError(Exception):
    """Base class for package-specific failures."""


class ResourceError(CollideError):
    """A requested object would exceed the desk-scale memory guards."""


class FormatError(CollideError):
    """A serialized payload or archive file is malformed.

    ``offset`` is the byte position at which parsing failed, when known.
    """

    def __init__(self, message: str, offset: int | None = None):
        if offset is not None:
            message = f"{message} (at byte {offset})"
        super().__init__(message)
        self.offset = offset


class ProtocolError(CollideError):
    """The remote peer violated the wire protocol or reported an error."""

    def __init__(self, message: str, code: int | None = None):
        super().__init__(message)
        self.code = code
