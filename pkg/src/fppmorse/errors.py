"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class FppError(Exception):
    exit_code = 1


class PreconditionError(FppError, ValueError):
    exit_code = 2


class InvalidVertexError(PreconditionError):
    def __init__(self, generator, vertex, reason=""):
        self.generator = generator
        self.vertex = vertex
        msg = f"invalid vertex {vertex!r} for generator {generator}"
        if reason:
            msg += f": {reason}"
        super().__init__(msg)


class PathError(PreconditionError):
    pass


class SpecError(PreconditionError):
    """Malformed generator / distribution / config string."""


class GuardError(FppError):
    """A memory or expansion guard fired."""

    exit_code = 3


class OutputError(FppError, OSError):
    exit_code = 4
