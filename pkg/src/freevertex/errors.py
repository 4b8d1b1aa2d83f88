"""Exception types raised across the package."""


class FreeVertexError(Exception):
    """Base class for every error raised by this package."""


class FormatError(FreeVertexError, ValueError):
    """Input text does not parse as a hypergraph, instance or certificate."""


class NonUniformEdge(FreeVertexError, ValueError):
    pass


class DanglingVariable(FreeVertexError, ValueError):
    pass


class InvalidParams(FreeVertexError, ValueError):
    pass


class TooLarge(FreeVertexError):
    """The object exceeds the exhaustive enumeration limit."""


class InvalidColoring(FreeVertexError, ValueError):
    pass


class NotTwoColorable(FreeVertexError):
    pass


class PreconditionViolated(FreeVertexError, ValueError):
    def __init__(self, hypothesis, detail=""):
        self.hypothesis = hypothesis
        msg = hypothesis if not detail else f"{hypothesis}: {detail}"
        super().__init__(msg)


class InternalInvariant(FreeVertexError, AssertionError):
    """A structural fact guaranteed by the construction failed to hold.

    This always indicates a bug in the solver, never bad input.
    """


class GenerationFailed(FreeVertexError):
    def __init__(self, msg, seed=None):
        self.seed = seed
        super().__init__(msg if seed is None else f"{msg} (seed={seed})")
