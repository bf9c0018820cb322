from __future__ import annotations


class BondcatError(Exception):
    """Base class for every error raised by the library."""


class DimensionMismatch(BondcatError, ValueError):
    pass


class ShapeMismatch(BondcatError, ValueError):
    pass


class ForeignElement(BondcatError, ValueError):
    pass


class DegreeOverflow(BondcatError, OverflowError):
    pass


class ComposeMismatch(BondcatError, ValueError):
    pass


class WitnessInvalid(BondcatError, ValueError):
    pass


class NotFiniteDimensional(BondcatError, ValueError):
    pass


class EndpointMismatch(BondcatError, ValueError):
    pass


class UnknownPath(BondcatError, ValueError):
    pass


class InvolutionArity(BondcatError, ValueError):
    pass


class DecisionMismatch(BondcatError, RuntimeError):
    pass


class MalformedInput(BondcatError, ValueError):
    def __init__(self, message: str, pointer: str = "") -> None:
        super().__init__(message)
        self.pointer = pointer

    def __str__(self) -> str:
        base = super().__str__()
        return f"{self.pointer or '/'}: {base}"


class ConstructionInvalid(BondcatError, RuntimeError):
    """A construction produced an output that fails its own validation."""
