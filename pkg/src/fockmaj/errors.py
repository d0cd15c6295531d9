"""Exception types shared across the package."""


class FockmajError(Exception):
    """Base class for all package-specific errors."""


class TruncationTooCoarse(FockmajError):
    """A truncated computation cannot support the requested tolerance.

    Raised instead of returning an answer that truncation could flip.
    """


class ZeroState(FockmajError):
    """A filtration annihilated the state (all spectral weights vanish)."""


class ZeroNormalization(FockmajError):
    """A normalization constant underflowed to zero."""


class DivergentState(FockmajError):
    """The filtered state has no finite normalization (e.g. an amplifier
    whose gain exceeds the geometric decay of the input spectrum)."""


class DegenerateIdeal(FockmajError):
    """A realistic-filtration quantity was requested at the ideal point
    where it degenerates (mu == lambda)."""


class SpecSyntaxError(FockmajError, ValueError):
    """A textual operator/scheme spec failed to parse.

    Carries ``pos``, the character offset of the failure.
    """

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos
