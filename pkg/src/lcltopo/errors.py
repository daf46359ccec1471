"""Exception hierarchy shared by every module of the package."""


class LclError(Exception):
    """Base class for all errors raised by lcltopo."""


class MalformedFacet(LclError):
    pass


class MixedValueTags(LclError):
    pass


class IncompleteTable(LclError):
    def __init__(self, value):
        super().__init__(f"table has no entry for value {value!r}")
        self.value = value


class EmptyComplex(LclError):
    pass


class TaskSyntaxError(LclError):
    """Task document is not well-formed; carries 1-based line/column."""

    def __init__(self, msg, line=0, column=0):
        super().__init__(f"{msg} (line {line}, column {column})")
        self.line = line
        self.column = column


class SemanticError(LclError):
    pass


class RadiusMismatch(LclError):
    pass


class NoIds(LclError):
    pass


class UnsupportedDegree(LclError):
    pass


class TooLarge(LclError):
    pass


class InfeasiblePromise(LclError):
    pass


class MissingView(LclError):
    def __init__(self, view, position=None):
        where = "" if position is None else f" at position {position}"
        super().__init__(f"view {view} absent from table{where}")
        self.view = view
        self.position = position


class IdRangeExhausted(LclError):
    pass


class VerificationFailed(LclError):
    def __init__(self, facet, image):
        show = lambda f: "{" + ", ".join(str(v) for v in f) + "}"  # noqa: E731
        super().__init__(f"facet {show(facet)} maps to non-facet {show(image)}")
        self.facet = facet
        self.image = image
