"""Exception types raised across the package."""

from __future__ import annotations


class NerveCertError(Exception):
    """Base class for all errors raised by nervecert."""


class SimplexError(NerveCertError, ValueError):
    pass


class EmptySimplex(SimplexError):
    pass


class DuplicateVertexInSimplex(SimplexError):
    pass


class NotASimplex(SimplexError):
    """A vertex list that should name a simplex of some complex does not."""


class UnknownVertex(NerveCertError, KeyError):
    pass


class ParentMismatch(NerveCertError, ValueError):
    pass


class NotSimplicial(NerveCertError, ValueError):
    """A vertex assignment sends some simplex to a non-simplex."""


class Disconnected(NerveCertError, ValueError):
    pass


class CoverError(NerveCertError, ValueError):
    """Invalid cover; ``violations`` lists every problem found."""

    def __init__(self, violations):
        self.violations = list(violations)
        msg = "; ".join(str(v) for v in self.violations[:5])
        if len(self.violations) > 5:
            msg += f"; ... ({len(self.violations)} violations)"
        super().__init__(msg)


class UncoveredSimplex(CoverError):
    pass


class EmptyElement(CoverError):
    pass


class DisconnectedElement(CoverError):
    pass


class DuplicateElement(CoverError):
    pass


class StarConditionNotReached(NerveCertError, RuntimeError):
    def __init__(self, rounds, offending_vertex=None):
        self.rounds = rounds
        self.offending_vertex = offending_vertex
        super().__init__(
            f"star condition fails after {rounds} subdivision round(s)"
            + (f" at vertex {offending_vertex!r}" if offending_vertex is not None else "")
        )


class GroupTableError(NerveCertError, ValueError):
    pass


class RelatorNotKilled(NerveCertError, ValueError):
    def __init__(self, triangle, product):
        self.triangle = triangle
        self.product = product
        super().__init__(f"edge labels around {triangle!r} multiply to {product!r}, not the identity")


class ParseError(NerveCertError, ValueError):
    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        loc = []
        if line is not None:
            loc.append(f"line {line}")
        if path:
            loc.append(path)
        super().__init__(f"{' '.join(loc)}: {message}" if loc else message)


class ValidationError(NerveCertError, ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class InternalCheckFailure(NerveCertError, AssertionError):
    pass


class UnknownCorpusName(NerveCertError, KeyError):
    pass
