"""Exception hierarchy shared by all modules.

Every domain error carries a machine-readable ``code`` and a ``witness``
(the offending element, pair or index), so the CLI can emit structured
diagnostics without string parsing.
"""

from __future__ import annotations


class PocError(Exception):
    """Base class for all domain errors raised by this package."""

    code = "error"

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness

    def diagnostic(self) -> dict:
        return {
            "code": self.code,
            "message": str(self),
            "witness": _jsonable(self.witness),
        }


def _jsonable(value):
    if value is None or isinstance(value, (str, int, float, bool)):
        return value
    if isinstance(value, (list, tuple, set, frozenset)):
        return [_jsonable(v) for v in value]
    return str(value)


class MalformedInput(PocError):
    code = "malformed-input"


class AxiomViolation(PocError):
    """A poc-set axiom failed; ``axiom`` names it, ``witness`` exhibits it."""

    code = "axiom-violation"

    def __init__(self, axiom: str, message: str, witness=None):
        super().__init__(message, witness)
        self.axiom = axiom

    def diagnostic(self) -> dict:
        d = super().diagnostic()
        d["axiom"] = self.axiom
        return d


class TrivialElement(PocError):
    code = "trivial-element"


class NotAFilterBase(PocError):
    code = "not-a-filter-base"


class NotMinimal(PocError):
    code = "not-minimal"


class NotMaximalTransverse(PocError):
    code = "not-maximal-transverse"


class NotUltrafilter(PocError):
    code = "not-an-ultrafilter"


class BackendMismatch(PocError):
    code = "backend-mismatch"


class ChainCountMismatch(PocError):
    code = "chain-count-mismatch"


class NotPrincipal(PocError):
    code = "not-principal"


class NotMember(PocError):
    code = "not-a-member"


class EmptySequence(PocError):
    code = "empty-sequence"


class NotGeodesic(PocError):
    code = "not-geodesic"


class DegenerateWall(PocError):
    code = "degenerate-wall"


class NotIsomorphic(PocError):
    code = "not-isomorphic"


class ZeroDirection(PocError):
    code = "zero-direction"


class LineInsideWall(PocError):
    code = "line-inside-wall"


class WindowTooSmall(PocError):
    code = "window-too-small"


class NonUniformModelWarning(UserWarning):
    """The queried model misses a uniformness requirement; results may
    include the principal class where a uniform model could not."""
