"""Planar wall-system models and the boundary decomposition map.

A model is a chain family where chain i is realized by evenly spaced
parallel walls: wall n of family i is the line ``n_i . p = o_i + s_i n``
and the halfplane ``h_i(n) = {p : n_i . p > o_i + s_i n}``, so halfplanes
shrink as the index grows and a boundary direction xi with ``n_i . xi > 0``
eventually enters every ``h_i(n)``.

All direction tests are exact (the √3 field covers the shipped fixtures);
the circle at infinity is handled symbolically as critical directions plus
open arcs, never as a metrized object.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from typing import Iterable, Optional, Sequence

from .chains import (
    FIN,
    MINUS,
    PLUS,
    ChainFamily,
    ChainHalfspace,
    Signature,
    class_leq,
    comparable,
    format_signature,
)
from .errors import LineInsideWall, MalformedInput, NonUniformModelWarning, ZeroDirection
from .exactnum import ExactNumber

Vec = tuple[ExactNumber, ExactNumber]


def _vec(x, y) -> Vec:
    return (ExactNumber.of(x), ExactNumber.of(y))


def dot(u: Vec, v: Vec) -> ExactNumber:
    return u[0] * v[0] + u[1] * v[1]


def cross(u: Vec, v: Vec) -> ExactNumber:
    return u[0] * v[1] - u[1] * v[0]


def perp(v: Vec) -> Vec:
    """Counterclockwise quarter turn."""
    return (-v[1], v[0])


def negate(v: Vec) -> Vec:
    return (-v[0], -v[1])


def same_direction(u: Vec, v: Vec) -> bool:
    return cross(u, v).is_zero() and dot(u, v).sign() > 0


def normalize(v: Vec) -> Vec:
    """Scale so |x|+|y| = 1; canonical representative of the ray through v."""
    scale = abs(v[0]) + abs(v[1])
    if scale.is_zero():
        raise ZeroDirection("zero vector has no direction")
    return (v[0] / scale, v[1] / scale)


def _half(v: Vec) -> int:
    # 0 for the upper half circle starting at (1,0) inclusive, 1 for the rest
    sy = v[1].sign()
    if sy > 0 or (sy == 0 and v[0].sign() > 0):
        return 0
    return 1


def angular_cmp(u: Vec, v: Vec) -> int:
    """Counterclockwise order from (1,0); exact."""
    hu, hv = _half(u), _half(v)
    if hu != hv:
        return -1 if hu < hv else 1
    c = cross(u, v).sign()
    return -c


@dataclass(frozen=True)
class WallFamily:
    normal: Vec
    spacing: Fraction = Fraction(1)
    offset: Fraction = Fraction(0)

    def __post_init__(self):
        if self.normal[0].is_zero() and self.normal[1].is_zero():
            raise MalformedInput("wall family needs a non-zero normal", self)
        if self.spacing <= 0:
            raise MalformedInput("spacing must be positive", self.spacing)

    def wall_level(self, n: int) -> ExactNumber:
        return ExactNumber.of(self.offset) + ExactNumber.of(self.spacing) * n


@dataclass(frozen=True)
class WallModel:
    """A chain family with planar geometry, one wall family per chain."""

    chains: ChainFamily
    families: tuple[WallFamily, ...]

    def __post_init__(self):
        if len(self.families) != self.chains.k:
            raise MalformedInput("one wall family per chain is required", self)

    @property
    def k(self) -> int:
        return self.chains.k

    def halfplane_contains(self, h: ChainHalfspace, point: Vec) -> bool:
        fam = self.families[h.chain]
        level = dot(fam.normal, point) - fam.wall_level(h.index)
        return level.sign() < 0 if h.starred else level.sign() > 0

    def chamber_cuts(self, point: Vec) -> tuple[int, ...]:
        """Cut coordinates of the chamber of a generic point: chain i takes
        the c with n_i . p in the slab (level(c-1), level(c))."""
        cuts = []
        for fam in self.families:
            value = (dot(fam.normal, point) - ExactNumber.of(fam.offset)) / ExactNumber.of(
                fam.spacing
            )
            c = _ceil_exact(value)
            if value == ExactNumber.of(c):  # on a wall: nudge into the upper slab
                c += 1
            cuts.append(c)
        return tuple(cuts)

    def distinct_wall_directions(self) -> int:
        dirs: list[Vec] = []
        for fam in self.families:
            d = normalize(fam.normal)
            if not any(cross(d, e).is_zero() for e in dirs):
                dirs.append(d)
        return len(dirs)

    def is_uniform(self) -> tuple[bool, Optional[str]]:
        """Structural uniformness: chains are two-way infinite by
        construction, so the only obstruction is a direction perpendicular
        to every family, i.e. all normals parallel."""
        if self.k == 0:
            return False, "no wall families"
        if self.distinct_wall_directions() < 2:
            return False, "all wall normals are parallel"
        return True, None


def _ceil_exact(x: ExactNumber) -> int:
    if x.is_rational():
        q = x.a
        return -((-q.numerator) // q.denominator)
    lo = int(float(x)) - 2
    while not (ExactNumber.of(lo) < x):
        lo -= 1
    hi = lo
    while ExactNumber.of(hi) < x:
        hi += 1
    return hi


# ---------------------------------------------------------------------------
# the decomposition map


@dataclass(frozen=True)
class RhoResult:
    signature: Signature
    roles: tuple[str, ...]  # per chain: "plus" | "minus" | "parallel"


def classify_direction(model: WallModel, xi: Vec) -> RhoResult:
    """Chain roles of a boundary direction: parallel iff n_i . xi = 0, else
    the sign says which end of the chain the ray runs into."""
    if xi[0].is_zero() and xi[1].is_zero():
        raise ZeroDirection("boundary directions are non-zero")
    ends = []
    roles = []
    for fam in model.families:
        s = dot(fam.normal, xi).sign()
        if s == 0:
            ends.append(FIN)
            roles.append("parallel")
        elif s > 0:
            ends.append(PLUS)
            roles.append("plus")
        else:
            ends.append(MINUS)
            roles.append("minus")
    return RhoResult(Signature(tuple(ends)), tuple(roles))


def rho(model: WallModel, xi: Vec) -> Signature:
    """The minimum boundary class compatible with the direction xi."""
    return classify_direction(model, xi).signature


# ---------------------------------------------------------------------------
# the image of rho and its fiber structure


@dataclass(frozen=True)
class PointFiber:
    direction: Vec

    kind = "point"


@dataclass(frozen=True)
class ArcFiber:
    """Open counterclockwise arc between two critical directions."""

    start: Vec
    end: Vec

    kind = "arc"

    def representative(self) -> Vec:
        mid = (self.start[0] + self.end[0], self.start[1] + self.end[1])
        if mid[0].is_zero() and mid[1].is_zero():  # half-circle arc
            return perp(self.start)
        return normalize(mid)


@dataclass
class ImageEntry:
    signature: Signature
    fibers: list


@dataclass
class ImageReport:
    entries: list[ImageEntry]
    critical_directions: list[Vec]
    uniform: bool
    warning: Optional[str] = None

    def signatures(self) -> list[Signature]:
        return [e.signature for e in self.entries]

    def contains_class(self, s: Signature) -> bool:
        return any(e.signature == s for e in self.entries)

    def to_json(self) -> dict:
        return {
            "uniform": self.uniform,
            "warning": self.warning,
            "classes": [
                {
                    "signature": format_signature(e.signature),
                    "codim": e.signature.codim(),
                    "fibers": [
                        {"kind": "point", "direction": _vec_json(f.direction)}
                        if f.kind == "point"
                        else {
                            "kind": "arc",
                            "start": _vec_json(f.start),
                            "end": _vec_json(f.end),
                        }
                        for f in e.fibers
                    ],
                }
                for e in self.entries
            ],
        }


def _vec_json(v: Vec) -> list[str]:
    return [str(v[0]), str(v[1])]


def rho_image(model: WallModel) -> ImageReport:
    """Partition of the circle into critical directions (perpendicular to
    some family) and the open arcs between consecutive ones, with the class
    realized on each piece; at most 4d classes for d wall directions."""
    uniform, reason = model.is_uniform()
    if not uniform:
        warnings.warn(
            f"model is not uniform ({reason}); rho may take the principal class",
            NonUniformModelWarning,
        )
    criticals: list[Vec] = []
    for fam in model.families:
        for cand in (perp(fam.normal), perp(negate(fam.normal))):
            c = normalize(cand)
            if not any(same_direction(c, d) for d in criticals):
                criticals.append(c)
    criticals.sort(key=cmp_to_key(angular_cmp))
    entries: dict[Signature, ImageEntry] = {}

    def record(signature: Signature, fiber) -> None:
        entries.setdefault(signature, ImageEntry(signature, [])).fibers.append(fiber)

    if not criticals:
        raise MalformedInput("a wall model needs at least one family", model)
    # perpendiculars come in antipodal pairs, so there are at least two
    # critical directions and every gap is at most a half circle
    for i, c in enumerate(criticals):
        record(rho(model, c), PointFiber(c))
        arc = ArcFiber(c, criticals[(i + 1) % len(criticals)])
        record(rho(model, arc.representative()), arc)
    report = ImageReport(
        list(entries.values()), criticals, uniform, None if uniform else reason
    )
    return report


def safe_components(signatures: Sequence[Signature]) -> list[list[Signature]]:
    """Connected components of the comparability graph; these are the safe
    path components of the boundary."""
    remaining = list(signatures)
    components: list[list[Signature]] = []
    while remaining:
        seed = remaining.pop()
        component = [seed]
        grew = True
        while grew:
            grew = False
            for s in remaining[:]:
                if any(comparable(s, t) for t in component):
                    component.append(s)
                    remaining.remove(s)
                    grew = True
        components.append(sorted(component, key=lambda s: s.ends))
    return sorted(components, key=lambda comp: comp[0].ends)


@dataclass
class ClosureEntry:
    signature: Signature
    below_in_image: list[Signature]
    closure_classes: list[Signature]
    ok: bool


@dataclass
class ClosureReport:
    entries: list[ClosureEntry]
    ok: bool
    codim1_closed: bool
    first_violation: Optional[Signature] = None

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "codim1_closed": self.codim1_closed,
            "first_violation": format_signature(self.first_violation)
            if self.first_violation
            else None,
            "fibers": [
                {
                    "signature": format_signature(e.signature),
                    "below_in_image": [format_signature(s) for s in e.below_in_image],
                    "closure_adds": [format_signature(s) for s in e.closure_classes],
                    "ok": e.ok,
                }
                for e in self.entries
            ],
        }


def closure_check(model: WallModel) -> ClosureReport:
    """Symbolic closure formula on the circle: the closure of each fiber
    must equal the union of the fibers of the classes below it in the image.

    The closure of an open arc adds its two endpoint directions; point
    fibers are already closed.  Also verifies that codimension-1 fibers are
    closed (no strictly smaller class in the image).
    """
    image = rho_image(model)
    in_image = {e.signature for e in image.entries}
    entries = []
    first_violation = None
    codim1_closed = True
    for e in image.entries:
        below = sorted(
            (s for s in in_image if class_leq(s, e.signature)),
            key=lambda s: s.ends,
        )
        closure_classes = {e.signature}
        for fiber in e.fibers:
            if fiber.kind == "arc":
                closure_classes.add(rho(model, fiber.start))
                closure_classes.add(rho(model, fiber.end))
        closure_sorted = sorted(closure_classes, key=lambda s: s.ends)
        ok = closure_sorted == below
        if not ok and first_violation is None:
            first_violation = e.signature
        if e.signature.codim() == 1 and len(below) != 1:
            codim1_closed = False
        entries.append(ClosureEntry(e.signature, below, closure_sorted, ok))
    return ClosureReport(entries, first_violation is None, codim1_closed, first_violation)


# ---------------------------------------------------------------------------
# lines: restriction and end incomparability


@dataclass(frozen=True)
class Line:
    direction: Vec
    basepoint: Vec = (ExactNumber.of(0), ExactNumber.of(0))


@dataclass
class RestrictedChain:
    """One merged chain of the restricted system: every wall is a point of
    the line; positions from the contributing families interleave into one
    Z-chain."""

    positions_sample: list[ExactNumber]
    contributing: list[int]  # family indices, with their orientation signs
    orientations: dict[int, int]


@dataclass
class LineRestrictionReport:
    nontrivial_families: list[int]
    trivial_cuts: dict[int, int]  # parallel family -> its frozen cut
    merged_chains: list[RestrictedChain]
    collapse: dict[int, int]  # family -> merged chain id
    plus_end_class: Signature
    minus_end_class: Signature
    commutes: bool

    def to_json(self) -> dict:
        return {
            "nontrivial_families": self.nontrivial_families,
            "trivial_cuts": {str(k): v for k, v in self.trivial_cuts.items()},
            "merged_chain_count": len(self.merged_chains),
            "collapse": {str(k): v for k, v in self.collapse.items()},
            "plus_end_class": format_signature(self.plus_end_class),
            "minus_end_class": format_signature(self.minus_end_class),
            "commutes": self.commutes,
        }


def restrict_to_line(model: WallModel, line: Line, sample: int = 3) -> LineRestrictionReport:
    """Restriction of the halfspace system to a line, one chain per family.

    Families whose walls are parallel to the line restrict trivially and
    contribute a frozen cut; the others restrict to cut systems on the
    line.  Families whose crossing progressions coincide as sets collapse
    onto a single chain (the finite-to-one collapse is recorded); on the
    line all restricted halfspaces are mutually nested, and that
    inter-chain order is deliberately not modelled here.  The report
    verifies that the composite class map agrees with rho on both ends.
    """
    d = line.direction
    if d[0].is_zero() and d[1].is_zero():
        raise ZeroDirection("line needs a direction")
    trivial_cuts: dict[int, int] = {}
    progression: dict[int, tuple[ExactNumber, ExactNumber, int]] = {}
    for i, fam in enumerate(model.families):
        speed = dot(fam.normal, d)
        base_level = dot(fam.normal, line.basepoint)
        if speed.is_zero():
            # walls parallel to the line; the line must not lie on one
            value = (base_level - ExactNumber.of(fam.offset)) / ExactNumber.of(fam.spacing)
            if value.is_rational() and value.a.denominator == 1:
                raise LineInsideWall(
                    f"line lies on wall {int(value.a)} of family {i}", i
                )
            trivial_cuts[i] = _ceil_exact(value)
        else:
            # wall n crosses at t with base + t*speed = offset + spacing*n
            step = ExactNumber.of(fam.spacing) / speed
            origin = (ExactNumber.of(fam.offset) - base_level) / speed
            progression[i] = (origin, step, 1 if speed.sign() > 0 else -1)

    # merge families whose crossing sets coincide
    merged: list[RestrictedChain] = []
    collapse: dict[int, int] = {}
    for i, (origin, step, orient) in progression.items():
        placed = False
        for cid, chain in enumerate(merged):
            j = chain.contributing[0]
            o2, s2, _ = progression[j]
            if abs(step) == abs(s2) and _integer_multiple(origin - o2, abs(step)):
                chain.contributing.append(i)
                chain.orientations[i] = orient
                collapse[i] = cid
                placed = True
                break
        if not placed:
            positions = sorted(origin + step * n for n in range(-sample, sample + 1))
            merged.append(RestrictedChain(positions, [i], {i: orient}))
            collapse[i] = len(merged) - 1

    def end_class(direction: Vec) -> Signature:
        # composite route: pull the all-plus / all-minus end of the merged
        # system back through the collapse, chain by chain
        forward = dot(d, direction).sign() > 0
        ends = []
        for i in range(model.k):
            if i in trivial_cuts:
                ends.append(FIN)
            else:
                orient = progression[i][2]
                toward_plus = (orient > 0) == forward
                ends.append(PLUS if toward_plus else MINUS)
        return Signature(tuple(ends))

    plus_composite = end_class(d)
    minus_composite = end_class(negate(d))
    commutes = plus_composite == rho(model, d) and minus_composite == rho(
        model, negate(d)
    )
    return LineRestrictionReport(
        sorted(progression),
        trivial_cuts,
        merged,
        collapse,
        plus_composite,
        minus_composite,
        commutes,
    )


def _integer_multiple(diff: ExactNumber, step: ExactNumber) -> bool:
    ratio = diff / step
    return ratio.is_rational() and ratio.a.denominator == 1


def line_end_incomparability(model: WallModel, line: Line) -> bool:
    """Whether the classes of the two ends of a line are incomparable; true
    for every line of a uniform model."""
    uniform, reason = model.is_uniform()
    if not uniform:
        warnings.warn(
            f"model is not uniform ({reason}); line ends may compare",
            NonUniformModelWarning,
        )
    a = rho(model, line.direction)
    b = rho(model, negate(line.direction))
    return not comparable(a, b)


# ---------------------------------------------------------------------------
# coordinate cubulations of E^d (no planar geometry needed)


def zd_image_signatures(d: int) -> list[Signature]:
    """Classes realized by boundary directions of the standard cubulation of
    E^d: sign vectors of non-zero directions, i.e. every non-principal
    signature."""
    from .chains import all_signatures

    return [s for s in all_signatures(d) if s.codim() > 0]
