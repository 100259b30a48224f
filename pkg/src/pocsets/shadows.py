"""Consistency against wall geometry, distance to the consistent set,
shadows, escaping rays and the co-compactness report.

A principal chain ultrafilter with cuts (c_1..c_k) is consistent when the k
closed slabs it selects share a point; feasibility is decided exactly by
Fourier-Motzkin elimination over the √3 field.  All minimization is
exhaustive inside a window [-W, W]^k with interiority checks on minimizers,
and every result records the window it was computed in.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Optional, Sequence

from .chains import (
    ChainHalfspace,
    ChainUltrafilter,
    Signature,
    all_signatures,
    flow_flip_sequence,
    format_signature,
    min_set,
)
from .errors import MalformedInput, NotPrincipal, PocError, WindowTooSmall
from .euclid import WallModel, rho_image
from .exactnum import ExactNumber

Cuts = tuple[int, ...]
Constraint = tuple[ExactNumber, ExactNumber, ExactNumber]  # ax*x + ay*y <= c


# ---------------------------------------------------------------------------
# exact feasibility of halfplane systems


def _feasible(constraints: Sequence[Constraint]) -> bool:
    """Exact non-emptiness of an intersection of closed halfplanes via
    Fourier-Motzkin elimination of x, then a 1-d interval check."""
    uppers, lowers, pure = [], [], []
    for ax, ay, c in constraints:
        s = ax.sign()
        if s > 0:
            uppers.append((ax, ay, c))
        elif s < 0:
            lowers.append((ax, ay, c))
        else:
            pure.append((ay, c))
    derived = list(pure)
    for axu, ayu, cu in uppers:
        for axl, ayl, cl in lowers:
            # positive combination eliminating x
            derived.append((axu * ayl - axl * ayu, axu * cl - axl * cu))
    lo: Optional[ExactNumber] = None
    hi: Optional[ExactNumber] = None
    for a, c in derived:
        s = a.sign()
        if s == 0:
            if c.sign() < 0:
                return False
        elif s > 0:
            bound = c / a
            hi = bound if hi is None or bound < hi else hi
        else:
            bound = c / a
            lo = bound if lo is None or bound > lo else lo
    return lo is None or hi is None or lo <= hi


def _feasible_point(constraints: Sequence[Constraint]) -> Optional[tuple[ExactNumber, ExactNumber]]:
    """An exact point of a non-empty closed intersection (for rendering)."""
    uppers, lowers, pure = [], [], []
    for ax, ay, c in constraints:
        s = ax.sign()
        if s > 0:
            uppers.append((ax, ay, c))
        elif s < 0:
            lowers.append((ax, ay, c))
        else:
            pure.append((ay, c))
    derived = list(pure)
    for axu, ayu, cu in uppers:
        for axl, ayl, cl in lowers:
            derived.append((axu * ayl - axl * ayu, axu * cl - axl * cu))
    lo = hi = None
    for a, c in derived:
        s = a.sign()
        if s == 0:
            if c.sign() < 0:
                return None
        elif s > 0:
            bound = c / a
            hi = bound if hi is None or bound < hi else hi
        else:
            bound = c / a
            lo = bound if lo is None or bound > lo else lo
    if lo is not None and hi is not None and lo > hi:
        return None
    y = _pick(lo, hi)
    xlo = xhi = None
    for ax, ay, c in uppers:
        bound = (c - ay * y) / ax
        xhi = bound if xhi is None or bound < xhi else xhi
    for ax, ay, c in lowers:
        bound = (c - ay * y) / ax
        xlo = bound if xlo is None or bound > xlo else xlo
    if xlo is not None and xhi is not None and xlo > xhi:
        return None
    return _pick(xlo, xhi), y


def _pick(lo: Optional[ExactNumber], hi: Optional[ExactNumber]) -> ExactNumber:
    if lo is not None and hi is not None:
        return (lo + hi) / 2
    if lo is not None:
        return lo + 1
    if hi is not None:
        return hi - 1
    return ExactNumber.of(0)


def _closure_constraint(model: WallModel, h: ChainHalfspace) -> Constraint:
    fam = model.families[h.chain]
    level = fam.wall_level(h.index)
    nx, ny = fam.normal
    if h.starred:  # cl(h*) = {n.p <= level}
        return (nx, ny, level)
    return (-nx, -ny, -level)  # cl(h) = {n.p >= level}


def _slab_constraints(model: WallModel, cuts: Cuts) -> list[Constraint]:
    cons = []
    for i, c in enumerate(cuts):
        cons.append(_closure_constraint(model, ChainHalfspace(i, c - 1, False)))
        cons.append(_closure_constraint(model, ChainHalfspace(i, c, True)))
    return cons


def is_consistent_set(model: WallModel, halfspaces: Iterable[ChainHalfspace]) -> bool:
    """Whether the closures of the given halfspaces share a point; the empty
    set counts as inconsistent by convention."""
    cons = [_closure_constraint(model, h) for h in halfspaces]
    if not cons:
        return False
    return _feasible(cons)


def is_consistent(model: WallModel, u: ChainUltrafilter) -> bool:
    """Whether a principal ultrafilter is supported by an actual point."""
    return _cuts_consistent(model, u.int_cuts())


class ConsistencyOracle:
    """Prepared feasibility test for the cut-slab systems of one model.

    The Fourier-Motzkin elimination structure of a slab system does not
    depend on the cuts, only the right-hand sides do; partial evaluation
    leaves a handful of exact multiply-adds per query."""

    def __init__(self, model: WallModel):
        self.model = model
        uppers, lowers, pure = [], [], []
        for i, fam in enumerate(model.families):
            nx, ny = fam.normal
            # slot (i, +1): n.p <= o + s*c_i ; slot (i, -1): -n.p <= -(o + s*(c_i-1))
            for ax, ay, slot in ((nx, ny, (i, 1)), (-nx, -ny, (i, -1))):
                s = ax.sign()
                if s > 0:
                    uppers.append((ax, ay, slot))
                elif s < 0:
                    lowers.append((ax, ay, slot))
                else:
                    pure.append((ay, slot))
        one_d = []  # (inv_A or None, sign_of_A, [(coef, slot), ...])
        for ay, slot in pure:
            one_d.append((ay, [(ExactNumber.of(1), slot)]))
        for axu, ayu, slot_u in uppers:
            for axl, ayl, slot_l in lowers:
                a = axu * ayl - axl * ayu
                one_d.append((a, [(axu, slot_l), (-axl, slot_u)]))
        self._one_d = [
            (a.sign(), None if a.sign() == 0 else 1 / a, combo)
            for a, combo in one_d
        ]

    def _rhs(self, i: int, side: int, cuts: Cuts) -> Fraction:
        fam = self.model.families[i]
        if side > 0:
            return fam.offset + fam.spacing * cuts[i]
        return -(fam.offset + fam.spacing * (cuts[i] - 1))

    def consistent(self, cuts: Cuts) -> bool:
        lo = hi = None
        for sign_a, inv_a, combo in self._one_d:
            c = ExactNumber.of(0)
            for coef, (i, side) in combo:
                c = c + coef * self._rhs(i, side, cuts)
            if sign_a == 0:
                if c.sign() < 0:
                    return False
            elif sign_a > 0:
                bound = c * inv_a
                hi = bound if hi is None or bound < hi else hi
            else:
                bound = c * inv_a
                lo = bound if lo is None or bound > lo else lo
        return lo is None or hi is None or lo <= hi


@lru_cache(maxsize=16)
def _oracle(model: WallModel) -> ConsistencyOracle:
    return ConsistencyOracle(model)


@lru_cache(maxsize=400_000)
def _cuts_consistent(model: WallModel, cuts: Cuts) -> bool:
    return _oracle(model).consistent(cuts)


def interval_consistent(model: WallModel, cuts: Cuts) -> bool:
    """Closed-form oracle for zero-sum normal triples: the cut slabs meet
    iff zero lies in the interval sum of the selected slabs."""
    if model.k != 3:
        raise MalformedInput("interval oracle is defined for three chains", model.k)
    sx = sum((f.normal[0] for f in model.families), ExactNumber.of(0))
    sy = sum((f.normal[1] for f in model.families), ExactNumber.of(0))
    if not (sx.is_zero() and sy.is_zero()):
        raise MalformedInput("interval oracle needs normals summing to zero", model)
    lo = sum(
        f.offset + f.spacing * (c - 1) for f, c in zip(model.families, cuts)
    )
    hi = sum(f.offset + f.spacing * c for f, c in zip(model.families, cuts))
    return lo <= 0 <= hi


# ---------------------------------------------------------------------------
# windows: the consistent set and the distance field


@dataclass(frozen=True)
class Window:
    bound: int

    def __post_init__(self):
        if self.bound < 0:
            raise MalformedInput("window bound must be >= 0", self.bound)

    def tuples(self, k: int):
        return product(range(-self.bound, self.bound + 1), repeat=k)

    def interior(self, cuts: Cuts) -> bool:
        return all(abs(c) < self.bound for c in cuts)

    def contains(self, cuts: Cuts) -> bool:
        return all(abs(c) <= self.bound for c in cuts)


@dataclass
class WindowField:
    """The consistent set inside a window plus the full distance field,
    computed by multi-source breadth-first search on the window lattice.

    Inside the window the lattice-graph distance to the nearest member
    equals the L1 distance (monotone paths stay in the box), so the table
    is the exact in-window restriction of delta(-, Pi0)."""

    model: WallModel
    window: Window
    members: list[Cuts]
    distance_table: dict[Cuts, int]

    def distance(self, cuts: Cuts) -> int:
        try:
            return self.distance_table[cuts]
        except KeyError:
            raise WindowTooSmall(
                f"{cuts} is outside window {self.window.bound}", cuts
            ) from None

    def argmin(self, cuts: Cuts) -> list[Cuts]:
        d = self.distance(cuts)
        return [
            m
            for m in self.members
            if sum(abs(a - b) for a, b in zip(cuts, m)) == d
        ]


def enumerate_pi0(model: WallModel, window: Window | int) -> list[ChainUltrafilter]:
    """All consistent cut tuples inside the window, in canonical order."""
    w = _as_window(window)
    return [
        ChainUltrafilter(tuple(c))
        for c in w.tuples(model.k)
        if _cuts_consistent(model, tuple(c))
    ]


def _as_window(window: Window | int) -> Window:
    return window if isinstance(window, Window) else Window(window)


@lru_cache(maxsize=64)
def window_field(model: WallModel, bound: int) -> WindowField:
    w = Window(bound)
    members = [u.int_cuts() for u in enumerate_pi0(model, w)]
    if not members:
        raise WindowTooSmall(
            f"no consistent tuple inside window {bound}", bound
        )
    dist: dict[Cuts, int] = {m: 0 for m in members}
    frontier = members
    k = model.k
    lo, hi = -bound, bound
    while frontier:
        nxt = []
        for cuts in frontier:
            d = dist[cuts] + 1
            for i in range(k):
                for step in (-1, 1):
                    c = cuts[i] + step
                    if c < lo or c > hi:
                        continue
                    neighbor = cuts[:i] + (c,) + cuts[i + 1 :]
                    if neighbor not in dist:
                        dist[neighbor] = d
                        nxt.append(neighbor)
        frontier = nxt
    return WindowField(model, w, members, dist)


# ---------------------------------------------------------------------------
# distance, signed minimal sets, shadows


def dist_to_pi0(model: WallModel, u: ChainUltrafilter, window: Window | int) -> int:
    """Exhaustive min over the in-window consistent set, with an interiority
    check: some minimizer must avoid the window boundary."""
    w = _as_window(window)
    cuts = u.int_cuts()
    f = window_field(model, w.bound)
    d = f.distance(cuts)
    nearest = f.argmin(cuts)
    if not any(w.interior(m) for m in nearest):
        raise WindowTooSmall(
            f"every minimizer for {cuts} touches the window boundary", cuts
        )
    return d


@dataclass
class MinClassification:
    plus: list[ChainHalfspace]
    minus: list[ChainHalfspace]
    neutral: list[ChainHalfspace]


def classify_min(
    model: WallModel, u: ChainUltrafilter, window: Window | int
) -> MinClassification:
    """Split min(u) by the effect of each flip on the distance to the
    consistent set; "neutral" collects the distance-preserving moves the
    two signed sets do not cover."""
    base = dist_to_pi0(model, u, window)
    plus, minus, neutral = [], [], []
    w = _as_window(window)
    f = window_field(model, w.bound)
    for h in min_set(u):
        cuts = list(u.int_cuts())
        cuts[h.chain] += 1 if h.starred else -1
        d = f.distance(tuple(cuts))
        if d > base:
            plus.append(h)
        elif d < base:
            minus.append(h)
        else:
            neutral.append(h)
    return MinClassification(plus, minus, neutral)


@dataclass(frozen=True)
class DualShadow:
    """Per chain, the two rays of halfspaces containing every shadow member:
    plains up to ``plain_upto[i]`` and stars from ``star_from[i]`` on."""

    plain_upto: Cuts
    star_from: Cuts

    def contains(self, h: ChainHalfspace) -> bool:
        if h.starred:
            return h.index >= self.star_from[h.chain]
        return h.index <= self.plain_upto[h.chain]

    def issubset(self, other: "DualShadow") -> bool:
        return all(a <= b for a, b in zip(self.plain_upto, other.plain_upto)) and all(
            a >= b for a, b in zip(self.star_from, other.star_from)
        )

    def strictly_inside(self, other: "DualShadow") -> bool:
        return self.issubset(other) and self != other

    def inside_ultrafilter(self, u: ChainUltrafilter) -> bool:
        return all(
            p <= c - 1 and s >= c
            for p, s, c in zip(self.plain_upto, self.star_from, u.int_cuts())
        )


def shadow(model: WallModel, u: ChainUltrafilter, window: Window | int) -> list[ChainUltrafilter]:
    """The nearest consistent ultrafilters; the whole set must sit strictly
    inside the window."""
    w = _as_window(window)
    f = window_field(model, w.bound)
    nearest = f.argmin(u.int_cuts())
    if not all(w.interior(m) for m in nearest):
        raise WindowTooSmall(
            f"shadow of {u.int_cuts()} touches the window boundary", u.int_cuts()
        )
    return [ChainUltrafilter(m) for m in nearest]


def dual_shadow(model: WallModel, u: ChainUltrafilter, window: Window | int) -> DualShadow:
    members = shadow(model, u, window)
    k = model.k
    return DualShadow(
        tuple(min(int(m.cuts[i]) for m in members) - 1 for i in range(k)),
        tuple(max(int(m.cuts[i]) for m in members) for i in range(k)),
    )


@dataclass
class ShadowReport:
    pi: Cuts
    window: int
    consistent: bool
    dist: int
    min_plus: list[ChainHalfspace]
    min_minus: list[ChainHalfspace]
    min_neutral: list[ChainHalfspace]
    shadow: list[Cuts]
    dual_shadow: DualShadow

    def to_json(self) -> dict:
        describe = lambda hs: [
            {"chain": h.chain, "index": h.index, "starred": h.starred} for h in hs
        ]
        return {
            "pi": list(self.pi),
            "window": self.window,
            "consistent": self.consistent,
            "dist": self.dist,
            "min_plus": describe(self.min_plus),
            "min_minus": describe(self.min_minus),
            "min_neutral": describe(self.min_neutral),
            "shadow_size": len(self.shadow),
            "shadow": [list(s) for s in self.shadow],
            "dual_shadow": {
                "plain_upto": list(self.dual_shadow.plain_upto),
                "star_from": list(self.dual_shadow.star_from),
            },
        }


def shadow_report(model: WallModel, u: ChainUltrafilter, window: Window | int) -> ShadowReport:
    w = _as_window(window)
    dist = dist_to_pi0(model, u, w)
    mins = classify_min(model, u, w)
    members = shadow(model, u, w)
    dual = dual_shadow(model, u, w)
    return ShadowReport(
        u.int_cuts(),
        w.bound,
        dist == 0,
        dist,
        mins.plus,
        mins.minus,
        mins.neutral,
        [m.int_cuts() for m in members],
        dual,
    )


# ---------------------------------------------------------------------------
# escaping rays


@dataclass
class RayStep:
    index: int
    cuts: Cuts
    dist: int


@dataclass
class RayReport:
    target: Signature
    window: int
    steps: list[RayStep]
    escape_start: Optional[int]
    success: bool
    failure_step: Optional[int]
    dual_shadows_shrink: Optional[bool]

    def to_json(self) -> dict:
        return {
            "target": format_signature(self.target),
            "window": self.window,
            "success": self.success,
            "escape_start": self.escape_start,
            "failure_step": self.failure_step,
            "dual_shadows_shrink": self.dual_shadows_shrink,
            "steps": [
                {"index": s.index, "cuts": list(s.cuts), "dist": s.dist}
                for s in self.steps
            ],
        }


def canonical_start(model: WallModel, window: Window | int) -> ChainUltrafilter:
    """The consistent tuple nearest the origin (ties broken
    lexicographically); the deterministic base point of every ray."""
    w = _as_window(window)
    f = window_field(model, w.bound)
    best = min(f.members, key=lambda m: (sum(abs(c) for c in m), m))
    return ChainUltrafilter(best)


def escaping_ray(
    model: WallModel,
    target: Signature,
    length: int,
    window: Window | int,
    verify_shadows: bool = True,
) -> RayReport:
    """Attempt an escaping geodesic ray toward a non-principal class.

    Moves follow the canonical flow expanded into single flips.  The ray
    escapes when, after its last consistent point, the distance to the
    consistent set strictly increases at every step; on success the dual
    shadows are verified to strictly shrink along those moves."""
    if target.is_principal():
        raise NotPrincipal("escape target must be a non-principal class", target)
    w = _as_window(window)
    f = window_field(model, w.bound)
    start = canonical_start(model, w)
    points = flow_flip_sequence(target, start, length)
    steps = [
        RayStep(i, p.int_cuts(), f.distance(p.int_cuts()))
        for i, p in enumerate(points)
    ]
    dists = [s.dist for s in steps]
    if all(d == 0 for d in dists):
        return RayReport(target, w.bound, steps, None, False, 1, None)
    # the distance must strictly increase at every step once positive; any
    # stall after first leaving the consistent set disqualifies the ray
    stalls = [
        i
        for i in range(1, len(dists))
        if dists[i] <= dists[i - 1] and dists[i - 1] > 0
    ]
    escape_start = max((i for i, d in enumerate(dists) if d == 0), default=0)
    if stalls:
        return RayReport(target, w.bound, steps, escape_start, False, stalls[0], None)
    shrinks = None
    if verify_shadows:
        shrinks = True
        previous = dual_shadow(model, points[escape_start], w)
        for i in range(escape_start + 1, len(points)):
            current = dual_shadow(model, points[i], w)
            if not current.strictly_inside(previous):
                shrinks = False
                break
            previous = current
    success = shrinks is not False
    return RayReport(target, w.bound, steps, escape_start, success, None, shrinks)


# ---------------------------------------------------------------------------
# the co-compactness report


@dataclass
class ClassRow:
    signature: Signature
    codim: int
    in_image: Optional[bool]
    escapes: Optional[bool]


@dataclass
class SurjectivityReport:
    model_chains: int
    uniform: bool
    windows: list[int]
    max_delta: list[int]
    delta_linear_growth: bool
    delta_bounded: bool
    classes: list[ClassRow]
    image_size: Optional[int]
    escaping_classes: list[Signature]

    def to_json(self) -> dict:
        return {
            "chains": self.model_chains,
            "uniform": self.uniform,
            "windows": self.windows,
            "max_delta": self.max_delta,
            "delta_linear_growth": self.delta_linear_growth,
            "delta_bounded": self.delta_bounded,
            "image_size": self.image_size,
            "escaping_ray_exists": bool(self.escaping_classes),
            "escaping_classes": [format_signature(s) for s in self.escaping_classes],
            "classes": [
                {
                    "signature": format_signature(r.signature),
                    "codim": r.codim,
                    "in_image": r.in_image,
                    "escapes": r.escapes,
                }
                for r in self.classes
            ],
        }


def max_delta_over_window(model: WallModel, window: Window | int) -> int:
    f = window_field(model, _as_window(window).bound)
    return max(f.distance_table.values())


def surjectivity_report(
    model: WallModel,
    windows: Sequence[int] = (5, 10, 15),
    ray_length: int = 12,
) -> SurjectivityReport:
    """Tabulate all 3^k classes against the image of rho, the window growth
    of the distance to the consistent set, and distance-escaping rays.

    The co-compactness dichotomy is checkable from the fields: linear
    window growth of the max distance must co-occur with a non-principal
    class outside the image (witnessed by an escaping ray), while a bounded
    distance field accompanies a fully covered image."""
    windows = sorted(windows)
    max_delta = [max_delta_over_window(model, w) for w in windows]
    diffs = [b - a for a, b in zip(max_delta, max_delta[1:])]
    window_steps = [b - a for a, b in zip(windows, windows[1:])]
    slopes = {Fraction(d, s) for d, s in zip(diffs, window_steps)}
    linear = len(slopes) == 1 and diffs[0] > 0
    bounded = max_delta[-1] == 0
    uniform, _ = model.is_uniform()
    in_image: Optional[set[tuple[int, ...]]]
    try:
        image = rho_image(model)
        in_image = {tuple(s.ends) for s in image.signatures()}
    except PocError:
        in_image = None
    probe_window = max(windows)
    start_reach = max(abs(c) for c in canonical_start(model, probe_window).int_cuts())
    probe_length = max(1, min(ray_length, probe_window - start_reach))
    rows = []
    escaping = []
    for s in all_signatures(model.k):
        if s.is_principal():
            rows.append(ClassRow(s, 0, None if in_image is None else tuple(s.ends) in in_image, None))
            continue
        report = escaping_ray(
            model, s, probe_length, probe_window, verify_shadows=False
        )
        if report.success:
            escaping.append(s)
        rows.append(
            ClassRow(
                s,
                s.codim(),
                None if in_image is None else tuple(s.ends) in in_image,
                report.success,
            )
        )
    return SurjectivityReport(
        model.k,
        uniform,
        list(windows),
        max_delta,
        linear,
        bounded,
        rows,
        None if in_image is None else len(in_image),
        escaping,
    )
