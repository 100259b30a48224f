"""Finite poc-sets and their ultrafilter spaces.

A poc-set is a poset with a minimum element 0 and an order-reversing
involution ``h -> h*`` such that ``h <= h*`` forces ``h = 0``.  This module
is the ground-truth oracle layer: everything is computed exactly and
exhaustively, with small, documented caps.

Element indexing convention (used everywhere in this package):

* proper pair ``k`` (0-based) occupies handles ``2k`` (plain, named
  ``h{k+1}``) and ``2k+1`` (starred, ``h{k+1}*``);
* the trivial pair sits last: ``0`` at handle ``2n``, ``0*`` at ``2n+1``;
* ``star(e) = e ^ 1``; canonical element order is handle order.

All values are immutable after construction and every operation is a pure
function, so concurrent use needs no synchronization.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .errors import (
    AxiomViolation,
    MalformedInput,
    NotAFilterBase,
    NotMaximalTransverse,
    NotMinimal,
    TrivialElement,
)

# Exhaustive transverse-set search is exponential; this is an oracle layer,
# not a performance layer.
MAX_PAIRS_FOR_DIMENSION = 32

_NAME_RE = re.compile(r"^(?:h([1-9][0-9]*)|0)(\*)?$")


def star(e: int) -> int:
    """The paired element; an involution without proper fixed points."""
    return e ^ 1


def is_star(e: int) -> bool:
    return bool(e & 1)


def pair_of(e: int) -> int:
    return e >> 1


@dataclass(frozen=True)
class Ultrafilter:
    """A UF1+UF2 subset of a finite poc-set.

    ``signs[k]`` is 0 when pair k's plain element is a member and 1 when the
    starred one is; ``members`` lists every member handle including ``0*``.
    Ordering by ``signs`` is the canonical enumeration order.
    """

    signs: tuple[int, ...]
    members: frozenset[int]

    def __contains__(self, e: int) -> bool:
        return e in self.members

    def __lt__(self, other: "Ultrafilter") -> bool:
        return self.signs < other.signs

    def __le__(self, other: "Ultrafilter") -> bool:
        return self.signs <= other.signs

    def sorted_members(self) -> list[int]:
        return sorted(self.members)


@dataclass(frozen=True)
class PairClassification:
    """Nested with a witness relation ``lhs <= rhs``, or transverse."""

    kind: str  # "nested" | "transverse"
    witness: Optional[tuple[int, int]] = None

    @property
    def nested(self) -> bool:
        return self.kind == "nested"


@dataclass(frozen=True)
class UltrafilterCheck:
    """Outcome of an ultrafilter validity test, with a violation witness."""

    ok: bool
    axiom: Optional[str] = None  # "UF1" | "UF2"
    witness: Optional[tuple] = None


@dataclass(frozen=True)
class FilterBase:
    """A validated UF2-only subset; build with `FinitePocSet.filterbase`."""

    members: frozenset[int]

    def __iter__(self):
        return iter(sorted(self.members))


class FinitePocSet:
    """An explicit finite poc-set.

    The order relation is stored as upward-closure bitmasks over the handle
    indexing, always reflexive-transitively closed and star-symmetric.
    """

    __slots__ = ("n_pairs", "_up", "_transverse_pairs")

    def __init__(self, n_pairs: int, up: Sequence[int], _validated: bool = False):
        if not _validated:
            raise TypeError(
                "use FinitePocSet.from_order_generators or from_leq_matrix"
            )
        self.n_pairs = n_pairs
        self._up = tuple(up)
        self._transverse_pairs = self._pair_transversality()

    # ------------------------------------------------------------------
    # construction

    @classmethod
    def from_order_generators(
        cls, n_pairs: int, edges: Iterable[tuple[int, int]] = ()
    ) -> "FinitePocSet":
        """Validate raw order data into a poc-set.

        ``edges`` are generating relations ``a <= b``; the relation used is
        the reflexive-transitive closure of the generators together with
        their star-duals ``b* <= a*`` and the trivial bounds ``0 <= h <= 0*``.
        Raises `MalformedInput` for a dangling handle and `AxiomViolation`
        naming the first broken axiom with a witness pair.
        """
        if n_pairs < 0:
            raise MalformedInput("pair count must be non-negative", n_pairs)
        m = 2 * n_pairs + 2
        zero = 2 * n_pairs
        up = [1 << e for e in range(m)]
        for a, b in edges:
            if not (0 <= a < m and 0 <= b < m):
                raise MalformedInput(f"dangling handle in edge ({a}, {b})", (a, b))
            up[a] |= 1 << b
            up[star(b)] |= 1 << star(a)
        for e in range(m):
            up[zero] |= 1 << e
            up[e] |= 1 << star(zero)
        _close_transitively(up)
        pocset = cls(n_pairs, up, _validated=True)
        pocset._check_axioms()
        return pocset

    @classmethod
    def from_leq_matrix(cls, n_pairs: int, leq) -> "FinitePocSet":
        """Build from a full boolean relation ``leq[a][b]``; unlike the
        generator path, order-reversal of the involution is checked, not
        imposed."""
        m = 2 * n_pairs + 2
        if len(leq) != m or any(len(row) != m for row in leq):
            raise MalformedInput("relation matrix has wrong shape", len(leq))
        up = [0] * m
        for a in range(m):
            for b in range(m):
                if leq[a][b]:
                    up[a] |= 1 << b
            up[a] |= 1 << a
        for a in range(m):
            for b in range(m):
                ab = bool(up[a] & (1 << b))
                ba_star = bool(up[star(b)] & (1 << star(a)))
                if ab != ba_star:
                    raise AxiomViolation(
                        "involution not order-reversing",
                        f"{_raw_name(a, n_pairs)} <= {_raw_name(b, n_pairs)} does "
                        "not match the dual relation",
                        (a, b),
                    )
        _close_transitively(up)
        pocset = cls(n_pairs, up, _validated=True)
        pocset._check_axioms()
        return pocset

    def _check_axioms(self) -> None:
        m = self.element_count
        zero = self.zero
        for a in range(m):
            for b in range(a + 1, m):
                if self.leq(a, b) and self.leq(b, a):
                    raise AxiomViolation(
                        "antisymmetry",
                        f"{self.name(a)} and {self.name(b)} are order-equivalent",
                        (a, b),
                    )
        for e in range(m):
            if not self.leq(zero, e):
                raise AxiomViolation("minimum", f"0 is not below {self.name(e)}", e)
        for e in self.proper_elements():
            if self.leq(e, star(e)):
                raise AxiomViolation(
                    "h <= h*", f"{self.name(e)} lies below its star", e
                )

    def _pair_transversality(self) -> tuple[int, ...]:
        """Bitmask per pair of the pairs transverse to it.

        Transversality only depends on the pairs, not on orientations: the
        four defining relations for (h, k) coincide with those for (h*, k).
        """
        masks = [0] * self.n_pairs
        for i in range(self.n_pairs):
            for j in range(i + 1, self.n_pairs):
                if not self._nested_pairs(2 * i, 2 * j):
                    masks[i] |= 1 << j
                    masks[j] |= 1 << i
        return tuple(masks)

    def _nested_pairs(self, h: int, k: int) -> bool:
        return (
            self.leq(h, k)
            or self.leq(star(h), k)
            or self.leq(h, star(k))
            or self.leq(star(h), star(k))
        )

    # ------------------------------------------------------------------
    # basic queries

    @property
    def element_count(self) -> int:
        return 2 * self.n_pairs + 2

    @property
    def zero(self) -> int:
        return 2 * self.n_pairs

    @property
    def zero_star(self) -> int:
        return 2 * self.n_pairs + 1

    def elements(self) -> range:
        return range(self.element_count)

    def proper_elements(self) -> range:
        return range(2 * self.n_pairs)

    def is_proper(self, e: int) -> bool:
        return 0 <= e < 2 * self.n_pairs

    def leq(self, a: int, b: int) -> bool:
        return bool(self._up[a] & (1 << b))

    def upset(self, e: int) -> int:
        """Bitmask of ``{b : e <= b}``."""
        return self._up[e]

    def name(self, e: int) -> str:
        return _raw_name(e, self.n_pairs)

    def handle(self, name: str) -> int:
        match = _NAME_RE.match(name.strip())
        if not match:
            raise MalformedInput(f"bad handle name {name!r}", name)
        if match.group(1) is None:
            e = self.zero
        else:
            k = int(match.group(1))
            if k > self.n_pairs:
                raise MalformedInput(f"handle {name!r} exceeds pair count", name)
            e = 2 * (k - 1)
        return star(e) if match.group(2) else e

    # ------------------------------------------------------------------
    # relations between elements

    def classify_pair(self, h: int, k: int) -> PairClassification:
        """Nested (with the witnessing relation, normalized to one of
        ``h<=k``, ``k<=h``, ``h<=k*``, ``k*<=h``) or transverse."""
        if not self.is_proper(h) or not self.is_proper(k):
            raise TrivialElement("classify_pair needs proper elements", (h, k))
        for lhs, rhs in ((h, k), (k, h), (h, star(k)), (star(k), h)):
            if self.leq(lhs, rhs):
                return PairClassification("nested", (lhs, rhs))
        return PairClassification("transverse")

    def transverse(self, h: int, k: int) -> bool:
        return pair_of(h) != pair_of(k) and bool(
            self._transverse_pairs[pair_of(h)] & (1 << pair_of(k))
        )

    def interval(self, a: int, b: int) -> list[int]:
        """``{h : a <= h <= b}`` in canonical order; empty when ``a !<= b``."""
        if not self.is_proper(a) or not self.is_proper(b):
            raise TrivialElement("interval endpoints must be proper", (a, b))
        return [e for e in self.elements() if self.leq(a, e) and self.leq(e, b)]

    def dimension(self) -> int:
        """Size of a maximum pairwise-transverse set of proper elements.

        Exact branch-and-bound over pairs (transversality is pair-level), so
        the answer equals the max clique of the pair-transversality graph.
        """
        if self.n_pairs > MAX_PAIRS_FOR_DIMENSION:
            raise MalformedInput(
                f"dimension search capped at {MAX_PAIRS_FOR_DIMENSION} pairs",
                self.n_pairs,
            )
        best = 0
        masks = self._transverse_pairs

        def extend(clique_size: int, candidates: int) -> None:
            nonlocal best
            if clique_size + candidates.bit_count() <= best:
                return
            if not candidates:
                best = max(best, clique_size)
                return
            while candidates:
                if clique_size + candidates.bit_count() <= best:
                    return
                v = (candidates & -candidates).bit_length() - 1
                candidates &= candidates - 1
                extend(clique_size + 1, candidates & masks[v])

        extend(0, (1 << self.n_pairs) - 1 if self.n_pairs else 0)
        return best

    # ------------------------------------------------------------------
    # ultrafilters

    def ultrafilter_from_signs(self, signs: Sequence[int]) -> Ultrafilter:
        members = frozenset(
            2 * k + s for k, s in enumerate(signs)
        ) | {self.zero_star}
        return Ultrafilter(tuple(signs), members)

    def ultrafilter_from_members(self, members: Iterable[int]) -> Ultrafilter:
        mset = set(members) | {self.zero_star}
        check = self.check_set(mset)
        if not check.ok:
            raise NotAFilterBase(f"set violates {check.axiom}", check.witness)
        signs = tuple(1 if (2 * k + 1) in mset else 0 for k in range(self.n_pairs))
        return self.ultrafilter_from_signs(signs)

    def check_set(self, members: Iterable[int]) -> UltrafilterCheck:
        """UF1 and UF2 for an arbitrary handle set, with a witness.

        The UF2 witness is the canonically least violating ordered pair
        (x, y) with ``x <= y*``, preferring a plain x.
        """
        mset = set(members)
        for k in range(self.n_pairs + 1):
            plain, starred = 2 * k, 2 * k + 1
            if (plain in mset) == (starred in mset):
                return UltrafilterCheck(False, "UF1", plain)
        violations = []
        star_mask = 0
        for e in mset:
            star_mask |= 1 << star(e)
        for x in mset:
            hits = self._up[x] & star_mask
            while hits:
                b = (hits & -hits).bit_length() - 1
                hits &= hits - 1
                violations.append((x, star(b)))
        if violations:
            witness = min(violations, key=lambda p: (is_star(p[0]), p[0], p[1]))
            return UltrafilterCheck(False, "UF2", witness)
        return UltrafilterCheck(True)

    def is_ultrafilter(self, members: Iterable[int]) -> UltrafilterCheck:
        return self.check_set(members)

    def _signs_consistent(self, signs: Sequence[int], upto: int) -> bool:
        for i in range(upto):
            x = 2 * i + signs[i]
            for j in range(i + 1, upto):
                y = 2 * j + signs[j]
                if self.leq(x, star(y)) or self.leq(y, star(x)):
                    return False
        return True

    def ultrafilters(self) -> list[Ultrafilter]:
        """All ultrafilters, in canonical (lexicographic signs) order.

        Backtracking over pairs with incremental UF2 checks; the trivial
        poc-set yields the single ultrafilter {0*}.
        """
        results: list[Ultrafilter] = []
        n = self.n_pairs
        chosen: list[int] = []

        def compatible(candidate: int) -> bool:
            cand_upset = self._up[candidate]
            cand_star = star(candidate)
            for e in chosen:
                if cand_upset & (1 << star(e)) or self._up[e] & (1 << cand_star):
                    return False
            return True

        def descend(k: int) -> None:
            if k == n:
                results.append(
                    self.ultrafilter_from_signs([e & 1 for e in chosen])
                )
                return
            for s in (0, 1):
                e = 2 * k + s
                if compatible(e):
                    chosen.append(e)
                    descend(k + 1)
                    chosen.pop()

        descend(0)
        return results

    def check_filterbase(self, members: Iterable[int]) -> Optional[tuple[int, int]]:
        """None when UF2 holds, else the canonical violating pair."""
        mset = sorted(set(members))
        violations = [
            (x, y)
            for x in mset
            for y in mset
            if self.leq(x, star(y))
        ]
        if violations:
            return min(violations, key=lambda p: (is_star(p[0]), p[0], p[1]))
        return None

    def filterbase(self, members: Iterable[int]) -> FilterBase:
        """Validate a handle set against UF2."""
        mset = frozenset(members)
        bad = self.check_filterbase(mset)
        if bad is not None:
            raise NotAFilterBase(
                f"{self.name(bad[0])} <= {self.name(star(bad[1]))}", bad
            )
        return FilterBase(mset)

    def extend_filterbase(self, base: Iterable[int]) -> Ultrafilter:
        """Deterministic completion of a filter base to an ultrafilter.

        Greedy in canonical pair order, preferring the plain element; a
        filter base always extends in either orientation, so the greedy walk
        never backtracks and agrees with the first entry of `ultrafilters`
        on the empty base.
        """
        members = set(base.members if isinstance(base, FilterBase) else base)
        members -= {self.zero_star}
        bad = self.check_filterbase(members)
        if bad is not None:
            raise NotAFilterBase(
                f"{self.name(bad[0])} <= {self.name(star(bad[1]))}", bad
            )
        chosen: dict[int, int] = {}
        for e in members:
            if self.is_proper(e):
                chosen[pair_of(e)] = e

        def conflicts(candidate: int) -> bool:
            for e in chosen.values():
                if self.leq(candidate, star(e)) or self.leq(e, star(candidate)):
                    return True
            return False

        for k in range(self.n_pairs):
            if k in chosen:
                continue
            plain = 2 * k
            chosen[k] = plain if not conflicts(plain) else star(plain)
        signs = tuple(chosen[k] & 1 for k in range(self.n_pairs))
        return self.ultrafilter_from_signs(signs)

    # ------------------------------------------------------------------
    # median algebra and metric

    def median(self, a: Ultrafilter, b: Ultrafilter, c: Ultrafilter) -> Ultrafilter:
        """med(a, b, c) = (a∩b) ∪ (b∩c) ∪ (a∩c); H° is closed under it."""
        signs = tuple(
            1 if sa + sb + sc >= 2 else 0
            for sa, sb, sc in zip(a.signs, b.signs, c.signs)
        )
        return self.ultrafilter_from_signs(signs)

    def delta(self, a: Ultrafilter, b: Ultrafilter) -> int:
        """Half the symmetric difference; the wall-counting metric."""
        return sum(1 for sa, sb in zip(a.signs, b.signs) if sa != sb)

    def min_set(self, u: Ultrafilter) -> list[int]:
        """Minimal proper members; these parametrize the flip moves."""
        proper = [e for e in u.members if self.is_proper(e)]
        return [
            e
            for e in sorted(proper)
            if all(
                not (self._up[x] & (1 << e)) or x == e
                for x in proper
            )
        ]

    def flip(self, u: Ultrafilter, a: int) -> Ultrafilter:
        """The elementary move [u]_a = (u \\ {a}) ∪ {a*}; needs a minimal."""
        if a not in u.members or a not in self.min_set(u):
            raise NotMinimal(f"{self.name(a)} is not minimal in the ultrafilter", a)
        signs = list(u.signs)
        signs[pair_of(a)] ^= 1
        return self.ultrafilter_from_signs(tuple(signs))

    def multi_flip(self, u: Ultrafilter, elements: Iterable[int]) -> Ultrafilter:
        """Flip a transverse subset of the minimal set in one step."""
        els = list(elements)
        mins = set(self.min_set(u))
        for e in els:
            if e not in mins:
                raise NotMinimal(f"{self.name(e)} is not minimal", e)
        for x, y in combinations(els, 2):
            if not self.transverse(x, y):
                raise NotAFilterBase(
                    f"{self.name(x)}, {self.name(y)} are not transverse", (x, y)
                )
        signs = list(u.signs)
        for e in els:
            signs[pair_of(e)] ^= 1
        return self.ultrafilter_from_signs(tuple(signs))

    # ------------------------------------------------------------------
    # principal construction and convexity

    def is_maximal_transverse(self, elements: Iterable[int]) -> Optional[int]:
        """None when the set is maximal transverse; else an extension or a
        member of a violating pair as a witness."""
        els = list(elements)
        for x, y in combinations(els, 2):
            if not self.transverse(x, y):
                return x
        used = {pair_of(e) for e in els}
        for k in range(self.n_pairs):
            if k in used:
                continue
            if all(self.transverse(2 * k, e) for e in els):
                return 2 * k
        return None

    def principal_from_transverse(self, elements: Iterable[int]) -> Ultrafilter:
        """π_A = {h : ∃a∈A, a <= h} ∪ {h : ∃a∈A, a* < h} ∪ {0*} for a
        maximal transverse A; every ultrafilter of a finite poc-set arises
        this way."""
        els = sorted(set(elements))
        for e in els:
            if not self.is_proper(e):
                raise TrivialElement("transverse sets contain proper elements", e)
        for x, y in combinations(els, 2):
            if not self.transverse(x, y):
                raise NotMaximalTransverse(
                    f"{self.name(x)} and {self.name(y)} are nested", (x, y)
                )
        extension = self.is_maximal_transverse(els)
        if extension is not None:
            raise NotMaximalTransverse(
                f"extendable by {self.name(extension)}", extension
            )
        members = {self.zero_star}
        for h in self.elements():
            for a in els:
                if self.leq(a, h) or (self.leq(star(a), h) and star(a) != h):
                    members.add(h)
                    break
        return self.ultrafilter_from_members(members)

    def support(self, h: int, among: Optional[Sequence[Ultrafilter]] = None) -> list[int]:
        """Indices (into ``among`` or the canonical enumeration) of the
        ultrafilters containing h; the vertex set S_h."""
        pool = list(among) if among is not None else self.ultrafilters()
        return [i for i, u in enumerate(pool) if h in u.members]

    def vset_nonempty(
        self,
        elements: Iterable[int],
        restrict_to: Optional[Sequence[Ultrafilter]] = None,
    ) -> bool:
        """Whether ⋂_a S_a meets the (sub)space; the empty family meets
        everything.  Agreement with the Helly criterion is a tested
        invariant, not assumed here."""
        els = list(elements)
        pool = list(restrict_to) if restrict_to is not None else self.ultrafilters()
        return any(all(a in u.members for a in els) for u in pool)

    # ------------------------------------------------------------------

    def format_ultrafilter(self, u: Ultrafilter) -> str:
        proper = [self.name(e) for e in sorted(u.members) if self.is_proper(e)]
        return "{" + ", ".join(proper) + "}"

    def __repr__(self) -> str:
        return f"FinitePocSet(pairs={self.n_pairs})"


def _raw_name(e: int, n_pairs: int) -> str:
    base = "0" if pair_of(e) == n_pairs else f"h{pair_of(e) + 1}"
    return base + ("*" if is_star(e) else "")


def _close_transitively(up: list[int]) -> None:
    m = len(up)
    changed = True
    while changed:
        changed = False
        for a in range(m):
            acc = up[a]
            rest = acc
            while rest:
                b = (rest & -rest).bit_length() - 1
                rest &= rest - 1
                acc |= up[b]
            if acc != up[a]:
                up[a] = acc
                changed = True


def validate_pocset(n_pairs: int, edges: Iterable[tuple[int, int]]) -> FinitePocSet:
    """Functional alias for `FinitePocSet.from_order_generators`."""
    return FinitePocSet.from_order_generators(n_pairs, edges)
