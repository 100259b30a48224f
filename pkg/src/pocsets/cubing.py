"""The dual cube complex of a finite poc-set and the duality round-trip.

Vertices are the ultrafilters, edges the elementary moves, and a d-cube is
stored implicitly as (base vertex, transverse subset of its minimal set);
each geometric cube is found once from every corner and deduplicated by its
lexicographically least vertex.  Only combinatorics is kept; no geometric
product is ever built.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

from .core import FinitePocSet, Ultrafilter, pair_of
from .errors import DegenerateWall, NotIsomorphic


@dataclass(frozen=True)
class Cube:
    """A d-cube: canonical base vertex index plus the flipped pair set."""

    base: int
    pairs: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.pairs)


@dataclass(frozen=True)
class Wall:
    """One wall of the complex: its labelled edges and vertex bipartition."""

    pair: int
    edges: tuple[tuple[int, int], ...]
    side_plain: frozenset[int]
    side_star: frozenset[int]


@dataclass
class CubeComplex:
    pocset: FinitePocSet
    vertices: list[Ultrafilter]
    edges: list[tuple[int, int, int]]  # (i, j, pair) with i < j
    cubes: dict[int, list[Cube]] = field(default_factory=dict)

    def vertex_index(self, u: Ultrafilter) -> int:
        return self._index[u.signs]

    def __post_init__(self):
        self._index = {u.signs: i for i, u in enumerate(self.vertices)}

    @property
    def square_count(self) -> int:
        return len(self.cubes.get(2, []))

    def dimension(self) -> int:
        return max(self.cubes.keys(), default=1 if self.edges else 0)

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in self.vertices]
        for i, j, _ in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return adj

    def graph_distances(self, source: int) -> dict[int, int]:
        adj = self.adjacency()
        dist = {source: 0}
        frontier = [source]
        while frontier:
            nxt = []
            for v in frontier:
                for w in adj[v]:
                    if w not in dist:
                        dist[w] = dist[v] + 1
                        nxt.append(w)
            frontier = nxt
        return dist

    def cube_vertices(self, cube: Cube) -> list[int]:
        """The 2^d corner indices of a stored cube."""
        base_signs = self.vertices[cube.base].signs
        out = []
        for r in range(len(cube.pairs) + 1):
            for sub in combinations(cube.pairs, r):
                signs = list(base_signs)
                for k in sub:
                    signs[k] ^= 1
                out.append(self._index[tuple(signs)])
        return sorted(out)

    def walls(self) -> list[Wall]:
        out = []
        for k in range(self.pocset.n_pairs):
            plain = frozenset(
                i for i, u in enumerate(self.vertices) if u.signs[k] == 0
            )
            sided = frozenset(range(len(self.vertices))) - plain
            wall_edges = tuple(
                (i, j) for i, j, pr in self.edges if pr == k
            )
            out.append(Wall(k, wall_edges, plain, sided))
        return out

    # ------------------------------------------------------------------
    # exports

    def to_dot(self) -> str:
        p = self.pocset
        lines = ["graph cubing {"]
        for i, u in enumerate(self.vertices):
            lines.append(f'  v{i} [label="{p.format_ultrafilter(u)}"];')
        for i, j, k in self.edges:
            lines.append(f'  v{i} -- v{j} [label="h{k + 1}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "vertices": [
                {"index": i, "signs": list(u.signs)}
                for i, u in enumerate(self.vertices)
            ],
            "edges": [
                {"ends": [i, j], "wall": f"h{k + 1}"} for i, j, k in self.edges
            ],
            "cubes": {
                str(d): [
                    {"base": c.base, "walls": [f"h{k + 1}" for k in c.pairs]}
                    for c in cs
                ]
                for d, cs in sorted(self.cubes.items())
            },
        }


def build_cubing(p: FinitePocSet) -> CubeComplex:
    """Vertices from enumeration, edges from flips, cubes from transverse
    subsets of minimal sets."""
    vertices = p.ultrafilters()
    index = {u.signs: i for i, u in enumerate(vertices)}
    edges = set()
    cubes: dict[int, set[Cube]] = {}
    for i, u in enumerate(vertices):
        mins = p.min_set(u)
        for a in mins:
            j = index[p.flip(u, a).signs]
            edges.add((min(i, j), max(i, j), pair_of(a)))
        # transverse subsets of min(u) of size d <-> d-cubes at u
        for d in range(2, len(mins) + 1):
            for sub in combinations(mins, d):
                if all(p.transverse(x, y) for x, y in combinations(sub, 2)):
                    pairs = tuple(sorted(pair_of(a) for a in sub))
                    corner_signs = []
                    for r in range(d + 1):
                        for flipped in combinations(pairs, r):
                            signs = list(u.signs)
                            for k in flipped:
                                signs[k] ^= 1
                            corner_signs.append(tuple(signs))
                    base = index[min(corner_signs)]
                    cubes.setdefault(d, set()).add(Cube(base, pairs))
    complex_ = CubeComplex(
        p,
        vertices,
        sorted(edges),
        {d: sorted(cs, key=lambda c: (c.base, c.pairs)) for d, cs in cubes.items()},
    )
    return complex_


def extract_halfspaces(c: CubeComplex) -> FinitePocSet:
    """The halfspace poc-set of a complex: vertex sides of each wall,
    ordered by inclusion of vertex sets."""
    n = c.pocset.n_pairs
    sides: list[frozenset[int]] = []
    for wall in c.walls():
        if not wall.side_plain or not wall.side_star:
            raise DegenerateWall(f"wall h{wall.pair + 1} has an empty side", wall.pair)
        sides.append(wall.side_plain)
        sides.append(wall.side_star)
    everything = frozenset(range(len(c.vertices)))
    sides.append(frozenset())  # 0
    sides.append(everything)  # 0*
    m = 2 * n + 2
    leq = [[sides[a] <= sides[b] for b in range(m)] for a in range(m)]
    return FinitePocSet.from_leq_matrix(n, leq)


@dataclass
class DualityReport:
    isomorphic: bool
    element_bijection: dict[str, str]
    vertex_bijection: dict[int, int]
    mismatch: Optional[str] = None

    def to_json(self) -> dict:
        return {
            "isomorphic": self.isomorphic,
            "elements": self.element_bijection,
            "vertices": {str(k): v for k, v in self.vertex_bijection.items()},
            "mismatch": self.mismatch,
        }


def duality_roundtrip(p: FinitePocSet) -> DualityReport:
    """Check extract_halfspaces(build_cubing(p)) is poc-isomorphic to p and
    that v -> (halfspaces of the rebuilt poc-set containing v) is a complex
    isomorphism.  Raises `NotIsomorphic` at the first mismatch.
    """
    c = build_cubing(p)
    q = extract_halfspaces(c)
    if q.n_pairs != p.n_pairs:
        raise NotIsomorphic(
            f"pair counts differ: {p.n_pairs} vs {q.n_pairs}",
            (p.n_pairs, q.n_pairs),
        )
    # natural element map: h -> S_h, i.e. pair k -> wall k oriented so the
    # plain side is the vertex set of h_k
    def image(e: int) -> int:
        return e

    for a in p.elements():
        for b in p.elements():
            if p.leq(a, b) != q.leq(image(a), image(b)):
                raise NotIsomorphic(
                    f"order mismatch at ({p.name(a)}, {p.name(b)})", (a, b)
                )

    # vertex map: v -> pi_v, the ultrafilter of rebuilt halfspaces at v
    c2 = build_cubing(q)
    vertex_map: dict[int, int] = {}
    for i, u in enumerate(c.vertices):
        img = q.ultrafilter_from_signs(u.signs)
        vertex_map[i] = c2.vertex_index(img)
    if sorted(vertex_map.values()) != list(range(len(c2.vertices))):
        raise NotIsomorphic("vertex map is not a bijection", None)
    mapped_edges = {
        (min(vertex_map[i], vertex_map[j]), max(vertex_map[i], vertex_map[j]), k)
        for i, j, k in c.edges
    }
    if mapped_edges != set(c2.edges):
        raise NotIsomorphic("edge sets differ under the vertex map", None)
    for d in set(c.cubes) | set(c2.cubes):
        if len(c.cubes.get(d, [])) != len(c2.cubes.get(d, [])):
            raise NotIsomorphic(f"{d}-cube counts differ", d)
    bijection = {p.name(e): q.name(image(e)) for e in p.proper_elements()}
    return DualityReport(True, bijection, vertex_map)
