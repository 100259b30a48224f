from __future__ import annotations

import random
from itertools import combinations, product

import pytest
from hypothesis import given, settings, strategies as st

from pocsets.core import FinitePocSet, star
from pocsets.errors import (
    AxiomViolation,
    NotAFilterBase,
    NotMaximalTransverse,
    NotMinimal,
    TrivialElement,
)

from conftest import brute_force_ultrafilters, random_pocset


# ---------------------------------------------------------------------------
# validation


def test_empty_pocset_is_valid():
    p = FinitePocSet.from_order_generators(0, [])
    assert p.n_pairs == 0
    assert [u.signs for u in p.ultrafilters()] == [()]
    assert p.ultrafilters()[0].members == frozenset({p.zero_star})


def test_line3_validates(fix_line3):
    p = fix_line3
    assert p.n_pairs == 3
    assert p.leq(p.handle("h3"), p.handle("h1"))
    assert p.leq(p.handle("h1*"), p.handle("h3*"))
    assert not p.leq(p.handle("h1"), p.handle("h3"))


def test_h_below_hstar_rejected():
    with pytest.raises(AxiomViolation) as exc:
        FinitePocSet.from_order_generators(1, [(0, 1)])
    assert exc.value.axiom == "h <= h*"


def test_antisymmetry_rejected():
    with pytest.raises(AxiomViolation) as exc:
        FinitePocSet.from_order_generators(2, [(0, 2), (2, 0)])
    assert exc.value.axiom == "antisymmetry"


def test_dangling_handle_rejected():
    from pocsets.errors import MalformedInput

    with pytest.raises(MalformedInput):
        FinitePocSet.from_order_generators(1, [(0, 9)])


def test_leq_matrix_checks_involution():
    # a relation with h1 <= h2 but without h2* <= h1* is not a poc-set
    m = 6
    leq = [[i == j for j in range(m)] for i in range(m)]
    leq[0][2] = True
    for e in range(m):
        leq[4][e] = True  # 0 below everything
        leq[e][5] = True  # everything below 0*
    with pytest.raises(AxiomViolation) as exc:
        FinitePocSet.from_leq_matrix(2, leq)
    assert exc.value.axiom == "involution not order-reversing"


# ---------------------------------------------------------------------------
# pair classification, intervals, dimension


def test_classify_square(fix_square):
    p = fix_square
    assert p.classify_pair(p.handle("h1"), p.handle("h2")).kind == "transverse"


def test_classify_line3(fix_line3):
    p = fix_line3
    got = p.classify_pair(p.handle("h1"), p.handle("h3"))
    assert got.kind == "nested"
    assert got.witness == (p.handle("h3"), p.handle("h1"))


def test_classify_tripod(fix_tripod):
    p = fix_tripod
    got = p.classify_pair(p.handle("h1"), p.handle("h2"))
    assert got.kind == "nested"
    assert got.witness == (p.handle("h1"), p.handle("h2*"))


def test_classify_rejects_trivial(fix_square):
    p = fix_square
    with pytest.raises(TrivialElement):
        p.classify_pair(p.zero, p.handle("h1"))


def test_interval_line3(fix_line3):
    p = fix_line3
    h1, h2, h3 = p.handle("h1"), p.handle("h2"), p.handle("h3")
    assert p.interval(h3, h1) == sorted([h1, h2, h3])
    assert p.interval(h1, h3) == []
    assert p.interval(h2, h2) == [h2]


def test_interval_square_empty(fix_square):
    p = fix_square
    assert p.interval(p.handle("h1"), p.handle("h2")) == []


def test_dimension(fix_line3, fix_square, fix_tripod):
    assert fix_line3.dimension() == 1
    assert fix_square.dimension() == 2
    assert fix_tripod.dimension() == 1


def test_dimension_matches_exhaustive_on_random():
    rng = random.Random(7)
    for _ in range(40):
        p = random_pocset(rng, max_pairs=5)
        best = 0
        for r in range(p.n_pairs + 1):
            for pairs in combinations(range(p.n_pairs), r):
                els = [2 * k for k in pairs]
                if all(p.transverse(a, b) for a, b in combinations(els, 2)):
                    best = max(best, r)
        assert p.dimension() == best


# ---------------------------------------------------------------------------
# ultrafilter enumeration against the sign-scan oracle


def test_counts_on_fixtures(fix_line3, fix_square, fix_tripod):
    assert len(fix_line3.ultrafilters()) == 4
    assert len(fix_square.ultrafilters()) == 4
    assert len(fix_tripod.ultrafilters()) == 4


def test_square_ultrafilters_are_all_sign_patterns(fix_square):
    assert [u.signs for u in fix_square.ultrafilters()] == [
        (0, 0),
        (0, 1),
        (1, 0),
        (1, 1),
    ]


def test_tripod_ultrafilters(fix_tripod):
    p = fix_tripod
    expect = {
        frozenset({p.handle("h1"), p.handle("h2*"), p.handle("h3*"), p.zero_star}),
        frozenset({p.handle("h2"), p.handle("h1*"), p.handle("h3*"), p.zero_star}),
        frozenset({p.handle("h3"), p.handle("h1*"), p.handle("h2*"), p.zero_star}),
        frozenset({p.handle("h1*"), p.handle("h2*"), p.handle("h3*"), p.zero_star}),
    }
    assert {u.members for u in p.ultrafilters()} == expect


def test_enumeration_equals_brute_force_random():
    rng = random.Random(20240817)
    for _ in range(60):
        p = random_pocset(rng, max_pairs=6)
        fast = [u.signs for u in p.ultrafilters()]
        assert fast == sorted(brute_force_ultrafilters(p))


def test_is_ultrafilter_witnesses(fix_square, fix_line3):
    p = fix_square
    missing_pair = {p.handle("h1"), p.handle("h1*"), p.zero_star}
    chk = p.is_ultrafilter(missing_pair)
    assert not chk.ok and chk.axiom == "UF1"

    q = fix_line3
    bad = {q.handle("h1*"), q.handle("h2"), q.handle("h3"), q.zero_star}
    chk = q.is_ultrafilter(bad)
    assert not chk.ok and chk.axiom == "UF2"
    assert chk.witness == (q.handle("h2"), q.handle("h1*"))

    good = {p.handle("h1"), p.handle("h2"), p.zero_star}
    assert p.is_ultrafilter(good).ok
    assert any(u.members == frozenset(good) for u in p.ultrafilters())


# ---------------------------------------------------------------------------
# filter-base extension


def test_extend_square_prefers_plain(fix_square):
    p = fix_square
    u = p.extend_filterbase({p.handle("h1")})
    assert u.members == frozenset({p.handle("h1"), p.handle("h2"), p.zero_star})


def test_extend_empty_base_gives_first(fix_line3, fix_square, fix_tripod):
    for p in (fix_line3, fix_square, fix_tripod):
        assert p.extend_filterbase(()) == p.ultrafilters()[0]


def test_extend_rejects_non_filterbase(fix_tripod):
    p = fix_tripod
    with pytest.raises(NotAFilterBase) as exc:
        p.extend_filterbase({p.handle("h1"), p.handle("h2")})
    assert exc.value.witness == (p.handle("h1"), p.handle("h2"))


def test_extension_contains_base_random():
    rng = random.Random(5)
    for _ in range(60):
        p = random_pocset(rng, max_pairs=6)
        ufs = p.ultrafilters()
        if not ufs:
            continue
        u = rng.choice(ufs)
        members = [e for e in u.sorted_members() if p.is_proper(e)]
        base = rng.sample(members, min(len(members), rng.randint(0, 3)))
        ext = p.extend_filterbase(base)
        assert set(base) <= ext.members
        assert p.is_ultrafilter(ext.members).ok


# ---------------------------------------------------------------------------
# median, delta, flips


def test_median_majority_identity(fix_square):
    p = fix_square
    a, b = p.ultrafilters()[0], p.ultrafilters()[3]
    assert p.median(a, a, b) == a


def test_median_square_example(fix_square):
    p = fix_square
    by_signs = {u.signs: u for u in p.ultrafilters()}
    got = p.median(by_signs[(0, 0)], by_signs[(0, 1)], by_signs[(1, 1)])
    assert got == by_signs[(0, 1)]


def test_median_symmetric_and_closed_random():
    rng = random.Random(99)
    for _ in range(40):
        p = random_pocset(rng, max_pairs=5)
        ufs = p.ultrafilters()
        if len(ufs) < 3:
            continue
        a, b, c = rng.choice(ufs), rng.choice(ufs), rng.choice(ufs)
        m = p.median(a, b, c)
        assert p.is_ultrafilter(m.members).ok
        for perm in ((a, c, b), (b, a, c), (c, b, a)):
            assert p.median(*perm) == m


def test_delta(fix_line3):
    p = fix_line3
    ufs = p.ultrafilters()
    all_plus = next(u for u in ufs if u.signs == (0, 0, 0))
    all_minus = next(u for u in ufs if u.signs == (1, 1, 1))
    assert p.delta(all_plus, all_plus) == 0
    assert p.delta(all_plus, all_minus) == 3


def test_min_set(fix_line3, fix_square, fix_tripod):
    p = fix_line3
    u = next(x for x in p.ultrafilters() if x.signs == (0, 0, 0))
    assert p.min_set(u) == [p.handle("h3")]

    q = fix_square
    u = next(x for x in q.ultrafilters() if x.signs == (0, 0))
    assert q.min_set(u) == [q.handle("h1"), q.handle("h2")]

    t = fix_tripod
    u = next(x for x in t.ultrafilters() if x.signs == (1, 1, 1))
    assert t.min_set(u) == [t.handle("h1*"), t.handle("h2*"), t.handle("h3*")]


def test_flip_definition_and_involution(fix_square):
    p = fix_square
    u = next(x for x in p.ultrafilters() if x.signs == (0, 0))
    a = p.handle("h1")
    v = p.flip(u, a)
    assert v.signs == (1, 0)
    assert p.flip(v, star(a)) == u


def test_flip_requires_minimal(fix_line3):
    p = fix_line3
    u = next(x for x in p.ultrafilters() if x.signs == (0, 0, 0))
    with pytest.raises(NotMinimal):
        p.flip(u, p.handle("h1"))


def test_square_commutation(fix_square):
    # transverse flips commute: [[u]_a]_b == [[u]_b]_a
    p = fix_square
    u = next(x for x in p.ultrafilters() if x.signs == (0, 0))
    a, b = p.handle("h1"), p.handle("h2")
    assert p.flip(p.flip(u, a), b) == p.flip(p.flip(u, b), a)


def test_flip_changes_delta_by_one_random():
    rng = random.Random(31)
    for _ in range(50):
        p = random_pocset(rng, max_pairs=5)
        ufs = p.ultrafilters()
        u = rng.choice(ufs)
        mins = p.min_set(u)
        if not mins:
            continue
        a = rng.choice(mins)
        v = p.flip(u, a)
        w = rng.choice(ufs)
        assert abs(p.delta(v, w) - p.delta(u, w)) == 1
        assert p.delta(u, v) == 1


# ---------------------------------------------------------------------------
# principal construction


def test_principal_square(fix_square):
    p = fix_square
    u = p.principal_from_transverse([p.handle("h1"), p.handle("h2")])
    assert u.signs == (0, 0)


def test_principal_line3(fix_line3):
    p = fix_line3
    u = p.principal_from_transverse([p.handle("h3")])
    assert u.members == frozenset(
        {p.handle("h1"), p.handle("h2"), p.handle("h3"), p.zero_star}
    )


def test_principal_rejects_non_maximal(fix_square):
    p = fix_square
    with pytest.raises(NotMaximalTransverse) as exc:
        p.principal_from_transverse([p.handle("h1")])
    assert exc.value.witness == p.handle("h2")


def test_every_ultrafilter_has_a_waist_random():
    # alpha = pi_A for some maximal transverse A inside min(alpha)
    rng = random.Random(13)
    for _ in range(40):
        p = random_pocset(rng, max_pairs=5)
        for u in p.ultrafilters():
            mins = p.min_set(u)
            found = False
            for r in range(len(mins), 0, -1):
                for sub in combinations(mins, r):
                    if any(
                        not p.transverse(x, y) for x, y in combinations(sub, 2)
                    ):
                        continue
                    if p.is_maximal_transverse(sub) is None:
                        if p.principal_from_transverse(sub) == u:
                            found = True
                            break
                if found:
                    break
            assert found or p.n_pairs == 0


# ---------------------------------------------------------------------------
# convexity / Helly


def test_vset_square(fix_square):
    p = fix_square
    assert p.vset_nonempty([p.handle("h1"), p.handle("h2")])
    assert p.vset_nonempty([])


def test_vset_tripod_not_filterbase(fix_tripod):
    p = fix_tripod
    assert not p.vset_nonempty([p.handle("h1"), p.handle("h2")])


def test_vset_agrees_with_helly_random():
    # V(A) is non-empty iff A is a filter base (single class backend)
    rng = random.Random(77)
    for _ in range(60):
        p = random_pocset(rng, max_pairs=5)
        if p.n_pairs == 0:
            continue
        size = rng.randint(1, min(3, 2 * p.n_pairs))
        a = rng.sample(range(2 * p.n_pairs), size)
        assert p.vset_nonempty(a) == (p.check_filterbase(a) is None)


def test_helly_pairwise_implies_total_random():
    rng = random.Random(123)
    for _ in range(60):
        p = random_pocset(rng, max_pairs=5)
        if p.n_pairs == 0:
            continue
        size = rng.randint(2, min(4, 2 * p.n_pairs))
        fam = rng.sample(range(2 * p.n_pairs), size)
        if all(
            p.vset_nonempty([x, y]) for x, y in combinations(fam, 2)
        ):
            assert p.vset_nonempty(fam)


# ---------------------------------------------------------------------------
# delta equals graph distance (breadth-first oracle)


def graph_distances(p: FinitePocSet):
    ufs = p.ultrafilters()
    index = {u.signs: i for i, u in enumerate(ufs)}
    adj = [[] for _ in ufs]
    for i, u in enumerate(ufs):
        for a in p.min_set(u):
            adj[i].append(index[p.flip(u, a).signs])
    return ufs, adj


def bfs(adj, source):
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


@pytest.mark.parametrize("maker", ["fix_line3", "fix_square", "fix_tripod"])
def test_delta_is_graph_distance(maker, request):
    p = request.getfixturevalue(maker)
    ufs, adj = graph_distances(p)
    for i in range(len(ufs)):
        d = bfs(adj, i)
        for j in range(len(ufs)):
            assert d[j] == p.delta(ufs[i], ufs[j])


@given(st.integers(0, 2**30 - 1))
@settings(max_examples=25, deadline=None)
def test_delta_is_graph_distance_random(seed):
    p = random_pocset(random.Random(seed), max_pairs=4)
    ufs, adj = graph_distances(p)
    for i in range(len(ufs)):
        d = bfs(adj, i)
        for j in range(len(ufs)):
            assert d.get(j) == p.delta(ufs[i], ufs[j])


def test_top_level_delta_dispatch(fix_square):
    import math

    import pocsets
    from pocsets.chains import PLUS_END, uf
    from pocsets.errors import BackendMismatch

    a, b = fix_square.ultrafilters()[0], fix_square.ultrafilters()[3]
    assert pocsets.delta(a, b) == 2
    assert pocsets.delta(uf(PLUS_END, 0), uf(0, 0)) == math.inf
    assert pocsets.delta(uf(2, 0), uf(0, 0)) == 2
    with pytest.raises(BackendMismatch):
        pocsets.delta(a, uf(0, 0))
    with pytest.raises(BackendMismatch):
        pocsets.delta(uf(0), uf(0, 0))


def test_vset_with_restriction_class(fix_square):
    p = fix_square
    a, b = p.handle("h1"), p.handle("h2")
    pool = [u for u in p.ultrafilters() if a in u.members]  # the class S_a
    assert p.vset_nonempty([b], restrict_to=pool)
    assert not p.vset_nonempty([star(a)], restrict_to=pool)
    assert p.vset_nonempty([], restrict_to=pool)


def test_support_lists_the_halfspace(fix_square):
    p = fix_square
    ufs = p.ultrafilters()
    side = p.support(p.handle("h1"), ufs)
    assert [ufs[i].signs[0] for i in side] == [0, 0]


def test_filterbase_type(fix_tripod):
    from pocsets.core import FilterBase

    p = fix_tripod
    fb = p.filterbase({p.handle("h1")})
    assert isinstance(fb, FilterBase)
    assert p.extend_filterbase(fb).members >= fb.members
    with pytest.raises(NotAFilterBase):
        p.filterbase({p.handle("h1"), p.handle("h2")})
