import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from energygames.errors import InputError
from energygames.geometry import (
    PerfectHalfSpace,
    Subspace,
    bound_L,
    cancel_target,
    contains,
    enumerate_m_open_halfspaces,
    enumerate_perfect_halfspaces,
    hs_lt,
    lca,
    m_generated_subspaces,
    pphs_prec,
    shift_target,
    span,
    strict_part,
)

from strategies_hyp import nonzero2, vectors2

UNIVERSE_1_2 = enumerate_perfect_halfspaces(1, 2)


def _canon(rows, d):
    # reduced row echelon form over the rationals, as a hashable key
    m = [[Fraction(x) for x in r] for r in rows]
    out, col = [], 0
    for col in range(d):
        piv = next((r for r in m if r[col] != 0), None)
        if piv is None:
            continue
        m.remove(piv)
        piv = [x / piv[col] for x in piv]
        m = [[a - r[col] * b for a, b in zip(r, piv)] for r in m]
        out = [[a - r[col] * b for a, b in zip(r, piv)] for r in out]
        out.append(piv)
    return tuple(sorted(tuple(r) for r in out if any(r)))


def brute_halfspace_count(M, d, ambient_rows):
    # hyperplanes of the ambient spanned by lattice vectors of norm <= M, two sides each
    amb = _canon(ambient_rows, d)
    k = len(amb)
    vecs = [v for v in itertools.product(range(-M, M + 1), repeat=d)
            if any(v) and _canon(list(amb) + [v], d) == amb]
    planes = set()
    for r in range(0, k):
        for combo in itertools.combinations(vecs, r):
            c = _canon(combo, d)
            if len(c) == k - 1:
                planes.add(c)
    return 2 * len(planes)


def test_span_examples():
    line = span([(-1, 1), (1, -1)], 2)
    assert line.dim == 1 and line.contains((3, -3)) and not line.contains((1, 1))
    assert span([], 2).dim == 0
    assert span([(1, 0), (0, 1)], 2) == Subspace.full(2)


def test_halfspace_counts():
    assert len(enumerate_m_open_halfspaces(1, Subspace.full(2))) == 8
    assert len(enumerate_m_open_halfspaces(1, span([(1, -1)], 2))) == 2
    assert 8 <= bound_L(2, 1, 2) == 18
    assert len(UNIVERSE_1_2) == 16
    assert len(enumerate_perfect_halfspaces(1, 1)) == 2


@pytest.mark.parametrize("M,d,rows", [
    (1, 2, [(1, 0), (0, 1)]),
    (2, 2, [(1, 0), (0, 1)]),
    (1, 2, [(1, -1)]),
    (1, 3, [(1, 0, 0), (0, 1, 0), (0, 0, 1)]),
    (1, 3, [(1, 1, 0), (0, 0, 1)]),
])
def test_halfspace_counts_match_brute_force(M, d, rows):
    amb = span(rows, d)
    assert len(enumerate_m_open_halfspaces(M, amb)) == brute_halfspace_count(M, d, rows)


def test_bound_L():
    assert bound_L(2, 1, 2) == 18
    for M, d in [(1, 1), (3, 2), (2, 5)]:
        assert bound_L(1, M, d) == 2


def test_example_chains():
    h2 = next(h for h in enumerate_m_open_halfspaces(1, Subspace.full(2)) if h.normal == (1, 1))
    assert h2.contains((-1, -1))
    line = h2.boundary
    h1a, h1b = enumerate_m_open_halfspaces(1, line)
    p, q = PerfectHalfSpace(2, (h2, h1a)), PerfectHalfSpace(2, (h2, h1b))
    assert p in UNIVERSE_1_2 and q in UNIVERSE_1_2
    assert lca([p, q]) == PerfectHalfSpace(2, (h2,))
    assert lca([p]) == p
    pos = next(h for h in (h1a, h1b) if h.contains((-1, 1)))
    assert strict_part(pos)((1, -1))
    assert not contains(PerfectHalfSpace(2, (h2, pos)), (1, -1))
    other = next(c for c in UNIVERSE_1_2 if c.chain[0] != h2)
    assert lca([p, other]).chain == ()


def test_orders_are_strict_total():
    for a, b in itertools.product(UNIVERSE_1_2, repeat=2):
        assert (a == b) + pphs_prec(a, b) + pphs_prec(b, a) == 1
    hs = enumerate_m_open_halfspaces(2, Subspace.full(2))
    for a, b in itertools.product(hs, repeat=2):
        assert (a == b) + hs_lt(a, b) + hs_lt(b, a) == 1
    assert list(UNIVERSE_1_2) == sorted(UNIVERSE_1_2)
    # chains differing only at the bottom follow the bottom order
    p, q = UNIVERSE_1_2[0], UNIVERSE_1_2[1]
    assert p.chain[0] == q.chain[0] and pphs_prec(p, q) == hs_lt(p.chain[1], q.chain[1])


@given(vectors2)
def test_halfspace_partition(v):
    for h in enumerate_m_open_halfspaces(2, Subspace.full(2)):
        parts = [h.contains(v), strict_part(h)(v), h.boundary.contains(v)]
        assert sum(parts) == 1
        if h.contains(v):
            assert not strict_part(h)(v)


@given(vectors2)
def test_perfect_halfspaces_are_maximal_blunt_cones(v):
    for p in UNIVERSE_1_2:
        if not any(v):
            assert not p.contains(v)
        else:
            assert p.contains(v) != p.contains(tuple(-x for x in v))
        # chain members are disjoint
        hits = [i for i, h in enumerate(p.chain) if h.contains(v)]
        assert len(hits) <= 1


@given(st.lists(st.sampled_from(UNIVERSE_1_2), min_size=1, max_size=4),
       st.tuples(*[st.integers(-3, 3)] * 2))
def test_lca_is_contained_in_members(colours, v):
    if lca(colours).contains(v):
        assert all(c.contains(v) for c in colours)


def test_shift_target_examples():
    u = enumerate_perfect_halfspaces(1, 2)
    assert shift_target(u[5], 2, [], 1) == u[0]
    viol = [(-1, 3), (2, -1)]
    t = shift_target(u[0], 2, viol, 12)
    assert all(t.chain[0].closure_contains(w) for w in viol)
    first = next(h for h in enumerate_m_open_halfspaces(12, Subspace.full(2))
                 if all(h.closure_contains(w) for w in viol))
    assert t.chain[0] == first
    assert shift_target(u[0], 2, [(1, -1), (-1, 1), (1, 0), (-1, 0)], 1) is None
    with pytest.raises(InputError):
        shift_target(u[0], 3, [], 1)


def test_cancel_target():
    for cur in UNIVERSE_1_2:
        assert cancel_target(cur, 2, 1) == UNIVERSE_1_2[0]
        t = cancel_target(cur, 1, 1)
        assert t.chain[0] == cur.chain[0]
        assert t == min(c for c in UNIVERSE_1_2 if c.chain[0] == cur.chain[0])


@given(st.lists(nonzero2, min_size=1, max_size=3), st.sampled_from(UNIVERSE_1_2), st.integers(1, 2))
def test_shift_target_keeps_prefix_and_closure(viol, cur, k):
    t = shift_target(cur, k, viol, 2)
    if t is None:
        # no 2-generated half-space of the level holds them all in its closure
        amb = cur.level(k).ambient
        for h in enumerate_m_open_halfspaces(2, amb):
            assert any(strict_part(h)(w) for w in viol)
    else:
        assert t.chain[: 2 - k] == cur.chain[: 2 - k]
        assert not any(strict_part(t.level(k))(w) for w in viol)


def test_subspace_bound_check_small_grid():
    # counts per ambient never exceed the bound for M <= 2, d <= 3
    for M in (1, 2):
        for d in (1, 2, 3):
            for dim in range(1, d + 1):
                for amb in m_generated_subspaces(Subspace.full(d), M, dim):
                    assert len(enumerate_m_open_halfspaces(M, amb)) <= bound_L(dim, M, d)
