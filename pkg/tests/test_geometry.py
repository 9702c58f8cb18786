from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from atilde.field import GF, FieldSpec
from atilde.geometry import (FULL, Correlation, Geometry, GeometryError, ParseError,
                             format_geometry_header, load_geometry, perp_correlation)


def brute_subspaces(n, q):
    """Independent oracle: subspaces of GF(q)^(n+1) as frozensets of vectors."""
    F = GF(FieldSpec.of_order(q))
    vecs = list(product(range(q), repeat=n + 1))

    def span(gens):
        out = {tuple([0] * (n + 1))}
        for g in gens:
            out |= {tuple(F.add[a][F.mul[c][b]] for a, b in zip(v, g))
                    for v in out for c in range(q)}
        return frozenset(out)

    spaces = {span([v]) for v in vecs if any(v)}
    level = set(spaces)
    while level:
        nxt = {span(list(s) + [v]) for s in level for v in vecs if v not in s}
        nxt = {s for s in nxt if len(s) < q ** (n + 1)} - spaces
        spaces |= nxt
        level = nxt
    return spaces


@pytest.mark.parametrize("n,q,counts", [(2, 2, {1: 7, 2: 7}), (2, 3, {1: 13, 2: 13}),
                                        (3, 2, {1: 15, 2: 35, 3: 15}), (2, 4, {1: 21, 2: 21})])
def test_counts(n, q, counts):
    g = Geometry(n, q)
    assert {d: len(g.of_dim(d)) for d in counts} == counts
    assert all(1 <= s.dim <= n for s in g)


@pytest.mark.parametrize("n,q", [(2, 2), (2, 3), (3, 2)])
def test_counts_match_brute_force(n, q):
    spaces = brute_subspaces(n, q)
    g = Geometry(n, q)
    assert len(spaces) == len(g)
    for s in g:
        assert q ** s.dim in {len(x) for x in spaces}


def test_ids_are_canonical_order():
    g = Geometry(2, 3)
    keys = [(s.dim, s.basis) for s in g]
    assert keys == sorted(keys)
    assert [s.id for s in g] == list(range(len(g)))


def test_sum_and_incidence():
    g = Geometry(2, 2)
    pts, lines = g.of_dim(1), g.of_dim(2)
    for x in g:
        assert g.sum(x, x) is x
        assert g.incident(x, x)
    for a in pts:
        for b in pts:
            if a is not b:
                s = g.sum(a, b)
                assert s.dim == 2 and g.incident(a, s).proper_sub
    for line in lines:
        assert sum(bool(g.incident(p, line)) for p in pts) == 3
    with pytest.raises(GeometryError):
        g.incident(pts[0], FULL)
    assert g.sum(pts[0], g.perp(pts[0])) in (FULL, g.perp(pts[0]))


def test_prime_sum():
    g = Geometry(3, 2)
    p = g.of_dim(1)
    assert g.prime_sum(p[0], p[0]) is None
    line = g.sum(p[0], p[1])
    assert g.prime_sum(p[0], line) is None
    assert g.prime_sum(p[0], p[1]) is line


def test_sum_laws_exhaustive():
    g = Geometry(2, 3)
    J, L = g.join_table(), g.leq_table()
    N = len(g)
    for i in range(N):
        for j in range(N):
            assert J[i][j] == J[j][i]
            if L[i][j] and L[j][i]:
                assert i == j
            for k in range(N):
                if L[i][j] and L[j][k]:
                    assert L[i][k]
                if J[i][j] >= 0 and J[j][k] >= 0:
                    left, right = J[J[i][j]][k], J[i][J[j][k]]
                    assert left == right
                if L[i][j] and J[i][k] >= 0 and J[j][k] >= 0:
                    assert L[J[i][k]][J[j][k]]


@pytest.mark.parametrize("n,q", [(2, 2), (2, 3), (3, 2)])
def test_perp_is_polarity(n, q):
    g = Geometry(n, q)
    lam = perp_correlation(g)
    lam.check(g)
    assert lam.is_inclusion_reversing(g)
    for x in g:
        assert lam(lam(x)) == x.id
        assert g[lam(x)].dim == n + 1 - x.dim
    assert sorted(lam(p) for p in g.of_dim(1)) == [s.id for s in g.of_dim(n)]


def test_correlation_rejects_non_involution():
    g = Geometry(2, 2)
    m = list(perp_correlation(g).map)
    m[0], m[1] = m[1], m[0]
    with pytest.raises(GeometryError):
        Correlation(g.key, tuple(m)).check(g)


@pytest.mark.parametrize("n,q", [(2, 2), (2, 4), (2, 9)])
def test_round_trip(n, q):
    g = Geometry(n, q)
    text = format_geometry_header(g, perp_correlation(g), listing=True)
    g2, lam2 = load_geometry(text)
    assert [(s.dim, s.basis, s.id) for s in g2] == [(s.dim, s.basis, s.id) for s in g]
    assert lam2.map == perp_correlation(g).map
    assert format_geometry_header(g2, lam2, listing=True) == text


def test_parse_errors():
    with pytest.raises(ParseError, match="line 1"):
        load_geometry("geometry 2 x\n")
    g = Geometry(2, 2)
    bad = format_geometry_header(g, perp_correlation(g)).replace("\n0 ", "\n0 99 ", 1)
    with pytest.raises(ParseError):
        load_geometry(bad)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(0, 2), min_size=3, max_size=3), min_size=1, max_size=3))
def test_span_is_canonical(rows):
    g = Geometry(2, 3)
    s = g.span(rows)
    # any row operation leaves the span unchanged
    mixed = [rows[0]] + [[(a + 2 * b) % 3 for a, b in zip(r, rows[0])] for r in rows[1:]]
    assert g.span(mixed) is s
    assert g.span(list(reversed(rows))) is s
