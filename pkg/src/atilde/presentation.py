"""Triangle presentations: validation against axioms (A)-(F), search, and I/O.

A presentation is a set of triples (u, v, w) of subspace ids.  The half
with dimension sum n+1 is called ``half_prime`` below; the remaining
triples (dimension sum 2(n+1)) are ``half_double_prime``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .geometry import (Correlation, Geometry, ParseError, format_geometry_header,
                       parse_geometry_block, tokenize, _ints)

AXIOMS = ("A", "B", "C", "D", "E", "F")


class PresentationError(ValueError):
    pass


class TrianglePresentation:
    def __init__(self, geometry: Geometry, correlation: Correlation, triples):
        N = len(geometry)
        triples = frozenset(tuple(int(a) for a in t) for t in triples)
        for t in triples:
            if len(t) != 3 or not all(0 <= a < N for a in t):
                raise PresentationError(f"triple {t} has a dangling subspace id")
        if correlation.geometry_key != geometry.key:
            raise PresentationError("correlation belongs to another geometry")
        self.geometry = geometry
        self.correlation = correlation
        self.lam = correlation.map
        self.triples = triples
        n1 = geometry.n + 1
        dims = geometry.dims
        self.half_prime = frozenset(t for t in triples
                                    if dims[t[0]] + dims[t[1]] + dims[t[2]] == n1)
        self.half_double_prime = triples - self.half_prime
        self._third: dict[tuple[int, int], int] = {}
        for u, v, w in sorted(triples):
            self._third.setdefault((u, v), w)

    def __len__(self):
        return len(self.triples)

    def __eq__(self, other):
        return (isinstance(other, TrianglePresentation)
                and self.geometry.key == other.geometry.key
                and self.lam == other.lam and self.triples == other.triples)

    def __hash__(self):
        return hash((self.geometry.key, self.lam, self.triples))

    def __repr__(self):
        return (f"TrianglePresentation(n={self.geometry.n}, q={self.geometry.q},"
                f" |T|={len(self.triples)})")

    def third(self, u: int, v: int) -> int | None:
        """The w with (u, v, w) in T, if any."""
        return self._third.get((u, v))


@dataclass
class ValidationReport:
    results: dict = field(default_factory=dict)   # axiom -> witness or None

    @property
    def ok(self) -> bool:
        return all(w is None for w in self.results.values())

    def failed(self) -> list[str]:
        return [a for a in AXIOMS if self.results.get(a) is not None]

    def lines(self) -> list[str]:
        out = []
        for a in AXIOMS:
            w = self.results.get(a)
            out.append(f"axiom {a}: PASS" if w is None else f"axiom {a}: FAIL {w}")
        return out

    def as_dict(self) -> dict:
        return {a: ("PASS" if self.results.get(a) is None
                    else {"FAIL": list(self.results[a])}) for a in AXIOMS}


def _distinct_incident(leq, a, b):
    return a != b and (leq[a][b] or leq[b][a])


def _check_a(tp: TrianglePresentation):
    lam, leq = tp.lam, tp.geometry.leq_table()
    N = len(tp.geometry)
    for u in range(N):
        for v in range(N):
            has = tp.third(u, v) is not None
            want = _distinct_incident(leq, lam[u], v)
            if want and not has:
                return ("missing", u, v)
            if has and not want:
                return ("spurious", u, v, tp.third(u, v))
    return None


def _check_b(tp):
    for u, v, w in sorted(tp.triples):
        if (v, w, u) not in tp.triples:
            return (u, v, w)
    return None


def _check_c(tp):
    seen: dict[tuple[int, int], int] = {}
    for u, v, w in sorted(tp.triples):
        if (u, v) in seen:
            return (u, v, seen[(u, v)], w)
        seen[(u, v)] = w
    return None


def _check_d(tp):
    lam = tp.lam
    for u, v, w in sorted(tp.triples):
        if (lam[w], lam[v], lam[u]) not in tp.triples:
            return (u, v, w)
    return None


def _check_e(tp):
    dims, n1 = tp.geometry.dims, tp.geometry.n + 1
    for t in sorted(tp.triples):
        if sum(dims[a] for a in t) not in (n1, 2 * n1):
            return t
    return None


def _prime_third(tp):
    third = {}
    for u, v, w in tp.half_prime:
        third.setdefault((u, v), w)
    return third


def _check_f(tp):
    lam = tp.lam
    third = _prime_third(tp)
    by_last: dict[int, list[tuple[int, int]]] = {}
    for x, y, u in sorted(tp.half_prime):
        by_last.setdefault(u, []).append((x, y))
    for x, y, u in sorted(tp.half_prime):
        for x2, y2 in by_last.get(lam[u], ()):
            w = third.get((y2, x))
            if w is None or third.get((y, x2)) != lam[w]:
                return (x, y, u, x2, y2, lam[u])
    return None


_CHECKS = {"A": _check_a, "B": _check_b, "C": _check_c,
           "D": _check_d, "E": _check_e, "F": _check_f}


def validate(tp: TrianglePresentation) -> ValidationReport:
    return ValidationReport({a: _CHECKS[a](tp) for a in AXIOMS})


# Search -------------------------------------------------------------------

class _SearchState:
    def __init__(self, geometry: Geometry, correlation: Correlation):
        self.geometry = geometry
        self.lam = lam = correlation.map
        leq = geometry.leq_table()
        N, n1, dims = len(geometry), geometry.n + 1, geometry.dims
        # (u, v) is a half_prime pair iff lambda(u) strictly contains v.
        self.is_pair = [[leq[v][lam[u]] and v != lam[u] for v in range(N)]
                        for u in range(N)]
        self.pairs = [(u, v) for u in range(N) for v in range(N) if self.is_pair[u][v]]
        self.cands = {}
        for u, v in self.pairs:
            dw = n1 - dims[u] - dims[v]
            self.cands[(u, v)] = [w for w in range(N) if dims[w] == dw
                                  and self.is_pair[v][w] and self.is_pair[w][u]]
        self.assigned: dict[tuple[int, int], int] = {}
        self.by_last: dict[int, set[tuple[int, int]]] = {}
        self.check_f = geometry.n >= 3

    def _orbit(self, u, v, w):
        return {(u, v, w), (v, w, u), (w, u, v)}

    def place(self, u, v, w):
        orbit = self._orbit(u, v, w)
        for a, b, c in orbit:
            self.assigned[(a, b)] = c
            self.by_last.setdefault(c, set()).add((a, b))
        return orbit

    def remove(self, orbit):
        for a, b, c in orbit:
            del self.assigned[(a, b)]
            self.by_last[c].discard((a, b))

    def f_violated(self, orbit) -> bool:
        """Decidable (F) failures with a premise among ``orbit``."""
        if not self.check_f:
            return False
        lam, assigned, is_pair = self.lam, self.assigned, self.is_pair

        def bad(x, y, u, x2, y2):
            if not is_pair[y2][x]:
                return True
            w = assigned.get((y2, x))
            if w is None:
                return False
            if not is_pair[y][x2]:
                return True
            z = assigned.get((y, x2))
            return z is not None and z != lam[w]

        for x, y, u in orbit:
            for x2, y2 in list(self.by_last.get(lam[u], ())):
                if bad(x, y, u, x2, y2):
                    return True
            for x0, y0 in list(self.by_last.get(lam[u], ())):
                # orbit triple as the second premise: (x0, y0, u0) with lam(u0) = u
                if bad(x0, y0, lam[u], x, y):
                    return True
        return False

    def run(self, limit):
        pairs = self.pairs
        results = []

        def rec(start):
            if limit is not None and len(results) >= limit:
                return
            k = start
            while k < len(pairs) and pairs[k] in self.assigned:
                k += 1
            if k == len(pairs):
                results.append(dict(self.assigned))
                return
            u, v = pairs[k]
            for w in self.cands[(u, v)]:
                if not u == v == w and ((v, w) in self.assigned
                                        or (w, u) in self.assigned):
                    continue
                orbit = self.place(u, v, w)
                if not self.f_violated(orbit):
                    rec(k + 1)
                self.remove(orbit)
                if limit is not None and len(results) >= limit:
                    return

        rec(0)
        return results


def search(geometry: Geometry, correlation: Correlation, limit: int | None = 1):
    """Backtracking search for presentations compatible with ``correlation``.

    Pairs (u, v) with lambda(u) strictly containing v are filled in
    ascending (u, v) order, candidates w in ascending id; each choice is
    closed under rotation, the remaining half follows from the
    lambda-reflection.  Only fully validated presentations are returned.
    """
    state = _SearchState(geometry, correlation)
    lam = correlation.map
    out = []
    for assignment in state.run(limit):
        prime = {(u, v, w) for (u, v), w in assignment.items()}
        full = prime | {(lam[w], lam[v], lam[u]) for u, v, w in prime}
        tp = TrianglePresentation(geometry, correlation, full)
        report = validate(tp)
        if report.ok:
            out.append(tp)
    return out


def obstruction(geometry: Geometry, correlation: Correlation):
    """A cheap certificate that no presentation fits ``correlation``.

    Returns ``(pair, (u1, v1, w1), (u2, v2, w2))`` when two pairs each
    have a single admissible completion and the two forced rotation
    orbits give ``pair`` different third entries (violating (C)), or when
    some pair has no admissible completion at all (``(pair, None, None)``).
    Returns None if no such conflict exists; the search may still fail.
    """
    state = _SearchState(geometry, correlation)
    forced: dict[tuple[int, int], tuple[int, tuple]] = {}
    for u, v in state.pairs:
        cands = state.cands[(u, v)]
        if not cands:
            return ((u, v), None, None)
        if len(cands) != 1:
            continue
        w = cands[0]
        for a, b, c in state._orbit(u, v, w):
            prev = forced.get((a, b))
            if prev is not None and prev[0] != c:
                return ((a, b), prev[1], (u, v, w))
            forced[(a, b)] = (c, (u, v, w))
    return None


def correlations_n2(geometry: Geometry):
    """All point/line involutions of a plane, lexicographically by line images."""
    from itertools import permutations
    if geometry.n != 2:
        raise PresentationError("correlation enumeration is only offered for n = 2")
    points = [s.id for s in geometry.of_dim(1)]
    lines = [s.id for s in geometry.of_dim(2)]
    for images in permutations(lines):
        lam = [0] * len(geometry)
        for p, l in zip(points, images):
            lam[p], lam[l] = l, p
        yield Correlation(geometry.key, tuple(lam))


def first_admissible(geometry: Geometry, max_tries: int = 10_000):
    """The first plane involution (in ``correlations_n2`` order) admitting a
    presentation, together with that presentation; None if none was found
    within ``max_tries`` candidates."""
    for k, lam in enumerate(correlations_n2(geometry)):
        if k >= max_tries:
            break
        if obstruction(geometry, lam) is not None:
            continue
        found = search(geometry, lam, limit=1)
        if found:
            return lam, found[0]
    return None


# File format --------------------------------------------------------------

def dumps(tp: TrianglePresentation) -> str:
    body = [format_geometry_header(tp.geometry, tp.correlation).rstrip("\n"),
            "triples:"]
    body.extend(f"{u} {v} {w}" for u, v, w in sorted(tp.triples))
    return "\n".join(body) + "\n"


def loads(text: str, check: bool = True) -> TrianglePresentation:
    geometry, correlation, rest = parse_geometry_block(tokenize(text))
    if not rest or rest[0][1] != ["triples:"]:
        raise ParseError("expected 'triples:' section", rest[0][0] if rest else None)
    triples = []
    for lineno, toks in rest[1:]:
        if len(toks) != 3:
            raise ParseError("expected 'u v w'", lineno)
        t = _ints(toks, lineno)
        if not all(0 <= a < len(geometry) for a in t):
            raise ParseError(f"triple {tuple(t)} has a dangling subspace id", lineno)
        triples.append(tuple(t))
    tp = TrianglePresentation(geometry, correlation, triples)
    if check:
        report = validate(tp)
        if not report.ok:
            raise PresentationError(
                "presentation fails validation: " + "; ".join(
                    line for line in report.lines() if "FAIL" in line))
    return tp


def save(tp: TrianglePresentation, path) -> None:
    Path(path).write_text(dumps(tp))


def load(path, check: bool = True) -> TrianglePresentation:
    return loads(Path(path).read_text(), check=check)
