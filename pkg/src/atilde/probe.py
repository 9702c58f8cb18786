"""Empirical thinness of geodesic bigons and triangles in finite graphs.

Everything measured here is a lower bound for the corresponding
constant of the infinite graph: a finite probe can exhibit fat bigons
or triangles but can never prove that none exist.

Two probing modes are offered.  ``"all"`` takes every pair (or triple)
of vertices within the radius of the basepoint.  ``"anchored"`` fixes
the basepoint as one endpoint; for a Cayley graph, which is vertex
transitive, this loses nothing and is far cheaper.
"""
from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from math import comb

from .geometry import ParseError


class GeodesicCapExceeded(RuntimeError):
    pass


class FiniteGraph:
    """Undirected simple graph on vertices 0..n-1."""

    ROW_CACHE = 256

    def __init__(self, n: int, edges, labels=None):
        if n < 0:
            raise ValueError("vertex count must be >= 0")
        es = set()
        for i, j in edges:
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge ({i}, {j}) out of range")
            if i != j:
                es.add((min(i, j), max(i, j)))
        self.n = n
        self.edges = sorted(es)
        self.labels = labels
        adj = [[] for _ in range(n)]
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        self.adj = [sorted(a) for a in adj]
        self._rows: dict = {}

    def bfs(self, s: int) -> list:
        row = self._rows.get(s)
        if row is None:
            row = [-1] * self.n
            row[s] = 0
            queue = deque([s])
            while queue:
                x = queue.popleft()
                for y in self.adj[x]:
                    if row[y] < 0:
                        row[y] = row[x] + 1
                        queue.append(y)
            if len(self._rows) >= self.ROW_CACHE:
                self._rows.clear()
            self._rows[s] = row
        return row

    def dist(self, a: int, b: int) -> int:
        return self.bfs(a)[b]

    def ball(self, center: int, radius: int) -> list:
        row = self.bfs(center)
        return [v for v in range(self.n) if 0 <= row[v] <= radius]

    def dumps(self) -> str:
        out = [f"graph {self.n} {len(self.edges)}"]
        out.extend(f"{i} {j}" for i, j in self.edges)
        return "\n".join(out) + "\n"


def parse_graph(text: str) -> FiniteGraph:
    lines = [(i + 1, ln.split("#", 1)[0].split()) for i, ln in enumerate(text.splitlines())]
    lines = [(n, t) for n, t in lines if t]
    if not lines or lines[0][1][0] != "graph" or len(lines[0][1]) != 3:
        raise ParseError("expected header 'graph v e'", lines[0][0] if lines else 1)
    try:
        v, e = int(lines[0][1][1]), int(lines[0][1][2])
    except ValueError:
        raise ParseError("vertex and edge counts must be integers", lines[0][0]) from None
    body = lines[1:]
    if len(body) != e:
        raise ParseError(f"header announces {e} edges, found {len(body)}",
                         body[-1][0] if body else lines[0][0])
    edges = []
    for n, toks in body:
        if len(toks) != 2:
            raise ParseError("edge lines are 'i j'", n)
        try:
            i, j = int(toks[0]), int(toks[1])
        except ValueError:
            raise ParseError("edge endpoints must be integers", n) from None
        if not (0 <= i < v and 0 <= j < v):
            raise ParseError(f"edge ({i}, {j}) out of range 0..{v - 1}", n)
        edges.append((i, j))
    return FiniteGraph(v, edges)


def all_geodesics(graph: FiniteGraph, a: int, b: int, cap: int = 10000) -> list[tuple]:
    """All shortest a-b paths as vertex tuples, in lexicographic order."""
    da = graph.bfs(a)
    if da[b] < 0:
        raise ValueError(f"{a} and {b} lie in different components")
    adj = graph.adj
    # count first so an explosion fails before any enumeration
    count = {a: 1}

    def paths_to(x):
        c = count.get(x)
        if c is None:
            c = count[x] = sum(paths_to(y) for y in adj[x] if da[y] == da[x] - 1)
        return c

    if paths_to(b) > cap:
        raise GeodesicCapExceeded(
            f"{count[b]} geodesics between {a} and {b} exceed the cap of {cap}")
    out = []

    def rec(path):
        x = path[-1]
        if x == a:
            out.append(tuple(reversed(path)))
            return
        for y in adj[x]:
            if da[y] == da[x] - 1:
                path.append(y)
                rec(path)
                path.pop()

    rec([b])
    out.sort()
    return out


def first_geodesic(graph: FiniteGraph, a: int, b: int) -> tuple:
    """The lexicographically first shortest a-b path."""
    db = graph.bfs(b)
    if db[a] < 0:
        raise ValueError(f"{a} and {b} lie in different components")
    path = [a]
    while path[-1] != b:
        x = path[-1]
        path.append(next(y for y in graph.adj[x] if db[y] == db[x] - 1))
    return tuple(path)


@dataclass
class Bigon:
    ends: tuple
    sigma: tuple
    sigma2: tuple
    K: int            # symmetric Hausdorff distance, max of both one-sided ones
    Kprime: int       # max_t d(sigma(t), sigma2(t))


@dataclass
class ThinnessReport:
    radius: int
    mode: str
    endpoints_probed: int = 0
    bigons: int = 0
    bigon_K: int = 0
    pointwise_Kprime: int = 0
    forward_max: int = 0
    backward_max: int = 0
    kprime_violations: list = field(default_factory=list)
    triangle_delta: int | None = None
    triangles: int = 0
    seed: int | None = None
    exhaustive: bool = True
    witnesses: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        d = {k: getattr(self, k) for k in (
            "radius", "mode", "endpoints_probed", "bigons", "bigon_K", "pointwise_Kprime",
            "forward_max", "backward_max", "triangle_delta", "triangles", "seed",
            "exhaustive")}
        d["kprime_violations"] = len(self.kprime_violations)
        d["witnesses"] = {k: {kk: list(vv) if isinstance(vv, tuple) else vv
                              for kk, vv in w.items()}
                          for k, w in self.witnesses.items()}
        d["lower_bound_only"] = True
        return d

    def lines(self) -> list[str]:
        rows = [("radius", self.radius), ("mode", self.mode),
                ("endpoints probed", self.endpoints_probed)]
        if self.triangle_delta is None:
            rows += [("bigons", self.bigons), ("bigon K", self.bigon_K),
                     ("pointwise K'", self.pointwise_Kprime),
                     ("K' <= 2K violations", len(self.kprime_violations))]
        else:
            rows += [("triangles", self.triangles), ("delta", self.triangle_delta),
                     ("exhaustive", "yes" if self.exhaustive else "no"),
                     ("seed", self.seed)]
        width = max(len(k) for k, _ in rows)
        out = [f"{k:<{width}}  {v}" for k, v in rows]
        for name, w in self.witnesses.items():
            out.append(f"witness {name}: " + "; ".join(
                f"{k}={' '.join(map(str, v)) if isinstance(v, tuple) else v}"
                for k, v in w.items()))
        out.append("note: values are lower bounds measured on a finite graph")
        return out


def _endpoint_pairs(graph, basepoint, radius, mode):
    verts = graph.ball(basepoint, radius)
    if mode == "anchored":
        return [(basepoint, v) for v in verts if v != basepoint]
    if mode == "all":
        return list(combinations(verts, 2))
    raise ValueError(f"unknown mode {mode!r}")


def _bigon_stats(dist, s1, s2):
    fwd = max(min(dist(p, q) for q in s2) for p in s1)
    bwd = max(min(dist(p, q) for q in s1) for p in s2)
    kp = max(dist(p, q) for p, q in zip(s1, s2))
    return fwd, bwd, kp


def bigon_thinness(graph: FiniteGraph, basepoint: int, radius: int, cap: int = 10000,
                   mode: str = "all", dist=None) -> ThinnessReport:
    """Largest Hausdorff and synchronized distance between geodesics with
    common endpoints, over endpoint pairs within ``radius``.

    ``dist`` overrides the graph metric, e.g. with the word metric when
    the graph is a ball in a Cayley graph.
    """
    cache: dict = {}
    base = dist or graph.dist

    def d(p, q):
        if p == q:
            return 0
        key = (p, q) if p < q else (q, p)
        r = cache.get(key)
        if r is None:
            r = cache[key] = base(p, q)
        return r

    rep = ThinnessReport(radius, mode)
    best_k = best_kp = None
    for a, b in _endpoint_pairs(graph, basepoint, radius, mode):
        rep.endpoints_probed += 1
        geos = all_geodesics(graph, a, b, cap)
        for s1, s2 in combinations(geos, 2):
            rep.bigons += 1
            fwd, bwd, kp = _bigon_stats(d, s1, s2)
            k = max(fwd, bwd)
            # ordered pairs: (s1, s2) contributes fwd forwards, (s2, s1) bwd
            rep.forward_max = max(rep.forward_max, fwd, bwd)
            rep.backward_max = max(rep.backward_max, bwd, fwd)
            if kp > 2 * k:
                rep.kprime_violations.append(Bigon((a, b), s1, s2, k, kp))
            if best_k is None or k > best_k.K:
                best_k = Bigon((a, b), s1, s2, k, kp)
            if best_kp is None or kp > best_kp.Kprime:
                best_kp = Bigon((a, b), s1, s2, k, kp)
    if best_k is not None:
        rep.bigon_K = best_k.K
        rep.pointwise_Kprime = best_kp.Kprime
        for name, w in (("K", best_k), ("K'", best_kp)):
            rep.witnesses[name] = {"ends": w.ends, "sigma": w.sigma,
                                   "sigma'": w.sigma2, "K": w.K,
                                   "K'": w.Kprime}
    return rep


def triangle_thinness(graph: FiniteGraph, basepoint: int, radius: int, sample: int = 2000,
                      seed: int = 0, mode: str = "all", dist=None) -> ThinnessReport:
    """Largest distance from a point of one side of a geodesic triangle to
    the union of the other two sides.  Sides are lexicographically first
    geodesics.  When there are more than ``sample`` triples, a seeded
    random sample of that size is taken."""
    base = dist or graph.dist
    verts = graph.ball(basepoint, radius)
    if mode == "anchored":
        pool, k = [v for v in verts if v != basepoint], 2
    elif mode == "all":
        pool, k = verts, 3
    else:
        raise ValueError(f"unknown mode {mode!r}")
    total = comb(len(pool), k)
    rep = ThinnessReport(radius, mode, seed=seed, triangle_delta=0)
    rep.endpoints_probed = total
    if total <= sample:
        picks = list(combinations(pool, k))
    else:
        # draw distinct subsets without listing them all
        rng, seen = random.Random(seed), set()
        while len(seen) < sample:
            seen.add(tuple(sorted(rng.sample(pool, k))))
        picks = sorted(seen)
        rep.exhaustive = False
    triples = [(basepoint,) + p if k == 2 else p for p in picks]
    best = None
    for x, y, z in triples:
        sides = (first_geodesic(graph, x, y), first_geodesic(graph, y, z),
                 first_geodesic(graph, z, x))
        rep.triangles += 1
        for i in range(3):
            others = set(sides[(i + 1) % 3]) | set(sides[(i + 2) % 3])
            worst, at = -1, None
            for p in sides[i]:
                m = 0 if p in others else min(base(p, q) for q in others)
                if m > worst:
                    worst, at = m, p
            if best is None or worst > best[0]:
                best = (worst, (x, y, z), sides[i], at)
    if best is not None:
        rep.triangle_delta = best[0]
        rep.witnesses["delta"] = {"triangle": best[1], "side": best[2], "point": best[3],
                                  "delta": best[0]}
    return rep
