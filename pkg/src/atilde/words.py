"""Normal forms and exact arithmetic in the group of a triangle presentation.

Group elements are represented by their normal forms: tuples of subspace
ids u_1 ... u_l with lambda(u_i) + u_{i+1} = V.  The generator indexed by
a subspace v is identified with v itself; its inverse is lambda(v).

Right multiplication by one generator is the only primitive.  Writing
a = lambda(u_l), there are five mutually exclusive relations between a
and the new letter x (equal, sum is V, a contains x, a is inside x,
neither), handled as follows:

* equal: the last letter cancels;
* sum is V: x is appended;
* a contains x: the last letter is replaced using the unique triple
  (u_l, x, lambda(w)) of dimension sum n+1;
* a inside x: the triple (u_l, x, lambda(w)) of dimension sum 2(n+1)
  turns u_l x into w, which is then pushed into u_1 ... u_{l-1};
* neither: with lambda(s) = a + x, triples (s, a, x') and
  (s, x, lambda(v)) rewrite u_l x as x' v; x' is pushed further left.

Pushing a letter c into a prefix repeats the last step ("cascade") until
the prefix is empty, c can be appended, or c replaces the prefix's last
letter.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Sequence

from .automata import word_acceptor
from .geometry import FULL_ID

EQ, JOIN, SUPER, SUB, OTHER = range(5)
_REL_NAMES = {EQ: "equal", JOIN: "sum is V", SUPER: "contains", SUB: "contained in",
              OTHER: "distinct nonincident"}

DEFAULT_BALL_CAP = int(os.environ.get("ATILDE_BALL_VERTEX_CAP", "2000000"))


class WordError(ValueError):
    pass


class CapExceeded(RuntimeError):
    pass


@dataclass
class Stage:
    """One step of a cascade: ``letter`` is pushed into a prefix of length
    ``prefix_len``.  For a rewriting step, ``s``, ``next_letter`` and
    ``emitted`` are the s, x' and v of the rewrite u x = x' v."""
    prefix_len: int
    letter: int
    relation: int
    s: int | None = None
    next_letter: int | None = None
    emitted: int | None = None


@dataclass
class RightMultTrace:
    case: str                                  # 1, 2, 3, 4a.., 5a..
    final: str | None = None                   # (4.1)..(4.4) for cascades
    cascade: int = 0                           # number of rewriting steps i
    stages: list = field(default_factory=list)
    triples: list = field(default_factory=list)
    named: dict = field(default_factory=dict)  # w, w', s, x', v1, v2 where defined
    differences: list = field(default_factory=list)  # u(t)^-1 v(t); None = identity

    def difference(self, t: int):
        if t < len(self.differences):
            return self.differences[t]
        return self.differences[-1]


class Group:
    """The group presented by a triangle presentation, via normal forms."""

    def __init__(self, tp):
        self.tp = tp
        self.geometry = g = tp.geometry
        self.lam = lam = tp.lam
        self.N = N = len(g)
        join, leq = g.join_table(), g.leq_table()
        self.rel = [[0] * N for _ in range(N)]
        self.sdual = [[-1] * N for _ in range(N)]
        for a in range(N):
            for x in range(N):
                if a == x:
                    r = EQ
                elif join[a][x] == FULL_ID:
                    r = JOIN
                elif leq[x][a]:
                    r = SUPER
                elif leq[a][x]:
                    r = SUB
                else:
                    r = OTHER
                    self.sdual[a][x] = lam[join[a][x]]
                self.rel[a][x] = r
        self.third = [[-1] * N for _ in range(N)]
        for u, v, w in tp.triples:
            self.third[u][v] = w
        self.acceptor = word_acceptor(tp)
        self.check_triples = False

    # Language --------------------------------------------------------------

    def relation(self, a: int, x: int) -> int:
        return self.rel[a][x]

    def _check_letters(self, word):
        for a in word:
            if not isinstance(a, int) or not 0 <= a < self.N:
                raise WordError(f"{a!r} is not a generator id")

    def accepts(self, word: Sequence[int]) -> bool:
        self._check_letters(word)
        rel, lam = self.rel, self.lam
        return all(rel[lam[a]][b] == JOIN for a, b in zip(word, word[1:]))

    def check_normal(self, u: Sequence[int]) -> tuple:
        u = tuple(u)
        if not self.accepts(u):
            raise WordError(f"{list(u)} is not in normal form")
        return u

    # Right multiplication -------------------------------------------------

    def _t(self, u, v, trace):
        w = self.third[u][v]
        if w < 0:
            raise AssertionError(f"no triple starting ({u}, {v}); presentation invalid")
        if trace is not None:
            trace.triples.append((u, v, w))
        return w

    def _push(self, u, p, c, trace):
        """Push letter c into the prefix u[:p].

        Returns ``(head, emitted, stages, terminal)`` where the normal form
        is head + reversed(emitted).
        """
        rel, lam, sdual = self.rel, self.lam, self.sdual
        emitted = []
        stages = []
        while True:
            if p == 0:
                stages.append(Stage(0, c, JOIN))
                return (c,), emitted, stages, "append"
            last = u[p - 1]
            r = rel[lam[last]][c]
            if r == JOIN:
                stages.append(Stage(p, c, r))
                return u[:p] + (c,), emitted, stages, "append"
            if r == SUPER:
                stages.append(Stage(p, c, r))
                w = lam[self._t(last, c, trace)]
                return u[:p - 1] + (w,), emitted, stages, "replace"
            if r != OTHER:
                raise AssertionError(
                    f"cascade met relation '{_REL_NAMES[r]}' between"
                    f" lambda({last}) and {c}; excluded for normal-form input")
            s = sdual[lam[last]][c]
            x1 = self._t(s, lam[last], trace)
            v = lam[self._t(s, c, trace)]
            stages.append(Stage(p, c, r, s, x1, v))
            emitted.append(v)
            c = x1
            p -= 1
            if len(emitted) > len(u):
                raise AssertionError("cascade longer than the prefix")

    def _mult(self, u: tuple, x: int, record: bool):
        trace = RightMultTrace(case="") if record else None
        l = len(u)
        if l == 0:
            result = (x,)
            if record:
                trace.case = "1"
                trace.differences = [None, x]
            return result, trace
        lam = self.lam
        r = self.rel[lam[u[-1]]][x]
        if r == EQ:
            result = u[:-1]
            if record:
                trace.case = "2"
                trace.differences = [None] * l + [x]
            return result, trace
        if r == SUB:
            w = lam[self._t(u[-1], x, trace)]
            p0, c0 = l - 1, w
        else:
            p0, c0 = l, x
        head, emitted, stages, terminal = self._push(u, p0, c0, trace)
        result = head + tuple(reversed(emitted))
        if record:
            self._annotate(trace, u, x, r, p0, stages, terminal, result)
        return result, trace

    def _annotate(self, trace, u, x, r, p0, stages, terminal, result):
        lam = self.lam
        i = len(stages) - 1
        trace.stages = stages
        trace.cascade = i
        first = stages[0]
        if r == JOIN:
            trace.case = "1"
        elif r == SUPER:
            trace.case = "3"
            trace.named["w"] = result[-1]
        elif r == SUB:
            w = stages[0].letter
            trace.named["w"] = w
            sub = {JOIN: "a", SUPER: "b", OTHER: "c"}[first.relation]
            trace.case = "4" + sub
            trace.final = "(4.3)" if terminal == "append" else "(4.4)"
            if sub == "b":
                trace.named["w'"] = result[p0 - 1]
            elif sub == "c":
                trace.named["s'"] = first.s
                trace.named["w'"] = first.next_letter
                trace.named["v1"] = first.emitted
        else:
            second = stages[1]
            sub = {JOIN: "a", SUPER: "b", OTHER: "c"}[second.relation]
            trace.case = "5" + sub
            trace.final = "(4.1)" if terminal == "append" else "(4.2)"
            trace.named.update({"s": first.s, "x'": first.next_letter,
                                "v2": first.emitted})
            if sub == "b":
                trace.named["w'"] = result[second.prefix_len - 1]
            elif sub == "c":
                trace.named["s'"] = second.s
                trace.named["x''"] = second.next_letter
                trace.named["v1"] = second.emitted
        # Word differences d(t) = u(t)^-1 v(t), read off the cascade.
        top = max(len(u), len(result))
        diffs: list = [None] * (top + 1)
        diffs[top] = x
        if terminal == "append":
            for st in stages[:-1]:
                diffs[st.prefix_len] = lam[st.s]
        else:
            for st in stages:
                diffs[st.prefix_len] = st.letter
        for t in range(p0 + 1, top + 1):
            diffs[t] = x
        trace.differences = diffs

    def right_mult(self, u: Sequence[int], x: int):
        """Normal form of u * a_x together with its trace."""
        u = self.check_normal(u)
        self._check_letters((x,))
        result, trace = self._mult(u, x, True)
        if self.check_triples:
            for t in trace.triples:
                assert t in self.tp.triples
        return result, trace

    def mult(self, u: tuple, x: int) -> tuple:
        """Unchecked fast path of right_mult for trusted normal forms."""
        return self._mult(u, x, False)[0]

    # Derived operations ----------------------------------------------------

    def reduce(self, word: Sequence[int]) -> tuple:
        self._check_letters(word)
        u: tuple = ()
        for x in word:
            u = self._mult(u, x, False)[0]
        return u

    def multiply(self, g: Sequence[int], h: Sequence[int]) -> tuple:
        u = self.check_normal(g)
        self._check_letters(h)
        for x in h:
            u = self._mult(u, x, False)[0]
        return u

    def inverse(self, u: Sequence[int]) -> tuple:
        lam = self.lam
        return tuple(lam[a] for a in reversed(u))

    def dist(self, g: Sequence[int], h: Sequence[int]) -> int:
        g = self.check_normal(g)
        h = self.check_normal(h)
        k = 0
        while k < min(len(g), len(h)) and g[k] == h[k]:
            k += 1
        u = self.inverse(g[k:])
        for x in h[k:]:
            u = self._mult(u, x, False)[0]
        return len(u)

    def sphere_sizes(self, radius: int) -> list[int]:
        counts = [1]
        state = {None: 1}
        rel, lam, N = self.rel, self.lam, self.N
        for _ in range(radius):
            nxt: dict = {}
            for last, c in state.items():
                for y in range(N):
                    if last is None or rel[lam[last]][y] == JOIN:
                        nxt[y] = nxt.get(y, 0) + c
            state = nxt
            counts.append(sum(nxt.values()))
        return counts

    def words(self, radius: int):
        """All normal forms of length <= radius, length-lexicographically."""
        rel, lam, N = self.rel, self.lam, self.N
        level = [()]
        out = [()]
        for _ in range(radius):
            nxt = []
            for u in level:
                if not u:
                    nxt.extend((y,) for y in range(N))
                else:
                    a = lam[u[-1]]
                    nxt.extend(u + (y,) for y in range(N) if rel[a][y] == JOIN)
            out.extend(nxt)
            level = nxt
        return out

    def ball(self, radius: int, cap: int | None = None) -> "Ball":
        if radius < 0:
            raise WordError("radius must be >= 0")
        cap = DEFAULT_BALL_CAP if cap is None else cap
        total = sum(self.sphere_sizes(radius))
        if total > cap:
            raise CapExceeded(f"ball of radius {radius} has {total} vertices; cap is {cap}")
        verts = self.words(radius)
        index = {w: i for i, w in enumerate(verts)}
        edges = set()
        for i, w in enumerate(verts):
            for x in range(self.N):
                j = index.get(self._mult(w, x, False)[0])
                if j is not None:
                    edges.add((i, j) if i < j else (j, i))
        return Ball(self, radius, verts, index, sorted(edges))


@dataclass
class Ball:
    group: Group
    radius: int
    vertices: list
    index: dict
    edges: list

    def graph(self):
        from .probe import FiniteGraph
        return FiniteGraph(len(self.vertices), self.edges,
                           labels=[" ".join(map(str, w)) for w in self.vertices])

    def dumps(self) -> str:
        lines = [f"graph {len(self.vertices)} {len(self.edges)}"]
        lines.extend(f"{i} {j}" for i, j in self.edges)
        return "\n".join(lines) + "\n"
