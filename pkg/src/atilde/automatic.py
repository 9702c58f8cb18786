"""Fellow travelling, multiplier automata and growth series for the
normal-form language of a triangle-presentation group."""
from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction

from .words import JOIN, Group

PAD = -1
ID = "e"         # the identity word difference
FAILED = "fail"


# Fellow traveller property -------------------------------------------------

@dataclass
class FellowReport:
    max_len: int
    pairs_checked: int = 0
    max_k: int = 0
    violations: list = field(default_factory=list)
    trace_mismatches: list = field(default_factory=list)
    nontrivial_witness: tuple | None = None   # (u, x, t, difference) with difference in Pi
    cases: Counter = field(default_factory=Counter)

    @property
    def ok(self) -> bool:
        return not self.violations and not self.trace_mismatches

    def as_dict(self) -> dict:
        return {
            "max_len": self.max_len,
            "pairs_checked": self.pairs_checked,
            "max_k": self.max_k,
            "violations": [list(map(_jsonable, v)) for v in self.violations],
            "trace_mismatches": [list(map(_jsonable, v)) for v in self.trace_mismatches],
            "nontrivial_witness": (None if self.nontrivial_witness is None
                                   else list(map(_jsonable, self.nontrivial_witness))),
            "cases": dict(sorted(self.cases.items())),
        }


def _jsonable(x):
    return list(x) if isinstance(x, tuple) else x


def _prefix_dist(G: Group, a: tuple, b: tuple) -> int:
    k = 0
    while k < min(len(a), len(b)) and a[k] == b[k]:
        k += 1
    u = G.inverse(a[k:])
    for x in b[k:]:
        u = G.mult(u, x)
    return len(u)


def fellow_traveller_check(G: Group, max_len: int, limit_witnesses: int = 10) -> FellowReport:
    """Check d(u(t), v(t)) <= 1 for all |u| <= max_len and all generators x.

    Two routes are compared: the word differences recorded by
    ``right_mult`` and distances recomputed from scratch.
    """
    rep = FellowReport(max_len)
    for u in G.words(max_len):
        for x in range(G.N):
            v, trace = G.right_mult(u, x)
            rep.pairs_checked += 1
            rep.cases[trace.case + (trace.final or "")] += 1
            for t in range(max(len(u), len(v)) + 1):
                d = _prefix_dist(G, u[:t], v[:t])
                rep.max_k = max(rep.max_k, d)
                diff = trace.difference(t)
                if d > 1 and len(rep.violations) < limit_witnesses:
                    rep.violations.append((u, x, t, d))
                if (d != (0 if diff is None else 1)
                        and len(rep.trace_mismatches) < limit_witnesses):
                    rep.trace_mismatches.append((u, x, t, diff, d))
                elif (diff is not None and len(u) >= 1 and t < len(u)
                        and rep.nontrivial_witness is None):
                    rep.nontrivial_witness = (u, x, t, diff)
    return rep


# Multiplier automata ------------------------------------------------------

class Multiplier:
    """Two-track automaton accepting (u, v) iff u, v are normal forms and
    v is the normal form of u * a_x.  With ``x=None`` it accepts the
    pairs (u, u).

    States are triples (difference, state of track u, state of track v);
    track states are ``"s0"``, the last letter read, or ``"end"`` once
    padding started.  Differences live in {e} and the generators; any
    transition leaving that set goes to the single failure state.
    """

    def __init__(self, G: Group, x: int | None):
        self.G = G
        self.x = x
        self.target = ID if x is None else x
        N = G.N
        self.letters = list(range(N)) + [PAD]
        self.alphabet = [(a, b) for a in self.letters for b in self.letters
                         if not (a == PAD and b == PAD)]
        self._diff: dict = {}
        self.start = (ID, "s0", "s0")
        self.delta: dict = {}
        self._build()

    def _difference(self, a, d, b):
        key = (a, d, b)
        if key not in self._diff:
            G = self.G
            word = []
            if a != PAD:
                word.append(G.lam[a])
            if d != ID:
                word.append(d)
            if b != PAD:
                word.append(b)
            nf = G.reduce(word)
            self._diff[key] = ID if not nf else (nf[0] if len(nf) == 1 else None)
        return self._diff[key]

    def _track(self, state, a):
        if a == PAD:
            return "end"
        if state == "end":
            return None
        if state != "s0" and self.G.rel[self.G.lam[state]][a] != JOIN:
            return None
        return a

    def step(self, state, sym):
        if state == FAILED:
            return FAILED
        d, su, sv = state
        a, b = sym
        nu, nv = self._track(su, a), self._track(sv, b)
        if nu is None or nv is None:
            return FAILED
        nd = self._difference(a, d, b)
        if nd is None:
            return FAILED
        return (nd, nu, nv)

    def _build(self):
        delta = {FAILED: {s: FAILED for s in self.alphabet}}
        queue = deque([self.start])
        seen = {self.start}
        while queue:
            st = queue.popleft()
            row = {}
            for sym in self.alphabet:
                nxt = self.step(st, sym)
                row[sym] = nxt
                if nxt != FAILED and nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
            delta[st] = row
        # Trim states that cannot reach acceptance into the failure state.
        accept = {s for s in seen if s[0] == self.target}
        back: dict = {}
        for s, row in delta.items():
            for nxt in row.values():
                back.setdefault(nxt, set()).add(s)
        live = set(accept)
        queue = deque(accept)
        while queue:
            s = queue.popleft()
            for p in back.get(s, ()):
                if p != FAILED and p not in live:
                    live.add(p)
                    queue.append(p)
        if self.start not in live:
            live.add(self.start)
        self.delta = {FAILED: delta[FAILED]}
        for s in live:
            self.delta[s] = {sym: (n if n in live else FAILED)
                             for sym, n in delta[s].items()}
        self.accept = frozenset(accept & live)
        self.states = [self.start] + sorted((s for s in live if s != self.start),
                                            key=_state_key) + [FAILED]

    @property
    def difference_states(self) -> set:
        return {s[0] for s in self.states if s != FAILED}

    def run(self, pairs):
        state = self.start
        for sym in pairs:
            state = self.delta[state].get(sym, FAILED)
            if state == FAILED:
                return FAILED
        return state

    def accepts_pair(self, u, v) -> bool:
        return self.run(pad_pair(u, v)) in self.accept

    def accepted_partners(self, u) -> list:
        """Every v with (u, v) accepted, found by exploring live states only
        (the failure state is absorbing, so pruning it loses nothing)."""
        out = []
        u = tuple(u)

        def rec(state, v, k, v_ended):
            if k >= len(u) and v_ended:
                if state in self.accept:
                    out.append(tuple(v))
                return
            if k >= len(u):
                # u exhausted; v continues over a padded u-track, or stops
                if state in self.accept:
                    out.append(tuple(v))
                for b in range(self.G.N):
                    nxt = self.delta[state][(PAD, b)]
                    if nxt != FAILED:
                        rec(nxt, v + [b], k + 1, False)
                return
            a = u[k]
            if not v_ended:
                for b in range(self.G.N):
                    nxt = self.delta[state][(a, b)]
                    if nxt != FAILED:
                        rec(nxt, v + [b], k + 1, False)
            nxt = self.delta[state][(a, PAD)]
            if nxt != FAILED:
                rec(nxt, v, k + 1, True)

        rec(self.start, [], 0, False)
        return sorted(set(out))

    def dumps(self) -> str:
        names = {s: i for i, s in enumerate(self.states)}
        out = [f"multiplier {'identity' if self.x is None else self.x}",
               f"states {len(self.states)}"]
        for s, i in names.items():
            out.append(f"state {i} {_state_label(s)}")
        out.append("start 0")
        out.append("accept " + " ".join(str(names[s]) for s in self.states
                                        if s in self.accept))
        out.append("transitions:")
        for s in self.states:
            if s == FAILED:
                continue
            for (a, b), nxt in self.delta[s].items():
                if nxt != FAILED:
                    out.append(f"{names[s]} {a} {b} {names[nxt]}")
        return "\n".join(out) + "\n"


def _state_key(s):
    return tuple((0, v) if isinstance(v, int) else (1, str(v)) for v in s)


def _state_label(s):
    if s == FAILED:
        return "fail"
    return ",".join(str(v) for v in s)


def pad_pair(u, v) -> list:
    n = max(len(u), len(v))
    uu = list(u) + [PAD] * (n - len(u))
    vv = list(v) + [PAD] * (n - len(v))
    return list(zip(uu, vv))


def build_multiplier(G: Group, x: int | None) -> Multiplier:
    return Multiplier(G, x)


# Growth series ------------------------------------------------------------

def _poly_trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_divmod(a, b):
    a = [Fraction(c) for c in a]
    b = _poly_trim([Fraction(c) for c in b])
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    a = _poly_trim(a)
    while len(a) >= len(b) and a:
        c = a[-1] / b[-1]
        k = len(a) - len(b)
        q[k] = c
        for i, bc in enumerate(b):
            a[k + i] -= c * bc
        a = _poly_trim(a)
    return _poly_trim(q), a


def poly_gcd(a, b):
    a, b = _poly_trim([Fraction(c) for c in a]), _poly_trim([Fraction(c) for c in b])
    while b:
        _, r = _poly_divmod(a, b)
        a, b = b, r
    return [c / a[-1] for c in a] if a else a


def charpoly(A) -> list[int]:
    """Coefficients c_0..c_N of det(zI - A) (Faddeev-LeVerrier, exact)."""
    N = len(A)
    coeffs = [0] * (N + 1)
    coeffs[N] = 1
    M = [[0] * N for _ in range(N)]
    for k in range(1, N + 1):
        # M <- A M + c_{N-k+1} I
        AM = [[sum(A[i][t] * M[t][j] for t in range(N) if A[i][t]) for j in range(N)]
              for i in range(N)]
        for i in range(N):
            AM[i][i] += coeffs[N - k + 1]
        M = AM
        AMk = [[sum(A[i][t] * M[t][j] for t in range(N) if A[i][t]) for j in range(N)]
               for i in range(N)]
        tr = sum(AMk[i][i] for i in range(N))
        if tr % k:
            raise ArithmeticError("non-integral characteristic coefficient")
        coeffs[N - k] = -tr // k
    return coeffs


def hankel_recurrence(seq, max_order):
    """Shortest recurrence b_k = sum_j c_j b_{k-j} holding for all k in
    [start, len(seq)), found as the kernel of a Hankel system; returns
    (start, [c_1, ..., c_d]).  Exact rational elimination."""
    for d in range(0, max_order + 1):
        for start in range(d, d + max_order + 2):
            rows = [[Fraction(seq[k - j]) for j in range(1, d + 1)] + [Fraction(seq[k])]
                    for k in range(start, len(seq))]
            if len(rows) < d + 2:
                break
            sol = _solve_consistent(rows, d)
            if sol is not None:
                return start, sol
    return None


def _solve_consistent(rows, d):
    m = [r[:] for r in rows]
    piv_cols = []
    r = 0
    for c in range(d):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        piv_cols.append(c)
        r += 1
    if any(row[d] != 0 for row in m[r:]):
        return None
    sol = [Fraction(0)] * d
    for i, c in enumerate(piv_cols):
        sol[c] = m[i][d]
    return sol


@dataclass
class GrowthSeries:
    coefficients: list[int]
    transfer: list[list[int]]
    numerator: list[Fraction]
    denominator: list[Fraction]
    recurrence: list[Fraction]          # b_k = sum_j recurrence[j-1] * b_{k-j}
    recurrence_start: int
    verified: bool

    def cumulative(self) -> list[int]:
        out, s = [], 0
        for b in self.coefficients:
            s += b
            out.append(s)
        return out


def series_of(num, den, terms):
    """Power series coefficients of num/den up to z^(terms-1); den[0] != 0."""
    out = []
    for k in range(terms):
        c = Fraction(num[k]) if k < len(num) else Fraction(0)
        for j in range(1, min(k, len(den) - 1) + 1):
            c -= den[j] * out[k - j]
        out.append(c / den[0])
    return out


def growth(G: Group, terms: int) -> GrowthSeries:
    """Sphere sizes b_0..b_terms and the rational generating function."""
    N, rel, lam = G.N, G.rel, G.lam
    A = [[1 if rel[lam[y]][x] == JOIN else 0 for x in range(N)] for y in range(N)]
    coeffs = [1]
    vec = [1] * N                      # words of length 1 ending in each letter
    for _ in range(terms):
        coeffs.append(sum(vec))
        vec = [sum(vec[y] for y in range(N) if A[y][x]) for x in range(N)]
    coeffs = coeffs[:terms + 1]

    chi = charpoly(A)                  # det(zI - A)
    Q = [Fraction(c) for c in reversed(chi)]      # det(I - zA)
    needed = 2 * N + 2
    long = G.sphere_sizes(needed) if terms < needed else coeffs
    P = []
    for k in range(N + 1):
        P.append(sum(Q[j] * long[k - j] for j in range(0, k + 1) if j < len(Q)))
    P = _poly_trim(P)
    g = poly_gcd(P, Q)
    if len(g) > 1:
        P, _ = _poly_divmod(P, g)
        Q, _ = _poly_divmod(Q, g)
    scale = Q[0]
    P = [c / scale for c in P]
    Q = [c / scale for c in Q]
    recurrence = [-c for c in Q[1:]]
    start = max(len(P), len(Q) - 1)
    check = series_of(P, Q, len(long))
    verified = all(Fraction(b) == c for b, c in zip(long, check))
    return GrowthSeries(coeffs, A, P, Q, recurrence, start, verified)
