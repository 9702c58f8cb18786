"""Word hyperbolicity of Coxeter systems by Moussong's criterion.

A Coxeter group is word hyperbolic iff it contains no affine
sub-Coxeter system of rank >= 3 and no pair of disjoint, commuting
sub-Coxeter systems whose groups are both infinite.

Subsystems are classified with the cosine matrix
B_st = -cos(pi / m_st) (B_ss = 1, and -1 when m_st is infinite).
All arithmetic is exact in Q(2cos(pi/M)) where M is the lcm of the
finite entries; see :mod:`atilde.numfield`.

In matrix files and in :class:`CoxeterMatrix`, 0 stands for infinity.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import cached_property

from .geometry import ParseError
from .numfield import CosineField, lcm_all

INF = 0
FINITE, AFFINE, INDEFINITE = "finite", "affine", "indefinite"
RANK_CAP = int(os.environ.get("ATILDE_COXETER_RANK_CAP", "14"))


class CoxeterError(ValueError):
    pass


class RankCapExceeded(RuntimeError):
    pass


class CoxeterMatrix:
    def __init__(self, m):
        self.m = tuple(tuple(int(x) for x in row) for row in m)
        r = self.rank = len(self.m)
        for i, row in enumerate(self.m):
            if len(row) != r:
                raise CoxeterError(f"row {i} has {len(row)} entries, expected {r}")
            for j, x in enumerate(row):
                if i == j and x != 1:
                    raise CoxeterError(f"diagonal entry ({i},{i}) must be 1, got {x}")
                if i != j:
                    if x != self.m[j][i]:
                        raise CoxeterError(f"entries ({i},{j}) and ({j},{i}) differ")
                    if x != INF and x < 2:
                        raise CoxeterError(f"entry ({i},{j}) = {x}; need >= 2 or 0 for infinity")

    @classmethod
    def triangle(cls, p, q, r):
        """Rank 3 with m_01 = p, m_12 = q, m_02 = r."""
        return cls([[1, p, r], [p, 1, q], [r, q, 1]])

    def __eq__(self, other):
        return isinstance(other, CoxeterMatrix) and self.m == other.m

    def __hash__(self):
        return hash(self.m)

    def __repr__(self):
        return f"CoxeterMatrix({[list(r) for r in self.m]})"

    @cached_property
    def field(self) -> CosineField:
        finite = [x for row in self.m for x in row if x not in (INF, 1)]
        return CosineField(lcm_all(finite) if finite else 1)

    @cached_property
    def cosine(self):
        F = self.field
        return [[F.one if i == j else F.neg(F.cos_pi_over(x))
                 for j, x in enumerate(row)] for i, row in enumerate(self.m)]

    def commute(self, i, j) -> bool:
        return self.m[i][j] == 2

    def components(self, subset) -> list[tuple]:
        """Connected components of the diagram on ``subset`` (edges m != 2)."""
        left = sorted(subset)
        seen, out = set(), []
        for s in left:
            if s in seen:
                continue
            comp, stack = [], [s]
            seen.add(s)
            while stack:
                a = stack.pop()
                comp.append(a)
                for b in left:
                    if b not in seen and not self.commute(a, b):
                        seen.add(b)
                        stack.append(b)
            out.append(tuple(sorted(comp)))
        return out

    def connected_order(self, subset) -> tuple:
        """Breadth-first order of a connected subset: every prefix is connected."""
        subset = sorted(subset)
        order, seen = [subset[0]], {subset[0]}
        i = 0
        while i < len(order):
            a = order[i]
            i += 1
            for b in subset:
                if b not in seen and not self.commute(a, b):
                    seen.add(b)
                    order.append(b)
        return tuple(order)


def parse_matrix(text: str) -> CoxeterMatrix:
    lines = [(i + 1, ln.split("#", 1)[0].split()) for i, ln in enumerate(text.splitlines())]
    lines = [(n, t) for n, t in lines if t]
    if not lines or lines[0][1][0] != "coxeter" or len(lines[0][1]) != 2:
        raise ParseError("expected header 'coxeter r'", lines[0][0] if lines else 1)
    try:
        r = int(lines[0][1][1])
    except ValueError:
        raise ParseError("rank must be an integer", lines[0][0]) from None
    rows = lines[1:]
    if len(rows) != r:
        raise ParseError(f"expected {r} matrix rows, found {len(rows)}",
                         rows[-1][0] if rows else lines[0][0])
    m = []
    for n, toks in rows:
        try:
            m.append([int(t) for t in toks])
        except ValueError:
            raise ParseError("matrix entries must be integers", n) from None
        if len(toks) != r:
            raise ParseError(f"expected {r} entries, found {len(toks)}", n)
    try:
        return CoxeterMatrix(m)
    except CoxeterError as e:
        raise ParseError(str(e), rows[0][0]) from None


def format_matrix(cm: CoxeterMatrix) -> str:
    out = [f"coxeter {cm.rank}"]
    out.extend(" ".join(str(x) for x in row) for row in cm.m)
    return "\n".join(out) + "\n"


# Classification -------------------------------------------------------------

@dataclass
class SubsystemVerdict:
    subset: tuple
    classification: str
    components: list = field(default_factory=list)   # (component, classification)
    minor_signs: dict = field(default_factory=dict)  # component -> leading minor signs
    kernel: dict = field(default_factory=dict)       # affine component -> kernel vector (floats)

    @property
    def infinite(self) -> bool:
        return self.classification != FINITE

    @property
    def connected(self) -> bool:
        return len(self.components) == 1

    def as_dict(self) -> dict:
        return {
            "subset": list(self.subset),
            "classification": self.classification,
            "components": [[list(c), k] for c, k in self.components],
            "minor_signs": {" ".join(map(str, c)): s for c, s in self.minor_signs.items()},
            "kernel": {" ".join(map(str, c)): [round(v, 12) for v in k]
                       for c, k in self.kernel.items()},
        }


def _det(F, rows):
    """Exact determinant by Gaussian elimination over the field."""
    a = [list(r) for r in rows]
    n = len(a)
    det = F.one
    for c in range(n):
        p = next((i for i in range(c, n) if not F.is_zero(a[i][c])), None)
        if p is None:
            return F.zero
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = F.neg(det)
        det = F.mul(det, a[c][c])
        inv = F.inv(a[c][c])
        for i in range(c + 1, n):
            if not F.is_zero(a[i][c]):
                f = F.mul(a[i][c], inv)
                a[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(a[i], a[c])]
    return det


def _kernel(F, rows):
    """A nonzero kernel vector of a corank-1 matrix."""
    a = [list(r) for r in rows]
    n = len(a)
    pivots, r = [], 0
    for c in range(n):
        p = next((i for i in range(r, n) if not F.is_zero(a[i][c])), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = F.inv(a[r][c])
        a[r] = [F.mul(inv, x) for x in a[r]]
        for i in range(n):
            if i != r and not F.is_zero(a[i][c]):
                f = a[i][c]
                a[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    free = next(c for c in range(n) if c not in pivots)
    v = [F.zero] * n
    v[free] = F.one
    for i, c in enumerate(pivots):
        v[c] = F.neg(a[i][free])
    return v


class Classifier:
    """Memoized classification of the subsystems of one Coxeter matrix."""

    def __init__(self, cm: CoxeterMatrix):
        self.cm = cm
        self.F = cm.field
        self._conn: dict = {}

    def minor(self, order) -> int:
        B = self.cm.cosine
        return self.F.sign(_det(self.F, [[B[i][j] for j in order] for i in order]))

    def connected_class(self, comp: tuple):
        """Classification of a connected subset and its leading minor signs."""
        comp = tuple(sorted(comp))
        if comp in self._conn:
            return self._conn[comp]
        order = self.cm.connected_order(comp)
        if len(order) == 1:
            res = (FINITE, [1])
        else:
            head_cls, head_signs = self.connected_class(order[:-1])
            sign = self.minor(order)
            signs = head_signs + [sign]
            if head_cls != FINITE:
                res = (INDEFINITE, signs)
            elif sign > 0:
                res = (FINITE, signs)
            elif sign == 0:
                res = (AFFINE, signs)
            else:
                res = (INDEFINITE, signs)
        self._conn[comp] = res
        return res

    def classify(self, subset) -> SubsystemVerdict:
        subset = tuple(sorted(set(subset)))
        if not subset:
            raise CoxeterError("subset must be nonempty")
        if not all(0 <= s < self.cm.rank for s in subset):
            raise CoxeterError(f"subset {subset} out of range")
        comps = self.cm.components(subset)
        verdict = SubsystemVerdict(subset, FINITE)
        kinds = []
        for c in comps:
            k, signs = self.connected_class(c)
            kinds.append(k)
            verdict.components.append((c, k))
            verdict.minor_signs[c] = signs
            if k == AFFINE:
                B = self.cm.cosine
                kv = _kernel(self.F, [[B[i][j] for j in c] for i in c])
                verdict.kernel[c] = [self.F.to_float(x) for x in kv]
        if INDEFINITE in kinds:
            verdict.classification = INDEFINITE
        elif AFFINE in kinds:
            verdict.classification = AFFINE
        return verdict


def classify_subsystem(cm: CoxeterMatrix, subset) -> SubsystemVerdict:
    return Classifier(cm).classify(subset)


@dataclass
class HyperbolicityVerdict:
    hyperbolic: bool
    reason: str                                  # "affine", "commuting", or "none"
    witness: list = field(default_factory=list)  # SubsystemVerdicts
    subsets_scanned: int = 0

    @property
    def label(self) -> str:
        return "HYPERBOLIC" if self.hyperbolic else "NOT-HYPERBOLIC"

    def as_dict(self) -> dict:
        return {"verdict": self.label, "reason": self.reason,
                "witness": [w.as_dict() for w in self.witness],
                "subsets_scanned": self.subsets_scanned}

    def lines(self) -> list[str]:
        out = [f"verdict: {self.label}"]
        if self.reason == "affine":
            w = self.witness[0]
            out.append(f"certificate: affine subsystem {list(w.subset)} of rank {len(w.subset)}")
        elif self.reason == "commuting":
            a, b = self.witness
            out.append(f"certificate: commuting infinite subsystems {list(a.subset)}"
                       f" ({a.classification}) and {list(b.subset)} ({b.classification})")
        else:
            out.append(f"certificate: none of {self.subsets_scanned} connected subsets"
                       " is affine of rank >= 3 and no commuting infinite pair exists")
        for w in self.witness:
            for c, signs in w.minor_signs.items():
                out.append(f"  minors {list(c)}: " + " ".join("+0-"[1 - s] for s in signs))
            for c, k in w.kernel.items():
                out.append(f"  kernel {list(c)}: " + " ".join(f"{v:.6f}" for v in k))
        return out


def _subsets(r):
    for mask in range(1, 1 << r):
        yield tuple(i for i in range(r) if mask >> i & 1)


def is_word_hyperbolic(cm: CoxeterMatrix, rank_cap: int | None = None) -> HyperbolicityVerdict:
    cap = RANK_CAP if rank_cap is None else rank_cap
    if cm.rank > cap:
        raise RankCapExceeded(f"rank {cm.rank} exceeds the cap of {cap}")
    C = Classifier(cm)
    r = cm.rank
    connected = [s for s in _subsets(r) if len(cm.components(s)) == 1]
    # Clause (i): a connected affine subsystem of rank >= 3.
    for s in sorted(connected, key=lambda s: (len(s), s)):
        if len(s) >= 3 and C.connected_class(s)[0] == AFFINE:
            return HyperbolicityVerdict(False, "affine", [C.classify(s)], len(connected))
    # Clause (ii): disjoint commuting subsystems, both infinite.  If A is
    # infinite, one of its components is, so connected A suffices; B can
    # be taken as everything commuting with A.
    for a in sorted(connected, key=lambda s: (len(s), s)):
        if C.connected_class(a)[0] == FINITE:
            continue
        rest = tuple(b for b in range(r)
                     if b not in a and all(cm.commute(b, x) for x in a))
        if not rest:
            continue
        vb = C.classify(rest)
        if vb.infinite:
            comp = next(c for c, k in vb.components if k != FINITE)
            return HyperbolicityVerdict(False, "commuting", [C.classify(a), C.classify(comp)],
                                        len(connected))
    return HyperbolicityVerdict(True, "none", [], len(connected))
