"""The projective geometry of nontrivial proper subspaces of GF(q)^(n+1).

Every subspace is stored by its reduced row echelon basis, which makes
equality a tuple comparison and gives each subspace a stable integer id:
ids run through dimensions 1..n in turn, and within a dimension follow the
lexicographic order of the flattened echelon matrices.

The whole space V is not a member of the geometry.  Operations that would
produce it return the ``FULL`` sentinel instead.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import NamedTuple, Sequence

from .field import GF, FieldError, FieldSpec


class GeometryError(ValueError):
    pass


class ParseError(ValueError):
    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class _Full:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "FULL"

    def __reduce__(self):
        return (_Full, ())


FULL = _Full()
FULL_ID = -1


@dataclass(frozen=True)
class Subspace:
    geometry_key: tuple
    dim: int
    basis: tuple[tuple[int, ...], ...]
    id: int

    def __repr__(self):
        return f"Subspace(id={self.id}, dim={self.dim}, basis={self.basis})"


class Incidence(NamedTuple):
    """Result of an incidence test; truthy iff the two are incident."""
    incident: bool
    proper_sub: bool      # x strictly inside y
    proper_super: bool    # x strictly contains y

    def __bool__(self):
        return self.incident


def rref(rows: Sequence[Sequence[int]], gf: GF) -> tuple[tuple[int, ...], ...]:
    """Reduced row echelon form over ``gf`` with zero rows dropped."""
    m = [list(r) for r in rows]
    if not m:
        return ()
    ncols = len(m[0])
    add, mul, neg, inv = gf.add, gf.mul, gf.neg, gf.inv
    lead = 0
    for col in range(ncols):
        pivot = next((r for r in range(lead, len(m)) if m[r][col]), None)
        if pivot is None:
            continue
        m[lead], m[pivot] = m[pivot], m[lead]
        s = inv[m[lead][col]]
        m[lead] = [mul[s][a] for a in m[lead]]
        for r in range(len(m)):
            if r != lead and m[r][col]:
                f = neg[m[r][col]]
                m[r] = [add[a][mul[f][b]] for a, b in zip(m[r], m[lead])]
        lead += 1
        if lead == len(m):
            break
    return tuple(tuple(r) for r in m[:lead])


def _echelon_matrices(dim: int, ncols: int, q: int):
    for pivots in combinations(range(ncols), dim):
        free_slots = [(r, c) for r, pc in enumerate(pivots)
                      for c in range(pc + 1, ncols) if c not in pivots]
        for values in product(range(q), repeat=len(free_slots)):
            m = [[0] * ncols for _ in range(dim)]
            for r, pc in enumerate(pivots):
                m[r][pc] = 1
            for (r, c), v in zip(free_slots, values):
                m[r][c] = v
            yield tuple(tuple(row) for row in m)


class Geometry:
    """Pi(V) for V = GF(q)^(n+1), enumerated in canonical id order."""

    def __init__(self, n: int, field: FieldSpec | int):
        if n < 2:
            raise GeometryError(f"dimension n must be >= 2, got {n}")
        if isinstance(field, int):
            field = FieldSpec.of_order(field)
        self.n = n
        self.field = field
        self.q = field.q
        self.gf = GF(field)
        self.key = (n, field.p, field.e, field.modulus)
        self.subspaces: list[Subspace] = []
        self._by_basis: dict[tuple, Subspace] = {}
        for d in range(1, n + 1):
            for basis in sorted(_echelon_matrices(d, n + 1, self.q)):
                s = Subspace(self.key, d, basis, len(self.subspaces))
                self.subspaces.append(s)
                self._by_basis[basis] = s
        self.dims = [s.dim for s in self.subspaces]
        self._join = None
        self._leq = None

    def __len__(self):
        return len(self.subspaces)

    def __getitem__(self, i: int) -> Subspace:
        return self.subspaces[i]

    def __iter__(self):
        return iter(self.subspaces)

    def __repr__(self):
        return f"Geometry(n={self.n}, q={self.q})"

    def of_dim(self, d: int) -> list[Subspace]:
        return [s for s in self.subspaces if s.dim == d]

    def _check(self, *xs):
        for x in xs:
            if x is FULL:
                raise GeometryError("FULL is not an element of the geometry")
            if not isinstance(x, Subspace):
                raise GeometryError(f"not a subspace: {x!r}")
            if x.geometry_key != self.key:
                raise GeometryError(
                    f"subspace from geometry {x.geometry_key} used with {self.key}")

    def span(self, rows):
        """Canonical subspace spanned by ``rows``; None for the zero space."""
        basis = rref(rows, self.gf)
        if not basis:
            return None
        if len(basis) == self.n + 1:
            return FULL
        return self._by_basis[basis]

    def lookup(self, basis) -> Subspace:
        basis = tuple(tuple(r) for r in basis)
        if basis not in self._by_basis:
            raise GeometryError(f"{basis} is not a canonical basis")
        return self._by_basis[basis]

    def sum(self, x: Subspace, y: Subspace):
        self._check(x, y)
        return self.span(x.basis + y.basis)

    def incident(self, x: Subspace, y: Subspace) -> Incidence:
        self._check(x, y)
        if x.id == y.id:
            return Incidence(True, False, False)
        s = self.span(x.basis + y.basis)
        if s is y:
            return Incidence(True, True, False)
        if s is x:
            return Incidence(True, False, True)
        return Incidence(False, False, False)

    def prime_sum(self, x: Subspace, y: Subspace):
        """x +' y: the sum when x, y are distinct and nonincident, else None."""
        if self.incident(x, y):
            return None
        return self.sum(x, y)

    def perp(self, x: Subspace) -> Subspace:
        """Orthogonal complement under the standard dot product."""
        self._check(x)
        gf, width = self.gf, self.n + 1
        pivots = [next(c for c, a in enumerate(row) if a) for row in x.basis]
        vectors = []
        for f in range(width):
            if f in pivots:
                continue
            v = [0] * width
            v[f] = 1
            for row, pc in zip(x.basis, pivots):
                v[pc] = gf.neg[row[f]]
            vectors.append(v)
        return self.span(vectors)

    # Id-level tables used by the word machinery.

    def join_table(self) -> list[list[int]]:
        """``join[i][j]`` is the id of x_i + x_j, or FULL_ID."""
        if self._join is None:
            N = len(self)
            join = [[0] * N for _ in range(N)]
            for i in range(N):
                for j in range(i, N):
                    s = self.span(self[i].basis + self[j].basis)
                    join[i][j] = join[j][i] = FULL_ID if s is FULL else s.id
            self._join = join
        return self._join

    def leq_table(self) -> list[list[bool]]:
        """``leq[i][j]`` iff x_i is contained in x_j."""
        if self._leq is None:
            join = self.join_table()
            N = len(self)
            self._leq = [[join[i][j] == j for j in range(N)] for i in range(N)]
        return self._leq


@dataclass(frozen=True)
class Correlation:
    """A dimension-reversing involution of the geometry.

    Triangle presentations only need these two properties.  Inclusion
    reversal (a genuine polarity, such as the perp map) is reported by
    ``is_inclusion_reversing`` but not required: for n = 2 a polarity
    always has absolute points, and those rule out every presentation.
    """
    geometry_key: tuple
    map: tuple[int, ...]

    def __call__(self, x):
        if isinstance(x, Subspace):
            if x.geometry_key != self.geometry_key:
                raise GeometryError("correlation applied to a foreign subspace")
            return self.map[x.id]
        return self.map[x]

    def image(self, geometry: Geometry, x: Subspace) -> Subspace:
        return geometry[self(x)]

    def violations(self, geometry: Geometry, order: bool = False):
        """Yield ``(kind, i, j)`` for every broken invariant.

        With ``order=True`` inclusion reversal is checked as well.
        """
        n, N = geometry.n, len(geometry)
        if len(self.map) != N:
            yield ("size", len(self.map), N)
            return
        for i, j in enumerate(self.map):
            if not 0 <= j < N:
                yield ("range", i, j)
                return
        for i, j in enumerate(self.map):
            if self.map[j] != i:
                yield ("involution", i, j)
            if geometry.dims[j] != n + 1 - geometry.dims[i]:
                yield ("dimension", i, j)
        if order:
            leq = geometry.leq_table()
            for i in range(N):
                for j in range(N):
                    if leq[i][j] and not leq[self.map[j]][self.map[i]]:
                        yield ("order", i, j)

    def check(self, geometry: Geometry) -> None:
        for kind, i, j in self.violations(geometry):
            raise GeometryError(f"lambda fails the {kind} check at pair ({i}, {j})")

    def is_inclusion_reversing(self, geometry: Geometry) -> bool:
        return next(self.violations(geometry, order=True), None) is None


def perp_correlation(geometry: Geometry) -> Correlation:
    return Correlation(geometry.key, tuple(geometry.perp(s).id for s in geometry))


# Text format -------------------------------------------------------------

def tokenize(text: str):
    """Yield ``(lineno, tokens)`` with comments and blank lines removed."""
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def _ints(tokens, lineno):
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(f"expected integers, got {' '.join(tokens)!r}", lineno) from None


def parse_geometry_block(lines):
    """Consume a geometry header from tokenized ``lines``.

    Returns ``(geometry, correlation, rest)`` where ``rest`` holds the
    unconsumed ``(lineno, tokens)`` pairs.
    """
    lines = list(lines)
    if not lines or lines[0][1][0] != "geometry":
        raise ParseError("expected 'geometry n q' header",
                         lines[0][0] if lines else 1)
    lineno, toks = lines[0]
    if len(toks) != 3:
        raise ParseError("expected 'geometry n q'", lineno)
    n, q = _ints(toks[1:], lineno)
    pos = 1
    modulus = None
    if pos < len(lines) and lines[pos][1][0] == "modulus":
        modulus = _ints(lines[pos][1][1:], lines[pos][0])
        pos += 1
    try:
        field = FieldSpec.of_order(q, modulus)
        geometry = Geometry(n, field)
    except (FieldError, GeometryError) as exc:
        raise ParseError(str(exc), lineno) from None

    correlation = None
    if pos < len(lines) and lines[pos][1][0] == "lambda":
        lineno, toks = lines[pos]
        pos += 1
        if toks[1:] == ["perp"]:
            correlation = perp_correlation(geometry)
        elif toks[1:] == ["perm"]:
            mapping: dict[int, int] = {}
            while pos < len(lines) and lines[pos][1][0].lstrip("-").isdigit():
                ln, pair = lines[pos]
                if len(pair) != 2:
                    raise ParseError("expected 'i j' lambda pair", ln)
                i, j = _ints(pair, ln)
                for a, b in ((i, j), (j, i)):
                    if not 0 <= a < len(geometry):
                        raise ParseError(f"lambda id {a} out of range", ln)
                    if mapping.get(a, b) != b:
                        raise ParseError(
                            f"lambda fails the involution check at pair ({a}, {b}):"
                            f" {a} already maps to {mapping[a]}", ln)
                    mapping[a] = b
                pos += 1
            missing = [i for i in range(len(geometry)) if i not in mapping]
            if missing:
                raise ParseError(f"lambda leaves id {missing[0]} unmapped", lineno)
            correlation = Correlation(geometry.key,
                                      tuple(mapping[i] for i in range(len(geometry))))
            try:
                correlation.check(geometry)
            except GeometryError as exc:
                raise ParseError(str(exc), lineno) from None
        else:
            raise ParseError("expected 'lambda perp' or 'lambda perm'", lineno)

    if pos < len(lines) and lines[pos][1][0] == "subspaces:":
        pos += 1
        while pos < len(lines) and lines[pos][1][0].isdigit():
            ln, toks = lines[pos]
            _check_listing(geometry, toks, ln)
            pos += 1
    if correlation is None:
        correlation = perp_correlation(geometry)
    return geometry, correlation, lines[pos:]


def _check_listing(geometry: Geometry, toks, lineno):
    if ":" not in toks:
        raise ParseError("expected 'id dim : row | row ...'", lineno)
    sep = toks.index(":")
    sid, dim = _ints(toks[:sep], lineno)
    rows, cur = [], []
    for t in toks[sep + 1:] + ["|"]:
        if t == "|":
            rows.append(tuple(_ints(cur, lineno)))
            cur = []
        else:
            cur.append(t)
    if not 0 <= sid < len(geometry):
        raise ParseError(f"subspace id {sid} out of range", lineno)
    s = geometry[sid]
    if s.dim != dim or s.basis != tuple(rows):
        raise ParseError(f"subspace {sid} does not match canonical enumeration", lineno)


def format_geometry_header(geometry: Geometry, correlation: Correlation | None,
                           listing: bool = False) -> str:
    out = [f"geometry {geometry.n} {geometry.q}"]
    if geometry.field.e > 1:
        out.append("modulus " + " ".join(map(str, geometry.field.modulus)))
    if correlation is not None:
        out.append("lambda perm")
        out.extend(f"{i} {j}" for i, j in enumerate(correlation.map) if i <= j)
    if listing:
        out.append("subspaces:")
        for s in geometry:
            rows = " | ".join(" ".join(map(str, r)) for r in s.basis)
            out.append(f"{s.id} {s.dim} : {rows}")
    return "\n".join(out) + "\n"


def load_geometry(text: str):
    geometry, correlation, rest = parse_geometry_block(tokenize(text))
    if rest:
        raise ParseError(f"unexpected {' '.join(rest[0][1])!r}", rest[0][0])
    return geometry, correlation
