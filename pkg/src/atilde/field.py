"""Table-driven arithmetic in GF(p^e).

Field elements are the integers ``0 .. q-1``; the integer ``sum c_i p^i``
stands for the residue class of ``sum c_i X^i`` modulo the defining
polynomial.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

# Conway-style choices; any irreducible polynomial gives an isomorphic field.
BUILTIN_MODULI = {
    4: (2, 2, (1, 1, 1)),        # X^2 + X + 1
    8: (2, 3, (1, 1, 0, 1)),     # X^3 + X + 1
    9: (3, 2, (1, 0, 1)),        # X^2 + 1
}


class FieldError(ValueError):
    pass


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def factor_prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, e)`` with ``q == p**e``, or raise FieldError."""
    if q < 2:
        raise FieldError(f"field order {q} is not a prime power")
    p = 2
    while q % p:
        p += 1
    e, r = 0, q
    while r % p == 0:
        r //= p
        e += 1
    if r != 1:
        raise FieldError(f"field order {q} is not a prime power")
    return p, e


def _poly_mod(a: list[int], m: tuple[int, ...], p: int) -> list[int]:
    """Remainder of a modulo m over GF(p); m need not be monic."""
    a = [c % p for c in a]
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm and any(a):
        while a and a[-1] == 0:
            a.pop()
        if len(a) - 1 < dm:
            break
        coef = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - coef * c) % p
        a.pop()
    while a and a[-1] == 0:
        a.pop()
    return a


def is_irreducible(modulus: tuple[int, ...], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1 .. deg/2."""
    deg = len(modulus) - 1
    if deg < 1 or modulus[-1] % p == 0:
        return False
    for d in range(1, deg // 2 + 1):
        for low in product(range(p), repeat=d):
            divisor = tuple(low) + (1,)
            if not _poly_mod(list(modulus), divisor, p):
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    p: int
    e: int = 1
    modulus: tuple[int, ...] = ()
    q: int = field(init=False)

    def __post_init__(self):
        if not is_prime(self.p):
            raise FieldError(f"characteristic {self.p} is not prime")
        if self.e < 1:
            raise FieldError("extension degree must be >= 1")
        mod = tuple(int(c) % self.p for c in self.modulus)
        object.__setattr__(self, "modulus", mod)
        if self.e == 1:
            if mod:
                raise FieldError("a prime field takes no modulus")
        else:
            if len(mod) != self.e + 1:
                raise FieldError(
                    f"modulus must have {self.e + 1} coefficients, got {len(mod)}")
            if not is_irreducible(mod, self.p):
                raise FieldError(f"modulus {list(mod)} is reducible over GF({self.p})")
        object.__setattr__(self, "q", self.p ** self.e)

    @classmethod
    def of_order(cls, q: int, modulus=None) -> "FieldSpec":
        p, e = factor_prime_power(q)
        if e == 1:
            return cls(p, 1, tuple(modulus or ()))
        if modulus is None:
            if q not in BUILTIN_MODULI:
                raise FieldError(f"no built-in modulus for q={q}; supply one")
            _, _, modulus = BUILTIN_MODULI[q]
        return cls(p, e, tuple(modulus))


class GF:
    """Arithmetic tables for the field described by a FieldSpec."""

    def __init__(self, spec: FieldSpec):
        self.spec = spec
        p, e, q = spec.p, spec.e, spec.q
        self.p, self.q = p, q
        digits = [self._digits(a) for a in range(q)]

        def encode(coeffs):
            return sum((c % p) * p ** i for i, c in enumerate(coeffs))

        self.add = [[encode([x + y for x, y in zip(digits[a], digits[b])])
                     for b in range(q)] for a in range(q)]
        self.neg = [encode([-x for x in digits[a]]) for a in range(q)]
        self.sub = [[self.add[a][self.neg[b]] for b in range(q)] for a in range(q)]
        self.mul = [[0] * q for _ in range(q)]
        for a in range(q):
            for b in range(q):
                prod = [0] * (2 * e - 1)
                for i, x in enumerate(digits[a]):
                    for j, y in enumerate(digits[b]):
                        prod[i + j] += x * y
                if e > 1:
                    prod = _poly_mod(prod, spec.modulus, p)
                self.mul[a][b] = encode(prod)
        self.inv = [0] * q
        for a in range(1, q):
            hits = [b for b in range(1, q) if self.mul[a][b] == 1]
            if len(hits) != 1:
                raise FieldError(f"element {a} has no unique inverse; not a field")
            self.inv[a] = hits[0]

    def _digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.spec.e):
            out.append(a % self.p)
            a //= self.p
        return out
