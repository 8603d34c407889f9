"""GF(2^m) arithmetic with log/antilog tables and binary multiplication matrices."""

from __future__ import annotations

from functools import cached_property

from .errors import DomainError
from .gf2 import BitMatrix

# Smallest primitive polynomial of each degree, bit i = coefficient of x^i.
DEFAULT_PRIMITIVE_POLYS = {
    1: 0b11,
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10000011,
    8: 0b100011101,
}

MAX_DEGREE = 16


def poly_mulmod(a: int, b: int, poly: int) -> int:
    """Carry-less product of ``a`` and ``b`` reduced modulo ``poly``."""
    m = poly.bit_length() - 1
    out = 0
    while b:
        if b & 1:
            out ^= a
        b >>= 1
        a <<= 1
        if (a >> m) & 1:
            a ^= poly
    return out


def poly_mod(a: int, b: int) -> int:
    db = b.bit_length() - 1
    while a and a.bit_length() - 1 >= db:
        a ^= b << (a.bit_length() - 1 - db)
    return a


def is_irreducible(poly: int) -> bool:
    m = poly.bit_length() - 1
    if m < 1:
        return False
    # trial division by every polynomial of degree 1..m//2
    for d in range(1, m // 2 + 1):
        for f in range(1 << d, 1 << (d + 1)):
            if poly_mod(poly, f) == 0:
                return False
    return True


def is_primitive(poly: int) -> bool:
    m = poly.bit_length() - 1
    if not is_irreducible(poly):
        return False
    order = (1 << m) - 1
    x = 1
    for i in range(1, order + 1):
        x = poly_mulmod(x, 0b10, poly) if m > 1 else poly_mulmod(x, 0b1, poly)
        if x == 1:
            return i == order
    return False


def smallest_primitive_poly(m: int) -> int:
    if m in DEFAULT_PRIMITIVE_POLYS:
        return DEFAULT_PRIMITIVE_POLYS[m]
    for p in range((1 << m) | 1, 1 << (m + 1), 2):
        if is_primitive(p):
            return p
    raise DomainError(f"no primitive polynomial of degree {m}")


class GfField:
    """The field GF(2^m) in the polynomial basis 1, x, ..., x^(m-1).

    Elements are integers 0..q-1 whose bit i is the coefficient of x^i.
    """

    def __init__(self, m: int, primitive_poly: int | None = None):
        if not 1 <= m <= MAX_DEGREE:
            raise DomainError(f"extension degree must be in 1..{MAX_DEGREE}, got {m}")
        if primitive_poly is None:
            primitive_poly = smallest_primitive_poly(m)
        if primitive_poly.bit_length() - 1 != m:
            raise DomainError(f"polynomial {primitive_poly:#x} does not have degree {m}")
        if not is_irreducible(primitive_poly):
            raise DomainError(f"polynomial {primitive_poly:#x} is reducible over GF(2)")
        self.m = m
        self.q = 1 << m
        self.primitive_poly = primitive_poly
        # generator of the multiplicative group: x, or 1 when m == 1
        gen = 0b10 if m > 1 else 0b1
        antilog = [0] * (self.q - 1)
        log = [-1] * self.q
        x = 1
        for i in range(self.q - 1):
            if log[x] != -1:
                raise DomainError(f"polynomial {primitive_poly:#x} is irreducible but not primitive")
            antilog[i] = x
            log[x] = i
            x = poly_mulmod(x, gen, primitive_poly)
        self.antilog = tuple(antilog)
        self.log = tuple(log)

    def __repr__(self) -> str:
        return f"GfField(m={self.m}, primitive_poly={self.primitive_poly:#x})"

    def __eq__(self, other) -> bool:
        return isinstance(other, GfField) and (self.m, self.primitive_poly) == (
            other.m,
            other.primitive_poly,
        )

    def __hash__(self) -> int:
        return hash((self.m, self.primitive_poly))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.antilog[(self.log[a] + self.log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self.antilog[(-self.log[a]) % (self.q - 1)]

    @cached_property
    def _companions(self) -> tuple[BitMatrix, ...]:
        return tuple(self._build_companion(a) for a in range(self.q))

    def _build_companion(self, a: int) -> BitMatrix:
        m = self.m
        # column j is the image of basis element x^j
        cols = [self.mul(a, 1 << j) for j in range(m)]
        rows = []
        for i in range(m):
            v = 0
            for j, c in enumerate(cols):
                if (c >> i) & 1:
                    v |= 1 << j
            rows.append(v)
        return BitMatrix(rows, m)


def field_mul_companion(field: GfField, a: int) -> BitMatrix:
    """m x m binary matrix T with bits(a*x) = T bits(x), bits least significant first."""
    if not 0 <= a < field.q:
        raise DomainError(f"element {a} outside GF({field.q})")
    return field._companions[a]
