"""Exact 2x2 linear algebra over Q, p-adic valuations, element classification.

Everything in this module is exact: scalars are fractions.Fraction, valuations
are plain ints (or INFINITY for v_p(0)). No floats anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class _Infinity:
    """The value of v_p(0). Compares greater than every int and equals only itself."""

    __slots__ = ()

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("commlab.INFINITY")

    def __repr__(self):
        return "INFINITY"


INFINITY = _Infinity()


def is_prime(n):
    """Trial-division primality test; intended for desk-scale numbers."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n):
    """Distinct prime factors of a nonzero integer, ascending."""
    n = abs(int(n))
    if n == 0:
        raise ValueError("0 has no factorization")
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out.append(n)
    return out


def _require_prime(p):
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"p must be a prime integer, got {p!r}")


def _vp_int(n, p):
    # n nonzero
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp(x, p):
    """p-adic valuation of a rational. vp(0, p) is INFINITY."""
    _require_prime(p)
    x = Fraction(x)
    if x == 0:
        return INFINITY
    return _vp_int(x.numerator, p) - _vp_int(x.denominator, p)


def denominator_primes(x):
    """Primes at which the rational x fails to be integral."""
    x = Fraction(x)
    if x.denominator == 1:
        return ()
    return tuple(prime_factors(x.denominator))


@dataclass(frozen=True)
class Mat2:
    """Immutable 2x2 matrix with Fraction entries, row-major a b / c d."""

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    def __post_init__(self):
        for f in ("a", "b", "c", "d"):
            v = getattr(self, f)
            if not isinstance(v, Fraction):
                object.__setattr__(self, f, Fraction(v))

    @classmethod
    def identity(cls):
        return cls(1, 0, 0, 1)

    @classmethod
    def from_rows(cls, rows):
        (a, b), (c, d) = rows
        return cls(Fraction(a), Fraction(b), Fraction(c), Fraction(d))

    def rows(self):
        return ((self.a, self.b), (self.c, self.d))

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def det(self):
        return self.a * self.d - self.b * self.c

    def trace(self):
        return self.a + self.d

    def is_scalar(self):
        return self.b == 0 and self.c == 0 and self.a == self.d and self.a != 0

    def is_identity(self):
        return self.a == 1 and self.b == 0 and self.c == 0 and self.d == 1

    def scale(self, s):
        s = Fraction(s)
        return Mat2(s * self.a, s * self.b, s * self.c, s * self.d)

    def __mul__(self, other):
        if not isinstance(other, Mat2):
            return NotImplemented
        return Mat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self):
        det = self.det()
        if det == 0:
            raise ZeroDivisionError("singular matrix has no inverse")
        return Mat2(self.d / det, -self.b / det, -self.c / det, self.a / det)

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.inverse()
        out = Mat2.identity()
        for _ in range(abs(k)):
            out = out * base
        return out

    def __repr__(self):
        return f"Mat2[[{self.a}, {self.b}], [{self.c}, {self.d}]]"


def projective_normalize(m):
    """Scale so the first nonzero entry in row-major order becomes 1.

    Two invertible matrices have the same normal form exactly when they agree
    in PGL(2, Q), so the entry quadruple is a collision key for projective
    images.
    """
    for e in m.entries():
        if e != 0:
            return m.scale(1 / e)
    raise ValueError("zero matrix has no projective class")


def commutator(g, h):
    """[g, h] = g h g^-1 h^-1."""
    return g * h * g.inverse() * h.inverse()


@dataclass(frozen=True)
class ElementClass:
    """Dynamical type of a matrix acting on the relevant symmetric space.

    kind is one of "identity", "elliptic-finite-order",
    "elliptic-infinite-order", "parabolic", "loxodromic". order carries the
    torsion order where finite, translation_length the p-adic translation
    length for loxodromics, note any caveat.
    """

    kind: str
    order: int = None
    translation_length: int = None
    note: str = None


# Rational traces t with |t| < 2 give torsion in SL(2, R) only at t in
# {0, 1, -1}: by Niven, 2cos of a rational angle is rational only at
# 0, +-1, +-2. The value is the order in SL(2, R), smallest k with m^k = I.
_SL2_TORSION_ORDER = {Fraction(0): 4, Fraction(1): 6, Fraction(-1): 3}

# PGL(2, Q_p) torsion detected by r = tr^2/det: r = 2 + 2cos(2*pi/n) is
# rational only for n in {1, 2, 3, 4, 6}, i.e. r in {4, 0, 1, 2, 3}. r = 4 is
# the parabolic/identity line; the rest give the order in PGL(2, Q_p).
_PGL2_TORSION_ORDER = {Fraction(0): 2, Fraction(1): 3, Fraction(2): 4, Fraction(3): 6}


def classify_real(m):
    """Classify m in SL(2, R) by its trace. Requires det(m) = 1.

    Orders are orders in SL(2, R): trace 0 gives m^2 = -I so order 4.
    """
    if m.det() != 1:
        raise ValueError("classify_real needs det 1")
    if m.is_scalar():
        return ElementClass("identity")
    t = m.trace()
    if t * t < 4:
        order = _SL2_TORSION_ORDER.get(t)
        if order is not None:
            return ElementClass("elliptic-finite-order", order=order)
        return ElementClass("elliptic-infinite-order")
    if t * t == 4:
        return ElementClass("parabolic")
    return ElementClass("loxodromic")


def classify_padic(m, p):
    """Classify the action of m on the Bruhat-Tits tree of PGL(2, Q_p).

    det(m) may be any nonzero rational; every test is invariant under
    scaling. Loxodromic means v_p(tr^2/det) < 0, with translation length
    -v_p(tr^2/det). Orders are orders in PGL(2, Q_p). Bounded elements with
    odd v_p(det) fix no vertex (only an edge midpoint); the note records
    that.
    """
    _require_prime(p)
    det = m.det()
    if det == 0:
        raise ValueError("singular matrix")
    if m.is_scalar():
        return ElementClass("identity")
    t = m.trace()
    r = t * t / det
    if t != 0:
        v = vp(r, p)
        if v < 0:
            return ElementClass("loxodromic", translation_length=-v)
    note = None
    if vp(det, p) % 2 == 1:
        note = "bounded (vertex or edge midpoint)"
    if r == 4:
        return ElementClass("parabolic", note=note)
    order = _PGL2_TORSION_ORDER.get(r)
    if order is not None:
        return ElementClass("elliptic-finite-order", order=order, note=note)
    return ElementClass("elliptic-infinite-order", note=note)
