"""Exact arithmetic in rational quaternion algebras (a, b | Q).

Basis 1, i, j, k with i^2 = a, j^2 = b, ij = k = -ji.  All coordinates are
Fractions; there is no floating point in this module.  Places are rational
primes plus the symbol OO for the archimedean place.
"""

from fractions import Fraction
from functools import lru_cache

from .arith import factorize, is_prime, legendre, valuation

OO = "oo"  # the archimedean place


class ZeroDivisorError(ArithmeticError):
    """Raised when inverting an element of reduced norm zero."""


def _norm_residue(x: Fraction, p: int) -> int:
    """Unit part of x at p, as an integer prime to p (mod squares)."""
    num, den = x.numerator, x.denominator
    vn, vd = valuation(num, p) if num % p == 0 else 0, valuation(den, p) if den % p == 0 else 0
    u = num // p**vn * (den // p**vd)
    return u


def hilbert_symbol(a, b, place) -> int:
    """Hilbert symbol (a, b) at a finite prime or OO.

    +1 iff a x^2 + b y^2 = z^2 has a nontrivial solution over the completion.
    """
    a, b = Fraction(a), Fraction(b)
    if a == 0 or b == 0:
        raise ValueError("hilbert symbol requires nonzero arguments")
    if place == OO:
        return -1 if (a < 0 and b < 0) else 1
    p = int(place)
    if not is_prime(p):
        raise ValueError(f"{place} is not a place")
    # replace by integers in the same square class
    ai = a.numerator * a.denominator
    bi = b.numerator * b.denominator
    alpha = valuation(ai, p)
    beta = valuation(bi, p)
    u = ai // p**alpha
    v = bi // p**beta
    if p != 2:
        sign = 1
        if alpha * beta % 2 == 1 and p % 4 == 3:
            sign = -sign
        if beta % 2 == 1:
            sign *= legendre(u % p, p)
        if alpha % 2 == 1:
            sign *= legendre(v % p, p)
        return sign
    eps_u = (u % 8 - 1) // 2 % 2  # (u-1)/2 mod 2
    eps_v = (v % 8 - 1) // 2 % 2
    omega_u = (u % 8) ** 2 // 8 % 2  # (u^2-1)/8 mod 2
    omega_v = (v % 8) ** 2 // 8 % 2
    e = eps_u * eps_v + alpha * omega_v + beta * omega_u
    return -1 if e % 2 == 1 else 1


def ramification_set(a, b) -> frozenset:
    """The even-cardinality set of places where (a, b | Q) is a division algebra."""
    a, b = Fraction(a), Fraction(b)
    candidates = {2, OO}
    for x in (a, b):
        candidates.update(factorize(x.numerator * x.denominator))
    ram = frozenset(pl for pl in candidates if hilbert_symbol(a, b, pl) == -1)
    assert len(ram) % 2 == 0
    return ram


class QuaternionAlgebra:
    """The rational quaternion algebra with i^2 = a, j^2 = b."""

    def __init__(self, a, b):
        self.a = Fraction(a)
        self.b = Fraction(b)
        if self.a == 0 or self.b == 0:
            raise ValueError("structure constants must be nonzero")
        self._ram = None

    def __repr__(self):
        return f"QuaternionAlgebra({self.a}, {self.b})"

    def __eq__(self, other):
        return isinstance(other, QuaternionAlgebra) and (self.a, self.b) == (other.a, other.b)

    def __hash__(self):
        return hash(("QA", self.a, self.b))

    @property
    def ramified_places(self) -> frozenset:
        if self._ram is None:
            self._ram = ramification_set(self.a, self.b)
        return self._ram

    @property
    def finite_ramified_primes(self) -> tuple:
        return tuple(sorted(p for p in self.ramified_places if p != OO))

    def discriminant(self) -> int:
        """Product of the finite ramified primes."""
        d = 1
        for p in self.finite_ramified_primes:
            d *= p
        return d

    def is_definite(self) -> bool:
        return self.a < 0 and self.b < 0

    def is_ramified_at(self, place) -> bool:
        return place in self.ramified_places

    # element constructors -------------------------------------------------
    def element(self, c0, c1=0, c2=0, c3=0) -> "QuatElement":
        return QuatElement(self, (Fraction(c0), Fraction(c1), Fraction(c2), Fraction(c3)))

    def zero(self):
        return self.element(0)

    def one(self):
        return self.element(1)

    def gen_i(self):
        return self.element(0, 1)

    def gen_j(self):
        return self.element(0, 0, 1)

    def gen_k(self):
        return self.element(0, 0, 0, 1)

    def basis(self):
        return (self.one(), self.gen_i(), self.gen_j(), self.gen_k())


class QuatElement:
    __slots__ = ("algebra", "coords")

    def __init__(self, algebra: QuaternionAlgebra, coords):
        self.algebra = algebra
        self.coords = tuple(Fraction(c) for c in coords)
        if len(self.coords) != 4:
            raise ValueError("quaternion needs four coordinates")

    def __repr__(self):
        names = ("", "i", "j", "k")
        parts = []
        for c, nm in zip(self.coords, names):
            if c:
                parts.append(f"{c}{nm}" if nm else f"{c}")
        return " + ".join(parts) if parts else "0"

    def _check(self, other):
        if self.algebra != other.algebra:
            raise ValueError("elements of different algebras")

    def __eq__(self, other):
        return (isinstance(other, QuatElement) and self.algebra == other.algebra
                and self.coords == other.coords)

    def __hash__(self):
        return hash((self.algebra, self.coords))

    def __add__(self, other):
        self._check(other)
        return QuatElement(self.algebra, tuple(x + y for x, y in zip(self.coords, other.coords)))

    def __sub__(self, other):
        self._check(other)
        return QuatElement(self.algebra, tuple(x - y for x, y in zip(self.coords, other.coords)))

    def __neg__(self):
        return QuatElement(self.algebra, tuple(-x for x in self.coords))

    def scale(self, s):
        s = Fraction(s)
        return QuatElement(self.algebra, tuple(s * x for x in self.coords))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        a, b = self.algebra.a, self.algebra.b
        x0, x1, x2, x3 = self.coords
        y0, y1, y2, y3 = other.coords
        return QuatElement(self.algebra, (
            x0 * y0 + a * x1 * y1 + b * x2 * y2 - a * b * x3 * y3,
            x0 * y1 + x1 * y0 - b * x2 * y3 + b * x3 * y2,
            x0 * y2 + x2 * y0 + a * x1 * y3 - a * x3 * y1,
            x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
        ))

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def conjugate(self):
        x0, x1, x2, x3 = self.coords
        return QuatElement(self.algebra, (x0, -x1, -x2, -x3))

    def reduced_trace(self) -> Fraction:
        return 2 * self.coords[0]

    def reduced_norm(self) -> Fraction:
        a, b = self.algebra.a, self.algebra.b
        x0, x1, x2, x3 = self.coords
        return x0 * x0 - a * x1 * x1 - b * x2 * x2 + a * b * x3 * x3

    def inverse(self):
        n = self.reduced_norm()
        if n == 0:
            raise ZeroDivisorError("element of reduced norm 0 has no inverse")
        return self.conjugate().scale(Fraction(1, 1) / n)

    def is_integral(self) -> bool:
        return self.reduced_trace().denominator == 1 and self.reduced_norm().denominator == 1
