"""Imaginary quadratic orders O_c = Z + c*O_K and their class numbers.

Class numbers are counted from reduced primitive binary quadratic forms; the
classical conductor relation is used only as an independent cross-check in the
tests.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .arith import factorize, fundamental_discriminant, is_fundamental_discriminant, kronecker


@dataclass(frozen=True)
class ImagQuadOrder:
    """The order of conductor c in the field of fundamental discriminant d_K."""

    d_K: int
    conductor: int

    def __post_init__(self):
        if not is_fundamental_discriminant(self.d_K):
            raise ValueError(f"{self.d_K} is not a fundamental discriminant")
        if self.conductor < 1:
            raise ValueError("conductor must be positive")

    @property
    def discriminant(self) -> int:
        return self.conductor * self.conductor * self.d_K

    def generator_trace_norm(self):
        """(tr, nr) of the standard generator w_D = (D + sqrt(D))/2."""
        D = self.discriminant
        return D, (D * D - D) // 4

    def splitting_at(self, p: int) -> int:
        """Kronecker symbol of the field at p: +1 split, -1 inert, 0 ramified."""
        return kronecker(self.d_K, p)


def imag_quad_order(d, conductor=1) -> ImagQuadOrder:
    """Build O_c, accepting either a fundamental discriminant or squarefree m < 0."""
    return ImagQuadOrder(fundamental_discriminant(d), conductor)


def class_number(order_or_disc) -> int:
    """h(D): reduced primitive forms (a, b, c), b^2 - 4ac = D < 0."""
    if isinstance(order_or_disc, ImagQuadOrder):
        D = order_or_disc.discriminant
    else:
        D = int(order_or_disc)
    if D >= 0 or D % 4 not in (0, 1):
        raise ValueError(f"{D} is not an imaginary quadratic discriminant")
    count = 0
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if b < 0 and a == c:
                continue  # (a, -b, a) is the same class as (a, b, a)
            if gcd(gcd(a, abs(b)), c) != 1:
                continue
            count += 1
        a += 1
    return count


def conductor_class_number_formula(d_K: int, c: int) -> int:
    """h(O_c) from h(d_K) by the classical conductor relation (cross-check)."""
    h1 = class_number(d_K)
    if c == 1:
        return h1
    val = Fraction(h1 * c)
    for ell in factorize(c):
        val *= Fraction(ell - kronecker(d_K, ell), ell)
    units = 3 if d_K == -3 else (2 if d_K == -4 else 1)
    val /= units
    if val.denominator != 1:
        raise ArithmeticError("conductor formula did not give an integer")
    return int(val)


def conductor_tower(d_K: int, c0: int, p: int, n_max: int):
    """The orders O_{c0 * p^n} for n = 0..n_max."""
    d_K = fundamental_discriminant(d_K)
    if c0 % p == 0:
        raise ValueError("base conductor must be prime to p")
    return [ImagQuadOrder(d_K, c0 * p**n) for n in range(n_max + 1)]
