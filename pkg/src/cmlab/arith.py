"""Elementary exact number theory used across the package.

Everything here works on plain Python integers; nothing ever goes through
floating point.
"""

from fractions import Fraction
from math import gcd, isqrt

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    # deterministic Miller-Rabin, valid far beyond anything used here
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of |n| as {p: e}; factorize(0) is an error."""
    if n == 0:
        raise ValueError("cannot factor 0")
    n = abs(n)
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 5
    while f * f <= n:
        for p in (f, f + 2):
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
        f += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def squarefree_part(n: int) -> int:
    """The squarefree integer s with n = s * m**2 (sign preserved)."""
    if n == 0:
        return 0
    s = -1 if n < 0 else 1
    for p, e in factorize(n).items():
        if e % 2 == 1:
            s *= p
    return s


def valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def frac_valuation(x: Fraction, p: int) -> int:
    if x == 0:
        raise ValueError("valuation of 0")
    return valuation(x.numerator, p) - valuation(x.denominator, p)


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a|p) for an odd prime p."""
    a %= p
    if a == 0:
        return 0
    r = pow(a, (p - 1) // 2, p)
    return 1 if r == 1 else -1


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n), the fully extended quadratic symbol."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    if n < 0:
        return (-1 if a < 0 else 1) * kronecker(a, -n)
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v and a % 2 == 0:
        return 0
    k = 1
    if v % 2 == 1:
        m = a % 8
        if m in (3, 5):
            k = -1
    # now n odd; Jacobi
    a %= n
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                k = -k
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            k = -k
        a %= n
    return k if n == 1 else 0


def is_fundamental_discriminant(d: int) -> bool:
    if d >= 0:
        return False
    if d % 4 == 1 or d % 4 == -3:
        return squarefree_part(d) == d
    if d % 4 == 0:
        m = d // 4
        return squarefree_part(m) == m and m % 4 in (2, 3, -2, -1)
    return False


def fundamental_discriminant(d: int) -> int:
    """Coerce a negative integer to a fundamental discriminant.

    Accepts an already-fundamental discriminant, or a negative squarefree m
    describing the field Q(sqrt(m)).
    """
    if d >= 0:
        raise ValueError("imaginary quadratic data must be negative")
    if is_fundamental_discriminant(d):
        return d
    if squarefree_part(d) == d:
        # squarefree, d % 4 in {2, 3}: field disc is 4d
        return 4 * d
    raise ValueError(f"{d} is neither a fundamental discriminant nor squarefree")


def gcd_list(xs) -> int:
    g = 0
    for x in xs:
        g = gcd(g, x)
    return g


def exact_isqrt(n: int):
    """isqrt(n) if n is a perfect square, else None."""
    if n < 0:
        return None
    r = isqrt(n)
    return r if r * r == n else None
