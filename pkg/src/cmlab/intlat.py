"""Exact linear algebra over Z and Q for small dense matrices.

Matrices are lists of row lists.  Lattices are row spans.  Nothing here is
asymptotically clever; the whole package works in rank <= 8.
"""

from fractions import Fraction
from math import gcd


def mat_mul(a, b):
    n, m, k = len(a), len(b[0]), len(b)
    return [[sum(a[i][t] * b[t][j] for t in range(k)) for j in range(m)] for i in range(n)]


def mat_vec(a, v):
    return [sum(a[i][t] * v[t] for t in range(len(v))) for i in range(len(a))]


def identity(n, one=1):
    return [[one if i == j else 0 * one for j in range(n)] for i in range(n)]


def transpose(a):
    return [list(col) for col in zip(*a)]


def frac_det(m):
    """Determinant by fraction Gaussian elimination."""
    a = [[Fraction(x) for x in row] for row in m]
    n = len(a)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, n):
            if a[r][col]:
                f = a[r][col] * inv
                a[r] = [a[r][j] - f * a[col][j] for j in range(n)]
    return det


def frac_solve(m, v):
    """Solve m x = v exactly; returns None if singular/inconsistent."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(v[i])] for i, row in enumerate(m)]
    cols = len(m[0])
    row = 0
    pivots = []
    for col in range(cols):
        piv = next((r for r in range(row, n) if a[r][col] != 0), None)
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        inv = 1 / a[row][col]
        a[row] = [x * inv for x in a[row]]
        for r in range(n):
            if r != row and a[r][col]:
                f = a[r][col]
                a[r] = [a[r][j] - f * a[row][j] for j in range(cols + 1)]
        pivots.append(col)
        row += 1
        if row == n:
            break
    for r in range(row, n):
        if a[r][cols] != 0:
            return None
    x = [Fraction(0)] * cols
    for r, col in enumerate(pivots):
        x[col] = a[r][cols]
    return x


def frac_inv(m):
    n = len(m)
    cols = [frac_solve(m, [1 if i == j else 0 for i in range(n)]) for j in range(n)]
    if any(c is None for c in cols):
        raise ZeroDivisionError("singular matrix")
    return transpose(cols)


def hnf(rows):
    """Row Hermite normal form of an integer matrix (row-span canonical).

    Returns the list of nonzero rows: pivots positive, entries above a pivot
    reduced into [0, pivot).
    """
    a = [list(map(int, r)) for r in rows]
    if not a:
        return []
    ncols = len(a[0])
    r = 0
    for col in range(ncols):
        piv = None
        for i in range(r, len(a)):
            if a[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        # clear below by gcd steps
        for i in range(r + 1, len(a)):
            while a[i][col] != 0:
                q = a[r][col] // a[i][col]
                a[r] = [x - q * y for x, y in zip(a[r], a[i])]
                a[r], a[i] = a[i], a[r]
        if a[r][col] < 0:
            a[r] = [-x for x in a[r]]
        for i in range(r):
            q = a[i][col] // a[r][col]
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == len(a):
            break
    return [row for row in a[:r] if any(row)]


def hnf_with_transform(rows):
    """HNF together with a unimodular U with U * rows = hnf-padded.

    Returns (h, u) where h includes zero rows at the bottom and u is square
    unimodular over Z.
    """
    a = [list(map(int, r)) for r in rows]
    n = len(a)
    u = identity(n)
    if not a:
        return a, u
    ncols = len(a[0])
    r = 0
    for col in range(ncols):
        piv = None
        for i in range(r, n):
            if a[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        u[r], u[piv] = u[piv], u[r]
        for i in range(r + 1, n):
            while a[i][col] != 0:
                q = a[r][col] // a[i][col]
                a[r] = [x - q * y for x, y in zip(a[r], a[i])]
                u[r] = [x - q * y for x, y in zip(u[r], u[i])]
                a[r], a[i] = a[i], a[r]
                u[r], u[i] = u[i], u[r]
        if a[r][col] < 0:
            a[r] = [-x for x in a[r]]
            u[r] = [-x for x in u[r]]
        for i in range(r):
            q = a[i][col] // a[r][col]
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                u[i] = [x - q * y for x, y in zip(u[i], u[r])]
        r += 1
        if r == n:
            break
    return a, u


def int_kernel(rows):
    """Z-basis of {x : x * rows == 0} (left kernel of the row matrix)."""
    h, u = hnf_with_transform(rows)
    return [u[i] for i in range(len(h)) if not any(h[i])]


def snf_2xn(rows):
    """Elementary divisors (d1, d2) of an integer matrix with 2 rows.

    d1 = gcd of entries, d1*d2 = gcd of 2x2 minors.  Returns (d1, d2) with
    d2 = 0 if the rank is < 2.
    """
    r0, r1 = rows
    d1 = 0
    for x in r0:
        d1 = gcd(d1, x)
    for x in r1:
        d1 = gcd(d1, x)
    m = 0
    n = len(r0)
    for i in range(n):
        for j in range(i + 1, n):
            m = gcd(m, r0[i] * r1[j] - r0[j] * r1[i])
    if m == 0:
        return (d1, 0)
    return (d1, m // d1)


def saturation_2xn(rows):
    """Basis of the saturation of the rank-2 row span inside Z^n."""
    h, u = hnf_with_transform(rows)
    if len(h) < 2 or not any(h[1]):
        raise ValueError("rows do not span rank 2")
    # Smith-style: saturated lattice = Q-span intersect Z^n.  Compute via HNF
    # of the span and divide each pivot row chain by elementary divisors.
    d1, d2 = snf_2xn(rows)
    # Solve for the primitive basis directly: the saturation is the kernel of
    # the map onto the quotient, equivalently all integer vectors lying in the
    # rational row space.
    # Row space projector approach: x in span <=> x orthogonal to integer
    # kernel of the transpose.
    ker = int_kernel(transpose(rows))  # vectors k with rows * k = 0, i.e. right kernel
    if not ker:
        raise ValueError("unexpected full rank")
    # saturation = {x in Z^n : x . k = 0 for all k in ker}
    return int_kernel(transpose(ker))
