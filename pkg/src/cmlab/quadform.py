"""Exact enumeration on positive definite quadratic forms.

Two engines:

* a Fincke-Pohst style recursion over exact rationals, used for unit groups,
  ideal isomorphism tests and Brandt counts (small bounds, rank 4);
* an integer sweep for ternary forms, used when embedding enumeration has to
  walk ellipsoids with ~1e9 area.  Ranges come from integer Schur complements
  adjusted by exact predicates, and the innermost coordinate is solved by an
  exactly-corrected integer square root, so the numpy path is still exact; it
  falls back to pure-python big integers whenever intermediate magnitudes
  could leave int64 range.
"""

from fractions import Fraction
from math import isqrt

import numpy as np

_INT64_GUARD = 2**61


def cholesky_ldl(G):
    """LDL-type decomposition: Q(x) = sum_i d[i] * (x_i + sum_{j>i} u[i][j] x_j)^2."""
    n = len(G)
    a = [[Fraction(G[i][j]) for j in range(n)] for i in range(n)]
    d = [Fraction(0)] * n
    u = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        d[i] = a[i][i]
        if d[i] <= 0:
            raise ValueError("form is not positive definite")
        for j in range(i + 1, n):
            u[i][j] = a[i][j] / d[i]
        for r in range(i + 1, n):
            for c in range(r, n):
                a[r][c] -= d[i] * u[i][r] * u[i][c]
                a[c][r] = a[r][c]
    return d, u


def _int_range(beta: Fraction, radius_sq: Fraction):
    """Integers t with (t + beta)^2 <= radius_sq, exact endpoints."""
    if radius_sq < 0:
        return range(0, 0)
    bf = float(beta)
    rf = float(radius_sq) ** 0.5 if radius_sq > 0 else 0.0
    lo = int(-bf - rf) - 2
    hi = int(-bf + rf) + 2
    while (Fraction(lo) + beta) ** 2 <= radius_sq:
        lo -= 1
    lo += 1
    while (Fraction(lo) + beta) ** 2 > radius_sq and lo <= hi:
        lo += 1
    while (Fraction(hi) + beta) ** 2 <= radius_sq:
        hi += 1
    hi -= 1
    while (Fraction(hi) + beta) ** 2 > radius_sq and hi >= lo:
        hi -= 1
    return range(lo, hi + 1)


def enum_bounded(G, bound, center=None):
    """Yield all integer x (tuples) with Q(x + center) <= bound."""
    n = len(G)
    bound = Fraction(bound)
    if center is None:
        center = [Fraction(0)] * n
    else:
        center = [Fraction(c) for c in center]
    d, u = cholesky_ldl(G)
    x = [0] * n

    def rec(i, rem):
        if i < 0:
            yield tuple(x)
            return
        s = center[i] + sum(u[i][j] * (x[j] + center[j]) for j in range(i + 1, n))
        for t in _int_range(s, rem / d[i]):
            x[i] = t
            used = d[i] * (t + s) ** 2
            yield from rec(i - 1, rem - used)
        x[i] = 0

    yield from rec(n - 1, bound)


def vectors_with_value(G, target, center=None):
    """All integer x with Q(x + center) == target, exactly."""
    target = Fraction(target)
    out = []
    n = len(G)
    if center is None:
        center = [Fraction(0)] * n
    center = [Fraction(c) for c in center]
    for x in enum_bounded(G, target, center):
        v = [Fraction(x[i]) + center[i] for i in range(n)]
        q = sum(v[i] * G[i][j] * v[j] for i in range(n) for j in range(n))
        if q == target:
            out.append(x)
    return out


def count_vectors_with_value(G, target):
    return len(vectors_with_value(G, target))


# ---------------------------------------------------------------------------
# ternary integer sweep


def _quad_root_range(P, S, T):
    """Integers t with P t^2 + S t + T <= 0 (P > 0), exact endpoints."""
    disc = S * S - 4 * P * T
    if disc < 0:
        return range(0, 0)
    r = isqrt(disc)
    lo = (-S - r) // (2 * P)
    hi = (-S + r) // (2 * P)

    def val(t):
        return P * t * t + S * t + T

    while val(lo - 1) <= 0:
        lo -= 1
    while lo <= hi and val(lo) > 0:
        lo += 1
    while val(hi + 1) <= 0:
        hi += 1
    while hi >= lo and val(hi) > 0:
        hi -= 1
    return range(lo, hi + 1)


def ternary_value_solutions(A, b, c, N):
    """All integer (y0, y1, y2) with  y A y^T + b.y + c == N  (ints in, exact).

    A is a symmetric 3x3 integer matrix, b a 3-vector, c, N integers.
    """
    a00 = A[0][0]
    if a00 <= 0:
        raise ValueError("form is not positive definite")
    # R(y1, y2) := 4*a00*(Q(y) - N) minimized over real y0:
    #   R = 4 a00 (A11 y1^2 + 2 A12 y1 y2 + A22 y2^2 + b1 y1 + b2 y2 + c - N)
    #       - (2 A01 y1 + 2 A02 y2 + b0)^2
    # as P1 y1^2 + S1(y2) y1 + T1(y2):
    P1 = 4 * a00 * A[1][1] - 4 * A[0][1] * A[0][1]
    if P1 <= 0:
        raise ValueError("form is not positive definite")

    def S1(y2):
        return 8 * a00 * A[1][2] * y2 + 4 * a00 * b[1] - 4 * A[0][1] * (2 * A[0][2] * y2 + b[0])

    def T1(y2):
        return (4 * a00 * (A[2][2] * y2 * y2 + b[2] * y2 + c - N)
                - (2 * A[0][2] * y2 + b[0]) ** 2)

    # y2 window: minimize R over real y1 as well: 4*P1*R_min = 4 P1 T1 - S1^2
    # quadratic in y2 with positive leading coefficient
    def M(y2):
        s, t = S1(y2), T1(y2)
        return 4 * P1 * t - s * s

    m0, m1, mm1 = M(0), M(1), M(-1)
    P2 = (m1 + mm1 - 2 * m0) // 2
    S2 = (m1 - mm1) // 2
    T2 = m0
    assert P2 * 2 == m1 + mm1 - 2 * m0 and S2 * 2 == m1 - mm1
    y2_range = _quad_root_range(P2, S2, T2)
    if len(y2_range) == 0:
        return []

    sols = []
    app = sols.append
    for y2 in y2_range:
        r1 = _quad_root_range(P1, S1(y2), T1(y2))
        if len(r1) == 0:
            continue
        # per-row int64 safety: bound the discriminant magnitude exactly
        y1m = max(abs(r1.start), abs(r1.stop - 1), 1)
        bmax = 2 * abs(A[0][1]) * y1m + abs(2 * A[0][2] * y2 + b[0])
        cmax = (abs(A[1][1]) * y1m * y1m + 2 * abs(A[1][2] * y2) * y1m
                + abs(A[2][2] * y2 * y2) + abs(b[1]) * y1m + abs(b[2] * y2) + abs(c - N))
        use_numpy = bmax * bmax + 4 * a00 * cmax < _INT64_GUARD
        if use_numpy and len(r1) > 48:
            y1 = np.arange(r1.start, r1.stop, dtype=np.int64)
            B = 2 * A[0][1] * y1 + (2 * A[0][2] * y2 + b[0])
            C = (A[1][1] * y1 * y1 + 2 * A[1][2] * y2 * y1
                 + A[2][2] * y2 * y2 + b[1] * y1 + b[2] * y2 + c - N)
            disc = B * B - 4 * a00 * C
            mask = disc >= 0
            if not mask.any():
                continue
            dd = disc[mask]
            s = np.sqrt(dd.astype(np.float64)).astype(np.int64)
            s = np.where((s + 1) * (s + 1) <= dd, s + 1, s)
            s = np.where(s * s > dd, s - 1, s)
            ok = s * s == dd
            if not ok.any():
                continue
            yy1 = y1[mask][ok]
            BB = B[mask][ok]
            ss = s[ok]
            for sign in (1, -1):
                num = -BB + sign * ss
                good = num % (2 * a00) == 0
                if sign == -1:
                    good &= ss != 0
                for y0v, y1v in zip(num[good] // (2 * a00), yy1[good]):
                    app((int(y0v), int(y1v), y2))
        else:
            for y1v in r1:
                Bv = 2 * A[0][1] * y1v + 2 * A[0][2] * y2 + b[0]
                Cv = (A[1][1] * y1v * y1v + 2 * A[1][2] * y2 * y1v + A[2][2] * y2 * y2
                      + b[1] * y1v + b[2] * y2 + c - N)
                disc = Bv * Bv - 4 * a00 * Cv
                if disc < 0:
                    continue
                s = isqrt(disc)
                if s * s != disc:
                    continue
                for sign in (1, -1):
                    if sign == -1 and s == 0:
                        continue
                    num = -Bv + sign * s
                    if num % (2 * a00) == 0:
                        app((num // (2 * a00), y1v, y2))
    return sols
