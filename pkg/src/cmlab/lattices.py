"""Orders, right ideals, class sets and Brandt matrices in definite rational
quaternion algebras.

Conventions:

* lattices are rank-4 Z-modules given by basis rows in 1, i, j, k coordinates;
* ideals are right ideals of a fixed order, equivalent when J = b * I for some
  unit b of the algebra; left orders carry the unit weights;
* class sets are enumerated by an l-neighbor breadth-first search at the
  smallest prime l coprime to the reduced discriminant, with completeness
  certified against the mass formula in the test suite.
"""

from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

from .arith import exact_isqrt, is_prime
from .intlat import frac_det, frac_inv, hnf, int_kernel, transpose
from .qalg import OO, QuaternionAlgebra, QuatElement
from .quadform import enum_bounded, vectors_with_value


class RamifiedPlaceError(ValueError):
    """No matrix splitting exists at a ramified prime."""


# ---------------------------------------------------------------------------
# lattice helpers (bases are lists of QuatElement)


def _coords_matrix(elements):
    return [list(e.coords) for e in elements]


def lattice_canonical_basis(alg, elements):
    """Canonical (HNF) basis of the Z-span of the given elements."""
    rows = _coords_matrix(elements)
    den = lcm(*[c.denominator for row in rows for c in row]) if rows else 1
    int_rows = [[int(c * den) for c in row] for row in rows]
    h = hnf(int_rows)
    if len(h) != 4:
        raise ValueError("lattice does not have full rank")
    return [QuatElement(alg, [Fraction(x, den) for x in row]) for row in h]


def lattice_key(alg, basis):
    """Hashable canonical form of a full lattice."""
    rows = _coords_matrix(basis)
    den = lcm(*[c.denominator for row in rows for c in row])
    h = hnf([[int(c * den) for c in row] for row in rows])
    g = den
    for row in h:
        for x in row:
            g = gcd(g, x)
    return (den // g, tuple(tuple(x // g for x in row) for row in h))


def lattice_product(alg, basis_a, basis_b):
    prods = [x * y for x in basis_a for y in basis_b]
    return lattice_canonical_basis(alg, prods)


def lattice_conjugate(alg, basis):
    return lattice_canonical_basis(alg, [x.conjugate() for x in basis])


def lattice_scale(alg, basis, s):
    s = Fraction(s)
    return [x.scale(s) for x in basis]


def lattice_sum(alg, basis_a, basis_b):
    return lattice_canonical_basis(alg, list(basis_a) + list(basis_b))


def lattice_intersection(alg, basis_a, basis_b):
    """Intersection of two full lattices."""
    ma = _coords_matrix(basis_a)
    mb = _coords_matrix(basis_b)
    m = [[Fraction(x) for x in row] for row in _matmul(ma, frac_inv(mb))]
    den = lcm(*[c.denominator for row in m for c in row])
    n = [[int(c * den) for c in row] for row in m]
    # c (A-coords) lies in the intersection iff c*N == 0 mod den
    stacked = n + [[den if i == j else 0 for j in range(4)] for i in range(4)]
    ker = int_kernel(stacked)  # rows (c, y) with c*N + y*den*I == 0
    cs = [row[:4] for row in ker]
    rows = hnf(cs)
    if len(rows) != 4:
        raise ValueError("intersection not full rank")
    out = []
    for row in rows:
        coords = [sum(Fraction(row[t]) * ma[t][j] for t in range(4)) for j in range(4)]
        out.append(QuatElement(alg, coords))
    return lattice_canonical_basis(alg, out)


def _matmul(a, b):
    n, m, k = len(a), len(b[0]), len(b)
    return [[sum(a[i][t] * b[t][j] for t in range(k)) for j in range(m)] for i in range(n)]


def lattice_index(alg, sup, sub):
    """[sup : sub] as a positive rational (an integer when sub <= sup)."""
    d = frac_det(_coords_matrix(sub)) / frac_det(_coords_matrix(sup))
    return abs(d)


# ---------------------------------------------------------------------------


class Order:
    """A full integral order, basis rows in 1, i, j, k coordinates."""

    def __init__(self, alg: QuaternionAlgebra, basis, validate=True):
        self.algebra = alg
        self.basis = lattice_canonical_basis(alg, basis)
        self._inv = frac_inv(_coords_matrix(self.basis))
        self._units = None
        self._gram = None
        self._cons = None
        if validate:
            self._validate()

    def _validate(self):
        if not self.contains(self.algebra.one()):
            raise ValueError("order must contain 1")
        for x in self.basis:
            if not x.is_integral():
                raise ValueError("order elements must be integral")
        for x in self.basis:
            for y in self.basis:
                if not self.contains(x * y):
                    raise ValueError("order must be closed under multiplication")

    def coords_of(self, x: QuatElement):
        row = list(x.coords)
        inv = self._inv
        return [sum(Fraction(row[t]) * inv[t][j] for t in range(4)) for j in range(4)]

    def element(self, coords):
        b = self.basis
        out = b[0].scale(coords[0])
        for c, e in zip(coords[1:], b[1:]):
            out = out + e.scale(c)
        return out

    def contains(self, x: QuatElement) -> bool:
        return all(c.denominator == 1 for c in self.coords_of(x))

    def key(self):
        return lattice_key(self.algebra, self.basis)

    def norm_gram(self):
        """Gram G with nrd(sum c_i b_i) = c G c^T."""
        if self._gram is None:
            b = self.basis
            self._gram = [[(x * y.conjugate()).reduced_trace() / 2 for y in b] for x in b]
        return self._gram

    def trace_gram(self):
        b = self.basis
        return [[(x * y).reduced_trace() for y in b] for x in b]

    def reduced_discriminant(self) -> int:
        d2 = abs(frac_det(self.trace_gram()))
        if d2.denominator != 1:
            raise ValueError("not an integral order")
        r = exact_isqrt(int(d2))
        if r is None:
            raise ValueError("discriminant Gram determinant is not a square")
        return r

    @property
    def level(self) -> int:
        d = self.reduced_discriminant()
        q = self.algebra.discriminant()
        if d % q:
            raise ValueError("discriminant not divisible by the algebra discriminant")
        return d // q

    def unit_elements(self):
        """All elements of reduced norm 1 (a group of order 2w)."""
        if self._units is None:
            vecs = vectors_with_value(self.norm_gram(), 1)
            self._units = [self.element(v) for v in vecs]
        return self._units

    def structure_constants(self):
        """c[i][j] = integer coordinates of basis[i]*basis[j] in the basis."""
        if self._cons is None:
            out = []
            for x in self.basis:
                row = []
                for y in self.basis:
                    co = self.coords_of(x * y)
                    if any(c.denominator != 1 for c in co):
                        raise ValueError("order is not multiplicatively closed")
                    row.append([int(c) for c in co])
                out.append(row)
            self._cons = out
        return self._cons

    def __repr__(self):
        return f"Order(disc={self.reduced_discriminant()}, alg={self.algebra})"


def unit_weight(order: Order) -> int:
    """w = #O^x / 2, by short-vector enumeration at norm 1."""
    n = len(order.unit_elements())
    assert n % 2 == 0
    return n // 2


def standard_order(alg: QuaternionAlgebra) -> Order:
    if alg.a.denominator != 1 or alg.b.denominator != 1:
        raise ValueError("standard order needs integer structure constants")
    return Order(alg, list(alg.basis()))


def _enlarge_at(order: Order, p: int):
    """One saturation step: a strictly larger order inside (1/p) * order."""
    alg = order.algebra
    basis = order.basis
    from itertools import product as iproduct

    for cvec in iproduct(range(p), repeat=4):
        if not any(cvec):
            continue
        x = order.element([Fraction(c, p) for c in cvec])
        if not x.is_integral():
            continue
        # close the module generated by the order and x under multiplication
        cur = lattice_canonical_basis(alg, list(basis) + [x])
        ok = True
        for _ in range(8):
            prods = [u * v for u in cur for v in cur]
            nxt = lattice_canonical_basis(alg, list(cur) + prods)
            if any(not e.is_integral() for e in nxt):
                ok = False
                break
            if lattice_key(alg, nxt) == lattice_key(alg, cur):
                break
            cur = nxt
        else:
            ok = False
        if not ok:
            continue
        if lattice_key(alg, cur) != order.key():
            return Order(alg, cur)
    return None


def maximal_order(alg: QuaternionAlgebra) -> Order:
    """A maximal order in a definite algebra of prime discriminant."""
    if not alg.is_definite():
        raise ValueError("class sets are only finite for definite algebras")
    q = alg.discriminant()
    if not is_prime(q):
        raise ValueError(f"unsupported discriminant {q}")
    order = standard_order(alg)
    while True:
        d = order.reduced_discriminant()
        if d == q:
            return order
        ratio = d // q
        p = min(factor for factor in _prime_factors(ratio))
        bigger = _enlarge_at(order, p)
        if bigger is None:
            raise ValueError(f"saturation stalled at p={p} (disc {d})")
        order = bigger


def _prime_factors(n: int):
    from .arith import factorize

    return sorted(factorize(n))


@lru_cache(maxsize=None)
def algebra_for_prime_discriminant(q: int) -> QuaternionAlgebra:
    """A definite algebra ramified exactly at {q, oo}."""
    if not is_prime(q):
        raise ValueError("discriminant must be prime")
    if q == 2:
        return QuaternionAlgebra(-1, -1)
    if q % 4 == 3:
        return QuaternionAlgebra(-1, -q)
    if q % 8 == 5:
        return QuaternionAlgebra(-2, -q)
    r = 3
    while True:
        if is_prime(r):
            cand = QuaternionAlgebra(-r, -q)
            if cand.ramified_places == frozenset({q, OO}):
                return cand
        r += 2


# ---------------------------------------------------------------------------
# local splitting via idempotent lifting


class LocalSplitting:
    """An algebra map order -> M_2(Z/p^k), exact on the order's basis."""

    def __init__(self, order: Order, p: int, k: int, basis_images):
        self.order = order
        self.p = p
        self.k = k
        self.modulus = p**k
        self.basis_images = basis_images  # 4 matrices, images of order basis

    def image_of_coords(self, coords):
        m = self.modulus
        out = [[0, 0], [0, 0]]
        for c, img in zip(coords, self.basis_images):
            ci = int(c) % m
            for r in range(2):
                for s in range(2):
                    out[r][s] = (out[r][s] + ci * img[r][s]) % m
        return out

    def image(self, x: QuatElement):
        coords = self.order.coords_of(x)
        if any(c.denominator != 1 for c in coords):
            raise ValueError("element is not in the order")
        return self.image_of_coords([int(c) for c in coords])

    def generator_images(self):
        alg = self.order.algebra
        return self.image(alg.gen_i()), self.image(alg.gen_j())


def _mul_mod(cons, x, y, m):
    out = [0, 0, 0, 0]
    for i, xi in enumerate(x):
        if not xi:
            continue
        for j, yj in enumerate(y):
            if not yj:
                continue
            cij = cons[i][j]
            f = xi * yj
            for t in range(4):
                if cij[t]:
                    out[t] = (out[t] + f * cij[t]) % m
    return out


def local_splitting(order: Order, p: int, k: int) -> LocalSplitting:
    """Split the order at an unramified prime, exactly mod p^k."""
    alg = order.algebra
    if alg.is_ramified_at(p):
        raise RamifiedPlaceError(f"no splitting at ramified prime {p}")
    m = p**k
    cons = order.structure_constants()
    one = [int(c) for c in order.coords_of(alg.one())]
    tr = [int(x.reduced_trace()) for x in order.basis]
    # rank-1 idempotent mod p: trd == 1 and nrd == 0 suffices
    from itertools import product as iproduct

    e0 = None
    for cvec in iproduct(range(p), repeat=4):
        if sum(c * t for c, t in zip(cvec, tr)) % p != 1 % p:
            continue
        x = order.element(cvec)
        if int(x.reduced_norm()) % p == 0:
            # exclude scalars mod p (p=2 can make 1 pass the test)
            if all((cvec[t] - one[t]) % p == 0 for t in range(4)):
                continue
            e0 = list(cvec)
            break
    if e0 is None:
        raise RamifiedPlaceError(f"no rank-1 idempotent mod {p}")
    # Hensel: e -> 3e^2 - 2e^3 doubles the precision each step
    e = [c % m for c in e0]
    prec = 1
    while prec < k:
        e2 = _mul_mod(cons, e, e, m)
        e3 = _mul_mod(cons, e2, e, m)
        e = [(3 * a - 2 * b) % m for a, b in zip(e2, e3)]
        prec *= 2
    assert _mul_mod(cons, e, e, m) == e
    # basis of the left ideal (order/p^k) * e, free of rank 2
    rows = [_mul_mod(cons, [1 if t == s else 0 for t in range(4)], e, m) for s in range(4)]
    basis_rows = _zpk_row_basis(rows, p, k)
    if len(basis_rows) != 2:
        raise RamifiedPlaceError("left ideal of idempotent is not free of rank 2")
    u, v = basis_rows
    images = []
    for s in range(4):
        bs = [1 if t == s else 0 for t in range(4)]
        xu = _mul_mod(cons, bs, u, m)
        xv = _mul_mod(cons, bs, v, m)
        au, bu = _solve_in_span(u, v, xu, p, k)
        av, bv = _solve_in_span(u, v, xv, p, k)
        images.append([[au, av], [bu, bv]])
    # surjectivity mod p: the four images span M_2(F_p)
    flat = [[img[0][0], img[0][1], img[1][0], img[1][1]] for img in images]
    if _rank_mod_p(flat, p) != 4:
        raise RamifiedPlaceError("splitting images do not span the matrix ring")
    return LocalSplitting(order, p, k, images)


def _zpk_row_basis(rows, p, k):
    """Unit-pivot echelon rows of the span of rows over Z/p^k."""
    m = p**k
    work = [list(r) for r in rows]
    basis = []
    piv_cols = []
    for col in range(4):
        piv = None
        for r, row in enumerate(work):
            if row[col] % p != 0:
                piv = r
                break
        if piv is None:
            continue
        row = work.pop(piv)
        inv = pow(row[col], -1, m)
        row = [(x * inv) % m for x in row]
        for other in work:
            f = other[col]
            if f:
                for t in range(4):
                    other[t] = (other[t] - f * row[t]) % m
        for prev in basis:
            f = prev[col]
            if f:
                for t in range(4):
                    prev[t] = (prev[t] - f * row[t]) % m
        basis.append(row)
        piv_cols.append(col)
    leftovers = [r for r in work if any(x % m for x in r)]
    if leftovers:
        raise ValueError("module is not free over Z/p^k")
    order_idx = sorted(range(len(basis)), key=lambda t: piv_cols[t])
    return [basis[t] for t in order_idx]


def _solve_in_span(u, v, target, p, k):
    """Solve a*u + b*v == target over Z/p^k (u, v unit-pivot echelon rows)."""
    m = p**k
    # u, v have unit pivots in distinct columns
    piv_u = next(c for c in range(4) if u[c] % p != 0)
    piv_v = next(c for c in range(4) if v[c] % p != 0 and c != piv_u)
    t = list(target)
    b = (t[piv_v] * pow(v[piv_v], -1, m)) % m
    t = [(x - b * y) % m for x, y in zip(t, v)]
    a = (t[piv_u] * pow(u[piv_u], -1, m)) % m
    t = [(x - a * y) % m for x, y in zip(t, u)]
    if any(t):
        raise ValueError("target not in span")
    return a, b


def _rank_mod_p(rows, p):
    work = [[x % p for x in r] for r in rows]
    rank = 0
    ncols = len(work[0])
    for col in range(ncols):
        piv = next((r for r in range(rank, len(work)) if work[r][col] % p), None)
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        inv = pow(work[rank][col], -1, p)
        work[rank] = [(x * inv) % p for x in work[rank]]
        for r in range(len(work)):
            if r != rank and work[r][col]:
                f = work[r][col]
                work[r] = [(x - f * y) % p for x, y in zip(work[r], work[rank])]
        rank += 1
    return rank


def eichler_order(order: Order, p: int) -> Order:
    """The level-p Eichler suborder (Gamma_0(p) shape at p)."""
    q = order.reduced_discriminant()
    if q % p == 0:
        raise ValueError(f"{p} divides the discriminant {q}")
    spl = local_splitting(order, p, 3 if p == 2 else 1)
    mvals = [spl.image_of_coords([1 if t == s else 0 for t in range(4)])[1][0] % p
             for s in range(4)]
    piv = next((s for s in range(4) if mvals[s] % p != 0), None)
    if piv is None:
        raise ValueError("splitting degenerate: lower-left entry vanishes on the order")
    inv = pow(mvals[piv], -1, p)
    rows = []
    for s in range(4):
        if s == piv:
            rows.append([p if t == s else 0 for t in range(4)])
        else:
            lam = (mvals[s] * inv) % p
            rows.append([1 if t == s else (-lam if t == piv else 0) for t in range(4)])
    basis = [order.element(r) for r in rows]
    sub = Order(order.algebra, basis)
    assert sub.reduced_discriminant() == q * p
    return sub


def two_sided_prime_ideal(eichler: Order, p: int, ambient: Order):
    """The two-sided ideal P of the level-p order with nrd(P) = p, P^2 = p*E.

    `ambient` is the maximal order used to build the splitting; the Eichler
    order must be contained in it.
    """
    spl = local_splitting(ambient, p, 3 if p == 2 else 1)
    rows = []
    conds = []
    for e in eichler.basis:
        img = spl.image(e)
        conds.append([img[0][0] % p, img[1][1] % p])
    # sublattice of the Eichler order where both diagonal entries vanish mod p
    lat = _congruence_sublattice(conds, p)
    basis = [eichler.element(r) for r in lat]
    alg = eichler.algebra
    return lattice_canonical_basis(alg, basis)


def _congruence_sublattice(conds, p):
    """{c in Z^4 : sum c_i * conds[i] == 0 mod p} as HNF rows."""
    ncond = len(conds[0])
    rows = []
    mat = [[conds[i][t] % p for t in range(ncond)] for i in range(4)]
    # kernel mod p, lifted: solve over F_p then add p*Z^4
    kern = []
    work = [list(r) + [1 if i == j else 0 for j in range(4)] for i, r in enumerate(mat)]
    # column echelon on the condition part via row ops over F_p
    rank = 0
    for col in range(ncond):
        piv = next((r for r in range(rank, 4) if work[r][col] % p), None)
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        inv = pow(work[rank][col], -1, p)
        work[rank] = [(x * inv) % p for x in work[rank]]
        for r in range(4):
            if r != rank and work[r][col] % p:
                f = work[r][col]
                work[r] = [(x - f * y) % p for x, y in zip(work[r], work[rank])]
        rank += 1
    for r in range(rank, 4):
        kern.append(work[r][ncond:])
    rows = [k for k in kern]
    rows += [[p if i == j else 0 for j in range(4)] for i in range(4)]
    return hnf(rows)


# ---------------------------------------------------------------------------
# right ideals and class sets


class RightIdeal:
    """A full right ideal of a fixed order."""

    def __init__(self, order: Order, basis, validate=False):
        self.order = order
        self.algebra = order.algebra
        self.basis = lattice_canonical_basis(self.algebra, basis)
        self._key = lattice_key(self.algebra, self.basis)
        self._nrd = None
        self._left_order = None
        self._theta = None
        if validate:
            self._validate()

    def _validate(self):
        for x in self.basis:
            for y in self.order.basis:
                co = self.coords_of(x * y)
                if any(c.denominator != 1 for c in co):
                    raise ValueError("not a right ideal of its order")

    def key(self):
        return self._key

    def coords_of(self, x: QuatElement):
        inv = frac_inv(_coords_matrix(self.basis))
        row = list(x.coords)
        return [sum(row[t] * inv[t][j] for t in range(4)) for j in range(4)]

    def reduced_norm(self) -> Fraction:
        if self._nrd is None:
            ratio = abs(frac_det(_coords_matrix(self.basis))
                        / frac_det(_coords_matrix(self.order.basis)))
            num = exact_isqrt(ratio.numerator)
            den = exact_isqrt(ratio.denominator)
            if num is None or den is None:
                raise ValueError("ideal norm is not a perfect square ratio")
            self._nrd = Fraction(num, den)
        return self._nrd

    def left_order(self) -> Order:
        if self._left_order is None:
            conj = lattice_conjugate(self.algebra, self.basis)
            prod = lattice_product(self.algebra, self.basis, conj)
            scaled = lattice_scale(self.algebra, prod, Fraction(1) / self.reduced_norm())
            self._left_order = Order(self.algebra, scaled, validate=False)
        return self._left_order

    def norm_gram(self):
        b = self.basis
        return [[(x * y.conjugate()).reduced_trace() / 2 for y in b] for x in b]

    def theta(self, bound=20):
        """Counts of x in I with nrd(x)/nrd(I) = m, m = 1..bound."""
        if self._theta is None:
            g = self.norm_gram()
            n = self.reduced_norm()
            counts = {}
            for v in enum_bounded(g, bound * n):
                if not any(v):
                    continue
                val = sum(Fraction(v[i]) * g[i][j] * v[j] for i in range(4) for j in range(4))
                r = val / n
                if r.denominator == 1 and 1 <= r <= bound:
                    counts[int(r)] = counts.get(int(r), 0) + 1
            self._theta = tuple(counts.get(mm, 0) for mm in range(1, bound + 1))
        return self._theta

    def __repr__(self):
        return f"RightIdeal(nrd={self.reduced_norm()})"


def unit_ideal(order: Order) -> RightIdeal:
    return RightIdeal(order, list(order.basis))


def _right_action_matrices_mod(ideal: RightIdeal, ell: int):
    mats = []
    for o in ideal.order.basis:
        rows = []
        for e in ideal.basis:
            co = ideal.coords_of(e * o)
            rows.append([int(c) % ell for c in co])
        mats.append(rows)
    return mats


def _stable_2d_subspaces(mats, ell):
    """All 2-dim row subspaces of F_ell^4 stable under right action by mats."""
    from itertools import combinations, product as iproduct

    found = []
    seen = set()
    for pivots in combinations(range(4), 2):
        free_cols = [c for c in range(4) if c not in pivots]
        # RREF rows: identity at pivot columns, free entries elsewhere after
        # the pivot
        free_positions = []
        for r, pcol in enumerate(pivots):
            for c in free_cols:
                if c > pcol:
                    free_positions.append((r, c))
        for vals in iproduct(range(ell), repeat=len(free_positions)):
            rows = [[0] * 4 for _ in range(2)]
            for r, pcol in enumerate(pivots):
                rows[r][pcol] = 1
            for (r, c), v in zip(free_positions, vals):
                rows[r][c] = v
            key = tuple(tuple(r) for r in rows)
            if key in seen:
                continue
            seen.add(key)
            if _is_stable(rows, mats, ell):
                found.append(rows)
    return found


def _is_stable(rows, mats, ell):
    for mat in mats:
        for row in rows:
            img = [sum(row[t] * mat[t][c] for t in range(4)) % ell for c in range(4)]
            if not _in_rowspan(img, rows, ell):
                return False
    return True


def _in_rowspan(vec, rows, ell):
    v = [x % ell for x in vec]
    for row in rows:
        piv = next((c for c in range(4) if row[c] % ell), None)
        if piv is None:
            continue
        if v[piv]:
            f = (v[piv] * pow(row[piv], -1, ell)) % ell
            v = [(x - f * y) % ell for x, y in zip(v, row)]
    return not any(v)


def neighbors(ideal: RightIdeal, ell: int):
    """The ell+1 right-stable sublattices of relative norm ell."""
    mats = _right_action_matrices_mod(ideal, ell)
    subs = _stable_2d_subspaces(mats, ell)
    if len(subs) != ell + 1:
        raise ValueError(f"expected {ell + 1} neighbors, found {len(subs)}")
    out = []
    for rows in subs:
        gens = [x.scale(ell) for x in ideal.basis]
        for row in rows:
            e = self_combination(ideal, row)
            gens.append(e)
        out.append(RightIdeal(ideal.order, gens))
    return out


def self_combination(ideal: RightIdeal, coeffs):
    out = ideal.basis[0].scale(coeffs[0])
    for c, e in zip(coeffs[1:], ideal.basis[1:]):
        out = out + e.scale(c)
    return out


def isomorphism(i1: RightIdeal, i2: RightIdeal):
    """An element b with i2 == b * i1, or None.

    Searches the product lattice i2 * conj(i1) / nrd(i1) for an element of
    reduced norm nrd(i2)/nrd(i1); such an element exists iff the ideals are
    in the same class (the minimum of the norm form on the product lattice).
    """
    if i1.key() == i2.key():
        return i1.algebra.one()
    if i1.theta() != i2.theta():
        return None
    alg = i1.algebra
    conj = lattice_conjugate(alg, i1.basis)
    prod = lattice_product(alg, i2.basis, conj)
    m = lattice_scale(alg, prod, Fraction(1) / i1.reduced_norm())
    gram = [[(x * y.conjugate()).reduced_trace() / 2 for y in m] for x in m]
    target = i2.reduced_norm() / i1.reduced_norm()
    for v in vectors_with_value(gram, target):
        b = m[0].scale(v[0])
        for c, e in zip(v[1:], m[1:]):
            b = b + e.scale(c)
        cand = lattice_canonical_basis(alg, [b * x for x in i1.basis])
        if lattice_key(alg, cand) == i2.key():
            return b
    return None


class ClassSet:
    """Representatives and unit weights of the right ideal classes."""

    def __init__(self, order: Order, ideals, weights):
        self.order = order
        self.ideals = list(ideals)
        self.weights = list(weights)

    def __len__(self):
        return len(self.ideals)

    def left_orders(self):
        return [ideal.left_order() for ideal in self.ideals]

    def mass(self) -> Fraction:
        return sum((Fraction(1, w) for w in self.weights), Fraction(0))

    def classify(self, ideal: RightIdeal):
        """Index of the class of the given right ideal (must belong to one)."""
        for idx, rep in enumerate(self.ideals):
            if isomorphism(rep, ideal) is not None:
                return idx
        raise ValueError("ideal does not belong to any enumerated class")

    def classify_with_witness(self, ideal: RightIdeal):
        for idx, rep in enumerate(self.ideals):
            b = isomorphism(rep, ideal)
            if b is not None:
                return idx, b
        raise ValueError("ideal does not belong to any enumerated class")


def right_ideal_classes(order: Order, ell: int | None = None) -> ClassSet:
    """Complete, irredundant right ideal class representatives by l-neighbor BFS."""
    if not order.algebra.is_definite():
        raise ValueError("class set is infinite for indefinite algebras")
    d = order.reduced_discriminant()
    if ell is None:
        ell = 2
        while d % ell == 0:
            ell += 1
            while not is_prime(ell):
                ell += 1
    if d % ell == 0 or not is_prime(ell):
        raise ValueError("neighbor prime must be prime to the discriminant")
    start = unit_ideal(order)
    reps = [start]
    queue = [start]
    seen_keys = {start.key()}
    while queue:
        cur = queue.pop(0)
        for nb in neighbors(cur, ell):
            if nb.key() in seen_keys:
                continue
            seen_keys.add(nb.key())
            if all(isomorphism(rep, nb) is None for rep in reps):
                reps.append(nb)
                queue.append(nb)
    reps.sort(key=lambda ideal: (ideal.reduced_norm(), ideal.key()))
    weights = [unit_weight(ideal.left_order()) for ideal in reps]
    return ClassSet(order, reps, weights)


def mass(classes: ClassSet) -> Fraction:
    return classes.mass()


def brandt_matrix(classes: ClassSet, n: int):
    """B(n)_{ij} = number of relative-norm-n subideals of I_i in the class of I_j."""
    d = classes.order.reduced_discriminant()
    if n < 1:
        raise ValueError("n must be positive")
    if gcd(n, d) != 1:
        raise ValueError(f"bad level: gcd({n}, {d}) != 1")
    alg = classes.order.algebra
    h = len(classes)
    weights = classes.weights
    out = [[0] * h for _ in range(h)]
    for i in range(h):
        for j in range(h):
            ii, jj = classes.ideals[i], classes.ideals[j]
            conj = lattice_conjugate(alg, jj.basis)
            prod = lattice_product(alg, ii.basis, conj)
            m = lattice_scale(alg, prod, Fraction(1) / jj.reduced_norm())
            gram = [[(x * y.conjugate()).reduced_trace() / 2 for y in m] for x in m]
            target = Fraction(n) * ii.reduced_norm() / jj.reduced_norm()
            r = len(vectors_with_value(gram, target))
            if r % (2 * weights[j]) != 0:
                raise ArithmeticError("Brandt count not divisible by unit order")
            out[i][j] = r // (2 * weights[j])
    return out
