"""Optimal embeddings of imaginary quadratic orders and Gross point counts.

A witness for O_c inside an order R is an element x in R whose reduced trace
and norm match the generator w_D = (D + sqrt(D))/2 of O_c (D = c^2 d_K) and
such that Q(x) meets R exactly in Z + Zx.  Witnesses are counted modulo
conjugation by the finite unit group of R.

Totals over a class set obey the Eichler local-global relation
sum_i m_i = h(O_c) * prod_l m_l.  The local factor is 2 at the finite
ramified prime q of the algebra when q is inert in K, and 2 at a level prime
p dividing the conductor; Gross point counts therefore carry the matching
orientation normalization (pairing orbits under x -> tr(x) - x when q is
inert, and halving across the level-p two-sided-ideal involution when p | c)
so that the full Gross set of conductor c has exactly h(O_c) points.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from .arith import kronecker
from .cmfields import ImagQuadOrder, class_number
from .intlat import hnf_with_transform, int_kernel, snf_2xn
from .lattices import (ClassSet, Order, RightIdeal, lattice_canonical_basis,
                       lattice_product, two_sided_prime_ideal)
from .qalg import QuatElement
from .quadform import ternary_value_solutions, vectors_with_value


def witness_coords(order: Order, cm: ImagQuadOrder):
    """Order coordinates (int 4-tuples) of all x with the (tr, nr) of w_D."""
    D, N = cm.generator_trace_norm()
    tr = [int(x.reduced_trace()) for x in order.basis]
    g = gcd(gcd(gcd(abs(tr[0]), abs(tr[1])), abs(tr[2])), abs(tr[3]))
    if g == 0 or D % g:
        return []
    h, u = hnf_with_transform([[t] for t in tr])
    part = [(D // g) * x for x in u[0]]
    kern = int_kernel([[t] for t in tr])
    assert len(kern) == 3
    gram = order.norm_gram()
    # N == Q(part + y * kern): assemble the ternary quadratic in y
    A = [[_bilinear(gram, kern[r], kern[s]) for s in range(3)] for r in range(3)]
    b = [2 * _bilinear(gram, kern[r], part) for r in range(3)]
    c0 = _bilinear(gram, part, part)
    den = lcm(*[x.denominator for row in A for x in row],
              *[x.denominator for x in b], c0.denominator)
    Ai = [[int(x * den) for x in row] for row in A]
    bi = [int(x * den) for x in b]
    ci = int(c0 * den)
    target = Fraction(N) * den
    if target.denominator != 1:
        return []
    sols = ternary_value_solutions(Ai, bi, ci, int(target))
    return [tuple(part[t] + y[0] * kern[0][t] + y[1] * kern[1][t] + y[2] * kern[2][t]
                  for t in range(4))
            for y in sols]


def embedding_witnesses(order: Order, cm: ImagQuadOrder):
    """All x in the order with the (trace, norm) of the generator of O_c."""
    return [order.element(c) for c in witness_coords(order, cm)]


def _bilinear(gram, v, w):
    return sum(Fraction(v[i]) * gram[i][j] * w[j] for i in range(4) for j in range(4))


def _one_coords(order: Order):
    return [int(c) for c in order.coords_of(order.algebra.one())]


def _coords_optimal(one, c) -> bool:
    d1, d2 = snf_2xn([one, list(c)])
    return d1 == 1 and d2 == 1


def is_optimal_witness(order: Order, x: QuatElement) -> bool:
    """True iff Q(x) meets the order exactly in Z + Zx.

    Z + Zx is saturated in the order iff the 2x4 integer coordinate matrix of
    (1, x) has coprime 2x2 minors (its Smith form is (1, 1)); that is the
    rank-2 lattice-intersection condition Q(x) cap R = Z + Zx.
    """
    u = _one_coords(order)
    c = [int(v) for v in order.coords_of(x)]
    return _coords_optimal(u, c)


def optimal_embeddings(order: Order, cm: ImagQuadOrder):
    """Unit-conjugacy class representatives of optimal witnesses.

    Representatives are the lexicographically minimal coordinate vectors of
    their orbits, sorted.
    """
    if cm.discriminant >= 0:
        raise ValueError("not imaginary quadratic")
    one = _one_coords(order)
    wits = [c for c in witness_coords(order, cm) if _coords_optimal(one, c)]
    mats = _conjugation_matrices(order)
    orbits = {_orbit_canonical(mats, c) for c in wits}
    return [order.element(c) for c in sorted(orbits)]


def _conjugation_matrices(order: Order):
    """Integer matrices of x -> u^-1 x u on order coordinates, one per unit pair."""
    mats = []
    seen = set()
    for u in order.unit_elements():
        key = min(u.coords, tuple(-c for c in u.coords))
        if key in seen:
            continue
        seen.add(key)
        uinv = u.conjugate()  # nrd(u) = 1
        rows = []
        for e in order.basis:
            co = order.coords_of(uinv * e * u)
            rows.append([int(cc) for cc in co])
        mats.append(rows)
    return mats


def _orbit_canonical(mats, coords):
    best = None
    for m in mats:
        img = (coords[0] * m[0][0] + coords[1] * m[1][0] + coords[2] * m[2][0] + coords[3] * m[3][0],
               coords[0] * m[0][1] + coords[1] * m[1][1] + coords[2] * m[2][1] + coords[3] * m[3][1],
               coords[0] * m[0][2] + coords[1] * m[1][2] + coords[2] * m[2][2] + coords[3] * m[3][2],
               coords[0] * m[0][3] + coords[1] * m[1][3] + coords[2] * m[2][3] + coords[3] * m[3][3])
        if best is None or img < best:
            best = img
    return best


@dataclass
class GrossPointCount:
    """Per-class Gross point counts for one conductor."""

    cm: ImagQuadOrder
    counts: list  # Fractions (integers in ordinary configurations)
    plain_counts: list  # unit-orbit counts before orientation normalization

    @property
    def total(self) -> Fraction:
        return sum(self.counts, Fraction(0))

    @property
    def plain_total(self) -> int:
        return sum(self.plain_counts)


def gross_points(classes: ClassSet, cm: ImagQuadOrder, oriented: bool = True) -> GrossPointCount:
    """Count Gross points of conductor c on each ideal class.

    With oriented=True (default) the counts are normalized so that the total
    is h(O_c) whenever all non-orientation local factors are 1; plain
    unit-orbit counts are kept alongside.
    """
    alg = classes.order.algebra
    ram = alg.finite_ramified_primes
    assert len(ram) == 1, "expected a single finite ramified prime"
    q = ram[0]
    level = classes.order.level
    plain = []
    adjusted = []
    q_inert = cm.splitting_at(q) == -1
    level_divides = level > 1 and cm.conductor % level == 0
    for left in classes.left_orders():
        one = _one_coords(left)
        wits = [c for c in witness_coords(left, cm) if _coords_optimal(one, c)]
        mats = _conjugation_matrices(left)
        orbits = {_orbit_canonical(mats, c) for c in wits}
        plain.append(len(orbits))
        if not oriented:
            adjusted.append(Fraction(len(orbits)))
            continue
        m = Fraction(len(orbits))
        if q_inert:
            # conjugation x -> tr - x flips the residue orientation at q;
            # it must act freely on orbits
            _check_free_conjugation_pairing(one, mats, orbits, cm)
            m /= 2
        if level_divides:
            m /= 2
        adjusted.append(m)
    return GrossPointCount(cm, adjusted, plain)


def _check_free_conjugation_pairing(one, mats, orbits, cm: ImagQuadOrder):
    D = cm.discriminant
    for rep in orbits:
        conj = [D * one[t] - rep[t] for t in range(4)]
        if _orbit_canonical(mats, conj) == rep:
            raise ArithmeticError("conjugation pairing is not free; orientation count invalid")


def atkin_lehner_pairing(classes: ClassSet, maximal: Order, p: int):
    """The involution induced on ideal classes by the two-sided level-p ideal.

    Returns (sigma, witnesses) with sigma a list of class indices and
    witnesses[i] an element b with I_i * P = b * I_sigma(i).
    """
    alg = classes.order.algebra
    pbasis = two_sided_prime_ideal(classes.order, p, maximal)
    sigma = []
    wits = []
    for ideal in classes.ideals:
        prod = lattice_product(alg, ideal.basis, pbasis)
        moved = RightIdeal(classes.order, prod)
        idx, b = classes.classify_with_witness(moved)
        sigma.append(idx)
        wits.append(b)
    return sigma, wits


class _LocalOrder:
    """The order reduced mod ell^k, with multiplication and conjugation."""

    def __init__(self, order: Order, ell: int, k: int):
        from .lattices import _mul_mod

        self.order = order
        self.ell = ell
        self.k = k
        self.m = ell**k
        self.cons = order.structure_constants()
        self._mul_mod = _mul_mod
        self.one = tuple(int(c) % self.m for c in order.coords_of(order.algebra.one()))
        # conjugation is integral on any order: bar(x) = tr(x) - x
        self.conj_mat = []
        for e in order.basis:
            co = order.coords_of(e.conjugate())
            self.conj_mat.append([int(c) % self.m for c in co])
        self.tr = [int(x.reduced_trace()) for x in order.basis]
        self.gram = order.norm_gram()
        den = lcm(*[g.denominator for row in self.gram for g in row])
        self.gram_den = den
        self.gram_int = [[int(g * den) for g in row] for row in self.gram]

    def mul(self, x, y):
        return tuple(self._mul_mod(self.cons, list(x), list(y), self.m))

    def conj(self, x):
        return tuple(sum(x[t] * self.conj_mat[t][s] for t in range(4)) % self.m
                     for s in range(4))

    def nrd_matches(self, x, target):
        """nrd(x) == target mod ell^k, by integer arithmetic."""
        g = self.gram_int
        val = sum(x[i] * g[i][j] * x[j] for i in range(4) for j in range(4))
        return (val - target * self.gram_den) % (self.m * self.gram_den) == 0

    def nrd(self, x):
        g = self.gram_int
        val = sum(x[i] * g[i][j] * x[j] for i in range(4) for j in range(4))
        assert val % self.gram_den == 0
        return (val // self.gram_den) % self.m

    def inv(self, x):
        ninv = pow(self.nrd(x), -1, self.m)
        return tuple((c * ninv) % self.m for c in self.conj(x))

    def conjugate_by(self, g, x):
        return self.mul(self.mul(self.inv(g), x), g)


def local_embedding_count(order: Order, cm: ImagQuadOrder, ell: int, k: int) -> int:
    """Brute-force optimal embedding count into the order localized mod ell^k.

    Enumerates residues with the (trace, norm) of the generator, filters by
    saturation at ell when ell divides the conductor, and counts orbits under
    conjugation by the unit group of O/ell^k.  Used as an independent oracle
    for the local factors in the Eichler relation.
    """
    from itertools import product as iproduct

    loc = _LocalOrder(order, ell, k)
    m = loc.m
    D, N = cm.generator_trace_norm()
    tr = loc.tr
    h, u = hnf_with_transform([[t] for t in tr])
    g = h[0][0]
    if g == 0:
        return 0
    gg = gcd(g, m)
    if D % gg:
        return 0
    s = (D // gg) * pow(g // gg, -1, m // gg) % (m // gg)
    part = [s * x % m for x in u[0]]
    kern = [row[:] for row in int_kernel([[t] for t in tr])]
    kern.append([(m // gg) * x % m for x in u[0]])  # extra mod-m kernel generator
    extra_range = gg
    sols = []
    for y3 in range(extra_range):
        for y in iproduct(range(m), repeat=3):
            c = tuple((part[t] + y[0] * kern[0][t] + y[1] * kern[1][t]
                       + y[2] * kern[2][t] + y3 * kern[3][t]) % m for t in range(4))
            if not loc.nrd_matches(c, N):
                continue
            if cm.conductor % ell == 0 and not _saturated_mod(loc.one, c, ell):
                continue
            sols.append(c)
    sols = sorted(set(sols))
    # keep only residues that extend two more levels: mod-l^k artifacts of
    # non-liftable solutions would otherwise inflate the orbit count
    levels = {k + 1: _LocalOrder(order, ell, k + 1), k + 2: _LocalOrder(order, ell, k + 2)}
    sols = [c for c in sols if _extends(levels, cm, c, ell, k, depth=2)]
    if not sols:
        return 0
    gens = _unit_generators_mod(loc)
    return _count_orbits(loc, sols, gens)


def _extends(levels, cm, c, ell, k, depth):
    """True iff the residue c mod ell^k extends `depth` more levels."""
    from itertools import product as iproduct

    if depth == 0:
        return True
    loc2 = levels[k + 1]
    m_prev = ell**k
    m2 = loc2.m
    D, N = cm.generator_trace_norm()
    tr = loc2.tr
    for d in iproduct(range(ell), repeat=4):
        c2 = tuple((c[t] + m_prev * d[t]) % m2 for t in range(4))
        if sum(c2[t] * tr[t] for t in range(4)) % m2 != D % m2:
            continue
        if not loc2.nrd_matches(c2, N):
            continue
        if _extends(levels, cm, c2, ell, k + 1, depth - 1):
            return True
    return False


def _saturated_mod(one, c, ell):
    for i in range(4):
        for j in range(i + 1, 4):
            if (one[i] * c[j] - one[j] * c[i]) % ell:
                return True
    return False


def _unit_generators_mod(loc: _LocalOrder):
    from itertools import product as iproduct

    gens = []
    for c in iproduct(range(loc.ell), repeat=4):
        if loc.nrd(c) % loc.ell:
            gens.append(tuple(x % loc.m for x in c))
    for mm in range(1, loc.k):
        for i in range(4):
            g = tuple((loc.one[t] + (loc.ell**mm if t == i else 0)) % loc.m
                      for t in range(4))
            if loc.nrd(g) % loc.ell:
                gens.append(g)
    return gens


def _count_orbits(loc: _LocalOrder, sols, gens):
    import collections

    sol_set = set(sols)
    seen = set()
    orbits = 0
    for start in sols:
        if start in seen:
            continue
        orbits += 1
        dq = collections.deque([start])
        seen.add(start)
        while dq:
            cur = dq.popleft()
            for g in gens:
                img = loc.conjugate_by(g, cur)
                if img in sol_set and img not in seen:
                    seen.add(img)
                    dq.append(img)
    return orbits
