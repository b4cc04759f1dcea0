from fractions import Fraction

import pytest

from cmlab.intlat import mat_mul
from cmlab.lattices import (Order, RamifiedPlaceError, algebra_for_prime_discriminant,
                            brandt_matrix, eichler_order, lattice_index, local_splitting,
                            mass, maximal_order, neighbors, right_ideal_classes,
                            unit_ideal, unit_weight, _enlarge_at)
from cmlab.qalg import QuaternionAlgebra

from oracles import eichler_mass


def test_hurwitz_type_maximal_order(max_orders):
    o = max_orders(2)
    assert o.reduced_discriminant() == 2
    assert o.algebra == QuaternionAlgebra(-1, -1)
    omega = o.algebra.element(Fraction(1, 2), Fraction(1, 2), Fraction(1, 2), Fraction(1, 2))
    assert o.contains(omega)
    assert unit_weight(o) == 12  # 24 units


def test_disc3_maximal_order(max_orders):
    o = max_orders(3)
    assert o.reduced_discriminant() == 3
    alg = o.algebra
    assert alg == QuaternionAlgebra(-1, -3)
    assert o.contains(alg.element(Fraction(1, 2), 0, Fraction(1, 2), 0))  # (1+j)/2
    assert o.contains(alg.element(0, Fraction(1, 2), 0, Fraction(1, 2)))  # (i+k)/2
    assert unit_weight(o) == 6


def test_disc11_maximal_order(max_orders):
    o = max_orders(11)
    assert o.reduced_discriminant() == 11
    # closure and integrality are enforced by the Order validator
    Order(o.algebra, o.basis)


def test_maximal_order_rejects_bad_discriminant():
    assert QuaternionAlgebra(-3, -10).discriminant() == 30
    with pytest.raises(ValueError, match="unsupported discriminant"):
        maximal_order(QuaternionAlgebra(-3, -10))
    with pytest.raises(ValueError):
        maximal_order(QuaternionAlgebra(1, -1))  # indefinite


def test_local_splitting_relations(max_orders):
    o = max_orders(2)
    alg = o.algebra
    for p, k in [(3, 2), (5, 4), (7, 1), (2, 3)]:
        if alg.is_ramified_at(p):
            continue
        spl = local_splitting(o, p, k)
        m = p**k
        mi, mj = spl.generator_images()
        a = int(alg.a) % m
        b = int(alg.b) % m
        assert _mat_eq(mat_mul(mi, mi), _scal(a, m), m)
        assert _mat_eq(mat_mul(mj, mj), _scal(b, m), m)
        anti = _mat_add(mat_mul(mi, mj), mat_mul(mj, mi), m)
        assert _mat_eq(anti, _scal(0, m), m)


def _scal(s, m):
    return [[s % m, 0], [0, s % m]]


def _mat_eq(x, y, m):
    return all((x[i][j] - y[i][j]) % m == 0 for i in range(2) for j in range(2))


def _mat_add(x, y, m):
    return [[(x[i][j] + y[i][j]) % m for j in range(2)] for i in range(2)]


def test_local_splitting_exists_mod_5_4(max_orders):
    spl = local_splitting(max_orders(2), 5, 4)
    assert spl.modulus == 625


def test_local_splitting_precision_coherence(max_orders):
    o = max_orders(2)
    s4 = local_splitting(o, 5, 4)
    s6 = local_splitting(o, 5, 6)
    m4 = 5**4
    for img6, img4 in zip(s6.basis_images, s4.basis_images):
        assert all((img6[r][c] - img4[r][c]) % m4 == 0 for r in range(2) for c in range(2))


def test_local_splitting_refuses_ramified(max_orders):
    with pytest.raises(RamifiedPlaceError):
        local_splitting(max_orders(2), 2, 3)


def test_eichler_order_basics(max_orders):
    o = max_orders(2)
    e = eichler_order(o, 3)
    assert e.reduced_discriminant() == 6
    assert e.level == 3
    # lattice index: d(E) = d(O) * [O : E] forces index p (not p^2)
    assert lattice_index(o.algebra, o.basis, e.basis) == 3


def test_eichler_order_rejects_ramified(max_orders):
    with pytest.raises(ValueError):
        eichler_order(max_orders(2), 2)


def test_eichler_level_saturated(max_orders):
    # no strictly larger order of level p contains the Eichler order: any
    # enlargement inside (1/3)E drops the discriminant below 6
    o = max_orders(2)
    e = eichler_order(o, 3)
    bigger = _enlarge_at(e, 3)
    if bigger is not None:
        assert bigger.reduced_discriminant() < 6
        assert bigger.reduced_discriminant() % 3 != 0  # level gone, not level 3


@pytest.mark.parametrize("disc,h,weights", [
    (2, 1, [12]),
    (3, 1, [6]),
    (11, 2, [2, 3]),
])
def test_class_sets_level_one(class_sets, disc, h, weights):
    cs = class_sets(disc)
    assert len(cs) == h
    assert sorted(cs.weights) == sorted(weights)
    assert cs.mass() == eichler_mass(disc)


@pytest.mark.parametrize("disc", [2, 3, 5, 7, 11, 13])
def test_mass_formula_level_one(class_sets, disc):
    assert class_sets(disc).mass() == eichler_mass(disc)


@pytest.mark.parametrize("disc,level", [(2, 3), (2, 5), (3, 5), (11, 2)])
def test_mass_formula_level_p(class_sets, disc, level):
    assert class_sets(disc, level).mass() == eichler_mass(disc, level)


def test_left_orders_share_discriminant(class_sets):
    cs = class_sets(11)
    for ideal in cs.ideals:
        assert ideal.left_order().reduced_discriminant() == 11


def test_neighbor_prime_independence(max_orders):
    o = max_orders(11)
    cs2 = right_ideal_classes(o, ell=2)
    cs3 = right_ideal_classes(o, ell=3)
    assert len(cs2) == len(cs3)
    assert sorted(cs2.weights) == sorted(cs3.weights)


def test_neighbors_count_and_norm(class_sets):
    cs = class_sets(11)
    i0 = unit_ideal(cs.order)
    nb = neighbors(i0, 2)
    assert len(nb) == 3
    for sub in nb:
        assert sub.reduced_norm() == 2 * i0.reduced_norm()


def test_brandt_identity_matrix(class_sets):
    cs = class_sets(11)
    b1 = brandt_matrix(cs, 1)
    assert b1 == [[1 if i == j else 0 for j in range(len(cs))] for i in range(len(cs))]


@pytest.mark.parametrize("ell", [2, 3, 5, 7])
def test_brandt_row_sums(class_sets, ell):
    cs = class_sets(11)
    b = brandt_matrix(cs, ell)
    for row in b:
        assert sum(row) == ell + 1


@pytest.mark.parametrize("n", [2, 3])
def test_brandt_weighted_symmetry(class_sets, n):
    cs = class_sets(11)
    b = brandt_matrix(cs, n)
    w = cs.weights
    for i in range(len(cs)):
        for j in range(len(cs)):
            assert w[j] * b[i][j] == w[i] * b[j][i]


def test_brandt_multiplicativity(class_sets):
    cs = class_sets(11)
    b2, b3, b5 = (brandt_matrix(cs, n) for n in (2, 3, 5))
    b6 = brandt_matrix(cs, 6)
    assert mat_mul(b2, b3) == b6
    b10, b15 = brandt_matrix(cs, 10), brandt_matrix(cs, 15)
    assert mat_mul(b2, b5) == b10
    assert mat_mul(b3, b5) == b15
    # pairwise commutation
    assert mat_mul(b2, b3) == mat_mul(b3, b2)
    assert mat_mul(b2, b5) == mat_mul(b5, b2)
    assert mat_mul(b3, b5) == mat_mul(b5, b3)


def test_brandt_bad_level(class_sets):
    cs = class_sets(11)
    with pytest.raises(ValueError, match="bad level"):
        brandt_matrix(cs, 11)
    csl = class_sets(2, 3)
    with pytest.raises(ValueError, match="bad level"):
        brandt_matrix(csl, 3)


def test_mass_trivial_case(class_sets):
    cs = class_sets(13)
    assert cs.weights == [1]
    assert mass(cs) == 1


def test_unit_weight_enumeration(max_orders):
    assert len(max_orders(2).unit_elements()) == 24
    assert len(max_orders(3).unit_elements()) == 12
    assert len(max_orders(13).unit_elements()) == 2  # only +-1


def test_indefinite_class_set_rejected():
    alg = QuaternionAlgebra(1, 3)
    order = Order(alg, list(alg.basis()))
    with pytest.raises(ValueError, match="definite"):
        right_ideal_classes(order)
