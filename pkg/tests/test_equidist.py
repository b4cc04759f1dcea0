from fractions import Fraction

import pytest

from cmlab.cmfields import class_number, imag_quad_order
from cmlab.equidist import (ConfigError, EquidistReport, run_experiment,
                            simultaneous_report, tv_distance, _level_row)
from cmlab.specialfiber import WeightedMeasure, build_model, measures

_reports = {}


def report(*key, **kw):
    if key not in _reports:
        _reports[key] = run_experiment(*key, **kw)
    return _reports[key]


def test_tv_distance_basics():
    mu = WeightedMeasure((0, 1), (Fraction(1, 2), Fraction(1, 2)))
    assert tv_distance(mu, mu) == 0
    a = WeightedMeasure((0, 1), (Fraction(1), Fraction(0)))
    b = WeightedMeasure((0, 1), (Fraction(0), Fraction(1)))
    assert tv_distance(a, b) == 1
    c = WeightedMeasure((0, 1), (Fraction(1, 4), Fraction(3, 4)))
    assert tv_distance(mu, c) == Fraction(1, 4)
    with pytest.raises(ValueError):
        tv_distance(mu, WeightedMeasure((0, 2), (Fraction(1), Fraction(0))))


def test_flagship_run_singular():
    rep = report(3, 2, -3, 1, 3, "singular")
    assert [row.conductor for row in rep.rows] == [1, 3, 9, 27]
    for row in rep.rows:
        assert not row.empty
        assert sum(row.counts, Fraction(0)) == row.class_number  # fiber conservation
        assert row.class_number == class_number(imag_quad_order(-3, row.conductor))
    # single-class target: both TV distances vanish
    assert all(row.tv_weight == 0 and row.tv_inverse == 0 for row in rep.rows)
    assert rep.verdict == "tie"


def test_inert_components_run():
    rep = report(5, 2, -3, 1, 2, "components")
    # supported on both parity copies
    for row in rep.rows:
        assert not row.empty
        h = len(rep.support_labels) // 2
        parity0 = row.counts[:h]
        parity1 = row.counts[h:]
        assert sum(parity0, Fraction(0)) > 0 and sum(parity1, Fraction(0)) > 0
        assert sum(row.counts, Fraction(0)) == row.class_number


def test_multiclass_convergence_to_inverse_weight():
    rep = report(3, 11, -3, 1, 3, "singular")
    assert len(rep.support_labels) == 4
    tvs = [row.tv_inverse for row in rep.rows]
    assert tvs[-1] < tvs[0]
    assert rep.verdict == "inverse-weight"
    for row in rep.rows:
        assert sum(row.counts, Fraction(0)) == row.class_number


def test_nu_invariant_under_class_permutation():
    # recompute with the class set order reversed: counts permute along
    from cmlab.embeddings import gross_points
    from cmlab.lattices import ClassSet

    model = build_model(3, 11, -3)
    cs = model.singular
    rev = ClassSet(cs.order, list(reversed(cs.ideals)), list(reversed(cs.weights)))
    cm = imag_quad_order(-3, 9)
    a = gross_points(cs, cm)
    b = gross_points(rev, cm)
    assert list(reversed(a.counts)) == b.counts
    assert list(reversed(a.plain_counts)) == b.plain_counts


def test_empty_fiber_row_flagged():
    # bypass the gates: a conductor divisible by q kills all local embeddings
    model = build_model(3, 2, -3)
    mu_sw, mu_si, _, _ = measures(model)
    support = tuple(range(len(model.singular)))
    row = _level_row(model, 0, imag_quad_order(-3, 2), "singular", support, mu_sw, mu_si)
    assert row.empty
    assert row.nu is None and row.tv_weight is None


def test_validation_gates():
    with pytest.raises(ConfigError, match="singular"):
        run_experiment(5, 2, -3, target="singular")  # 5 inert: wrong target
    with pytest.raises(ConfigError, match="components"):
        run_experiment(3, 2, -3, target="components")  # 3 ramified: wrong target
    with pytest.raises(ConfigError, match="splits"):
        run_experiment(5, 2, -11, target="singular")
    with pytest.raises(ConfigError, match="odd"):
        run_experiment(2, 11, -4, target="singular")
    with pytest.raises(ConfigError, match="non-split"):
        run_experiment(3, 7, -3, target="singular")  # 7 splits in Q(sqrt -3)
    with pytest.raises(ConfigError, match="conductor"):
        run_experiment(3, 2, -3, c0=2, target="singular")  # q | c0
    with pytest.raises(ConfigError):
        run_experiment(3, 3, -3, target="singular")  # p == q


def test_deterministic_reruns():
    a = run_experiment(3, 2, -3, n_max=2, target="singular")
    b = run_experiment(3, 2, -3, n_max=2, target="singular")
    from cmlab.ioformats import report_json_dict
    import json

    assert json.dumps(report_json_dict(a)) == json.dumps(report_json_dict(b))


def test_jobs_parallel_matches_serial():
    a = run_experiment(3, 2, -3, n_max=2, target="singular", jobs=1)
    b = run_experiment(3, 2, -3, n_max=2, target="singular", jobs=3)
    from cmlab.ioformats import report_json_dict
    import json

    assert json.dumps(report_json_dict(a)) == json.dumps(report_json_dict(b))


def test_simultaneous_singleton_matches_single():
    prod = simultaneous_report([dict(p=3, q=2, d_K=-3, n_max=2, target="singular")])
    single = report(3, 2, -3, 1, 2, "singular")
    assert len(prod.reports) == 1
    for (n, nu, tw, ti), row in zip(prod.product_rows, single.rows):
        assert tw == row.tv_weight and ti == row.tv_inverse


def test_simultaneous_product_properties():
    prod = simultaneous_report([
        dict(p=3, q=2, d_K=-3, n_max=2, target="singular"),
        dict(p=5, q=2, d_K=-20, n_max=2, target="singular"),
    ])
    # two single-class targets: product TV = 0
    assert all(tw == 0 and ti == 0 for (_, nu, tw, ti) in prod.product_rows if nu is not None)
    # product TV <= sum of marginal TVs, on computed data
    prod2 = simultaneous_report([
        dict(p=3, q=11, d_K=-3, n_max=2, target="singular"),
        dict(p=5, q=2, d_K=-20, n_max=2, target="singular"),
    ])
    for (n, nu, tw, ti) in prod2.product_rows:
        if nu is None:
            continue
        marg_w = sum(r.rows[n].tv_weight for r in prod2.reports)
        marg_i = sum(r.rows[n].tv_inverse for r in prod2.reports)
        assert tw <= marg_w
        assert ti <= marg_i


def test_simultaneous_distinct_primes_required():
    with pytest.raises(ConfigError, match="distinct"):
        simultaneous_report([
            dict(p=3, q=2, d_K=-3, n_max=1, target="singular"),
            dict(p=3, q=11, d_K=-3, n_max=1, target="singular"),
        ])
