"""The conductor-tower equidistribution experiment.

For a fixed imaginary quadratic field and reduction prime p, the harness
drives the conductor c = c0 * p^n upward, computes the Gross points of each
conductor on the target set (singular points for p ramified in the field,
parity-doubled irreducible components for p inert), forms the empirical
distribution, and measures total variation distance against both candidate
limit measures: masses proportional to the weights w_i, and masses
proportional to 1/w_i.  All arithmetic is exact until rendering; which
normalization wins is reported from the data.

The conductor tower stands in for the general escape-to-infinity of the
limit statement; the tower is the natural cofinal family once only the
p-adic valuation of the conductor varies.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .arith import fundamental_discriminant, is_prime, kronecker
from .cmfields import ImagQuadOrder, class_number, conductor_tower
from .embeddings import gross_points
from .specialfiber import SpecialFiberModel, WeightedMeasure, build_model, measures


class ConfigError(ValueError):
    pass


def tv_distance(nu: WeightedMeasure, mu: WeightedMeasure) -> Fraction:
    """Total variation distance (1/2) sum |nu_i - mu_i|, exact."""
    if nu.labels != mu.labels:
        raise ValueError("measures live on different supports")
    return sum((abs(a - b) for a, b in zip(nu.masses, mu.masses)), Fraction(0)) / 2


@dataclass
class LevelRow:
    n: int
    conductor: int
    class_number: int
    counts: list  # Fractions, one per target point
    empty: bool
    nu: WeightedMeasure | None
    tv_weight: Fraction | None
    tv_inverse: Fraction | None


@dataclass
class EquidistReport:
    p: int
    q: int
    d_K: int
    c0: int
    n_max: int
    target: str  # "singular" | "components"
    support_labels: tuple
    weights: list
    mu_weight: WeightedMeasure
    mu_inverse: WeightedMeasure
    rows: list
    verdict: str = ""

    def final_tvs(self):
        for row in reversed(self.rows):
            if not row.empty:
                return row.tv_weight, row.tv_inverse
        return None, None


def _validate_config(p, q, d_K, c0, n_max, target):
    if target not in ("singular", "components"):
        raise ConfigError(f"unknown target {target!r}")
    if not is_prime(p) or not is_prime(q):
        raise ConfigError("p and q must be prime")
    if p == 2:
        raise ConfigError("the reduction prime must be odd (local structures at 2 are wild)")
    if p == q:
        raise ConfigError("p must differ from the auxiliary ramified prime q")
    d_K = fundamental_discriminant(d_K)
    sym = kronecker(d_K, p)
    if sym == 1:
        raise ConfigError(f"{p} splits in the field of discriminant {d_K}: no reduction theory "
                          "applies; pick an inert or ramified prime")
    if target == "singular" and sym != 0:
        raise ConfigError("target 'singular' needs the reduction prime ramified in the field "
                          "(inert primes reduce to smooth components; use target 'components')")
    if target == "components" and sym != -1:
        raise ConfigError("target 'components' needs the reduction prime inert in the field "
                          "(ramified primes reduce to singular points; use target 'singular')")
    if kronecker(d_K, q) == 1:
        raise ConfigError(f"auxiliary prime {q} must be non-split in the field")
    if c0 < 1 or gcd(c0, p * q) != 1:
        raise ConfigError("base conductor must be positive and prime to p*q")
    if n_max < 0:
        raise ConfigError("n_max must be nonnegative")
    return d_K


def run_experiment(p: int, q: int, d_K: int, c0: int = 1, n_max: int = 6,
                   target: str = "singular", model: SpecialFiberModel | None = None,
                   jobs: int = 1) -> EquidistReport:
    d_K = _validate_config(p, q, d_K, c0, n_max, target)
    if model is None:
        model = build_model(p, q, d_K)
    mu_sw, mu_si, mu_cw, mu_ci = measures(model)
    if target == "singular":
        support = tuple(range(len(model.singular)))
        weights = list(model.singular.weights)
        mu_w, mu_i = mu_sw, mu_si
    else:
        support = model.component_labels
        weights = model.component_weights()
        mu_w, mu_i = mu_cw, mu_ci
    tower = conductor_tower(d_K, c0, p, n_max)
    if jobs > 1:
        rows = _parallel_rows(model, tower, target, support, mu_w, mu_i, jobs)
    else:
        rows = [_level_row(model, n, cm, target, support, mu_w, mu_i)
                for n, cm in enumerate(tower)]
    report = EquidistReport(p, q, d_K, c0, n_max, target, support, weights,
                            mu_w, mu_i, rows)
    report.verdict = _verdict(report)
    return report


def _level_row(model, n, cm: ImagQuadOrder, target, support, mu_w, mu_i):
    classes = model.singular if target == "singular" else model.components
    gp = gross_points(classes, cm)
    h = class_number(cm)
    if target == "singular":
        counts = list(gp.counts)
    else:
        # the parity coordinate is not visible to embedding data; spread each
        # class count evenly over its two parity copies
        counts = [c / 2 for c in gp.counts] + [c / 2 for c in gp.counts]
    total = sum(counts, Fraction(0))
    if total == 0:
        return LevelRow(n, cm.conductor, h, counts, True, None, None, None)
    nu = WeightedMeasure(tuple(support), tuple(c / total for c in counts))
    return LevelRow(n, cm.conductor, h, counts, False, nu,
                    tv_distance(nu, mu_w), tv_distance(nu, mu_i))


def _parallel_rows(model, tower, target, support, mu_w, mu_i, jobs):
    from concurrent.futures import ThreadPoolExecutor

    def work(item):
        n, cm = item
        return _level_row(model, n, cm, target, support, mu_w, mu_i)

    with ThreadPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(work, enumerate(tower)))


def _verdict(report: EquidistReport) -> str:
    tw, ti = report.final_tvs()
    if tw is None:
        return "all fibers empty"
    if tw < ti:
        return "weight-proportional"
    if ti < tw:
        return "inverse-weight"
    return "tie"


# ---------------------------------------------------------------------------
# simultaneous reductions


@dataclass
class ProductReport:
    reports: list
    product_labels: tuple
    product_rows: list  # (n, nu masses or None, tv_weight, tv_inverse)
    verdict: str


def simultaneous_report(configs: list[dict]) -> ProductReport:
    """Per-prime reports plus the product empirical distribution.

    Each config is a dict of run_experiment keyword arguments.  The reduction
    primes must be pairwise distinct; the product measure is the tensor
    product of the marginals, level by level.
    """
    if not configs:
        raise ConfigError("need at least one configuration")
    primes = [c["p"] for c in configs]
    if len(set(primes)) != len(primes):
        raise ConfigError("reduction primes must be pairwise distinct")
    reports = [run_experiment(**c) for c in configs]
    n_max = min(r.n_max for r in reports)
    labels = _product_labels([r.support_labels for r in reports])
    prod_rows = []
    for n in range(n_max + 1):
        rows = [r.rows[n] for r in reports]
        if any(row.empty for row in rows):
            prod_rows.append((n, None, None, None))
            continue
        nu = _tensor([row.nu for row in rows], labels)
        mu_w = _tensor([r.mu_weight for r in reports], labels)
        mu_i = _tensor([r.mu_inverse for r in reports], labels)
        prod_rows.append((n, nu, tv_distance(nu, mu_w), tv_distance(nu, mu_i)))
    last = next((r for r in reversed(prod_rows) if r[1] is not None), None)
    if last is None:
        verdict = "all fibers empty"
    elif last[2] < last[3]:
        verdict = "weight-proportional"
    elif last[3] < last[2]:
        verdict = "inverse-weight"
    else:
        verdict = "tie"
    return ProductReport(reports, labels, prod_rows, verdict)


def _product_labels(label_sets):
    from itertools import product as iproduct

    return tuple(iproduct(*label_sets))


def _tensor(measures_list, labels):
    masses = []
    for combo in labels:
        m = Fraction(1)
        for mu, lab in zip(measures_list, combo):
            m *= mu.masses[mu.labels.index(lab)]
        masses.append(m)
    return WeightedMeasure(labels, tuple(masses))
