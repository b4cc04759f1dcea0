"""The finite model of the special fiber at a ramified prime p.

For a definite algebra B' of prime discriminant q (unramified at p), the
model consists of:

* singular points: the right ideal classes of the level-p Eichler order;
* irreducible components: two parity-labelled copies of the level-1 class
  set (the even/odd grading of the quotient of the Bruhat-Tits tree);
* the dual graph: one edge per singular point, joining a parity-0 and a
  parity-1 component; edges are realized as unit orbits of index-p inclusions
  J < I of right ideals, whose Eichler intersection order recovers the
  singular point.

Weights are half unit group orders.  Both the weight-proportional and the
inverse-weight normalized measures are exposed; which one the empirical
reductions approach is a question the equidistribution harness answers from
data.
"""

from dataclasses import dataclass
from fractions import Fraction

from .arith import fundamental_discriminant, is_prime, kronecker
from .cmfields import ImagQuadOrder
from .lattices import (ClassSet, Order, RightIdeal, algebra_for_prime_discriminant,
                       eichler_order, lattice_canonical_basis, lattice_key,
                       maximal_order, neighbors, right_ideal_classes, unit_weight)


@dataclass(frozen=True)
class DualGraphEdge:
    """A unit orbit of index-p inclusions, i.e. one singular point."""

    parity0_class: int
    parity1_class: int
    weight: int  # half unit order of the Eichler intersection order
    orbit_size: int


@dataclass(frozen=True)
class WeightedMeasure:
    """A probability measure with exact rational masses on a finite support."""

    labels: tuple
    masses: tuple

    def __post_init__(self):
        if sum(self.masses, Fraction(0)) != 1:
            raise ValueError("masses must sum to 1")
        if any(m < 0 for m in self.masses):
            raise ValueError("masses must be nonnegative")

    def __len__(self):
        return len(self.masses)


def measure_from_weights(labels, weights, inverse=False):
    ws = [Fraction(1, w) if inverse else Fraction(w) for w in weights]
    total = sum(ws, Fraction(0))
    return WeightedMeasure(tuple(labels), tuple(w / total for w in ws))


class SpecialFiberModel:
    def __init__(self, p, q, d_K, algebra, max_order, eichler, singular, components, edges):
        self.p = p
        self.q = q
        self.d_K = d_K
        self.algebra = algebra
        self.maximal_order = max_order
        self.eichler = eichler
        self.singular: ClassSet = singular
        self.components: ClassSet = components
        self.edges: list[DualGraphEdge] = edges

    @property
    def component_labels(self):
        h = len(self.components)
        return tuple((i, parity) for parity in (0, 1) for i in range(h))

    def component_weights(self):
        return list(self.components.weights) + list(self.components.weights)

    def degree_of(self, label):
        i, parity = label
        if parity == 0:
            return sum(1 for e in self.edges if e.parity0_class == i)
        return sum(1 for e in self.edges if e.parity1_class == i)

    def edge_multiplicities(self):
        """Aggregated counts keyed by (parity0 class, parity1 class)."""
        mult = {}
        for e in self.edges:
            key = (e.parity0_class, e.parity1_class)
            mult[key] = mult.get(key, 0) + 1
        return mult

    def is_connected(self) -> bool:
        h = len(self.components)
        nodes = set(self.component_labels)
        adj = {n: set() for n in nodes}
        for e in self.edges:
            a, b = (e.parity0_class, 0), (e.parity1_class, 1)
            adj[a].add(b)
            adj[b].add(a)
        if not nodes:
            return True
        seen = set()
        stack = [next(iter(nodes))]
        while stack:
            n = stack.pop()
            if n in seen:
                continue
            seen.add(n)
            stack.extend(adj[n] - seen)
        return seen == nodes

    def betti_number(self) -> int:
        v = 2 * len(self.components)
        e = len(self.edges)
        return 1 - v + e


class SplitPlaceError(ValueError):
    """The reduction prime splits in the CM field, which the model excludes."""


def build_model(p: int, q: int, d_K: int) -> SpecialFiberModel:
    """Construct the special fiber model for reduction prime p, algebra disc q."""
    if not is_prime(p) or not is_prime(q):
        raise ValueError("p and q must be prime")
    if p == q:
        raise ValueError("the reduction prime must not ramify in the definite algebra: p != q required")
    d_K = fundamental_discriminant(d_K)
    if kronecker(d_K, p) == 1:
        raise SplitPlaceError(f"prime {p} splits in the field of discriminant {d_K}; "
                              "reduction requires an inert or ramified prime")
    if kronecker(d_K, q) == 1:
        raise SplitPlaceError(f"auxiliary prime {q} splits in the field of discriminant {d_K}; "
                              "the field must embed in the algebra")
    alg = algebra_for_prime_discriminant(q)
    omax = maximal_order(alg)
    eich = eichler_order(omax, p)
    components = right_ideal_classes(omax)
    singular = right_ideal_classes(eich)
    edges = _dual_graph_edges(components, p)
    _validate_edges(edges, singular, p, components)
    return SpecialFiberModel(p, q, d_K, alg, omax, eich, singular, components, edges)


def _dual_graph_edges(components: ClassSet, p: int):
    """Unit orbits of index-p inclusions J < I_i, labelled by target class."""
    alg = components.order.algebra
    edges = []
    for i, ideal in enumerate(components.ideals):
        left = ideal.left_order()
        units = left.unit_elements()
        subs = neighbors(ideal, p)
        orbits = {}
        for sub in subs:
            keys = set()
            for u in units:
                moved = lattice_canonical_basis(alg, [u * x for x in sub.basis])
                keys.add(lattice_key(alg, moved))
            rep = min(keys)
            if rep not in orbits:
                orbits[rep] = (sub, len(keys))
        for rep_key in sorted(orbits):
            sub, nkeys = orbits[rep_key]
            j = components.classify(sub)
            inter = _eichler_intersection(left, sub)
            w_edge = unit_weight(inter)
            orbit_size = (2 * components.weights[i]) // (2 * w_edge)
            edges.append(DualGraphEdge(i, j, w_edge, orbit_size))
    return edges


def _eichler_intersection(left_order: Order, sub: RightIdeal) -> Order:
    from .lattices import lattice_intersection

    other = sub.left_order()
    basis = lattice_intersection(left_order.algebra, left_order.basis, other.basis)
    return Order(left_order.algebra, basis, validate=False)


def _validate_edges(edges, singular: ClassSet, p, components: ClassSet):
    if len(edges) != len(singular):
        raise ArithmeticError(
            f"dual graph has {len(edges)} edges but the level-{p} class set has "
            f"{len(singular)} elements")
    if sorted(e.weight for e in edges) != sorted(singular.weights):
        raise ArithmeticError("edge weights do not match the singular point weights")


def measures(model: SpecialFiberModel):
    """(singular w-prop, singular 1/w, components w-prop, components 1/w)."""
    sing_labels = tuple(range(len(model.singular)))
    sw = model.singular.weights
    cw = model.component_weights()
    return (
        measure_from_weights(sing_labels, sw, inverse=False),
        measure_from_weights(sing_labels, sw, inverse=True),
        measure_from_weights(model.component_labels, cw, inverse=False),
        measure_from_weights(model.component_labels, cw, inverse=True),
    )


def dual_graph_json(model: SpecialFiberModel) -> dict:
    verts = [{"class": i, "parity": parity, "weight": w}
             for (i, parity), w in zip(model.component_labels, model.component_weights())]
    edges = [[a, b, m] for (a, b), m in sorted(model.edge_multiplicities().items())]
    return {
        "p": model.p,
        "q": model.q,
        "d_K": model.d_K,
        "vertices": verts,
        "edges": edges,
        "singular_weights": list(model.singular.weights),
        "betti": model.betti_number(),
    }


def dual_graph_dot(model: SpecialFiberModel) -> str:
    lines = ["graph dual {"]
    for (i, parity) in model.component_labels:
        w = model.components.weights[i]
        shape = "circle" if parity == 0 else "box"
        lines.append(f'  "c{i}_{parity}" [shape={shape}, label="c{i}/{parity} (w={w})"];')
    for e in model.edges:
        lines.append(f'  "c{e.parity0_class}_0" -- "c{e.parity1_class}_1" [label="w={e.weight}"];')
    lines.append("}")
    return "\n".join(lines)
