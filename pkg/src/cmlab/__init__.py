"""Exact arithmetic for definite quaternion class sets, optimal embeddings,
the special fiber model at a ramified prime, and conductor-tower
equidistribution experiments."""

from .cmfields import ImagQuadOrder, class_number, conductor_tower, imag_quad_order
from .embeddings import (embedding_witnesses, gross_points, local_embedding_count,
                         optimal_embeddings)
from .equidist import run_experiment, simultaneous_report, tv_distance
from .lattices import (ClassSet, Order, RightIdeal, algebra_for_prime_discriminant,
                       brandt_matrix, eichler_order, local_splitting, mass,
                       maximal_order, right_ideal_classes, unit_weight)
from .localmod import (BTVertex, LocalBimodule, bimodule_type, bt_distance,
                       bt_neighbors, bt_root, cm_reduction_bimodule,
                       dual_graph_patch, is_admissible)
from .qalg import OO, QuaternionAlgebra, QuatElement, ZeroDivisorError, hilbert_symbol, ramification_set
from .specialfiber import SpecialFiberModel, WeightedMeasure, build_model, measures

__version__ = "0.1.0"
