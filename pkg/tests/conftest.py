import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cmlab.lattices import (algebra_for_prime_discriminant, eichler_order,
                            maximal_order, right_ideal_classes)

_class_set_cache = {}


@pytest.fixture(scope="session")
def class_sets():
    """Memoized access to class sets keyed by (disc, level)."""

    def get(disc, level=1):
        key = (disc, level)
        if key not in _class_set_cache:
            alg = algebra_for_prime_discriminant(disc)
            om = maximal_order(alg)
            order = om if level == 1 else eichler_order(om, level)
            _class_set_cache[key] = right_ideal_classes(order)
        return _class_set_cache[key]

    return get


@pytest.fixture(scope="session")
def max_orders():
    def get(disc):
        return maximal_order(algebra_for_prime_discriminant(disc))

    return get
