import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from padiccf.field import MinPoly, validate_minpoly
from padiccf.hensel import Embedding


@pytest.fixture(scope="session")
def k2():
    """x^2 + x + 2 at p = 2 (the worked quadratic; v1 = 1)."""
    return validate_minpoly(2, [1, 2])


@pytest.fixture(scope="session")
def k2_v3():
    """x^2 + x + 6 at p = 2 (v1 = 3, two divisors)."""
    return validate_minpoly(2, [1, 6])


@pytest.fixture(scope="session")
def k3():
    """x^3 + x + 4 at p = 2 (a z-set member: a=1, b=2)."""
    return validate_minpoly(2, [0, 1, 4])


@pytest.fixture(scope="session")
def k3_p3():
    """x^3 + x + 3 at p = 3."""
    return validate_minpoly(3, [0, 1, 3])


@pytest.fixture(scope="session")
def ring_cubic():
    """Quotient ring Q[x]/(x^3+x+2); reducible on purpose, ring semantics."""
    return MinPoly(2, [0, 1, 2])


@pytest.fixture(scope="session")
def emb2(k2):
    return Embedding(k2)


@pytest.fixture(scope="session")
def emb3(k3):
    return Embedding(k3)


@pytest.fixture()
def rng():
    return random.Random(20240811)
