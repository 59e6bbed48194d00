import pytest

from slabcolor.distset import generate_theorem_family, parse_distance_set

COUNTEREXAMPLE = "1, 2, s, 2s, 1+s"


@pytest.fixture(scope="session")
def d3():
    """The five-element counterexample set {1, 2, √2, 2√2, 1+√2}."""
    return parse_distance_set(COUNTEREXAMPLE)


@pytest.fixture(scope="session")
def family():
    return {t: generate_theorem_family(t) for t in (2, 3, 4, 5)}
