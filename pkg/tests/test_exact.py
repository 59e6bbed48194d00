from fractions import Fraction
from itertools import combinations, product
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from slabcolor.exact import (
    Ordering,
    QuadExt,
    check_radicand,
    format_quad,
    lattice_hnf,
    quad_arith,
    quad_ceil_div,
    quad_compare,
)

S2 = QuadExt(0, 1)
ONE = QuadExt(1)

small_fracs = st.fractions(min_value=-20, max_value=20, max_denominator=12)
quads = st.builds(QuadExt, small_fracs, small_fracs)


def test_doubling():
    assert quad_arith(1 + S2, 1 + S2, "add") == QuadExt(2, 2)


def test_conjugate_product_is_norm():
    # p^2 - q^2 m = 1 - 2
    assert 1 * 1 - 1 * 1 * 2 == -1
    assert quad_arith(1 + S2, 1 - S2, "mul") == QuadExt(-1)


def test_cancellation():
    assert quad_arith(2 * S2, S2, "div") == QuadExt(2)


def test_division_rationalizes():
    assert ONE / (1 + S2) == QuadExt(-1, 1)
    assert (3 + 2 * S2) / (1 + S2) == QuadExt(1, 1)


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        quad_arith(ONE, QuadExt(0), "div")


def test_unknown_op():
    with pytest.raises(ValueError):
        quad_arith(ONE, ONE, "pow")


def test_compare_examples():
    # sqrt2 < 3/2 because 2 < 9/4
    assert Fraction(9, 4) > 2
    assert quad_compare(1 + S2, QuadExt(Fraction(5, 2))) is Ordering.LT
    assert quad_compare(QuadExt(0), QuadExt(0)) is Ordering.EQ
    assert quad_compare(2 * S2, 1 + S2) is Ordering.GT


@pytest.mark.parametrize(
    "num, den, expected",
    [
        (2 * S2, ONE, 3),
        (1 + S2, 1 + S2, 1),
        (1 + S2, S2, 2),
        (3 * S2, ONE, 5),
        (QuadExt(6), QuadExt(2), 3),
    ],
)
def test_ceil_div(num, den, expected):
    assert quad_ceil_div(num, den) == expected


def test_ceil_div_oracle_for_quotient_of_1_plus_sqrt2_by_sqrt2():
    # 1 < (1+√2)/√2 <= 2  <=>  √2 < 1+√2 <= 2√2
    assert S2 < 1 + S2 <= 2 * S2


@pytest.mark.parametrize("num, den", [(QuadExt(0), ONE), (ONE, QuadExt(-1)), (-S2, ONE)])
def test_ceil_div_rejects_nonpositive(num, den):
    with pytest.raises(ValueError):
        quad_ceil_div(num, den)


def test_float_hint_never_decides(monkeypatch):
    monkeypatch.setattr(QuadExt, "__float__", lambda self: 1e6)
    assert quad_ceil_div(2 * S2, ONE) == 3
    assert (1 + S2).floor() == 2
    assert (-S2).ceil() == -1
    monkeypatch.setattr(QuadExt, "__float__", lambda self: -1e6)
    assert quad_ceil_div(3 * S2, ONE) == 5
    assert (7 * S2).floor() == 9


def test_mixed_radicands_rejected():
    with pytest.raises(ValueError):
        QuadExt(0, 1, 2) + QuadExt(0, 1, 3)


@pytest.mark.parametrize("m", [0, 1, 4, 8, 12, -2])
def test_bad_radicand(m):
    with pytest.raises(ValueError):
        check_radicand(m)


@pytest.mark.parametrize(
    "x, text",
    [
        (QuadExt(Fraction(3, 2)), "3/2"),
        (S2, "s"),
        (-S2, "-1s"),
        (1 - S2, "1-s"),
        (QuadExt(-1, Fraction(3, 4)), "-1+3/4s"),
        (QuadExt(0), "0"),
    ],
)
def test_format(x, text):
    assert format_quad(x) == text


@settings(max_examples=300)
@given(quads, quads, quads)
def test_total_order(x, y, z):
    c = quad_compare(x, y)
    assert quad_compare(y, x) == -c
    assert (c == Ordering.EQ) == (x.p == y.p and x.q == y.q)
    if x < y and y < z:
        assert x < z
    assert quad_compare(x + z, y + z) == c


@settings(max_examples=300)
@given(quads, quads)
def test_positive_products(x, y):
    if x > 0 and y > 0:
        assert x * y > 0


@settings(max_examples=300)
@given(quads)
def test_order_agrees_with_floats_away_from_ties(x):
    # floats only as an oracle where they are far from zero
    f = float(x)
    if abs(f) > 1e-9:
        assert (x > 0) == (f > 0)


@settings(max_examples=300)
@given(small_fracs, small_fracs)
def test_rational_restriction(r, s):
    x, y = QuadExt(r), QuadExt(s)
    assert quad_compare(x, x) == Ordering.EQ
    assert (x + y).p == r + s and (x * y).p == r * s and (x - y).p == r - s
    assert quad_compare(x, y) == Ordering((r > s) - (r < s))
    if s:
        assert (x / y) == QuadExt(r / s)


@settings(max_examples=200)
@given(quads, quads)
def test_field_identities(x, y):
    if y:
        assert (x / y) * y == x
    assert x - x == 0
    assert x * (x.conjugate()) == QuadExt(x.norm())


# -- HNF ------------------------------------------------------------------------


def in_span(v, gens, bound=6):
    """Brute force: is v an integer combination of gens with |coeff| <= bound?"""
    for coeffs in product(range(-bound, bound + 1), repeat=len(gens)):
        a = sum(c * g[0] for c, g in zip(coeffs, gens))
        b = sum(c * g[1] for c, g in zip(coeffs, gens))
        if (a, b) == tuple(v):
            return True
    return False


def test_hnf_counterexample_coords():
    vecs = [(1, 0), (2, 0), (0, 1), (0, 2), (1, 1)]
    res = lattice_hnf(vecs)
    assert res.rank == 2
    assert res.basis == ((1, 0), (0, 1))
    assert all(in_span(b, vecs, 2) for b in res.basis)


def test_hnf_rank1_gcd():
    res = lattice_hnf([(6, 0), (9, 0)])
    assert (res.rank, res.basis, res.coords) == (1, ((3, 0),), ((2,), (3,)))


def test_hnf_rank1_diagonal():
    res = lattice_hnf([(2, 2), (3, 3)])
    assert (res.rank, res.basis, res.coords) == (1, ((1, 1),), ((2,), (3,)))


def test_hnf_rejects_zero():
    with pytest.raises(ValueError):
        lattice_hnf([(0, 0)])
    with pytest.raises(ValueError):
        lattice_hnf([])


@settings(max_examples=150, deadline=None)
@given(st.lists(st.tuples(st.integers(-6, 6), st.integers(-6, 6)), min_size=1, max_size=4))
def test_hnf_spans_exactly(vecs):
    if all(v == (0, 0) for v in vecs):
        return
    res = lattice_hnf(vecs)
    # coords regenerate inputs
    for v, c in zip(vecs, res.coords):
        a = sum(ci * bi[0] for ci, bi in zip(c, res.basis))
        b = sum(ci * bi[1] for ci, bi in zip(c, res.basis))
        assert (a, b) == v
    # inputs lie in the basis lattice; equal index means equal lattices
    if res.rank == 2:
        (h11, z), (h21, h22) = res.basis
        assert z == 0 and h11 > 0 and h22 > 0 and 0 <= h21 < h11
        minors = [u[0] * v[1] - u[1] * v[0] for u, v in combinations(vecs, 2)]
        assert h11 * h22 == gcd(*minors)
    else:
        assert gcd(*(c[0] for c in res.coords)) == 1
