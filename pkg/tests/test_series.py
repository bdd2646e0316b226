"""Tests for truncated series arithmetic, the parity counting recursion,
the functional equations, and the closed-form inverse of the moment
series.

The recursion values are frozen against the enumeration for every ground
set the enumerator can reach, and beyond that against the independently
coded level histogram; the closed forms are checked coefficientwise
against triangular inversion, which shares no code with them."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from freecactus import enumerate_y
from freecactus.cumulants import CumulantSpec, moments_from_cumulants
from freecactus.series import (
    DEFAULT_SERIES_ORDER,
    TruncatedSeries,
    cauchy_polynomial_residual,
    check_functional_equations,
    free_poisson_pair_cumulants,
    minverse_closed_form,
    r_m_transfer,
    y_count_recursive,
    y_series,
)

SEED = 1729

# Family counts by parity, from the recursion: even ground sets 2, 4, ..
# and odd ground sets 1, 3, ...  Entries up to ground set 11 match the
# enumeration golden table; 12..14 were cross-checked against the level
# histogram kernel, and the last two come from the recursion alone.
ALPHA = [1, 5, 26, 155, 987, 6588, 45474, 321959]
BETA = [1, 2, 9, 48, 287, 1834, 12268, 84816]

# Cumulants and moments of the anti-commutator of two free Poisson(1)
# variables; the first six cumulants also fall out of direct enumeration
# in the cumulant tests.
NU_CUMULANTS = [2, 10, 52, 310, 1974, 13176, 90948, 643918, 4650382]
NU_MOMENTS = [2, 14, 120, 1182, 12586, 141160, 1642584, 19646558, 240050838]


def series(values, order=None):
    return TruncatedSeries.from_coefficients(values, order)


def random_series(rng, order, constant=0):
    coeffs = [Fraction(constant)]
    coeffs += [
        Fraction(rng.randint(-4, 4), rng.choice((1, 2, 3))) for _ in range(order)
    ]
    return TruncatedSeries(order, tuple(coeffs))


# ------------------------------------------------------------ construction


def test_constructor_validates_length_and_order():
    with pytest.raises(ValueError, match="needs 3 coefficients"):
        TruncatedSeries(2, (Fraction(1),))
    with pytest.raises(ValueError, match="non-negative"):
        TruncatedSeries(-1, ())


def test_from_coefficients_pads_and_rejects_overflow():
    s = series([1, 2], order=4)
    assert s.coeffs == (1, 2, 0, 0, 0)
    assert series([]).order == 0
    with pytest.raises(ValueError, match="exceed order"):
        series([1, 2, 3], order=1)


def test_named_constructors():
    assert TruncatedSeries.zero(3).coeffs == (0, 0, 0, 0)
    assert TruncatedSeries.constant(Fraction(1, 2), 2).coeffs == (Fraction(1, 2), 0, 0)
    assert TruncatedSeries.identity(3).coeffs == (0, 1, 0, 0)
    with pytest.raises(ValueError, match="order at least 1"):
        TruncatedSeries.identity(0)


def test_getitem_bounds():
    s = series([5, 6], order=2)
    assert s[0] == 5 and s[2] == 0
    with pytest.raises(IndexError, match="beyond the carried order"):
        s[3]


def test_truncate_never_extends():
    s = series([1, 2, 3])
    assert s.truncate(1).coeffs == (1, 2)
    with pytest.raises(ValueError, match="unknown"):
        s.truncate(5)


def test_equality_is_structural():
    assert TruncatedSeries.zero(3) == series([], order=3)
    assert TruncatedSeries.zero(3) != TruncatedSeries.zero(2)


def test_json_form():
    assert series([0, Fraction(1, 2), -3]).to_json_obj() == ["0", "1/2", "-3"]


# ------------------------------------------------------------- arithmetic


def test_binary_operations_carry_the_minimum_order():
    long = series([1, 1, 1, 1, 1], order=4)
    short = series([1, 1], order=2)
    assert (long + short).order == 2
    assert (long * short).order == 2
    assert (long / short).order == 2


def test_add_sub_scalars():
    b = series([0, 1, 2])
    assert (1 - b).coeffs == (1, -1, -2)
    assert (b + 1).coeffs == (1, 1, 2)
    assert (-b).coeffs == (0, -1, -2)


def test_multiplication_is_truncated_convolution():
    f = series([1, 2, 3], order=3)
    g = series([4, 5], order=3)
    assert (f * g).coeffs == (4, 13, 22, 15)
    assert (2 * f).coeffs == (2, 4, 6, 0)


def test_power():
    x = TruncatedSeries.identity(4)
    assert ((1 + x) ** 3).coeffs == (1, 3, 3, 1, 0)
    assert (x**0).coeffs == (1, 0, 0, 0, 0)
    with pytest.raises(ValueError):
        x**-1


def test_division_inverts_multiplication():
    rng = random.Random(SEED)
    f = random_series(rng, 6, constant=Fraction(1, 2))
    g = random_series(rng, 6, constant=2)
    assert (f * g) / g == f
    assert (1 / g) * g == TruncatedSeries.constant(1, 6)


def test_division_needs_a_unit():
    with pytest.raises(ValueError, match="c_0 = 0"):
        series([1, 1]) / series([0, 1])


def test_shift_down():
    s = series([0, 0, 3, 4])
    assert s.shift_down(2).coeffs == (3, 4)
    assert s.shift_down(2).order == 1
    with pytest.raises(ValueError, match="c_2 = 3"):
        s.shift_down(3)
    with pytest.raises(ValueError, match="down by 5"):
        s.shift_down(5)


# ---------------------------------------------------- compose and inverse


def test_compose_polynomial_case():
    f = series([1, 0, 1], order=4)  # 1 + z^2
    g = series([0, 2, 1], order=4)  # 2z + z^2
    assert f.compose(g).coeffs == (1, 0, 4, 4, 1)


def test_compose_with_zero_series_is_the_constant():
    f = series([7, 3, 5], order=2)
    assert f.compose(TruncatedSeries.zero(2)) == TruncatedSeries.constant(7, 2)


def test_compose_rejects_inner_constant():
    with pytest.raises(ValueError, match="c_0 = 5"):
        series([1, 1]).compose(series([5, 1]))


def test_comp_inverse_frozen_moment_series_example():
    m = series([0] + NU_MOMENTS, order=9)
    inv = m.comp_inverse()
    assert inv[1] == Fraction(1, 2)
    assert inv[2] == Fraction(-7, 4)


def test_comp_inverse_preconditions():
    with pytest.raises(ValueError, match="c_0 = 1"):
        series([1, 2]).comp_inverse()
    with pytest.raises(ValueError, match="c_1"):
        series([0, 0, 1]).comp_inverse()


@given(
    st.lists(
        st.fractions(min_value=-3, max_value=3, max_denominator=4),
        min_size=4,
        max_size=8,
    ),
    st.fractions(min_value=-3, max_value=3, max_denominator=4).filter(
        lambda v: v != 0
    ),
)
@settings(max_examples=40, deadline=None)
def test_comp_inverse_is_two_sided(tail, c1):
    f = TruncatedSeries.from_coefficients([0, c1] + tail)
    inv = f.comp_inverse()
    z = TruncatedSeries.identity(f.order)
    assert f.compose(inv) == z
    assert inv.compose(f) == z


def test_sqrt_frozen_example():
    s = series([4, 20, 9], order=3).sqrt()
    assert s.coeffs == (2, 5, -4, 10)


@given(
    st.lists(
        st.fractions(min_value=-3, max_value=3, max_denominator=4),
        min_size=3,
        max_size=7,
    ),
    st.fractions(min_value=Fraction(1, 4), max_value=3, max_denominator=4),
)
@settings(max_examples=40, deadline=None)
def test_sqrt_squares_back(tail, c0):
    g = TruncatedSeries.from_coefficients([c0] + tail)
    f = g * g
    assert f.sqrt() == g


def test_sqrt_preconditions():
    with pytest.raises(ValueError, match="positive constant"):
        series([0, 1]).sqrt()
    with pytest.raises(ValueError, match="rational square"):
        series([2, 1]).sqrt()


# --------------------------------------------------- the counting recursion


def test_recursion_frozen_tables():
    for n, want in enumerate(ALPHA, start=1):
        assert y_count_recursive(2 * n) == want
    for n, want in enumerate(BETA, start=1):
        assert y_count_recursive(2 * n - 1) == want
    with pytest.raises(ValueError):
        y_count_recursive(0)


def test_recursion_matches_enumeration_to_twelve():
    for m in range(1, 13):
        assert y_count_recursive(m) == sum(1 for _ in enumerate_y(m))


def test_y_series_shape():
    a, b = y_series(6)
    assert a.order == b.order == 6
    assert a[0] == 0 and b[0] == 0
    assert list(a.coeffs[1:]) == ALPHA[:6]
    assert list(b.coeffs[1:]) == BETA[:6]
    default_a, _default_b = y_series()
    assert default_a.order == DEFAULT_SERIES_ORDER


def test_free_poisson_pair_cumulants_frozen():
    assert free_poisson_pair_cumulants(9) == NU_CUMULANTS
    assert moments_from_cumulants(
        CumulantSpec.explicit(NU_CUMULANTS), 9
    ) == NU_MOMENTS


# --------------------------------------------------- functional equations


def test_functional_equations_pass_on_the_counting_pair():
    report = check_functional_equations(*y_series(10))
    assert report.all_pass
    assert report.failing() == []
    names = [name for name, _r in report.residuals]
    assert names == [
        "even_from_odd",
        "odd_from_even",
        "even_quartic",
        "odd_quartic",
    ]


def test_functional_equations_need_matching_orders():
    a, _b = y_series(6)
    _a, b = y_series(7)
    with pytest.raises(ValueError, match="match"):
        check_functional_equations(a, b)


def test_perturbed_alpha_fails_where_it_should():
    """Adding one to the third even-count breaks every equation that
    mentions A, at exactly order three, and leaves the B-only quartic
    untouched."""
    a, b = y_series(10)
    bad = list(a.coeffs)
    bad[3] += 1
    report = check_functional_equations(TruncatedSeries(10, tuple(bad)), b)
    assert not report.all_pass
    assert report.failing() == ["even_from_odd", "odd_from_even", "even_quartic"]
    residuals = dict(report.residuals)
    assert residuals["even_from_odd"].first_nonzero() == 3
    assert residuals["odd_quartic"].is_zero


def test_report_json_shape():
    report = check_functional_equations(*y_series(4))
    obj = report.to_json_obj()
    assert set(obj) == {
        "even_from_odd",
        "odd_from_even",
        "even_quartic",
        "odd_quartic",
    }
    assert all(entry["pass"] for entry in obj.values())


# ------------------------------------------------------------ closed forms


def test_minverse_closed_form_leading_coefficients():
    inv = minverse_closed_form(9)
    assert inv[0] == 0
    assert inv[1] == Fraction(1, 2)
    assert inv[2] == Fraction(-7, 4)
    with pytest.raises(ValueError):
        minverse_closed_form(0)


def test_minverse_equals_triangular_inverse_to_order_nine():
    """The closed form and the coefficient-extraction inverse of the
    truncated moment series must agree exactly; this is the inversion
    theorem at desk scale."""
    m = series([0] + NU_MOMENTS, order=9)
    assert minverse_closed_form(9) == m.comp_inverse()


def test_moment_series_composed_with_closed_form_is_identity():
    m = series([0] + NU_MOMENTS, order=9)
    assert m.compose(minverse_closed_form(9)) == TruncatedSeries.identity(9)


def test_r_m_transfer_series_content():
    rm = r_m_transfer(NU_CUMULANTS, 9)
    assert list(rm.R.coeffs) == [0] + NU_CUMULANTS
    assert list(rm.M.coeffs) == [0] + NU_MOMENTS
    rm_spec = r_m_transfer(CumulantSpec.free_poisson(1), 5)
    assert list(rm_spec.M.coeffs[1:]) == [1, 2, 5, 14, 42]


def test_r_m_transfer_inverse_identity_at_order_eight():
    rm = r_m_transfer(NU_CUMULANTS, 8)
    one_plus_z = series([1, 1], order=8)
    assert rm.M.comp_inverse() == rm.R.comp_inverse() / one_plus_z


def test_r_m_transfer_semicircular():
    rm = r_m_transfer(CumulantSpec.semicircular(), 6)
    assert rm.R == series([0, 0, 1], order=6)
    assert list(rm.M.coeffs) == [0, 0, 1, 0, 2, 0, 5]
    with pytest.raises(ValueError, match="c_1"):
        rm.R.comp_inverse()


def test_r_m_transfer_argument_validation():
    with pytest.raises(ValueError, match="got 3"):
        r_m_transfer([1, 2, 3], 5)
    with pytest.raises(ValueError, match="order at least 1"):
        r_m_transfer(NU_CUMULANTS, 0)


# --------------------------------------------------- the Cauchy polynomial


def test_cauchy_residual_vanishes_on_true_moments():
    residual = cauchy_polynomial_residual(8)
    assert len(residual) == 9
    assert all(c == 0 for c in residual)


def test_cauchy_residual_detects_a_wrong_moment():
    bad = list(NU_MOMENTS[:8])
    bad[1] = 15
    residual = cauchy_polynomial_residual(8, bad)
    assert any(c != 0 for c in residual)
    assert residual[0] == 0  # the constant term never sees m_2


def test_cauchy_residual_validation():
    with pytest.raises(ValueError, match="at least 2"):
        cauchy_polynomial_residual(1)
    with pytest.raises(ValueError, match="got 2"):
        cauchy_polynomial_residual(4, [2, 14])
