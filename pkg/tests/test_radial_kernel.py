import math
from fractions import Fraction

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bocross import radial_kernel as rk
from bocross.errors import InsufficientPrecisionError
from bocross.radial_kernel import (
    HalfOddInt,
    RadialPair,
    basis_function,
    basis_solution,
    blowup_coefficient,
    bounded_function,
    bounded_solution,
    decaying_combination,
    factorized_operator_check,
    indicial_exponents,
    large_rho_asymptotic,
    lower_from_upper_discrepancy,
    negate_m,
    ode_residual,
    small_rho_limit,
    wkb_envelope,
)

M_SET = ["1/2", "3/2", "5/2"]


def G(x):
    return mp.gamma(mp.mpf(Fraction(x).numerator) / Fraction(x).denominator)


@pytest.mark.parametrize("text,twice", [("1/2", 1), ("-3/2", -3), (2.5, 5), (Fraction(7, 2), 7)])
def test_half_odd_parse(text, twice):
    assert HalfOddInt.parse(text).twice_m == twice


@pytest.mark.parametrize("bad", ["1", 1.0, "2/3", 0])
def test_half_odd_rejects(bad):
    with pytest.raises(ValueError):
        HalfOddInt.parse(bad)


def test_indicial_data():
    d = indicial_exponents("1/2")
    assert d.degenerate and d.log_solution_present
    assert d.behaviours == ("1", "ln(rho)", "rho", "1/rho")
    d = indicial_exponents("5/2")
    assert not d.degenerate
    assert d.exponents == (2, -2, 3, -3)


@pytest.mark.parametrize("m", M_SET)
@pytest.mark.parametrize("j", [1, 2])
@pytest.mark.parametrize("rho", [0.01, 0.8, 4.0, 9.0])
def test_basis_residual_within_bound(m, j, rho):
    res = ode_residual(m, rho, basis_function(j, m), 40)
    assert res.within(10)


def test_mutated_prefactor_breaks_residual(monkeypatch):
    orig = rk._coupling_prefactors
    monkeypatch.setattr(rk, "_coupling_prefactors", lambda m: (-orig(m)[0], orig(m)[1]))
    assert not ode_residual("3/2", 1.0, basis_function(1, "3/2"), 30).within(10)
    assert lower_from_upper_discrepancy(1, "3/2") != 0


@pytest.mark.parametrize("m", M_SET)
@pytest.mark.parametrize("j", [1, 2])
def test_lower_component_matches_reduction(m, j):
    assert lower_from_upper_discrepancy(j, m) == 0


@pytest.mark.parametrize("m", M_SET)
@pytest.mark.parametrize("component", ["+", "-"])
def test_factorized_operator(m, component):
    chk = factorized_operator_check(component, m, 30)
    assert chk.interior_residual == 0
    assert chk.boundary_term < mp.mpf(10) ** -100


def test_jet_derivative_matches_numerical():
    fn = basis_function(2, "3/2")
    jet = fn.jet(1.25, 40)
    with mp.workdps(40):
        r0, h = mp.mpf(1.25), mp.mpf(10) ** -8
        F = lambda r: fn.evaluate(r, 40).phi_minus  # noqa: E731
        num = (8 * (F(r0 + h) - F(r0 - h)) - (F(r0 + 2 * h) - F(r0 - 2 * h))) / (12 * h)
        assert abs(jet.derivative(r0).phi_minus - num) < mp.mpf(10) ** -25


def test_value_at_crossing_closed_form():
    val = bounded_solution("1/2", 0, 30)
    with mp.workdps(40):
        assert abs(val.phi_plus - 1 / (2 * mp.pi * mp.sqrt(6))) < mp.mpf(10) ** -28
    assert val.phi_minus == 0


def test_printed_prefactors_do_not_cancel_growth():
    # prefactors exchanged between the two basis solutions leave the growing mode in place
    m = "1/2"
    p1, p2 = rk._gamma_products(1, 30)
    with mp.workdps(80):
        s3 = mp.sqrt(3)
        swapped = basis_function(1, m).scaled(1 / (s3 * p2)) - basis_function(2, m).scaled(1 / (s3 * p1))
        big = swapped.evaluate(20, 80).norm() * mp.mpf(20) ** 0.75
    assert big > 1e5
    good = bounded_solution(m, 20, 30).norm() * 20**0.75
    assert good < 0.1


@pytest.mark.parametrize("m", M_SET)
def test_bounded_proportional_to_decaying_combination(m):
    mv = Fraction(HalfOddInt.parse(m).twice_m, 2)
    with mp.workdps(60):
        pinned = 1 / (
            mp.sqrt(3) * G(Fraction(1, 3)) * G(Fraction(2, 3)) * G(Fraction(1, 2) + mv / 3) ** 2
            * G(Fraction(5, 6) + mv / 3) * G(Fraction(7, 6) + mv / 3)
            * mp.power(6, 1 + mp.mpf(2 * mv.numerator) / (3 * mv.denominator))
        )
    dec, bnd = decaying_combination(m, 60), bounded_function(m, 60)
    for rho in (0.5, 2.0, 5.0):
        a, b = dec.evaluate(rho, 60), bnd.evaluate(rho, 60)
        with mp.workdps(60):
            for x, y in zip(a, b):
                assert abs(y / x / pinned - 1) < mp.mpf(10) ** -35


def test_growth_coefficient_ratio_at_half():
    with mp.workdps(40):
        ratio = blowup_coefficient(1, "1/2", 30) / blowup_coefficient(2, "1/2", 30)
        ref = 3 * mp.power(6, mp.mpf(-2) / 3) / mp.gamma(mp.mpf(2) / 3)
        assert abs(ratio / ref - 1) < mp.mpf(10) ** -28


@pytest.mark.parametrize("j", [1, 2])
def test_growth_coefficient_controls_basis(j):
    rho = 30
    val = basis_solution(j, "3/2", rho, 30)
    with mp.workdps(40):
        scale = 2 * mp.power(rho, mp.mpf(0.75)) * mp.exp(-mp.mpf(2) / 3 * mp.power(rho, 1.5))
        c = blowup_coefficient(j, "3/2", 30)
        for comp in val:
            assert abs(comp * scale / c - 1) < 0.02


def test_precision_guard():
    with pytest.raises(InsufficientPrecisionError):
        bounded_solution("1/2", 45)
    val = bounded_solution("1/2", 45, 20, rho_max=50)
    assert abs(val.phi_plus) * 45**0.75 * (2 * math.pi) ** 1.5 < 1.05


@pytest.mark.parametrize("m", M_SET)
def test_small_rho_limit(m):
    num = bounded_solution(m, 1e-2, 30)
    ref = small_rho_limit(m, 1e-2, 30)
    for a, b in zip(num, ref):
        assert abs(a / b - 1) < 1e-3


def test_large_rho_tracks_cosine_form():
    rho = 24
    num = bounded_solution("3/2", rho, 30)
    ref = large_rho_asymptotic("3/2", rho, 30)
    amp = (2 * math.pi) ** -1.5 * rho**-0.75
    for a, b in zip(num, ref):
        assert abs(a - b) < 0.05 * amp


def test_wkb_envelope_flat():
    for rho in (12, 20):
        env = wkb_envelope("5/2", rho, 30)
        for e in env:
            assert abs(e * (2 * math.pi) ** 1.5 * rho**0.75 - 1) < 0.02


@pytest.mark.parametrize("m", M_SET)
def test_negate_m_solves_negative_system(m):
    neg = -HalfOddInt.parse(m)
    for fn in (basis_function(1, m), basis_function(2, m), bounded_function(m, 40)):
        assert ode_residual(neg, 1.1, fn.negate_m(), 40).within(10)
        # and the unmapped function does not
        assert not ode_residual(neg, 1.1, fn, 40).within(10)


@settings(max_examples=30, deadline=None)
@given(st.complex_numbers(max_magnitude=1e6, allow_nan=False, allow_infinity=False),
       st.complex_numbers(max_magnitude=1e6, allow_nan=False, allow_infinity=False))
def test_negate_m_involution(a, b):
    p = RadialPair(mp.mpc(a), mp.mpc(b))
    assert negate_m(negate_m(p)) == p


def test_negative_m_construction_rejected():
    with pytest.raises(ValueError):
        basis_function(1, "-1/2")
    with pytest.raises(ValueError):
        basis_function(3, "1/2")
