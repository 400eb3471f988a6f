import numpy as np
import pytest
import sympy as sp

from bocross.errors import IntegrationBlowupError
from bocross.ode_oracle import (
    ModelCoeffs,
    frobenius_initial_data,
    integrate_canonical,
    integrate_full_model,
    symplectic_form,
    weighted_wronskian,
    wkb_basis,
)
from bocross.radial_kernel import RadialPair, basis_solution

M_SET = ["1/2", "3/2", "5/2"]


@pytest.mark.parametrize("m", M_SET)
@pytest.mark.parametrize("j", [1, 2])
def test_frobenius_data_matches_series(m, j):
    vals, _ = frobenius_initial_data(j, m, 1e-2, n_orders=6)
    ref = basis_solution(j, m, 1e-2, 30)
    for a, b in zip(vals, ref):
        assert abs(a - float(b)) <= 1e-13 * abs(float(b))


def test_frobenius_requires_positive_m():
    with pytest.raises(ValueError):
        frobenius_initial_data(1, "-1/2", 1e-3)


@pytest.mark.parametrize("m", M_SET)
@pytest.mark.parametrize("j", [1, 2])
def test_oracle_matches_basis(m, j):
    grid = np.geomspace(1e-2, 5, 20)
    traj = integrate_canonical(m, 1e-3, 5, frobenius_initial_data(j, m, 1e-3, 4), 1e-12, rho_eval=grid)
    for i, rho in enumerate(grid):
        for k, e in enumerate(basis_solution(j, m, rho, 20)):
            assert abs(traj.values[i, k] - float(e)) <= 1e-8 * abs(float(e))


def test_error_estimate_tracks_tolerance():
    init = frobenius_initial_data(1, "3/2", 1e-3, 4)
    est = [integrate_canonical("3/2", 1e-3, 5, init, tol, estimate_error=True).est_error for tol in (1e-6, 1e-8, 1e-10)]
    assert est[0] > est[1] > est[2]
    # each 100x cut in tol cuts the estimate by at least 20x
    assert est[0] / est[1] > 20 and est[1] / est[2] > 20


def test_blowup_detected():
    init = frobenius_initial_data(1, "1/2", 1e-3)
    with pytest.raises(IntegrationBlowupError):
        integrate_canonical("1/2", 1e-3, 30, init, 1e-8, max_norm=1e6)


@pytest.mark.parametrize("args", [(0.0, 1.0, 1e-8), (2.0, 1.0, 1e-8), (1e-3, 1.0, 0.0)])
def test_invalid_ranges(args):
    init = frobenius_initial_data(1, "1/2", 1e-3)
    with pytest.raises(ValueError):
        integrate_canonical("1/2", args[0], args[1], init, args[2])


def _random_init(rng):
    v = rng.normal(size=4)
    return RadialPair(v[0], v[1]), RadialPair(v[2], v[3])


def test_conserved_forms():
    rng = np.random.default_rng(3)
    grid = np.linspace(1.0, 3.0, 15)
    trajs = [integrate_canonical("3/2", 1.0, 3.0, _random_init(rng), 1e-12, rho_eval=grid) for _ in range(4)]
    w = weighted_wronskian(trajs)
    assert np.max(np.abs(w - w[0])) < 1e-8 * abs(w[0])
    s = symplectic_form(trajs[0], trajs[1])
    assert np.max(np.abs(s - s[0])) < 1e-8 * np.max(np.abs(s))


def test_regular_solutions_are_symplectically_orthogonal():
    grid = np.linspace(0.5, 4, 10)
    t1 = integrate_canonical("5/2", 1e-3, 4, frobenius_initial_data(1, "5/2", 1e-3, 4), 1e-12, rho_eval=grid)
    t2 = integrate_canonical("5/2", 1e-3, 4, frobenius_initial_data(2, "5/2", 1e-3, 4), 1e-12, rho_eval=grid)
    scale = np.max(np.abs(t1.values)) * np.max(np.abs(t2.derivative_values)) * 4
    assert np.max(np.abs(symplectic_form(t1, t2))) < 1e-9 * scale


def test_wkb_basis_values():
    rho = 4.0
    dec = wkb_basis("decaying", rho)
    assert dec.phi_plus == dec.phi_minus == pytest.approx(rho**-0.75 * np.exp(-16 / 3), rel=1e-14)
    osc = wkb_basis("+osc", rho)
    assert osc.phi_minus == -osc.phi_plus
    with pytest.raises(ValueError):
        wkb_basis("sideways", rho)
    with pytest.raises(ValueError):
        wkb_basis("cos", 0.5)


@pytest.mark.parametrize("branch", ["decaying", "growing", "cos", "sin"])
def test_wkb_forms_solve_system_to_leading_order(branch):
    rho = sp.symbols("rho", positive=True)
    S = sp.Rational(2, 3) * rho ** sp.Rational(3, 2)
    amp = rho ** sp.Rational(-3, 4)
    f = {"decaying": amp * sp.exp(-S), "growing": amp * sp.exp(S), "cos": amp * sp.cos(S), "sin": amp * sp.sin(S)}[branch]
    sign = 1 if branch in ("decaying", "growing") else -1
    m = sp.Rational(3, 2)
    up, lo = f, sign * f
    res = -sp.diff(up, rho, 2) - sp.diff(up, rho) / rho + (m - sp.Rational(1, 2)) ** 2 / rho**2 * up + rho * lo
    # relative to the size rho * phi of each balanced term the residual falls like rho^{-3/2}
    env = amp * (sp.exp(S) if branch == "growing" else sp.exp(-S) if branch == "decaying" else 1)
    rel = [abs(float((res / (rho * env)).subs(rho, r).evalf(30))) for r in (100, 10000)]
    assert rel[1] < rel[0] * 1e-2 * 2
    assert rel[1] < 1e-5


def test_model_validation():
    ModelCoeffs.canonical().validate()
    ModelCoeffs(Q0=lambda r: 3 * r * r, Q2=lambda r: -r * r).validate()
    with pytest.raises(ValueError):
        ModelCoeffs(Q1=lambda r: 2.0).validate()
    with pytest.raises(ValueError):
        ModelCoeffs(Q0=lambda r: r).validate()


def _scaled_init(j, m, rho0, mu):
    s = mu ** (1 / 3)
    v, d = frobenius_initial_data(j, m, rho0, 4)
    return v, RadialPair(d.phi_plus / s, d.phi_minus / s)


@pytest.mark.parametrize("m", ["1/2", "3/2"])
def test_full_model_reduces_to_canonical(m):
    mu = 1e-6
    s = mu ** (1 / 3)
    grid = np.geomspace(1e-2, 5, 12)
    can = integrate_canonical(m, 1e-3, 5, frobenius_initial_data(1, m, 1e-3, 4), 1e-12, rho_eval=grid)
    full = integrate_full_model(ModelCoeffs.canonical(), mu, m, 1e-3 * s, 5 * s, _scaled_init(1, m, 1e-3, mu), 1e-12, r_eval=grid * s)
    assert np.max(np.abs(full.values - can.values) / np.abs(can.values)) < 1e-6


def test_full_model_rejects_large_mu():
    with pytest.raises(ValueError):
        integrate_full_model(ModelCoeffs(), 0.1, "1/2", 0.01, 0.1, _scaled_init(1, "1/2", 1e-3, 1e-4), 1e-8)


def test_full_model_conjugation_symmetry():
    # sigma1 H_e^* sigma1 = H_e(-m): swapping and conjugating maps m solutions onto -m ones
    model = ModelCoeffs(Q1=lambda r: 1 + 0.5 * r, Q2=lambda r: r * r)
    v = RadialPair(1.0 + 0.2j, 0.3 - 0.1j)
    d = RadialPair(0.5j, -0.4 + 0j)
    grid = np.linspace(0.02, 0.1, 5)
    a = integrate_full_model(model, 1e-4, "3/2", 0.01, 0.1, (v, d), 1e-11, r_eval=grid)
    conj = lambda p: RadialPair(np.conj(p.phi_minus), np.conj(p.phi_plus))  # noqa: E731
    b = integrate_full_model(model, 1e-4, "-3/2", 0.01, 0.1, (conj(v), conj(d)), 1e-11, r_eval=grid)
    assert np.max(np.abs(b.values - np.conj(a.values[:, ::-1]))) < 1e-9 * np.max(np.abs(a.values))
