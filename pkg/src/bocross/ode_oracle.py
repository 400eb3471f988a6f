"""Double-precision numerical oracle for the radial systems.

Integrates the canonical radial system and the full rotationally symmetric
radial model outward with an embedded adaptive Runge-Kutta pair
(:func:`scipy.integrate.solve_ivp`, DOP853). Nothing here touches the
hypergeometric series: initial data come from the Frobenius recurrence of the
ODE itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp

from .errors import IntegrationBlowupError
from .radial_kernel import HalfOddInt, RadialPair

__all__ = [
    "ModelCoeffs",
    "Trajectory",
    "frobenius_initial_data",
    "integrate_canonical",
    "integrate_full_model",
    "symplectic_form",
    "weighted_wronskian",
    "wkb_basis",
]

SIGMA1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA2 = np.array([[1, 0], [0, -1]], dtype=complex)
SIGMA3 = np.array([[0, 1j], [-1j, 0]], dtype=complex)

DEFAULT_MAX_NORM = 1e200


def _zero(r):
    return 0.0


def _one(r):
    return 1.0


@dataclass(frozen=True)
class ModelCoeffs:
    """Radial coefficient functions of ``H_e = Q0 + Q1 (x.sigma) + Q2 (x cross sigma)``."""

    Q0: Callable[[float], float] = _zero
    Q1: Callable[[float], float] = _one
    Q2: Callable[[float], float] = _zero

    @classmethod
    def canonical(cls) -> "ModelCoeffs":
        return cls()

    def validate(self, r_max: float = 1e-2, n: int = 25) -> None:
        """Check ``Q1(0) = 1`` and ``Q0, Q2 = O(r^2)`` on ``(0, r_max]``."""
        if abs(self.Q1(0.0) - 1.0) > 1e-12:
            raise ValueError(f"Q1(0) must be 1, got {self.Q1(0.0)!r}")
        rs = np.logspace(np.log10(r_max) - 6, np.log10(r_max), n)
        for name in ("Q0", "Q2"):
            q = getattr(self, name)
            ratios = np.array([abs(q(r)) / r**2 for r in rs])
            if not np.all(np.isfinite(ratios)) or ratios.max() > 10 * max(1.0, ratios[-1]):
                raise ValueError(f"{name}(r) is not O(r^2) near the origin")


@dataclass(frozen=True)
class Trajectory:
    rho_grid: np.ndarray
    values: np.ndarray  # (N, 2): phi+, phi-
    derivative_values: np.ndarray  # (N, 2)
    est_error: float

    def pair(self, i: int) -> RadialPair:
        return RadialPair(self.values[i, 0], self.values[i, 1])

    def __len__(self) -> int:
        return len(self.rho_grid)


def frobenius_initial_data(j: int, m, rho0: float, n_orders: int = 2):
    """Value and derivative of regular solution ``j`` at ``rho0`` from the Frobenius recurrence.

    ``j = 1`` seeds the upper component with ``rho^(m-1/2)``, ``j = 2`` the
    lower one with ``rho^(m+1/2)``. Substituting power series into the
    radial system gives ``((s+n)^2 - (m-1/2)^2) a_n = b_(n-3)`` and
    ``((s+n)^2 - (m+1/2)^2) b_n = a_(n-3)``; ``n_orders`` nonzero orders
    (counting both components) are kept.
    """
    mv = HalfOddInt.parse(m).value
    if mv < 0:
        raise ValueError("Frobenius data are provided for m >= 1/2")
    half = Fraction(1, 2)
    lu, ll = (mv - half) ** 2, (mv + half) ** 2
    s = mv - half if j == 1 else mv + half
    a, b = {}, {}
    (a if j == 1 else b)[0] = Fraction(1)
    n, kept = 0, 1
    while kept < n_orders:
        n += 3
        if n - 3 in b:
            a[n] = b[n - 3] / ((s + n) ** 2 - lu)
            kept += 1
        if n - 3 in a and kept < n_orders:
            b[n] = a[n - 3] / ((s + n) ** 2 - ll)
            kept += 1
    sf = float(s)

    def series(coeffs):
        val = sum(float(c) * rho0 ** (sf + k) for k, c in coeffs.items())
        der = sum(float(c) * (sf + k) * rho0 ** (sf + k - 1) for k, c in coeffs.items())
        return val, der

    (pu, du), (pl, dl) = series(a), series(b)
    return RadialPair(pu, pl), RadialPair(du, dl)


def _pack(init) -> np.ndarray:
    vals, ders = init
    return np.array([vals.phi_plus, ders.phi_plus, vals.phi_minus, ders.phi_minus])


def _solve(rhs, x0, x1, y0, tol, x_eval, max_norm, dtype):
    y0 = np.asarray(y0, dtype=dtype)
    scale = float(np.max(np.abs(y0))) if np.any(y0) else 1.0

    def blowup(x, y):
        return max_norm - np.max(np.abs(y))

    blowup.terminal = True
    sol = solve_ivp(
        rhs, (x0, x1), y0, method="DOP853", t_eval=x_eval,
        rtol=tol, atol=tol * 1e-20 * scale, events=blowup,
    )
    if sol.status == 1:
        raise IntegrationBlowupError(f"solution norm exceeded {max_norm:g} at x={sol.t_events[0][0]:g}")
    if not sol.success:  # pragma: no cover - solver failure is environment-specific
        raise IntegrationBlowupError(sol.message)
    return sol


def _trajectory(rhs, x0, x1, init, tol, x_eval, max_norm, estimate_error, dtype):
    if x0 <= 0 or x1 <= x0:
        raise ValueError("need 0 < x0 < x1")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if x_eval is None:
        x_eval = np.geomspace(x0, x1, 64)
    x_eval = np.asarray(x_eval, dtype=float)
    y0 = _pack(init)
    sol = _solve(rhs, x0, x1, y0, tol, x_eval, max_norm, dtype)
    est = 0.0
    if estimate_error:
        ref = _solve(rhs, x0, x1, y0, tol / 16, x_eval, max_norm, dtype)
        denom = max(float(np.max(np.abs(ref.y))), np.finfo(float).tiny)
        est = float(np.max(np.abs(sol.y - ref.y)) / denom)
    y = sol.y
    return Trajectory(
        rho_grid=sol.t,
        values=np.stack([y[0], y[2]], axis=1),
        derivative_values=np.stack([y[1], y[3]], axis=1),
        est_error=est,
    )


def integrate_canonical(
    m, rho0: float, rho1: float, init, tol: float = 1e-10, *,
    rho_eval=None, max_norm: float = DEFAULT_MAX_NORM, estimate_error: bool = False,
) -> Trajectory:
    """Integrate the canonical radial system from ``rho0`` to ``rho1``.

    ``init`` is ``(values, derivatives)``, each a :class:`RadialPair`.
    Raises :class:`IntegrationBlowupError` when the solution exceeds ``max_norm``.
    """
    mv = float(HalfOddInt.parse(m).value)
    lu, ll = (mv - 0.5) ** 2, (mv + 0.5) ** 2

    def rhs(x, y):
        p, dp, q, dq = y
        return [dp, -dp / x + lu * p / x**2 + x * q, dq, -dq / x + ll * q / x**2 + x * p]

    return _trajectory(rhs, rho0, rho1, init, tol, rho_eval, max_norm, estimate_error, float)


def integrate_full_model(
    model: ModelCoeffs, mu: float, m, r0: float, r1: float, init, tol: float = 1e-10, *,
    r_eval=None, max_norm: float = DEFAULT_MAX_NORM, estimate_error: bool = False,
) -> Trajectory:
    """Integrate the radial equation of the rotationally symmetric model at E = 0.

    ``-mu (F'' + F'/r - F/(4 r^2)) + H_e(r) F = 0`` with
    ``H_e = Q0 + r Q1 sigma1 + r Q2 sigma3 - (mu/r^2)(m sigma2 - m^2)``.
    The returned grid is in the unscaled radius ``r``.
    """
    if not 0 < mu <= 1e-2:
        raise ValueError("mu must lie in (0, 1e-2]")
    mv = float(HalfOddInt.parse(m).value)
    eye = np.eye(2, dtype=complex)
    # 1/(4 r^2) minus the centrifugal part of H_e, folded so (m - 1/2)^2 = 0 stays exact
    cu, cl = (mv - 0.5) ** 2, (mv + 0.5) ** 2

    def rhs(x, y):
        F = np.array([y[0], y[2]])
        he = model.Q0(x) * eye + x * model.Q1(x) * SIGMA1 + x * model.Q2(x) * SIGMA3
        hF = (he @ F) / mu
        return [
            y[1], -y[1] / x + cu * y[0] / x**2 + hF[0],
            y[3], -y[3] / x + cl * y[2] / x**2 + hF[1],
        ]

    traj = _trajectory(rhs, r0, r1, init, tol, r_eval, max_norm, estimate_error, complex)
    if np.all(traj.values.imag == 0) and np.all(traj.derivative_values.imag == 0):
        traj = Trajectory(traj.rho_grid, traj.values.real, traj.derivative_values.real, traj.est_error)
    return traj


_BRANCHES = {
    "decaying": "decaying", "-grow": "decaying",
    "growing": "growing", "+grow": "growing",
    "cos": "cos", "+osc": "cos",
    "sin": "sin", "-osc": "sin",
}


def wkb_basis(branch: str, rho: float) -> RadialPair:
    """One member of the large-rho WKB family.

    ``rho^{-3/4} exp(-+2/3 rho^{3/2}) (1, 1)`` or
    ``rho^{-3/4} {cos, sin}(2/3 rho^{3/2}) (1, -1)``.
    """
    try:
        kind = _BRANCHES[branch]
    except KeyError:
        raise ValueError(f"unknown WKB branch {branch!r}") from None
    if rho < 1:
        raise ValueError("WKB forms are used for rho >= 1")
    phase = 2.0 / 3.0 * rho**1.5
    amp = rho**-0.75
    if kind == "decaying":
        v = amp * np.exp(-phase)
        return RadialPair(v, v)
    if kind == "growing":
        v = amp * np.exp(phase)
        return RadialPair(v, v)
    v = amp * (np.cos(phase) if kind == "cos" else np.sin(phase))
    return RadialPair(v, -v)


def weighted_wronskian(trajectories) -> np.ndarray:
    """``rho^2 det[y_1 .. y_4]`` along four trajectories on a common grid.

    The first-order system ``y' = A y`` has ``tr A = -2/rho``, so by Abel's
    formula this product is constant.
    """
    trajs = list(trajectories)
    if len(trajs) != 4:
        raise ValueError("need four trajectories")
    grid = trajs[0].rho_grid
    cols = []
    for t in trajs:
        if not np.array_equal(t.rho_grid, grid):
            raise ValueError("trajectories must share a grid")
        cols.append(np.stack([t.values[:, 0], t.derivative_values[:, 0], t.values[:, 1], t.derivative_values[:, 1]], axis=1))
    mats = np.stack(cols, axis=2)
    return grid**2 * np.linalg.det(mats)


def symplectic_form(t1: Trajectory, t2: Trajectory) -> np.ndarray:
    """``rho (u . v' - u' . v)``; conserved because the coupling matrix is symmetric."""
    u, du = t1.values, t1.derivative_values
    v, dv = t2.values, t2.derivative_values
    return t1.rho_grid * np.sum(u * dv - du * v, axis=1)
