"""Two-component wave function near the crossing and its mu-scaling observables.

``Psi_m(r, theta) = mu^{-1/4} (phi+(rho) e2 + phi-(rho) e1)``, ``rho = r / mu^{1/3}``,
with ``e1, e2`` the angular spinors of the ``J3 = m`` subspace and
``(phi+, phi-)`` the bounded radial solution. The upper radial component
multiplies ``e2`` because its centrifugal term is ``(m - 1/2)^2``.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import mpmath as mp
import numpy as np
from scipy.integrate import quad

from .errors import DegenerateFitError, QuadratureError
from .hypergeom import GUARD_DIGITS, to_mp
from .ode_oracle import ModelCoeffs
from .radial_kernel import (
    DEFAULT_RHO_MAX,
    HalfOddInt,
    RadialPair,
    bounded_function,
    bounded_solution,
    negate_m,
    ode_residual,
    wkb_envelope,
    working_precision,
)

__all__ = [
    "PdeResidual",
    "PolarPoint",
    "ScanResult",
    "SpinorField",
    "angular_basis",
    "assemble_psi",
    "electronic_surfaces",
    "fit_power_law",
    "mixing_weight",
    "pde_residual",
    "phase_matrix",
    "radial_components",
    "scaling_scan",
]

OBSERVABLES = ("amplitude", "mixing", "far_amplitude")
NEAR_GRID = tuple(i / 20 for i in range(41))  # rho in [0, 2]
FAR_RHO_MAX = 60.0


@dataclass(frozen=True)
class PolarPoint:
    """Unscaled nuclear position; ``theta`` is reduced to ``[0, 2 pi)``."""

    r: float
    theta: float = 0.0

    def __post_init__(self):
        if self.r < 0:
            raise ValueError(f"r must be >= 0, got {self.r!r}")
        object.__setattr__(self, "theta", self.theta % (2 * math.pi))


@dataclass(frozen=True)
class SpinorField:
    component_up: object
    component_down: object

    def __post_init__(self):
        for v in (self.component_up, self.component_down):
            if not mp.isfinite(v):
                raise ValueError("spinor components must be finite")

    def __iter__(self):
        return iter((self.component_up, self.component_down))

    def __add__(self, other: "SpinorField") -> "SpinorField":
        return SpinorField(self.component_up + other.component_up, self.component_down + other.component_down)

    def __sub__(self, other: "SpinorField") -> "SpinorField":
        return SpinorField(self.component_up - other.component_up, self.component_down - other.component_down)

    def __mul__(self, k) -> "SpinorField":
        return SpinorField(self.component_up * k, self.component_down * k)

    __rmul__ = __mul__

    def norm(self):
        return mp.sqrt(abs(self.component_up) ** 2 + abs(self.component_down) ** 2)


@dataclass(frozen=True)
class ScanResult:
    mu_values: list
    observable_values: list
    fitted_exponent: float
    fit_residual: float

    def __post_init__(self):
        if len(self.mu_values) != len(self.observable_values) or len(self.mu_values) < 4:
            raise ValueError("need at least four (mu, value) pairs of equal length")
        if any(a <= b for a, b in zip(self.mu_values, self.mu_values[1:])):
            raise ValueError("mu_values must be strictly decreasing")


def _mu(mu):
    if not 0 < mu <= 1e-2:
        raise ValueError(f"mu must lie in (0, 1e-2], got {mu!r}")
    return mu


def angular_basis(m, theta, precision: int = 30) -> tuple[SpinorField, SpinorField]:
    """``e1 = e^{i(m+1/2)theta} (1, i)`` and ``e2 = e^{i(m-1/2)theta} (i, 1)``."""
    mv = to_mp(HalfOddInt.parse(m).value)
    with mp.workdps(precision + GUARD_DIGITS):
        th = to_mp(theta)
        p1 = mp.expj((mv + mp.mpf(1) / 2) * th)
        p2 = mp.expj((mv - mp.mpf(1) / 2) * th)
        return SpinorField(p1, 1j * p1), SpinorField(1j * p2, p2)


def phase_matrix(m, theta, precision: int = 30) -> mp.matrix:
    """``M`` with ``Psi = mu^{-1/4} M (phi+, phi-)``: columns ``e2`` and ``e1``.

    ``M = e^{i m theta} [[i e^{-i theta/2}, e^{i theta/2}], [e^{-i theta/2}, i e^{i theta/2}]]``
    and ``M M^dagger = 2``.
    """
    e1, e2 = angular_basis(m, theta, precision)
    return mp.matrix([[e2.component_up, e1.component_up], [e2.component_down, e1.component_down]])


def _radial_pair(m: HalfOddInt, rho, precision: int, rho_max: float) -> RadialPair:
    if m.twice_m > 0:
        return bounded_solution(m, rho, precision, rho_max=rho_max)
    return negate_m(bounded_solution(-m, rho, precision, rho_max=rho_max))


def _combine(m, pair: RadialPair, theta, scale, precision: int) -> SpinorField:
    e1, e2 = angular_basis(m, theta, precision)
    with mp.workdps(precision + GUARD_DIGITS):
        return (e2 * pair.phi_plus + e1 * pair.phi_minus) * scale


def assemble_psi(m, mu, point: PolarPoint, precision: int = 30, *, rho_max: float = DEFAULT_RHO_MAX) -> SpinorField:
    """``Psi_m(r, theta)`` for either sign of ``m``.

    Negative ``m`` uses the radial symmetry (components swapped and
    conjugated) with the ``-m`` angular spinors.
    """
    m = HalfOddInt.parse(m)
    _mu(mu)
    with mp.workdps(precision + GUARD_DIGITS):
        mu_mp = to_mp(mu)
        rho = to_mp(point.r) / mp.cbrt(mu_mp)
        scale = mp.power(mu_mp, mp.mpf(-1) / 4)
    pair = _radial_pair(m, rho, precision, rho_max)
    return _combine(m, pair, point.theta, scale, precision)


def radial_components(m, mu, point: PolarPoint, psi: SpinorField, precision: int = 30) -> RadialPair:
    """Invert the angular factorization: ``mu^{1/4} M^{-1} Psi``."""
    M = phase_matrix(m, point.theta, precision)
    with mp.workdps(precision + GUARD_DIGITS):
        v = mp.inverse(M) * mp.matrix([psi.component_up, psi.component_down])
        s = mp.power(to_mp(mu), mp.mpf(1) / 4)
        return RadialPair(v[0] * s, v[1] * s)


@dataclass(frozen=True)
class PdeResidual:
    residual: SpinorField
    bound: object

    def within(self, factor=10) -> bool:
        return self.residual.norm() <= factor * self.bound


def pde_residual(
    m, mu, point: PolarPoint, precision: int = 30, *, rho_max: float = DEFAULT_RHO_MAX
) -> PdeResidual:
    """``(-Delta_xi + sigma.xi) Psi`` at ``xi = x / mu^{1/3}`` via the radial reduction.

    The angular factors are exact eigenfunctions, so the residual is
    ``mu^{-1/4} (R+ e2 + R- e1)`` with ``(R+, R-)`` the radial residual.
    """
    m = HalfOddInt.parse(m)
    _mu(mu)
    with mp.workdps(precision + GUARD_DIGITS):
        mu_mp = to_mp(mu)
        rho = to_mp(point.r) / mp.cbrt(mu_mp)
        scale = mp.power(mu_mp, mp.mpf(-1) / 4)
    work = working_precision(rho, precision, rho_max)
    base = bounded_function(abs(m), work)
    fn = base if m.twice_m > 0 else base.negate_m()
    res = ode_residual(m, rho, fn, work)
    field = _combine(m, res.residual, point.theta, scale, precision)
    with mp.workdps(precision + GUARD_DIGITS):
        # each spinor entry has modulus one per basis vector
        bound = scale * mp.sqrt(2) * (res.bound.phi_plus + res.bound.phi_minus)
    return PdeResidual(field, bound)


# ---------------------------------------------------------------------------
# Mixing weight
# ---------------------------------------------------------------------------


@lru_cache(maxsize=8192)
def _radial_density(twice_m: int, rho_key: str, precision: int) -> float:
    pair = _radial_pair(HalfOddInt(twice_m), mp.mpf(rho_key), precision, DEFAULT_RHO_MAX)
    return float(abs(pair.phi_plus) ** 2 + abs(pair.phi_minus) ** 2)


def _density(m: HalfOddInt, rho: float, precision: int) -> float:
    # quadrature nodes in r map onto the same rho for every mu up to rounding
    return _radial_density(m.twice_m, f"{rho:.13e}", precision)


def mixing_weight(m, mu, region_constant: float = 1.0, precision: int = 30, *, epsrel: float = 1e-8) -> float:
    """Probability weight of ``Psi_m`` inside ``r <= C mu^{1/3}``.

    The angular integral is exact (``|Psi|^2`` does not depend on theta and
    equals ``2 mu^{-1/2} |F(rho)|^2``); the radial integral over ``r`` is done
    by adaptive Gauss-Kronrod quadrature.
    """
    m = HalfOddInt.parse(m)
    _mu(mu)
    if region_constant <= 0:
        raise ValueError("region constant must be positive")
    s = mu ** (1.0 / 3.0)
    r_max = region_constant * s

    def integrand(r):
        return 2.0 * mu**-0.5 * _density(m, r / s, precision) * r

    val, err, *_ = quad(integrand, 0.0, r_max, epsrel=epsrel, epsabs=0.0, limit=200, full_output=1)
    if not np.isfinite(val) or err > 10 * epsrel * abs(val):
        raise QuadratureError(f"mixing-weight quadrature error {err:g} exceeds tolerance for |W|={val:g}")
    return 2 * math.pi * val


# ---------------------------------------------------------------------------
# Scans
# ---------------------------------------------------------------------------


def _near_amplitude(m, mu, precision):
    s = mu ** (1.0 / 3.0)
    best = mp.mpf(0)
    for rho in NEAR_GRID:
        best = max(best, assemble_psi(m, mu, PolarPoint(rho * s), precision).norm())
    return float(best)


def _far_amplitude(m, mu, far_radius, precision, rho_max):
    """WKB envelope of ``|Psi|`` at ``r = far_radius``, maximized over a +-1% window.

    ``|Psi|`` does not depend on theta, so the theta envelope is trivial.
    """
    m = abs(HalfOddInt.parse(m))
    s = mu ** (1.0 / 3.0)
    best = 0.0
    for r in np.linspace(0.99 * far_radius, 1.01 * far_radius, 5):
        env = wkb_envelope(m, r / s, precision, rho_max=rho_max)
        amp = math.sqrt(2.0) * mu**-0.25 * float(mp.sqrt(env.phi_plus**2 + env.phi_minus**2))
        best = max(best, amp)
    return best


def _observable(args):
    observable, m, mu, params = args
    if observable == "amplitude":
        return _near_amplitude(m, mu, params["precision"])
    if observable == "mixing":
        return mixing_weight(m, mu, params["region_constant"], params["precision"])
    return _far_amplitude(m, mu, params["far_radius"], params["precision"], params["rho_max"])


def fit_power_law(mu_values, values) -> tuple[float, float]:
    """Least-squares slope of ``log(value)`` against ``log(mu)`` and the RMS residual."""
    x = np.log(np.asarray(mu_values, dtype=float))
    y = np.asarray(values, dtype=float)
    if np.any(~np.isfinite(y)) or np.any(y <= 0):
        raise DegenerateFitError("observable must be finite and positive for a log-log fit")
    y = np.log(y)
    slope, intercept = np.polyfit(x, y, 1)
    resid = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    return float(slope), resid


def scaling_scan(
    observable: str, m, mu_list, *, region_constant: float = 1.0, far_radius: float = 0.1,
    precision: int = 30, rho_max: float | None = None, n_jobs: int = 1,
) -> ScanResult:
    """Evaluate a scaling observable across ``mu_list`` and fit its power of ``mu``.

    ``observable`` is ``"amplitude"`` (max ``|Psi|`` on the fixed scaled grid
    ``rho in [0, 2]``), ``"mixing"`` (:func:`mixing_weight`) or
    ``"far_amplitude"`` (envelope of ``|Psi|`` at ``r = far_radius``).
    ``n_jobs > 1`` evaluates the ``mu`` values in worker processes; mpmath's
    precision is process-global, so threads are not used.
    """
    if observable not in OBSERVABLES:
        raise ValueError(f"observable must be one of {OBSERVABLES}, got {observable!r}")
    mus = sorted({float(_mu(mu)) for mu in mu_list}, reverse=True)
    if len(mus) != len(list(mu_list)):
        raise ValueError("mu values must be distinct")
    if len(mus) < 4:
        raise ValueError("a scan needs at least four mu values")
    if math.log10(mus[0] / mus[-1]) < 3 - 1e-12:
        raise ValueError("mu values must span at least three decades")
    if rho_max is None:
        rho_max = FAR_RHO_MAX if observable == "far_amplitude" else DEFAULT_RHO_MAX
    params = dict(region_constant=region_constant, far_radius=far_radius, precision=precision, rho_max=rho_max)
    tasks = [(observable, str(HalfOddInt.parse(m)), mu, params) for mu in mus]
    if n_jobs > 1:
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            values = list(pool.map(_observable, tasks))
    else:
        values = [_observable(t) for t in tasks]
    slope, resid = fit_power_law(mus, values)
    return ScanResult(mus, values, slope, resid)


def electronic_surfaces(model: ModelCoeffs, r) -> tuple[float, float]:
    """``E+- = Q0(r) +- r sqrt(Q1^2 + Q2^2)``."""
    if r < 0:
        raise ValueError("r must be >= 0")
    q = r * math.hypot(model.Q1(r), model.Q2(r))
    q0 = model.Q0(r)
    return q0 + q, q0 - q
