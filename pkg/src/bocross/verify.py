"""Self-verification suites run by ``bocross --command verify``.

Each check compares a measured error against a threshold and never raises;
exceptions inside a check are reported as failures.
"""

from __future__ import annotations

import math
import random
from dataclasses import asdict, dataclass
from fractions import Fraction

import mpmath as mp
import numpy as np

from . import radial_kernel as rk
from .hypergeom import F03Params, f03, f03_asymptotic, f03_contiguous_lower_c, f03_derivative, series_coefficients, to_mp
from .ode_oracle import frobenius_initial_data, integrate_canonical

__all__ = ["CheckResult", "VerifyReport", "run_checks", "CHECK_NAMES"]

M_VALUES = ("1/2", "3/2", "5/2")


@dataclass(frozen=True)
class CheckResult:
    name: str
    measured: float
    threshold: float
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class VerifyReport:
    checks: tuple

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def as_dict(self) -> dict:
        return {"passed": self.passed, "checks": [asdict(c) for c in self.checks]}


def _residual_basis(precision):
    worst = 0.0
    for m in M_VALUES:
        for j in (1, 2):
            fn = rk.basis_function(j, m)
            for rho in (0.05, 0.7, 3.0, 8.0):
                worst = max(worst, float(rk.ode_residual(m, rho, fn, precision).ratio()))
    return worst, 10.0


def _residual_bounded(precision):
    worst = 0.0
    for m in M_VALUES:
        for rho in (0.5, 4.0, 12.0):
            work = rk.working_precision(rho, precision)
            worst = max(worst, float(rk.ode_residual(m, rho, rk.bounded_function(m, work), work).ratio()))
    return worst, 10.0


def _oracle(precision):
    worst = 0.0
    grid = np.geomspace(1e-2, 5.0, 8)
    for m in M_VALUES:
        for j in (1, 2):
            traj = integrate_canonical(m, 1e-3, 5.0, frobenius_initial_data(j, m, 1e-3, 4), 1e-12, rho_eval=grid)
            for i, rho in enumerate(grid):
                exact = rk.basis_solution(j, m, rho, precision)
                for k, e in enumerate(exact):
                    worst = max(worst, abs(traj.values[i, k] - float(e)) / abs(float(e)))
    return worst, 1e-6


def _negate_m(precision):
    worst = 0.0
    for m in M_VALUES:
        mneg = -rk.HalfOddInt.parse(m)
        for fn in (rk.basis_function(1, m), rk.basis_function(2, m), rk.bounded_function(m, precision)):
            for rho in (0.3, 2.0):
                worst = max(worst, float(rk.ode_residual(mneg, rho, fn.negate_m(), precision).ratio()))
    return worst, 10.0


def _cube_root(precision):
    worst = 0.0
    for m in M_VALUES:
        mv = rk.HalfOddInt.parse(m).value
        for j in (1, 2):
            fn = rk.basis_function(j, m)
            p = mv - Fraction(1, 2) if j == 1 else mv + Fraction(1, 2)
            for rho in (0.4, 1.7):
                with mp.workdps(precision + 12):
                    rot = mp.expj(2 * mp.pi / 3) * rho
                a = fn.jet(rot, precision)
                b = fn.jet(rho, precision)
                with mp.workdps(precision + 12):
                    wj = mp.expj(2 * mp.pi * to_mp(p) / 3)
                    for x, y, bx, by in zip(a.value, b.value, a.value_bound, b.value_bound):
                        tol = bx + by + 10 * mp.eps * abs(y)
                        worst = max(worst, float(abs(x - wj * y) / tol))
    return worst, 1.0


def _identity_derivative(precision):
    rng = random.Random(7)
    worst = 0.0
    for _ in range(6):
        prm = F03Params(*(Fraction(rng.randint(1, 30), rng.randint(1, 6)) for _ in range(3)))
        z = mp.mpf(rng.uniform(-50, 50))
        d = f03_derivative(prm, z, precision)
        with mp.workdps(precision + 30):
            # fourth-order central difference, truncation ~ h^4
            h = mp.mpf(10) ** -10
            F = lambda t: f03(prm, t, precision + 30).value  # noqa: E731
            num = (8 * (F(z + h) - F(z - h)) - (F(z + 2 * h) - F(z - 2 * h))) / (12 * h)
        worst = max(worst, float(abs(d.value - num) / (d.truncation_bound + mp.mpf(10) ** -precision * abs(num))))
    return worst, 10.0


def _identity_contiguous(precision):
    rng = random.Random(11)
    worst = 0.0
    for _ in range(6):
        prm = F03Params(*(Fraction(rng.randint(1, 30), rng.randint(1, 6)) for _ in range(3)))
        if prm.c == 1:
            continue
        z = mp.mpf(rng.uniform(-50, 50))
        lhs = f03_contiguous_lower_c(prm, z, precision)
        rhs = f03(prm.shifted(dc=-1), z, precision)
        with mp.workdps(precision + 12):
            c1 = mp.mpf(prm.c.numerator) / prm.c.denominator - 1
            tol = lhs.truncation_bound + abs(c1) * rhs.truncation_bound
            worst = max(worst, float(abs(lhs.value - c1 * rhs.value) / tol))
    return worst, 10.0


def _identity_recurrence(precision):
    """Coefficients satisfy ``n (n+a-1)(n+b-1)(n+c-1) d_n = d_(n-1)`` exactly."""
    rng = random.Random(13)
    bad = 0
    for _ in range(10):
        a, b, c = (Fraction(rng.randint(1, 30), rng.randint(1, 6)) for _ in range(3))
        d = series_coefficients(F03Params(a, b, c), 25)
        bad += sum(1 for n in range(1, 25) if n * (n + a - 1) * (n + b - 1) * (n + c - 1) * d[n] != d[n - 1])
    return float(bad), 0.0


def _factorization(precision):
    worst = mp.mpf(0)
    for m in M_VALUES:
        for comp in ("+", "-"):
            chk = rk.factorized_operator_check(comp, m, precision)
            if chk.interior_residual != 0:
                return float("inf"), 0.0
            worst = max(worst, chk.boundary_term)
    return float(worst), 1e-100


def _asymptotic_f03(precision):
    prm = F03Params(Fraction(1, 3), Fraction(2, 3), Fraction(5, 6))
    x = mp.mpf(10) ** 4
    ratio = f03_asymptotic(prm, x, precision) / f03(prm, x, precision).value
    return abs(float(ratio) - 1.0), 1e-2


def _small_rho(precision):
    worst = 0.0
    for m in M_VALUES:
        num = rk.bounded_solution(m, 1e-2, precision)
        ref = rk.small_rho_limit(m, 1e-2, precision)
        for a, b in zip(num, ref):
            worst = max(worst, abs(float(a / b) - 1.0))
    return worst, 1e-3


def _large_rho(precision):
    worst = 0.0
    for rho in (15.0, 20.0, 25.0):
        env = rk.wkb_envelope("1/2", rho, precision)
        scale = (2 * math.pi) ** 1.5 * rho**0.75
        for e in env:
            worst = max(worst, abs(float(e) * scale - 1.0))
    return worst, 5e-2


_CHECKS = (
    ("residual.basis", _residual_basis),
    ("residual.bounded", _residual_bounded),
    ("oracle.equivalence", _oracle),
    ("symmetry.negate_m", _negate_m),
    ("symmetry.cube_root", _cube_root),
    ("identity.derivative", _identity_derivative),
    ("identity.contiguous", _identity_contiguous),
    ("identity.coefficient_recurrence", _identity_recurrence),
    ("identity.factorization", _factorization),
    ("asymptotic.f03_ratio", _asymptotic_f03),
    ("asymptotic.small_rho", _small_rho),
    ("asymptotic.large_rho_envelope", _large_rho),
)

CHECK_NAMES = tuple(name for name, _ in _CHECKS)


def run_checks(precision: int = 30) -> VerifyReport:
    """Run every suite once, in a fixed order."""
    out = []
    for name, fn in _CHECKS:
        try:
            measured, threshold = fn(precision)
            passed = bool(np.isfinite(measured) and measured <= threshold)
            out.append(CheckResult(name, float(measured), float(threshold), passed))
        except Exception as exc:  # reported, not raised
            out.append(CheckResult(name, float("inf"), float("nan"), False, f"{type(exc).__name__}: {exc}"))
    return VerifyReport(tuple(out))
