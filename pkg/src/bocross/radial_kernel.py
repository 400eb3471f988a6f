"""Exact solutions of the coupled zero-energy radial system near a conic crossing.

The system, for half-odd ``m`` and ``rho > 0``::

    -phi+'' - phi+'/rho + (m - 1/2)^2/rho^2 phi+ + rho phi- = 0
    -phi-'' - phi-'/rho + (m + 1/2)^2/rho^2 phi- + rho phi+ = 0

Its solutions regular at the origin are spanned by two 0F3 basis solutions
in ``zeta = rho^6 / 6^4``. The combination without the ``exp(2/3 rho^{3/2})``
mode is returned by :func:`bounded_solution`, normalized to the oscillatory
amplitude ``(2 pi)^{-3/2} rho^{-3/4}``.

Radial functions are represented symbolically as :class:`RadialFunction`,
sums of ``coef * rho^power * 0F3(params; zeta)`` per component, so that
derivatives are exact series derivatives rather than finite differences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath as mp

from .errors import InsufficientPrecisionError
from .hypergeom import GUARD_DIGITS, F03Params, f03, f03_derivative, gamma, series_coefficients, to_mp

__all__ = [
    "HalfOddInt",
    "IndicialData",
    "RadialFunction",
    "RadialJet",
    "RadialPair",
    "ResidualResult",
    "SeriesTerm",
    "basis_function",
    "basis_params",
    "basis_solution",
    "blowup_coefficient",
    "bounded_function",
    "bounded_jet",
    "bounded_solution",
    "cancellation_digits",
    "decaying_combination",
    "factor_shifts",
    "factorized_operator_check",
    "indicial_exponents",
    "large_rho_asymptotic",
    "lower_from_upper_discrepancy",
    "negate_m",
    "ode_residual",
    "small_rho_limit",
    "wkb_envelope",
    "working_precision",
]

DEFAULT_RHO_MAX = 40.0
ZETA_SCALE = 6**4


@dataclass(frozen=True, order=True)
class HalfOddInt:
    """Angular quantum number ``m = twice_m / 2`` with ``twice_m`` odd."""

    twice_m: int

    def __post_init__(self):
        if int(self.twice_m) != self.twice_m or self.twice_m % 2 == 0:
            raise ValueError(f"twice_m must be an odd integer, got {self.twice_m!r}")

    @classmethod
    def parse(cls, value) -> "HalfOddInt":
        """Accept ``"3/2"``, ``"-1/2"``, ``1.5``, ``Fraction(5, 2)`` or a HalfOddInt."""
        if isinstance(value, cls):
            return value
        if isinstance(value, str):
            value = Fraction(value.strip())
        twice = Fraction(value) * 2
        if twice.denominator != 1:
            raise ValueError(f"{value!r} is not a half-odd integer")
        return cls(int(twice))

    @property
    def value(self) -> Fraction:
        return Fraction(self.twice_m, 2)

    def __neg__(self) -> "HalfOddInt":
        return HalfOddInt(-self.twice_m)

    def __abs__(self) -> "HalfOddInt":
        return HalfOddInt(abs(self.twice_m))

    def __str__(self) -> str:
        return f"{self.twice_m}/2"


def _m(m) -> HalfOddInt:
    return HalfOddInt.parse(m)


def _require_positive(m: HalfOddInt) -> None:
    if m.twice_m < 1:
        raise ValueError(f"construction requires m >= 1/2 (got {m}); use negate_m for negative m")


@dataclass(frozen=True)
class RadialPair:
    """Upper and lower radial components at one point."""

    phi_plus: object
    phi_minus: object

    def __iter__(self):
        return iter((self.phi_plus, self.phi_minus))

    def __add__(self, other: "RadialPair") -> "RadialPair":
        return RadialPair(self.phi_plus + other.phi_plus, self.phi_minus + other.phi_minus)

    def __sub__(self, other: "RadialPair") -> "RadialPair":
        return RadialPair(self.phi_plus - other.phi_plus, self.phi_minus - other.phi_minus)

    def __mul__(self, k) -> "RadialPair":
        return RadialPair(self.phi_plus * k, self.phi_minus * k)

    __rmul__ = __mul__

    def norm(self):
        return mp.sqrt(abs(self.phi_plus) ** 2 + abs(self.phi_minus) ** 2)


@dataclass(frozen=True)
class IndicialData:
    exponents: tuple
    degenerate: bool
    log_solution_present: bool
    behaviours: tuple


def indicial_exponents(m) -> IndicialData:
    """Frobenius exponents at rho = 0: ``+-(|m| - 1/2)`` upper, ``+-(|m| + 1/2)`` lower.

    At ``|m| = 1/2`` the upper roots coincide and the second upper solution
    carries ``ln(rho)``.
    """
    mv = abs(_m(m)).value
    alpha, beta = mv - Fraction(1, 2), mv + Fraction(1, 2)
    exps = (alpha, -alpha, beta, -beta)
    if alpha == 0:
        return IndicialData(exps, True, True, ("1", "ln(rho)", "rho", "1/rho"))
    return IndicialData(
        exps, False, False, (f"rho^{alpha}", f"rho^{-alpha}", f"rho^{beta}", f"rho^{-beta}")
    )


# ---------------------------------------------------------------------------
# Symbolic radial functions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SeriesTerm:
    """``coef * rho^power * 0F3(params; rho^6 / 6^4)``; ``params=None`` is a monomial."""

    coef: object
    power: Fraction
    params: F03Params | None = None

    def scaled(self, k) -> "SeriesTerm":
        return SeriesTerm(self.coef * k, self.power, self.params)

    def conjugate(self) -> "SeriesTerm":
        coef = self.coef if isinstance(self.coef, (int, Fraction)) else mp.conj(self.coef)
        return SeriesTerm(coef, self.power, self.params)


@dataclass(frozen=True)
class RadialJet:
    """Value, ``rho d/drho`` and ``(rho d/drho)^2`` of each component, with error bounds."""

    value: RadialPair
    theta: RadialPair
    theta2: RadialPair
    value_bound: RadialPair
    theta_bound: RadialPair
    theta2_bound: RadialPair

    def derivative(self, rho) -> RadialPair:
        return RadialPair(self.theta.phi_plus / rho, self.theta.phi_minus / rho)


def _term_jet(term: SeriesTerm, rho, zeta, precision: int):
    p = to_mp(term.power)
    pre = to_mp(term.coef) * (mp.power(rho, p) if rho != 0 or p != 0 else mp.mpf(1))
    if term.params is None:
        return pre, pre * p, pre * p * p, (0, 0, 0)
    F = f03(term.params, zeta, precision)
    F1 = f03_derivative(term.params, zeta, precision)
    a, b, c = term.params.as_mp()
    F2 = f03_derivative(term.params.shifted(1, 1, 1), zeta, precision).scaled(1 / (a * b * c))
    zF1, zzF2 = zeta * F1.value, zeta**2 * F2.value
    v = pre * F.value
    t1 = pre * (p * F.value + 6 * zF1)
    t2 = pre * (p * p * F.value + (12 * p + 36) * zF1 + 36 * zzF2)
    ap, az = abs(pre), abs(zeta)
    bounds = (
        ap * F.truncation_bound,
        ap * (abs(p) * F.truncation_bound + 6 * az * F1.truncation_bound),
        ap * (p * p * F.truncation_bound + abs(12 * p + 36) * az * F1.truncation_bound
              + 36 * az**2 * F2.truncation_bound),
    )
    return v, t1, t2, bounds


def _component_jet(terms, rho, zeta, precision: int):
    v = t1 = t2 = mp.mpf(0)
    b0 = b1 = b2 = mp.mpf(0)
    mags = mp.mpf(0)
    for term in terms:
        tv, tt1, tt2, (e0, e1, e2) = _term_jet(term, rho, zeta, precision)
        v, t1, t2 = v + tv, t1 + tt1, t2 + tt2
        b0, b1, b2 = b0 + e0, b1 + e1, b2 + e2
        mags += abs(tv) + abs(tt1) + abs(tt2)
    # cancellation between terms at this working precision
    rnd = 4 * len(terms) * mags * mp.eps
    return (v, t1, t2), (b0 + rnd, b1 + rnd, b2 + rnd)


@dataclass(frozen=True)
class RadialFunction:
    """A two-component radial function built from :class:`SeriesTerm` sums."""

    upper: tuple = field(default_factory=tuple)
    lower: tuple = field(default_factory=tuple)

    def __add__(self, other: "RadialFunction") -> "RadialFunction":
        return RadialFunction(self.upper + other.upper, self.lower + other.lower)

    def __sub__(self, other: "RadialFunction") -> "RadialFunction":
        return self + other.scaled(-1)

    def scaled(self, k) -> "RadialFunction":
        return RadialFunction(tuple(t.scaled(k) for t in self.upper), tuple(t.scaled(k) for t in self.lower))

    def negate_m(self) -> "RadialFunction":
        """Function for ``-m``: components swapped and complex conjugated."""
        return RadialFunction(
            tuple(t.conjugate() for t in self.lower), tuple(t.conjugate() for t in self.upper)
        )

    def jet(self, rho, precision: int = 30) -> RadialJet:
        with mp.workdps(precision + GUARD_DIGITS):
            rho = to_mp(rho)
            zeta = rho**6 / ZETA_SCALE
            (vu, tu, ttu), (bu0, bu1, bu2) = _component_jet(self.upper, rho, zeta, precision)
            (vl, tl, ttl), (bl0, bl1, bl2) = _component_jet(self.lower, rho, zeta, precision)
            return RadialJet(
                RadialPair(vu, vl), RadialPair(tu, tl), RadialPair(ttu, ttl),
                RadialPair(bu0, bl0), RadialPair(bu1, bl1), RadialPair(bu2, bl2),
            )

    def evaluate(self, rho, precision: int = 30) -> RadialPair:
        with mp.workdps(precision + GUARD_DIGITS):
            rho = to_mp(rho)
            zeta = rho**6 / ZETA_SCALE
            vals = []
            for terms in (self.upper, self.lower):
                s = mp.mpf(0)
                for t in terms:
                    p = to_mp(t.power)
                    pre = to_mp(t.coef) * (mp.power(rho, p) if rho != 0 or p != 0 else mp.mpf(1))
                    s += pre if t.params is None else pre * f03(t.params, zeta, precision).value
                vals.append(s)
            return RadialPair(*vals)


# ---------------------------------------------------------------------------
# Basis solutions and the bounded combination
# ---------------------------------------------------------------------------

_THIRD = Fraction(1, 3)


def _coupling_prefactors(m: Fraction):
    """Prefactors of the subdominant components of the two basis solutions."""
    return 1 / (6 + 4 * m), 1 / (12 + 8 * m)


def basis_params(j: int, m) -> tuple[F03Params, F03Params]:
    """(upper, lower) 0F3 parameter triples of basis solution ``j``."""
    mv = _m(m).value
    if j == 1:
        return (
            F03Params(_THIRD, Fraction(1, 2) + mv / 3, Fraction(5, 6) + mv / 3),
            F03Params(4 * _THIRD, Fraction(3, 2) + mv / 3, Fraction(5, 6) + mv / 3),
        )
    if j == 2:
        return (
            F03Params(5 * _THIRD, Fraction(3, 2) + mv / 3, Fraction(7, 6) + mv / 3),
            F03Params(2 * _THIRD, Fraction(1, 2) + mv / 3, Fraction(7, 6) + mv / 3),
        )
    raise ValueError(f"basis index must be 1 or 2, got {j!r}")


def basis_function(j: int, m) -> RadialFunction:
    """Symbolic basis solution ``j`` (1: leading upper ``rho^(m-1/2)``, 2: leading lower ``rho^(m+1/2)``)."""
    m = _m(m)
    _require_positive(m)
    mv = m.value
    up, lo = basis_params(j, m)
    k1, k2 = _coupling_prefactors(mv)
    half = Fraction(1, 2)
    if j == 1:
        return RadialFunction((SeriesTerm(Fraction(1), mv - half, up),), (SeriesTerm(k1, mv + 5 * half, lo),))
    return RadialFunction((SeriesTerm(k2, mv + 7 * half, up),), (SeriesTerm(Fraction(1), mv + half, lo),))


def basis_solution(j: int, m, rho, precision: int = 30) -> RadialPair:
    """Evaluate basis solution ``j`` at (real or complex) ``rho``."""
    return basis_function(j, m).evaluate(rho, precision)


@lru_cache(maxsize=256)
def _gamma_products(twice_m: int, precision: int):
    """Gamma(1/3)G(1/2+m/3)G(5/6+m/3) 6^(1/6+2m/3) and Gamma(2/3)G(1/2+m/3)G(7/6+m/3) 6^(5/6+2m/3)."""
    mv = Fraction(twice_m, 2)
    g = lambda x: gamma(x, precision)  # noqa: E731
    with mp.workdps(precision + GUARD_DIGITS):
        common = g(Fraction(1, 2) + mv / 3)
        third = to_mp(_THIRD)
        p1 = g(_THIRD) * common * g(Fraction(5, 6) + mv / 3) * mp.power(6, third / 2 + 2 * to_mp(mv) / 3)
        p2 = g(2 * _THIRD) * common * g(Fraction(7, 6) + mv / 3) * mp.power(6, 5 * third / 2 + 2 * to_mp(mv) / 3)
        return p1, p2


def blowup_coefficient(j: int, m, precision: int = 30):
    """``C_j`` with ``2 F^(j)(rho) ~ C_j rho^{-3/4} exp(2/3 rho^{3/2}) (1, 1)``.

    Includes the ``(2 pi)^{-3/2}`` factor of the 0F3 large-argument form.
    """
    m = _m(m)
    _require_positive(m)
    p1, p2 = _gamma_products(m.twice_m, precision)
    with mp.workdps(precision + GUARD_DIGITS):
        return (p1 if j == 1 else p2) / (2 * mp.pi) ** mp.mpf(1.5)


def decaying_combination(m, precision: int = 30) -> RadialFunction:
    """Unnormalized combination free of the growing mode.

    ``G(2/3)G(1/2+m/3)G(7/6+m/3) 6^(5/6) F^(1) - G(1/3)G(1/2+m/3)G(5/6+m/3) 6^(1/6) F^(2)``
    """
    m = _m(m)
    mv = m.value
    with mp.workdps(precision + GUARD_DIGITS):
        common = gamma(Fraction(1, 2) + mv / 3, precision)
        w1 = gamma(2 * _THIRD, precision) * common * gamma(Fraction(7, 6) + mv / 3, precision) * mp.power(6, mp.mpf(5) / 6)
        w2 = gamma(_THIRD, precision) * common * gamma(Fraction(5, 6) + mv / 3, precision) * mp.power(6, mp.mpf(1) / 6)
        return basis_function(1, m).scaled(w1) - basis_function(2, m).scaled(w2)


def bounded_function(m, precision: int = 30) -> RadialFunction:
    """Normalized bounded solution ``3^{-1/2} (F^(1)/P1 - F^(2)/P2)`` as a RadialFunction.

    ``P1, P2`` are the Gamma/power-of-6 growth products, so the growing modes
    cancel and the oscillatory tail has amplitude ``(2 pi)^{-3/2} rho^{-3/4}``.
    """
    m = _m(m)
    _require_positive(m)
    p1, p2 = _gamma_products(m.twice_m, precision)
    with mp.workdps(precision + GUARD_DIGITS):
        s3 = mp.sqrt(3)
        return basis_function(1, m).scaled(1 / (s3 * p1)) - basis_function(2, m).scaled(1 / (s3 * p2))


def cancellation_digits(rho) -> int:
    """Extra digits lost when the two growing basis solutions cancel at ``rho``."""
    r = abs(complex(to_mp(rho)))
    return int(math.ceil((2.0 / 3.0) * r**1.5 / math.log(10))) + 10


def working_precision(rho, precision: int, rho_max: float = DEFAULT_RHO_MAX) -> int:
    """Precision needed to resolve the bounded solution at ``rho`` to ``precision`` digits."""
    if abs(complex(to_mp(rho))) > rho_max:
        raise InsufficientPrecisionError(
            f"rho={float(abs(to_mp(rho))):g} exceeds rho_max={rho_max:g}; raise rho_max explicitly"
        )
    work = precision + cancellation_digits(rho)
    return 10 * ((work + 9) // 10)


def bounded_solution(m, rho, precision: int = 30, *, rho_max: float = DEFAULT_RHO_MAX) -> RadialPair:
    """The bounded, decaying-at-infinity solution at ``rho``.

    Working precision is raised by :func:`cancellation_digits` so the result
    carries ``precision`` correct digits; raises
    :class:`InsufficientPrecisionError` beyond ``rho_max``.
    """
    work = working_precision(rho, precision, rho_max)
    pair = bounded_function(m, work).evaluate(rho, work)
    with mp.workdps(precision + GUARD_DIGITS):
        return RadialPair(+pair.phi_plus, +pair.phi_minus)


def bounded_jet(m, rho, precision: int = 30, *, rho_max: float = DEFAULT_RHO_MAX) -> RadialJet:
    """:class:`RadialJet` of the bounded solution with automatic precision escalation."""
    work = working_precision(rho, precision, rho_max)
    return bounded_function(m, work).jet(rho, work)


def small_rho_limit(m, rho, precision: int = 30) -> RadialPair:
    """Leading small-rho behaviour of the bounded solution.

    ``3^{-1/2} rho^{m-1/2} / (G(1/2+m/3) 6^{(4m+1)/6})`` times
    ``(1/(G(1/3)G(5/6+m/3)),  -rho/(G(2/3)G(7/6+m/3) 6^{2/3}))``.
    """
    m = _m(m)
    _require_positive(m)
    mv = m.value
    g = lambda x: gamma(x, precision)  # noqa: E731
    with mp.workdps(precision + GUARD_DIGITS):
        rho = to_mp(rho)
        pw = mp.power(rho, to_mp(mv - Fraction(1, 2))) if rho != 0 or mv != Fraction(1, 2) else mp.mpf(1)
        common = pw / (mp.sqrt(3) * g(Fraction(1, 2) + mv / 3) * mp.power(6, to_mp((4 * mv + 1) / 6)))
        upper = common / (g(_THIRD) * g(Fraction(5, 6) + mv / 3))
        lower = -common * rho / (g(2 * _THIRD) * g(Fraction(7, 6) + mv / 3) * mp.power(6, mp.mpf(2) / 3))
        return RadialPair(upper, lower)


def large_rho_asymptotic(m, rho, precision: int = 30) -> RadialPair:
    """``(2 pi)^{-3/2} rho^{-3/4} cos(2/3 rho^{3/2} - pi (m/3 + 1/4)) (1, -1)``."""
    mv = to_mp(_m(m).value)
    with mp.workdps(precision + GUARD_DIGITS):
        rho = to_mp(rho)
        v = (2 * mp.pi) ** mp.mpf(-1.5) * rho ** mp.mpf(-0.75) * mp.cos(
            mp.mpf(2) / 3 * rho ** mp.mpf(1.5) - mp.pi * (mv / 3 + mp.mpf(1) / 4)
        )
        return RadialPair(v, -v)


def wkb_envelope(m, rho, precision: int = 30, *, rho_max: float = DEFAULT_RHO_MAX) -> RadialPair:
    """Per-component WKB envelope of the bounded solution.

    With ``u = rho^{3/4} phi``, the envelope is ``rho^{-3/4} sqrt(u^2 + u'^2/rho)``,
    which removes the ``cos(2/3 rho^{3/2})`` oscillation.
    """
    jet = bounded_jet(m, rho, precision, rho_max=rho_max)
    with mp.workdps(precision + GUARD_DIGITS):
        rho = to_mp(rho)
        out = []
        for v, t in zip(jet.value, jet.theta):
            out.append(mp.sqrt(abs(v) ** 2 + abs(mp.mpf(3) / 4 * v + t) ** 2 / rho**3))
        return RadialPair(*out)


# ---------------------------------------------------------------------------
# Verification helpers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ResidualResult:
    """Residual of the radial system and the error budget it should respect."""

    residual: RadialPair
    bound: RadialPair

    def ratio(self):
        """max |residual| / bound over the two components (inf if a bound is zero)."""
        out = []
        for r, b in zip(self.residual, self.bound):
            out.append(mp.inf if b == 0 and r != 0 else (abs(r) / b if b != 0 else mp.mpf(0)))
        return max(out)

    def within(self, factor=10) -> bool:
        return all(abs(r) <= factor * b for r, b in zip(self.residual, self.bound))


def ode_residual(m, rho, pair_fn: RadialFunction, precision: int = 30) -> ResidualResult:
    """Apply the radial operator for angular number ``m`` (either sign) to ``pair_fn`` at ``rho``.

    Derivatives come from exact differentiation of the 0F3 series; the bound
    propagates every series truncation bound plus rounding at the working
    precision.
    """
    mv = to_mp(_m(m).value)
    jet = pair_fn.jet(rho, precision)
    with mp.workdps(precision + GUARD_DIGITS):
        rho = to_mp(rho)
        r2 = rho * rho
        vu, vl = jet.value
        tu, tl = jet.theta2
        cu, cl = (mv - mp.mpf(1) / 2) ** 2, (mv + mp.mpf(1) / 2) ** 2
        res_u = (-tu + cu * vu) / r2 + rho * vl
        res_l = (-tl + cl * vl) / r2 + rho * vu
        bu0, bl0 = jet.value_bound
        bu2, bl2 = jet.theta2_bound
        ar = abs(rho)
        eps = 8 * mp.eps
        bnd_u = (bu2 + cu * bu0) / abs(r2) + ar * bl0 + eps * ((abs(tu) + cu * abs(vu)) / abs(r2) + ar * abs(vl))
        bnd_l = (bl2 + cl * bl0) / abs(r2) + ar * bu0 + eps * ((abs(tl) + cl * abs(vl)) / abs(r2) + ar * abs(vu))
        return ResidualResult(RadialPair(res_u, res_l), RadialPair(bnd_u, bnd_l))


def negate_m(pair):
    """Map a ``+m`` solution to the ``-m`` one: swap components and conjugate.

    Accepts a :class:`RadialPair` or a :class:`RadialFunction`.
    """
    if isinstance(pair, RadialFunction):
        return pair.negate_m()
    return RadialPair(mp.conj(pair.phi_minus), mp.conj(pair.phi_plus))


def factor_shifts(component: str, m) -> tuple:
    """Shifts ``s`` of the factors ``(D + s)`` in the scalar fourth-order equation of a component."""
    mv = _m(m).value
    if component in ("+", "upper"):
        return (Fraction(0), -2 * _THIRD, mv / 3 - Fraction(1, 2), mv / 3 - Fraction(1, 6))
    if component in ("-", "lower"):
        return (Fraction(0), -_THIRD, mv / 3 - Fraction(1, 2), mv / 3 + Fraction(1, 6))
    raise ValueError(f"component must be '+' or '-', got {component!r}")


@dataclass(frozen=True)
class FactorizationCheck:
    interior_residual: object
    boundary_term: object


def factorized_operator_check(component: str, m, precision: int = 30, *, n_terms: int = 50, zeta=1) -> FactorizationCheck:
    """Apply ``prod(D + s) - zeta`` to the truncated zeta-series of one component.

    The component of each basis solution is divided by ``zeta^{(m -+ 1/2)/6}``
    and expanded as ``sum d_k zeta^(k+e)``. With rational parameters the
    interior coefficients are computed exactly and must vanish; the only
    survivor is the boundary term ``d_(N-1) zeta^(N+e)``, whose largest
    magnitude over both basis solutions is returned.
    """
    m = _m(m)
    mv = m.value
    shifts = factor_shifts(component, m)
    base = mv - Fraction(1, 2) if component in ("+", "upper") else mv + Fraction(1, 2)
    interior = Fraction(0)
    boundary = mp.mpf(0)
    for j in (1, 2):
        fn = basis_function(j, m)
        terms = fn.upper if component in ("+", "upper") else fn.lower
        for term in terms:
            e = (term.power - base) / 6
            d = series_coefficients(term.params, n_terms)
            for n in range(n_terms):
                poly = Fraction(1)
                for s in shifts:
                    poly *= n + e + s
                coeff = poly * d[n] - (d[n - 1] if n > 0 else 0)
                interior = max(interior, abs(coeff))
            with mp.workdps(precision + GUARD_DIGITS):
                z = to_mp(zeta)
                boundary = max(boundary, abs(to_mp(d[-1])) * abs(z) ** (n_terms + to_mp(e)))
    return FactorizationCheck(interior, boundary)


def lower_from_upper_discrepancy(j: int, m, n_terms: int = 30) -> Fraction:
    """Exact mismatch between the dominant-to-subdominant reduction and the closed form.

    For ``j = 1`` the lower component is rebuilt from the upper one as
    ``rho^{a-3} rho d/drho (rho d/drho + 2a) (phi+ / rho^a)`` with
    ``a = m - 1/2``; for ``j = 2`` the roles swap with ``a = m + 1/2``.
    Returns the largest coefficient difference over ``n_terms`` orders.
    """
    m = _m(m)
    fn = basis_function(j, m)
    src, dst = (fn.upper[0], fn.lower[0]) if j == 1 else (fn.lower[0], fn.upper[0])
    a = src.power
    if dst.power != a + 3:
        return Fraction(10**9)
    c = series_coefficients(src.params, n_terms + 1)
    d = series_coefficients(dst.params, n_terms)
    worst = Fraction(0)
    for k in range(n_terms):
        # rho^{6(k+1)} term of the source maps onto the rho^{6k} term of the target
        kk = k + 1
        rebuilt = Fraction(src.coef) * c[kk] * 6 * kk * (6 * kk + 2 * a) / Fraction(ZETA_SCALE) ** kk
        closed = Fraction(dst.coef) * d[k] / Fraction(ZETA_SCALE) ** k
        worst = max(worst, abs(rebuilt - closed))
    return worst
