"""Arbitrary-precision 0F3 series, its identities and asymptotics, and Gamma.

All scalars are :mod:`mpmath` numbers. ``precision`` arguments are decimal
digits; every routine evaluates with a few guard digits on top of the
requested precision and returns values rounded to that working precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Number

import mpmath as mp

from .errors import (
    AsymptoticRegimeError,
    DegenerateParameterError,
    GammaPoleError,
    InvalidParameterError,
    NonConvergenceError,
)

MIN_PRECISION = 16
GUARD_DIGITS = 12

__all__ = [
    "F03Params",
    "SeriesResult",
    "asymptotic_exponent",
    "f03",
    "f03_asymptotic",
    "f03_contiguous_lower_c",
    "f03_derivative",
    "gamma",
    "series_coefficients",
    "term_budget",
    "to_mp",
]


def to_mp(x):
    """Convert ints, Fractions, floats, strings and complex values to mpmath."""
    if isinstance(x, (mp.mpf, mp.mpc)):
        return +x
    if isinstance(x, Fraction):
        return mp.mpf(x.numerator) / x.denominator
    if isinstance(x, complex):
        return mp.mpc(x.real, x.imag)
    return mp.mpmathify(x)


def _is_nonpositive_integer(x) -> bool:
    if isinstance(x, Fraction):
        return x.denominator == 1 and x <= 0
    if isinstance(x, (complex, mp.mpc)):
        if mp.im(x) != 0:
            return False
        x = mp.re(x)
    x = to_mp(x)
    return x <= 0 and x == mp.floor(x)


def _check_precision(precision: int) -> None:
    if int(precision) != precision or precision < MIN_PRECISION:
        raise ValueError(f"precision must be an integer >= {MIN_PRECISION}, got {precision!r}")


# ---------------------------------------------------------------------------
# Gamma (Spouge)
# ---------------------------------------------------------------------------

_LOG10_2PI = math.log10(2 * math.pi)


def _spouge_order(digits: int) -> int:
    # relative error < a^{-1/2} (2 pi)^{-(a + 1/2)}
    return int(math.ceil((digits + 1) / _LOG10_2PI)) + 1


@lru_cache(maxsize=128)
def _spouge_coefficients(a: int, dps: int) -> tuple:
    with mp.workdps(dps):
        coeffs = [mp.sqrt(2 * mp.pi)]
        fact = mp.mpf(1)
        for k in range(1, a):
            if k > 1:
                fact *= k - 1
            ck = mp.power(a - k, k - mp.mpf(1) / 2) * mp.exp(a - k) / fact
            coeffs.append(ck if k % 2 == 1 else -ck)
        return tuple(coeffs)


def gamma(x, precision: int = 30):
    """Gamma function to ``precision`` decimal digits.

    Spouge's approximation for ``Re(x) >= 1/2`` and the reflection formula
    below. Raises :class:`GammaPoleError` at non-positive integers.
    """
    _check_precision(precision)
    if _is_nonpositive_integer(x):
        raise GammaPoleError(f"Gamma has a pole at {x}")
    target = precision + GUARD_DIGITS
    a = _spouge_order(target)
    work = target + int(math.ceil(0.6 * a)) + 10
    work = 10 * ((work + 9) // 10)  # coarse buckets keep the coefficient cache small
    coeffs = _spouge_coefficients(a, work)
    with mp.workdps(work):
        x = to_mp(x)
        if mp.re(x) < 0.5:
            val = mp.pi / (mp.sin(mp.pi * x) * _spouge(1 - x, a, coeffs))
        else:
            val = _spouge(x, a, coeffs)
    with mp.workdps(target):
        return +val


def _spouge(x, a, coeffs):
    z = x - 1
    s = coeffs[0]
    for k in range(1, a):
        s += coeffs[k] / (z + k)
    return mp.power(z + a, z + mp.mpf(1) / 2) * mp.exp(-(z + a)) * s


# ---------------------------------------------------------------------------
# Parameters and results
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class F03Params:
    """Denominator parameters ``(a, b, c)`` of 0F3(; a, b, c; z).

    Rational parameters are best passed as :class:`fractions.Fraction` so they
    are converted to mpmath at the working precision and stay exact in the
    coefficient checks.
    """

    a: Number
    b: Number
    c: Number

    def __post_init__(self):
        for name in ("a", "b", "c"):
            val = getattr(self, name)
            if _is_nonpositive_integer(val):
                raise InvalidParameterError(f"parameter {name}={val} is zero or a negative integer")

    def as_mp(self):
        return to_mp(self.a), to_mp(self.b), to_mp(self.c)

    def shifted(self, da=0, db=0, dc=0) -> "F03Params":
        return F03Params(self.a + da, self.b + db, self.c + dc)

    def __iter__(self):
        return iter((self.a, self.b, self.c))


@dataclass(frozen=True)
class SeriesResult:
    """A summed series value with the number of terms and an error bound.

    ``truncation_bound`` is the largest of the three terms that triggered the
    stopping rule plus a rounding allowance at the working precision, so it
    bounds ``|true value - value|``.
    """

    value: object
    terms_used: int
    truncation_bound: object

    def scaled(self, factor) -> "SeriesResult":
        return SeriesResult(self.value * factor, self.terms_used, self.truncation_bound * abs(factor))


def term_budget(z) -> int:
    """Maximum number of series terms: 10 * ceil(|z|^(1/4)) + 200."""
    return 10 * int(mp.ceil(abs(to_mp(z)) ** 0.25)) + 200


def _convert_arg(z):
    z = to_mp(z)
    if isinstance(z, mp.mpc) and mp.im(z) == 0:
        z = mp.re(z)
    return z


def _sum_series(params: F03Params, z, precision: int, *, weighted: bool = False, max_terms=None):
    """Sum 0F3 (optionally weighted by k + c - 1) with the three-small-terms rule.

    The working precision is raised if the alternating/complex summation
    cancels more digits than the guard covers.
    """
    _check_precision(precision)
    budget = term_budget(z) if max_terms is None else max_terms
    dps = precision + GUARD_DIGITS
    for _ in range(6):
        with mp.workdps(dps):
            a, b, c = params.as_mp()
            zz = _convert_arg(z)
            thr = mp.mpf(10) ** (-(precision + 5))
            term = mp.mpf(1)
            w0 = (c - 1) if weighted else 1
            s = term * w0
            abs_sum = abs(s)
            max_abs = abs(s)
            tail = []
            k = 0
            while True:
                term = term * zz / ((k + 1) * (a + k) * (b + k) * (c + k))
                k += 1
                wt = term * (k + c - 1) if weighted else term
                s += wt
                mag = abs(wt)
                abs_sum += mag
                if mag > max_abs:
                    max_abs = mag
                if mag < thr * abs(s):
                    tail.append(mag)
                    if len(tail) == 3:
                        break
                else:
                    tail = []
                if k + 1 >= budget:
                    raise NonConvergenceError(
                        f"0F3 series at z={mp.nstr(zz, 8)} not converged within {budget} terms"
                    )
            if s == 0:
                lost = 0
            else:
                lost = float(mp.log10(max_abs / abs(s))) if max_abs > abs(s) else 0.0
            if lost <= dps - precision - 4:
                rounding = (k + 2) * abs_sum * mp.eps
                bound = max(tail) + rounding
                break
        dps = precision + GUARD_DIGITS + int(math.ceil(lost)) + 4
    else:  # pragma: no cover - six escalations means |s| underflowed
        raise NonConvergenceError("0F3 summation lost all significant digits")
    with mp.workdps(precision + GUARD_DIGITS):
        value = +s
        if isinstance(value, mp.mpc) and mp.im(value) == 0:
            value = mp.re(value)
        return SeriesResult(value, k + 1, +bound)


def f03(params: F03Params, z, precision: int = 30, *, max_terms=None) -> SeriesResult:
    """Generalized hypergeometric series 0F3(; a, b, c; z).

    Sums ``z^k / (k! (a)_k (b)_k (c)_k)`` with the Pochhammer products built
    by the term recurrence. Stops after three consecutive terms fall below
    ``10^-(precision+5)`` times the partial sum; raises
    :class:`NonConvergenceError` past :func:`term_budget` terms.
    """
    return _sum_series(params, z, precision, max_terms=max_terms)


def f03_derivative(params: F03Params, z, precision: int = 30) -> SeriesResult:
    """d/dz 0F3(; a, b, c; z) = 0F3(; a+1, b+1, c+1; z) / (a b c)."""
    res = f03(params.shifted(1, 1, 1), z, precision)
    with mp.workdps(precision + GUARD_DIGITS):
        a, b, c = params.as_mp()
        return res.scaled(1 / (a * b * c))


def f03_contiguous_lower_c(params: F03Params, z, precision: int = 30) -> SeriesResult:
    """(z d/dz + c - 1) 0F3(; a, b, c; z), summed term by term.

    Equals ``(c - 1) 0F3(; a, b, c - 1; z)``; undefined as a relation at c = 1.
    """
    if to_mp(params.c) == 1:
        raise DegenerateParameterError("contiguous relation lowering c is degenerate at c = 1")
    return _sum_series(params, z, precision, weighted=True)


def asymptotic_exponent(params: F03Params):
    """gamma = -(a + b + c - 3/2) / 4, exact for rational parameters."""
    a, b, c = params
    if all(isinstance(v, (int, Fraction)) for v in (a, b, c)):
        return -(Fraction(a) + Fraction(b) + Fraction(c) - Fraction(3, 2)) / 4
    a, b, c = params.as_mp()
    return -(a + b + c - mp.mpf(3) / 2) / 4


def f03_asymptotic(params: F03Params, x, precision: int = 30, *, target_digits: int = 3):
    """Large positive-argument form of 0F3, exponentially small part dropped.

    Requires ``4 x^(1/4) >= ln(10) (target_digits + 10)`` so that the
    omitted decaying exponential is below the target accuracy; otherwise
    raises :class:`AsymptoticRegimeError`.
    """
    _check_precision(precision)
    with mp.workdps(precision + GUARD_DIGITS):
        x = to_mp(x)
        if isinstance(x, mp.mpc) or x <= 0:
            raise AsymptoticRegimeError("asymptotic form is implemented for real x > 0 only")
        q = 4 * mp.root(x, 4)
        if q < mp.log(10) * (target_digits + 10):
            raise AsymptoticRegimeError(
                f"x={mp.nstr(x, 6)} below crossover for {target_digits} target digits"
            )
        g = to_mp(asymptotic_exponent(params))
        pref = gamma(params.a, precision) * gamma(params.b, precision) * gamma(params.c, precision)
        pref /= 2 * (2 * mp.pi) ** mp.mpf(1.5)
        return pref * mp.power(x, g) * (mp.exp(q) + 2 * mp.cos(q + 2 * mp.pi * g))


def series_coefficients(params: F03Params, n: int) -> list:
    """First ``n`` coefficients ``1 / (k! (a)_k (b)_k (c)_k)``.

    Exact Fractions when all parameters are rational, mpmath numbers otherwise.
    """
    a, b, c = params
    exact = all(isinstance(v, (int, Fraction)) for v in (a, b, c))
    if not exact:
        a, b, c = params.as_mp()
    coeffs = [Fraction(1) if exact else mp.mpf(1)]
    for k in range(n - 1):
        coeffs.append(coeffs[-1] / ((k + 1) * (a + k) * (b + k) * (c + k)))
    return coeffs
