"""Exact Born-Oppenheimer wave functions near an isotropic conic crossing.

Modules
-------
hypergeom
    Arbitrary-precision 0F3 series, identities, asymptotics and Gamma.
radial_kernel
    Exact solutions of the coupled radial system and the bounded combination.
ode_oracle
    Independent double-precision integrator for the radial systems.
wavefield
    Two-component wave function, mixing weight and mu-scaling scans.
cli
    Command-line front end (``bocross`` / ``python -m bocross``).
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    AsymptoticRegimeError,
    BocrossError,
    DegenerateFitError,
    DegenerateParameterError,
    GammaPoleError,
    InsufficientPrecisionError,
    IntegrationBlowupError,
    InvalidParameterError,
    NonConvergenceError,
    QuadratureError,
)
from .hypergeom import F03Params, SeriesResult, f03, f03_asymptotic, gamma  # noqa: E402
from .radial_kernel import (  # noqa: E402
    HalfOddInt,
    RadialPair,
    basis_solution,
    bounded_solution,
    large_rho_asymptotic,
    negate_m,
    ode_residual,
    small_rho_limit,
)
from .wavefield import PolarPoint, ScanResult, SpinorField, assemble_psi, mixing_weight, scaling_scan  # noqa: E402

__all__ = [
    "AsymptoticRegimeError",
    "BocrossError",
    "DegenerateFitError",
    "DegenerateParameterError",
    "F03Params",
    "GammaPoleError",
    "HalfOddInt",
    "InsufficientPrecisionError",
    "IntegrationBlowupError",
    "InvalidParameterError",
    "NonConvergenceError",
    "PolarPoint",
    "QuadratureError",
    "RadialPair",
    "ScanResult",
    "SeriesResult",
    "SpinorField",
    "assemble_psi",
    "basis_solution",
    "bounded_solution",
    "f03",
    "f03_asymptotic",
    "gamma",
    "large_rho_asymptotic",
    "mixing_weight",
    "negate_m",
    "ode_residual",
    "scaling_scan",
    "small_rho_limit",
]
