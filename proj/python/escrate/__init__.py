"""Upper rate functions, Euler-Maruyama ensembles and their checks."""

from ._core import (
    EscrateError,
    GrowthProfile,
    RadialCoefficient,
    closed_form_rate,
    conservativeness,
    drift_rate,
    effective_lower_limit,
    phi,
    power_volume_profile,
    profile_from_radial,
    psi,
    rho_tilde,
    rho_tilde_inverse,
    run_command,
)

__all__ = [
    "EscrateError",
    "GrowthProfile",
    "RadialCoefficient",
    "closed_form_rate",
    "conservativeness",
    "drift_rate",
    "effective_lower_limit",
    "phi",
    "power_volume_profile",
    "profile_from_radial",
    "psi",
    "rho_tilde",
    "rho_tilde_inverse",
    "run_command",
]
