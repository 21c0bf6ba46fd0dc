"""Physical parameter set and derived scalars.

The model couples a harmonically approximated atom of renormalized
frequency ``omega_bar`` to the discrete scalar-field modes of a perfectly
reflecting spherical cavity of radius ``radius``.  All later stages
(spectrum, mode transform, time evolution, entanglement) consume a single
immutable :class:`SystemParams` value built by :func:`make_params`.

Units are natural (hbar = 1); the wave speed ``c`` is configurable and
defaults to 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConfigurationError, ValidationError

REGIME_WEAK = "weak"      # g < omega_bar, kappa real
REGIME_STRONG = "strong"  # g >= omega_bar, no damped-oscillation closed form

#: Default number of retained field modes when the caller does not choose.
DEFAULT_N_MODES = 1000


@dataclass(frozen=True)
class SystemParams:
    """Validated physical inputs plus every derived scalar used downstream."""

    omega_bar: float        # renormalized atom frequency (rad/time)
    g: float                # atom-environment coupling (frequency units)
    radius: float           # cavity radius (length)
    c: float                # wave speed (length/time)
    n_modes: int            # field-mode truncation count N
    delta: float            # dimensionless g*radius/(pi*c), equals g/delta_omega
    delta_omega: float      # bare mode spacing pi*c/radius
    eta: float              # coupling amplitude sqrt(4*g*delta_omega/pi)
    kappa: Optional[float]  # sqrt(omega_bar^2 - g^2), defined only when weak
    regime: str             # REGIME_WEAK or REGIME_STRONG

    def field_frequencies(self) -> np.ndarray:
        """Bare cavity frequencies k*delta_omega for k = 1..n_modes."""
        return self.delta_omega * np.arange(1, self.n_modes + 1, dtype=float)


def _require_positive(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or value <= 0.0:
        raise ValidationError(f"{name} must be strictly positive, got {value!r}")
    return value


def make_params(
    omega_bar: float,
    g: float,
    c: float = 1.0,
    *,
    radius: Optional[float] = None,
    delta: Optional[float] = None,
    n_modes: int = DEFAULT_N_MODES,
) -> SystemParams:
    """Build a validated :class:`SystemParams`.

    Exactly one of ``radius`` and ``delta`` must be given; the other is
    derived through delta = g*radius/(pi*c).  The regime flag is ``"weak"``
    for g < omega_bar and ``"strong"`` otherwise (g equal to omega_bar
    counts as strong because kappa would vanish and the damped-oscillation
    closed form becomes singular).

    Raises
    ------
    ValidationError
        A non-positive or non-finite input; the message names the field.
    ConfigurationError
        Both or neither of ``radius`` and ``delta`` supplied.
    """
    omega_bar = _require_positive("omega_bar", omega_bar)
    g = _require_positive("g", g)
    c = _require_positive("c", c)
    if (radius is None) == (delta is None):
        raise ConfigurationError(
            "exactly one of radius and delta must be supplied"
        )
    if delta is None:
        radius = _require_positive("radius", radius)
        delta_omega = math.pi * c / radius
        delta = g / delta_omega
    else:
        delta = _require_positive("delta", delta)
        delta_omega = g / delta
        radius = math.pi * c / delta_omega
    if not isinstance(n_modes, int) or n_modes < 1:
        raise ValidationError(f"n_modes must be an integer >= 1, got {n_modes!r}")

    eta = math.sqrt(4.0 * g * delta_omega / math.pi)
    if g < omega_bar:
        regime = REGIME_WEAK
        kappa: Optional[float] = math.sqrt(omega_bar * omega_bar - g * g)
    else:
        regime = REGIME_STRONG
        kappa = None

    return SystemParams(
        omega_bar=omega_bar,
        g=g,
        radius=radius,
        c=c,
        n_modes=n_modes,
        delta=delta,
        delta_omega=delta_omega,
        eta=eta,
        kappa=kappa,
        regime=regime,
    )
