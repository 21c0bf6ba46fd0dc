"""Time evolution of single-excitation amplitudes in a finite cavity.

The probability amplitude that an initially excited dressed oscillator
``mu`` is found excited in dressed oscillator ``nu`` at time t is the mode
sum

    f_mu_nu(t) = sum_s  T[mu, s] * T[nu, s] * exp(-i * Omega_s * t)

over the normal modes s.  With the orthogonalized mode matrix the family
f_mu_nu is exactly unitary at any truncation: f_mu_nu(0) = delta_mu_nu and
sum_nu |f_mu_nu(t)|^2 = 1 for all t, to machine precision.

Index convention: mu = 0 is the atom, mu = 1..N the dressed field modes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from .errors import ApproximationDomainError, ConsistencyError
from .modes import ModeMatrix
from .params import SystemParams
from .spectrum import Spectrum


def _check_pair(matrix: ModeMatrix, spectrum: Spectrum) -> None:
    if matrix.entries.shape[1] != spectrum.omegas.size:
        raise ConsistencyError(
            f"mode matrix has {matrix.entries.shape[1]} columns but spectrum "
            f"has {spectrum.omegas.size} roots"
        )


def amplitude(
    matrix: ModeMatrix, spectrum: Spectrum, mu: int, nu: int, t: float
) -> complex:
    """Single amplitude f_mu_nu(t).

    Defined for t >= 0; negative t is accepted and satisfies the
    conjugation symmetry f_mu_nu(-t) = conj(f_mu_nu(t)).
    """
    _check_pair(matrix, spectrum)
    row_mu = matrix.entries[mu]
    row_nu = matrix.entries[nu]
    return complex(np.sum(row_mu * row_nu * np.exp(-1j * spectrum.omegas * t)))


def amplitude_row(
    matrix: ModeMatrix, spectrum: Spectrum, mu: int, t: float
) -> np.ndarray:
    """All amplitudes f_mu_nu(t) for nu = 0..N as a complex vector."""
    _check_pair(matrix, spectrum)
    phased = matrix.entries[mu] * np.exp(-1j * spectrum.omegas * t)
    return matrix.entries @ phased


@dataclass(frozen=True)
class AmplitudeSet:
    """Amplitudes at one instant, keyed by (mu, nu), plus the survival term."""

    t: float
    f: Dict[Tuple[int, int], complex]
    survival: Optional[float]  # |f_00(t)|^2 when the atom row was computed


def amplitude_set(
    matrix: ModeMatrix,
    spectrum: Spectrum,
    t: float,
    rows: Tuple[int, ...] = (0,),
) -> AmplitudeSet:
    """Amplitudes for every nu of the requested rows at time t."""
    f: Dict[Tuple[int, int], complex] = {}
    for mu in rows:
        row = amplitude_row(matrix, spectrum, mu, t)
        for nu, value in enumerate(row):
            f[(mu, nu)] = complex(value)
    survival = abs(f[(0, 0)]) ** 2 if (0, 0) in f else None
    return AmplitudeSet(t=float(t), f=f, survival=survival)


def survival_probability(matrix: ModeMatrix, spectrum: Spectrum, t):
    """|f_00(t)|^2 for a scalar or grid of times (vectorized mode sum)."""
    _check_pair(matrix, spectrum)
    t = np.atleast_1d(np.asarray(t, dtype=float))
    weights = matrix.entries[0] ** 2
    f00 = np.exp(-1j * np.outer(t, spectrum.omegas)) @ weights
    out = np.abs(f00) ** 2
    return out if out.size > 1 else float(out[0])


def unitarity_defect(
    matrix: ModeMatrix, spectrum: Spectrum, mu: int, times
) -> float:
    """max over the given times of |1 - sum_nu |f_mu_nu(t)|^2|."""
    worst = 0.0
    for t in np.atleast_1d(times):
        row = amplitude_row(matrix, spectrum, mu, float(t))
        worst = max(worst, abs(1.0 - float(np.sum(np.abs(row) ** 2))))
    return worst


@dataclass(frozen=True)
class SmallCavitySeries:
    """Survival probability from the first-order double series.

    ``tail_bound`` is the first-order bound (8*delta/pi)/k_terms on the
    truncated part of the k sum; ``converged`` reports whether it met the
    requested tolerance (None when no tolerance was requested).
    """

    values: np.ndarray
    k_terms: int
    tail_bound: float
    converged: Optional[bool]


def small_cavity_amplitude_first_order(
    params: SystemParams, t, k_terms: int = 1000
) -> np.ndarray:
    """First-order small-cavity f_00(t) as a complex mode sum,

        a e^{-i Omega_0 t} + a (4 delta/pi) sum_k k^{-2} e^{-i Omega_k t}

    with a = (1 + 2 pi delta/3)^(-1) and the approximate frequencies
    Omega_0 = omega_bar(1 - pi*delta/3), Omega_k = (g/delta)(k + 2 delta/(pi k)).
    """
    if k_terms < 1:
        raise ApproximationDomainError("series needs at least one k term")
    d = params.delta
    if d >= 0.5:
        raise ApproximationDomainError(
            f"small-cavity series needs delta < 0.5, got {d}"
        )
    t = np.atleast_1d(np.asarray(t, dtype=float))
    a = 1.0 / (1.0 + 2.0 * np.pi * d / 3.0)
    k = np.arange(1, k_terms + 1, dtype=float)
    omega_0 = params.omega_bar * (1.0 - np.pi * d / 3.0)
    omega_k = (params.g / d) * (k + 2.0 * d / (np.pi * k))
    z = np.exp(-1j * np.outer(t, omega_k)) @ (1.0 / k**2)
    return a * np.exp(-1j * t * omega_0) + a * (4.0 * d / np.pi) * z


def survival_probability_small_cavity_series(
    params: SystemParams,
    t,
    k_terms: int = 1000,
    tol: Optional[float] = None,
) -> SmallCavitySeries:
    """Small-cavity survival |f_00(t)|^2 to first order in delta.

    Expanding the squared modulus of the first-order mode sum gives the
    double cosine series in the frequency differences
    cos((Omega_0 - Omega_k) t) and cos((Omega_k - Omega_l) t) with
    weights (8 delta/pi) k^{-2} and (16 delta^2/pi^2) k^{-2} l^{-2}; the
    collapsed |f|^2 form evaluated here is the same arithmetic with
    better conditioning.
    """
    f = small_cavity_amplitude_first_order(params, t, k_terms)
    tail = (8.0 * params.delta / np.pi) / k_terms
    return SmallCavitySeries(
        values=np.abs(f) ** 2,
        k_terms=k_terms,
        tail_bound=tail,
        converged=None if tol is None else bool(tail <= tol),
    )


def small_cavity_lower_bound(params: SystemParams) -> float:
    """Time-independent lower bound on the small-cavity survival.

    (1 + 2 pi delta/3)^(-2) * (1 - 4 pi delta/3 - 4 pi^2 delta^2/9),
    obtained by sending every oscillating term of the first-order series
    to -1.  The bracket turns negative for delta above about 0.198, where
    the bound carries no information and the request is rejected.
    """
    d = params.delta
    bracket = 1.0 - 4.0 * np.pi * d / 3.0 - 4.0 * np.pi**2 * d**2 / 9.0
    if bracket < 0.0:
        raise ApproximationDomainError(
            f"lower bound undefined (negative bracket) for delta={d}"
        )
    return float((1.0 + 2.0 * np.pi * d / 3.0) ** -2 * bracket)
