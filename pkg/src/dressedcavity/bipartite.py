"""Two-atom entangled state: reduced densities, impurity, entropy.

The initial state superposes "atom A excited" and "atom B excited" with
weight xi and relative phase phi:

    sqrt(xi) |1_A, 0_B> + sqrt(1 - xi) e^{i phi} |0_A, 1_B>,   0 < xi < 1,

each atom dressed by its own field.  Tracing the field modes out leaves a
4x4 two-atom density matrix whose only inputs are the survival amplitudes
f_AA(t) and f_BB(t); tracing out everything but one atom leaves a
projector-plus-rank-one matrix over that atom's dressed excitation basis.
The nonzero eigenvalues of the latter are {1 - xi, xi * sum_nu |f_A_nu|^2},
so unitarity of the amplitudes pins the von Neumann entropy to the
time-independent value -( (1-xi) ln(1-xi) + xi ln xi ).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import (
    ConsistencyError,
    NormalizationError,
    PhysicalityError,
    ValidationError,
)
from .evolution import amplitude_row
from .modes import ModeMatrix, build_matrix
from .params import SystemParams
from .spectrum import Spectrum, solve_spectrum

#: basis order of the two-atom reduced density matrix
TWO_ATOM_BASIS = ("00", "01", "10", "11")

_AMPLITUDE_SLACK = 1e-6   # |f| may exceed 1 by at most this much
_EIGENVALUE_FLOOR = 1e-12  # eigenvalues below this are treated as exact zeros


@dataclass(frozen=True)
class EntangledStateConfig:
    """Superposition weight xi in (0, 1) and relative phase phi in [0, 2pi)."""

    xi: float
    phi: float = 0.0

    def __post_init__(self):
        if not (0.0 < self.xi < 1.0):
            raise ValidationError(
                f"xi must lie strictly inside (0, 1), got {self.xi!r}"
            )
        object.__setattr__(self, "phi", float(self.phi) % (2.0 * math.pi))


@dataclass(frozen=True)
class TwoAtomReducedDensity:
    """4x4 reduced density matrix over the basis |00>, |01>, |10>, |11>."""

    elements: np.ndarray  # complex, Hermitian, unit trace
    p: float              # xi |f_AA|^2 + (1 - xi) |f_BB|^2

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.elements)

    def purity_defect(self) -> float:
        """1 - Tr[rho^2], evaluated directly from the matrix."""
        return float(1.0 - np.real(np.trace(self.elements @ self.elements)))


@dataclass(frozen=True)
class SingleAtomReducedDensity:
    """Reduced matrix of one dressed atom over {ground, excited mode nu}.

    Shape (N+2, N+2): entry [0, 0] is the ground-state weight 1 - xi and
    the remaining block is the rank-one excitation xi * v v^dagger with
    v_nu = f_A_nu(t).
    """

    elements: np.ndarray

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.elements)

    def nonzero_eigenvalues(self) -> np.ndarray:
        """The two structurally nonzero eigenvalues, ascending."""
        eig = self.eigenvalues()
        return eig[-2:]


def _check_amplitude(name: str, f: complex) -> complex:
    f = complex(f)
    if abs(f) > 1.0 + _AMPLITUDE_SLACK:
        raise PhysicalityError(f"|{name}| = {abs(f)} exceeds 1")
    return f


def two_atom_reduced_density(
    f_aa: complex, f_bb: complex, config: EntangledStateConfig
) -> TwoAtomReducedDensity:
    """Two-atom reduced density matrix from the survival amplitudes.

    Nonzero entries, with basis order |00>, |01>, |10>, |11>:

        rho[00,00] = 1 - xi |f_AA|^2 - (1-xi) |f_BB|^2
        rho[01,01] = (1-xi) |f_BB|^2
        rho[10,10] = xi |f_AA|^2
        rho[10,01] = sqrt(xi(1-xi)) e^{i phi} conj(f_AA) f_BB   (+ h.c.)

    The doubly excited entry vanishes identically (single excitation),
    which makes the trace exactly one by construction.
    """
    f_aa = _check_amplitude("f_AA", f_aa)
    f_bb = _check_amplitude("f_BB", f_bb)
    xi = config.xi
    a = xi * abs(f_aa) ** 2
    b = (1.0 - xi) * abs(f_bb) ** 2
    coherence = (
        math.sqrt(xi * (1.0 - xi))
        * np.exp(1j * config.phi)
        * np.conj(f_aa)
        * f_bb
    )
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = 1.0 - a - b
    rho[1, 1] = b
    rho[2, 2] = a
    rho[2, 1] = coherence
    rho[1, 2] = np.conj(coherence)
    return TwoAtomReducedDensity(elements=rho, p=float(a + b))


def impurity(f_aa: complex, f_bb: complex, config: EntangledStateConfig) -> float:
    """Impurity D = 1 - Tr[rho^2] = 2p(1 - p) of the two-atom state.

    p = xi |f_AA|^2 + (1-xi) |f_BB|^2.  For identical atoms (f_AA = f_BB)
    the xi dependence cancels and D = 2|f_00|^2 (1 - |f_00|^2).
    """
    f_aa = _check_amplitude("f_AA", f_aa)
    f_bb = _check_amplitude("f_BB", f_bb)
    p = config.xi * abs(f_aa) ** 2 + (1.0 - config.xi) * abs(f_bb) ** 2
    return float(2.0 * p - 2.0 * p * p)


def single_atom_reduced_density(
    f_row: Sequence[complex], config: EntangledStateConfig
) -> SingleAtomReducedDensity:
    """Reduced density matrix of subsystem A from its amplitude row.

    ``f_row`` holds f_A_nu(t) over nu = 0..N (atom first).  The result is
    (1 - xi) |ground><ground| + xi * v v^dagger on the (N+2)-dimensional
    basis {ground, one excitation in dressed mode nu}.
    """
    v = np.asarray(f_row, dtype=complex)
    if v.ndim != 1 or v.size < 1:
        raise ConsistencyError("f_row must be a one-dimensional amplitude vector")
    n = v.size
    rho = np.zeros((n + 1, n + 1), dtype=complex)
    rho[0, 0] = 1.0 - config.xi
    rho[1:, 1:] = config.xi * np.outer(v, np.conj(v))
    return SingleAtomReducedDensity(elements=rho)


def von_neumann_entropy(eigenvalues: Sequence[float]) -> float:
    """-sum alpha ln alpha over a probability spectrum, with 0 ln 0 = 0.

    Eigenvalues may dip to -1e-10 (numerical noise) and are clipped to
    [0, 1]; anything below 1e-12 is treated as an exact zero before the
    logarithm.  The spectrum must sum to one within 1e-6.
    """
    alpha = np.asarray(eigenvalues, dtype=float)
    if np.any(alpha < -1e-10):
        raise NormalizationError(
            f"eigenvalue {alpha.min()} is negative beyond tolerance"
        )
    total = float(alpha.sum())
    if abs(total - 1.0) > 1e-6:
        raise NormalizationError(f"eigenvalues sum to {total}, expected 1")
    alpha = np.clip(alpha, 0.0, 1.0)
    alpha = alpha[alpha > _EIGENVALUE_FLOOR]
    return float(-np.sum(alpha * np.log(alpha)))


def analytic_entropy(xi: float) -> float:
    """Entropy of the spectrum {1 - xi, xi}."""
    return von_neumann_entropy([1.0 - xi, xi])


@dataclass(frozen=True)
class EntropyFlatnessReport:
    """Numerically computed entanglement entropy across a time grid."""

    times: np.ndarray
    entropies: np.ndarray
    analytic: float                 # -( (1-xi) ln(1-xi) + xi ln xi )
    max_deviation: float            # max |E(t) - analytic|
    std_dev: float                  # spread of E(t) over the grid
    eigenvalue_defect: float        # max distance of spectra from {1-xi, xi}


def entropy_time_independence_check(
    params: SystemParams,
    config: EntangledStateConfig,
    time_grid: Sequence[float],
    matrix: Optional[ModeMatrix] = None,
    spectrum: Optional[Spectrum] = None,
) -> EntropyFlatnessReport:
    """Assemble rho_A(t) on a grid and compare its entropy to the constant.

    Every reduced matrix is diagonalized by a dense Hermitian eigensolver
    on the full truncated basis; nothing about the known rank-2 structure
    is assumed.  Deviations are reported, never raised.
    """
    if spectrum is None:
        spectrum = solve_spectrum(params)
    if matrix is None:
        matrix = build_matrix(params, spectrum)
    times = np.asarray(list(time_grid), dtype=float)
    target = np.sort([1.0 - config.xi, config.xi])
    entropies = np.empty(times.size)
    eig_defect = 0.0
    for i, t in enumerate(times):
        row = amplitude_row(matrix, spectrum, 0, float(t))
        rho = single_atom_reduced_density(row, config)
        eig = rho.eigenvalues()
        entropies[i] = von_neumann_entropy(eig)
        eig_defect = max(eig_defect, float(np.abs(eig[-2:] - target).max()))
    analytic = analytic_entropy(config.xi)
    return EntropyFlatnessReport(
        times=times,
        entropies=entropies,
        analytic=analytic,
        max_deviation=float(np.abs(entropies - analytic).max()),
        std_dev=float(entropies.std()),
        eigenvalue_defect=eig_defect,
    )
