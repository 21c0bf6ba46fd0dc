"""Orthonormal transformation between bare oscillators and normal modes.

Rows are indexed by the bare degrees of freedom (row 0 is the atom, rows
1..N the field modes), columns by the normal modes r = 0..N.  The closed
expressions for the entries are exact only in the untruncated theory; at
finite N the assembled columns come out short of unit norm by O(1/N) and
acquire O(1/N) mutual overlaps.  :func:`build_matrix` therefore rescales
every column to unit norm and then applies a symmetric (Loewdin)
orthogonalization, which is the minimal-change correction restoring the
exact orthonormality the evolution stage relies on.  The raw truncation
defects are preserved on the result as diagnostics.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    ApproximationDomainError,
    ConsistencyError,
    NearResonanceError,
    NumericDomainError,
)
from .params import SystemParams
from .spectrum import METHOD_EXACT, Spectrum

#: |omega_k^2 - Omega_r^2| below this multiple of delta_omega^2 means a
#: root landed on a bare frequency, which interlacing forbids.
_RESONANCE_FLOOR = 1e-12


@dataclass(frozen=True)
class ModeMatrix:
    """(N+1) x (N+1) transformation matrix with truncation diagnostics."""

    entries: np.ndarray               # rows: atom, field 1..N; cols: modes 0..N
    renormalized: bool                # columns rescaled to unit norm
    raw_column_norms: np.ndarray      # column norms before any correction
    raw_orthogonality_defect: float   # max |column dot| off the diagonal, raw
    orthogonalization_shift: float    # max |entry change| due to Loewdin step

    @property
    def n_modes(self) -> int:
        return self.entries.shape[0] - 1


def atom_element(params: SystemParams, omega_r):
    """Atom-row entry of the transformation matrix at normal mode Omega_r.

    eta*Omega_r / sqrt((Omega_r^2-omega_bar^2)^2
                       + (eta^2/2)(3*Omega_r^2-omega_bar^2)
                       + 4 g^2 Omega_r^2)

    The radicand is positive for every Omega_r > 0 of a valid parameter
    set; a non-positive value signals a corrupted input and raises
    :class:`NumericDomainError`.
    """
    omega_r = np.asarray(omega_r, dtype=float)
    eta2 = params.eta**2
    w2 = params.omega_bar**2
    o2 = omega_r**2
    radicand = (o2 - w2) ** 2 + 0.5 * eta2 * (3.0 * o2 - w2) + 4.0 * params.g**2 * o2
    if np.any(radicand <= 0.0):
        raise NumericDomainError("non-positive radicand in atom element")
    value = params.eta * omega_r / np.sqrt(radicand)
    return value if value.ndim else float(value)


def field_element(params: SystemParams, omega_r, k):
    """Field-row entry: eta*omega_k/(omega_k^2 - Omega_r^2) * atom_element.

    ``k`` indexes the bare field mode (1..N).  Interlacing keeps
    omega_k^2 - Omega_r^2 bounded away from zero; a near-zero denominator
    is reported as :class:`NearResonanceError` because it means the
    supplied root violates interlacing.
    """
    omega_r = np.asarray(omega_r, dtype=float)
    k = np.asarray(k)
    if np.any(k < 1) or np.any(k != np.floor(k)):
        raise ConsistencyError("field index k must be a positive integer")
    omega_k = params.delta_omega * k.astype(float)
    denom = omega_k**2 - omega_r**2
    if np.any(np.abs(denom) < _RESONANCE_FLOOR * params.delta_omega**2):
        raise NearResonanceError(
            "normal mode coincides with a bare field frequency"
        )
    value = (params.eta * omega_k / denom) * atom_element(params, omega_r)
    return value if value.ndim else float(value)


def assemble_raw_matrix(params: SystemParams, spectrum: Spectrum) -> np.ndarray:
    """Matrix of closed-form entries with no normalization applied."""
    if spectrum.n_modes != params.n_modes:
        raise ConsistencyError(
            f"spectrum has {spectrum.n_modes} field modes, params expect "
            f"{params.n_modes}"
        )
    omegas = spectrum.omegas
    atom_row = atom_element(params, omegas)
    omega_k = params.field_frequencies()
    t = np.empty((params.n_modes + 1, params.n_modes + 1))
    t[0, :] = atom_row
    denom = omega_k[:, None] ** 2 - omegas[None, :] ** 2
    if np.any(np.abs(denom) < _RESONANCE_FLOOR * params.delta_omega**2):
        raise NearResonanceError(
            "normal mode coincides with a bare field frequency"
        )
    t[1:, :] = (params.eta * omega_k[:, None] / denom) * atom_row[None, :]
    return t


def build_matrix(params: SystemParams, spectrum: Spectrum) -> ModeMatrix:
    """Assemble, renormalize and orthogonalize the transformation matrix.

    Requires an exact-root spectrum for the same parameters.  Column
    rescaling restores the normalization sum over bare oscillators
    exactly; the Loewdin step then removes the residual O(1/N) column
    overlaps so that the propagated amplitudes conserve probability to
    machine precision at any truncation.  Both raw defects are recorded
    unchanged on the result, and the sign convention (positive atom row)
    is preserved.
    """
    if spectrum.method != METHOD_EXACT:
        raise ConsistencyError(
            f"build_matrix needs an exact-root spectrum, got {spectrum.method!r}"
        )
    raw = assemble_raw_matrix(params, spectrum)
    raw_norms = np.linalg.norm(raw, axis=0)
    rescaled = raw / raw_norms

    gram = rescaled.T @ rescaled
    raw_offdiag = float(np.abs(gram - np.diag(np.diag(gram))).max())

    # symmetric orthogonalization: T <- T (T^T T)^(-1/2)
    eigval, eigvec = np.linalg.eigh(gram)
    if eigval[0] <= 0.0:
        raise NumericDomainError("column Gram matrix is not positive definite")
    entries = rescaled @ (eigvec * (1.0 / np.sqrt(eigval))) @ eigvec.T
    shift = float(np.abs(entries - rescaled).max())

    flip = entries[0, :] < 0.0
    if np.any(flip):  # Loewdin preserves signs in practice; keep it guaranteed
        entries[:, flip] *= -1.0
    if np.any(entries[0, :] <= 0.0):
        raise NumericDomainError("atom-row sign convention could not be enforced")

    return ModeMatrix(
        entries=entries,
        renormalized=True,
        raw_column_norms=raw_norms,
        raw_orthogonality_defect=raw_offdiag,
        orthogonalization_shift=shift,
    )


def small_cavity_elements(params: SystemParams) -> tuple[float, np.ndarray]:
    """First-order squared entries of the lowest normal-mode column.

    Returns ``(t00_sq, tk0_sq)`` with t00_sq = (1 + 2*pi*delta/3)^(-1) and
    tk0_sq[k-1] = (4/k^2)(delta/pi) * t00_sq for k = 1..n_modes.  The
    series over all k >= 1 sums to exactly 1 - t00_sq, so these entries
    are normalized as a family to first order.
    """
    d = params.delta
    if d >= 0.5:
        raise ApproximationDomainError(
            f"first-order elements need delta < 0.5, got {d}"
        )
    t00_sq = 1.0 / (1.0 + 2.0 * np.pi * d / 3.0)
    k = np.arange(1, params.n_modes + 1, dtype=float)
    tk0_sq = (4.0 / k**2) * (d / np.pi) * t00_sq
    return t00_sq, tk0_sq
