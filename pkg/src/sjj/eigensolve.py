"""Eigendecomposition and spectral time propagation of two-mode Hamiltonians.

The matrices are symmetric tridiagonal, so the full spectrum comes from the
LAPACK implicit-shift solvers wrapped by scipy (``eigh_tridiagonal``).  Two
deterministic post-processing steps are applied:

* Near-degenerate doublets.  The built Hamiltonians commute with the mirror
  n -> N-n, so every eigenvector should carry definite parity.  Past the
  self-trapping crossover the two lowest levels (and further edge doublets)
  degenerate to machine precision and the raw solver returns arbitrary
  mixtures; consecutive levels closer than 1e-6 * max(1, |E|) are rotated
  back to an (even, odd) parity pair, even first, and isolated levels are
  projected onto their dominant parity.  This restores the symmetric ground
  state that exact arithmetic would give without disturbing residuals.

* Sign convention.  The first component of each eigenvector with magnitude
  above 1e-12 is made positive, so repeated runs are bit-comparable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .model import FockState, TridiagonalHamiltonian

__all__ = [
    "Spectrum",
    "EigensolveError",
    "eigen_decompose",
    "ground_state",
    "propagate",
    "energy_gap",
]

_PAIR_RTOL = 1e-6
_SIGN_FLOOR = 1e-12


class EigensolveError(RuntimeError):
    """Raised when the tridiagonal eigensolver fails to converge."""


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Full eigendecomposition: ascending energies (units kappa*N) and
    orthonormal eigenvectors, column k belonging to energies[k]."""

    energies: np.ndarray
    vectors: np.ndarray

    @property
    def dimension(self) -> int:
        return len(self.energies)


def _parity_fix(energies: np.ndarray, vectors: np.ndarray) -> None:
    """Restore definite parity under the mirror n -> N-n.

    A doublet whose splitting is comparable to the backward error comes out
    of the raw solver as an arbitrary mixture of its even and odd members;
    consecutive levels closer than 1e-6 * max(1, |E|) are therefore rotated
    to an (even, odd) pair, even first.  The larger-norm candidate among
    v +- reverse(v) of either raw vector is always well conditioned because
    the pair spans exactly one even and one odd direction.  For a pair that
    is only mildly split the raw vectors are already nearly pure, so the
    rotation is a near-identity and residuals are untouched; for a truly
    degenerate pair the rotation cost is bounded by the splitting itself.

    Isolated levels are projected onto their dominant parity component,
    which strips the O(eps/gap) contamination left by finite splitting.
    """
    dim = len(energies)
    k = 0
    while k < dim:
        paired = False
        if k + 1 < dim:
            gap = energies[k + 1] - energies[k]
            if gap <= _PAIR_RTOL * max(1.0, abs(energies[k])):
                va, vb = vectors[:, k], vectors[:, k + 1]
                even = max((va + va[::-1], vb + vb[::-1]), key=np.linalg.norm)
                odd = max((va - va[::-1], vb - vb[::-1]), key=np.linalg.norm)
                # guard against an accidental same-parity coincidence
                if np.linalg.norm(even) > 1e-3 and np.linalg.norm(odd) > 1e-3:
                    even = even / np.linalg.norm(even)
                    odd = odd - even * (even @ odd)
                    odd = odd / np.linalg.norm(odd)
                    vectors[:, k] = even
                    vectors[:, k + 1] = odd
                    paired = True
        if paired:
            k += 2
            continue
        v = vectors[:, k]
        even = v + v[::-1]
        odd = v - v[::-1]
        keep = even if np.linalg.norm(even) >= np.linalg.norm(odd) else odd
        vectors[:, k] = keep / np.linalg.norm(keep)
        k += 1


def eigen_decompose(h: TridiagonalHamiltonian) -> Spectrum:
    """Full spectrum of a tridiagonal Hamiltonian, deterministic output."""
    try:
        energies, vectors = scipy.linalg.eigh_tridiagonal(h.diag, h.offdiag)
    except scipy.linalg.LinAlgError as exc:  # pragma: no cover
        raise EigensolveError(f"tridiagonal eigensolver did not converge: {exc}") from exc

    # parity post-processing only applies to mirror-symmetric matrices
    # (always true for built Hamiltonians, not for hand-assembled ones)
    if np.array_equal(h.diag, h.diag[::-1]) and np.array_equal(h.offdiag, h.offdiag[::-1]):
        _parity_fix(energies, vectors)

    # deterministic sign: first significant component positive
    for k in range(vectors.shape[1]):
        col = vectors[:, k]
        sig = np.flatnonzero(np.abs(col) > _SIGN_FLOOR)
        if sig.size and col[sig[0]] < 0:
            vectors[:, k] = -col

    vectors.setflags(write=False)
    energies.setflags(write=False)
    return Spectrum(energies=energies, vectors=vectors)


def ground_state(h: TridiagonalHamiltonian) -> tuple[float, FockState]:
    """Lowest eigenpair.  The returned amplitudes are real and, up to
    rounding noise in exponentially small tails, strictly positive."""
    spec = eigen_decompose(h)
    return float(spec.energies[0]), FockState(spec.vectors[:, 0].astype(complex))


def propagate(
    h: TridiagonalHamiltonian,
    s0: FockState,
    tau: float,
    spectrum: Spectrum | None = None,
) -> FockState:
    """Evolve A(0) to A(tau) = sum_k (v_k . A(0)) exp(-i E_k tau) v_k.

    tau is dimensionless time (kappa N t).  Exact up to decomposition error,
    so the norm is preserved to ~1e-15.  Pass ``spectrum`` to reuse a
    decomposition across many times.
    """
    if spectrum is None:
        spectrum = eigen_decompose(h)
    coeffs = spectrum.vectors.T @ s0.amps
    amps = spectrum.vectors @ (np.exp(-1j * spectrum.energies * tau) * coeffs)
    return FockState(amps)


def energy_gap(h: TridiagonalHamiltonian) -> float:
    """Gap between the two lowest levels, energies[1] - energies[0] >= 0."""
    spec = eigen_decompose(h)
    return float(spec.energies[1] - spec.energies[0])
