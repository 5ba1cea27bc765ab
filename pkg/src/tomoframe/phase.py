"""Phase-grid states, the Hermitian phase operator, and phase-diagonal
reconstruction in an (s+1)-dimensional number-state space.

The grid states |theta_m> = (s+1)^(-1/2) sum_n exp(i n theta_m) |n> on
theta_m = theta0 + 2 pi m / (s+1) are orthonormal, so the associated
projectors are their own duals on the span they generate. That span is
only s+1 of the (s+1)^2 operator dimensions: reconstruction from the
phase distribution recovers exactly the grid-diagonal part of a state
(its dephasing in the grid basis), which equals the state itself iff the
state is grid-diagonal.
"""

import csv
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .errors import DimensionError, RangeError
from .states import require_density_matrix


@dataclass
class PhaseBasis:
    """Orthonormal phase grid: row m of ``states`` is |theta_m>."""

    s: int
    theta0: float
    states: np.ndarray

    @property
    def dim(self):
        return self.s + 1

    @property
    def thetas(self):
        return self.theta0 + 2.0 * np.pi * np.arange(self.s + 1) / (self.s + 1)

    def projectors(self):
        return np.einsum("mi,mj->mij", self.states, self.states.conj())


def phase_states(s, theta0=0.0):
    """Phase basis of s+1 orthonormal grid states with reference phase theta0."""
    if not isinstance(s, (int, np.integer)) or s < 0:
        raise RangeError(f"s must be a nonnegative integer, got {s}")
    n = np.arange(s + 1)
    thetas = theta0 + 2.0 * np.pi * n / (s + 1)
    states = np.exp(1j * np.outer(thetas, n)) / np.sqrt(s + 1)
    return PhaseBasis(s=int(s), theta0=float(theta0), states=states)


def phase_operator(basis):
    """Hermitian operator sum_m theta_m |theta_m><theta_m|.

    Its eigenvalues are the grid phases and its eigenvectors the grid
    states; shifting theta0 shifts the whole spectrum by the same amount.
    """
    return np.einsum(
        "m,mi,mj->ij", basis.thetas, basis.states, basis.states.conj()
    )


@dataclass
class PhaseDistribution:
    """Per-radian phase densities P_m on the grid.

    ``probabilities`` converts back to grid weights via the cell width
    2 pi / (s+1); for a density-matrix input these sum to one.
    """

    values: np.ndarray
    thetas: np.ndarray

    @property
    def weight(self):
        return 2.0 * np.pi / len(self.values)

    @property
    def probabilities(self):
        return self.values * self.weight

    @property
    def normalization(self):
        return float(self.probabilities.sum())


def phase_distribution(rho, basis):
    """Phase density P_m = ((s+1)/2 pi) <theta_m| rho |theta_m>.

    Number states give the flat density 1/(2 pi): they carry no phase
    information.
    """
    rho = require_density_matrix(rho)
    if rho.shape[0] != basis.dim:
        raise DimensionError(
            f"state dimension {rho.shape[0]} does not match grid dimension {basis.dim}"
        )
    q = np.einsum("mi,ij,mj->m", basis.states.conj(), rho, basis.states).real
    values = (basis.dim / (2.0 * np.pi)) * q
    return PhaseDistribution(values=values, thetas=basis.thetas)


class PhaseReconstruction(NamedTuple):
    matrix: np.ndarray
    dephasing_residual: Optional[float]


def phase_diagonal_reconstruct(distribution, basis, rho=None):
    """Grid-diagonal state sum_m p_m |theta_m><theta_m| from a distribution.

    This recovers a state exactly iff the state is diagonal in the grid
    basis; otherwise it is the grid-dephased state. When the original
    ``rho`` is supplied, the Frobenius norm of the discarded off-diagonal
    part is returned alongside.
    """
    p = np.asarray(distribution.probabilities, dtype=float)
    if p.shape != (basis.dim,):
        raise DimensionError(
            f"distribution of length {p.shape[0]} for grid dimension {basis.dim}"
        )
    matrix = np.einsum("m,mi,mj->ij", p, basis.states, basis.states.conj())
    residual = None
    if rho is not None:
        rho = require_density_matrix(rho)
        q = np.einsum("mi,ij,mj->m", basis.states.conj(), rho, basis.states).real
        dephased = np.einsum("m,mi,mj->ij", q, basis.states, basis.states.conj())
        residual = float(np.linalg.norm(rho - dephased))
    return PhaseReconstruction(matrix=matrix, dephasing_residual=residual)


def export_distribution_csv(distribution, path):
    """Write the grid (theta_m, P_m) pairs as a two-column CSV."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["theta", "p_pb"])
        for theta, value in zip(distribution.thetas, distribution.values):
            writer.writerow([repr(float(theta)), repr(float(value))])
