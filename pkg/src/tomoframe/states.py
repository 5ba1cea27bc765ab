"""Density-matrix utilities: validation, random states, distance measures."""

import numpy as np

from .errors import DimensionError, StateError

HERMITICITY_RTOL = 1e-9


def require_square(a, name="operator"):
    arr = np.asarray(a, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise DimensionError(f"{name} must be a square matrix, got shape {arr.shape}")
    return arr


def require_hermitian(a, name="operator", rtol=HERMITICITY_RTOL):
    """Validate Hermiticity within a relative tolerance.

    Violations are rejected, never symmetrized away: a non-Hermitian
    input usually means a bug further up the data pipeline.
    """
    arr = require_square(a, name)
    scale = 1.0 + float(np.abs(arr).max())
    defect = float(np.abs(arr - arr.conj().T).max())
    if defect > rtol * scale:
        raise StateError(
            f"{name} is not Hermitian: asymmetry {defect:.3e} exceeds "
            f"{rtol:.0e} * {scale:.3e}"
        )
    return arr


def require_density_matrix(rho, name="rho", trace_atol=1e-9, eig_atol=1e-9):
    """Validate that ``rho`` is Hermitian, unit trace, and PSD."""
    arr = require_hermitian(rho, name)
    tr = complex(np.trace(arr))
    if abs(tr - 1.0) > trace_atol:
        raise StateError(f"{name} has trace {tr}, expected 1")
    w = np.linalg.eigvalsh(0.5 * (arr + arr.conj().T))
    if w[0] < -eig_atol:
        raise StateError(f"{name} is not PSD: min eigenvalue {w[0]:.3e}")
    return arr


def random_density_matrix(dim, rng, rank=None):
    """Random density matrix, normalized M M^dag for Gaussian M."""
    rank = dim if rank is None else rank
    m = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = m @ m.conj().T
    return rho / np.trace(rho).real


def pure_state(vec):
    """Projector |v><v| for a (not necessarily normalized) vector."""
    v = np.asarray(vec, dtype=complex)
    return np.outer(v, v.conj()) / float(np.vdot(v, v).real)


def computational_state(dim, k):
    """Projector onto the k-th computational basis vector."""
    v = np.zeros(dim, dtype=complex)
    v[k] = 1.0
    return np.outer(v, v.conj())


def bell_state():
    """Two-qubit |Phi+> = (|00> + |11>)/sqrt(2) projector."""
    return pure_state(np.array([1, 0, 0, 1], dtype=complex))


def ghz_state(m):
    """M-qubit GHZ projector (|0...0> + |1...1>)/sqrt(2)."""
    v = np.zeros(2**m, dtype=complex)
    v[0] = v[-1] = 1.0
    return pure_state(v)


def werner_state(visibility):
    """Two-qubit singlet mixed with white noise at the given visibility."""
    if not 0.0 <= visibility <= 1.0:
        raise StateError(f"visibility must be in [0, 1], got {visibility}")
    singlet = pure_state(np.array([0, 1, -1, 0], dtype=complex))
    return visibility * singlet + (1.0 - visibility) * np.eye(4) / 4.0


def fidelity(rho, sigma):
    """Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2."""
    rho = require_square(rho, "rho")
    sigma = require_square(sigma, "sigma")
    if rho.shape != sigma.shape:
        raise DimensionError(f"shape mismatch {rho.shape} vs {sigma.shape}")
    w, v = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    sqrt_rho = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    inner = sqrt_rho @ sigma @ sqrt_rho
    vals = np.linalg.eigvalsh(0.5 * (inner + inner.conj().T))
    return float(np.sum(np.sqrt(np.clip(vals, 0.0, None))) ** 2)


def trace_distance(rho, sigma):
    """Half the trace norm of rho - sigma."""
    rho = require_square(rho, "rho")
    sigma = require_square(sigma, "sigma")
    if rho.shape != sigma.shape:
        raise DimensionError(f"shape mismatch {rho.shape} vs {sigma.shape}")
    diff = rho - sigma
    w = np.linalg.eigvalsh(0.5 * (diff + diff.conj().T))
    return float(0.5 * np.sum(np.abs(w)))
