"""Coherent-state quorums for spin-s systems.

States live in the (2s+1)-dimensional irrep with basis |s-k> ordered from
the highest weight down; s is stored as the integer 2s to keep labels
exact. A quorum places (2s+1)^2 coherent-state projectors on 2s+1 cones
about the z axis, with the azimuths on each cone invariant under rotation
by 2 pi/(2s+1). Distinct coherent states always overlap, so the quorum
projectors pairwise fail to commute and the direction probabilities
p_n = <n|rho|n> refer to incompatible Stern-Gerlach orientations; they
need not sum to one. Duals come from operator-space Gram inversion, which
makes rho = sum_n p_n Q_n exact whenever the quorum is informationally
complete.
"""

import csv
from dataclasses import dataclass, field
from math import comb
from typing import Optional

import numpy as np
from scipy.linalg import expm

from .errors import (
    ConditioningError,
    DataError,
    DimensionError,
    RangeError,
    TomographyError,
)
from .opspace import OperatorBasis, build_dual_frame, operator_expectations
from .report import build_report
from .states import require_density_matrix

MAX_CONDITION = 1e8
JITTER_FRACTION = 0.02
JITTER_ATTEMPTS = 5
CROSS_CHECK_ATOL = 1e-9


def spin_operators(two_s):
    """Spin matrices (sx, sy, sz) for spin s = two_s / 2."""
    if not isinstance(two_s, (int, np.integer)) or two_s < 0:
        raise RangeError(f"2s must be a nonnegative integer, got {two_s}")
    n = two_s + 1
    s = two_s / 2.0
    m = s - np.arange(n)
    sz = np.diag(m).astype(complex)
    sp = np.zeros((n, n), dtype=complex)
    for k in range(1, n):
        mk = m[k]
        sp[k - 1, k] = np.sqrt(s * (s + 1) - mk * (mk + 1))
    sm = sp.conj().T
    sx = 0.5 * (sp + sm)
    sy = -0.5j * (sp - sm)
    return sx, sy, sz


@dataclass
class SpinCoherentState:
    """Coherent state pointing along (theta, phi), expanded in |s-k>."""

    two_s: int
    theta: float
    phi: float
    vector: np.ndarray


def _stereographic_amplitudes(two_s, theta, phi):
    z = np.tan(theta / 2.0) * np.exp(1j * phi)
    k = np.arange(two_s + 1)
    binom = np.array([comb(two_s, int(kk)) for kk in k], dtype=float)
    amps = np.sqrt(binom) * z**k
    return amps / (1.0 + abs(z) ** 2) ** (two_s / 2.0)


def spin_coherent_state(two_s, theta, phi):
    """Coherent state built two independent ways and cross-checked.

    The rotation route applies exp(-i theta m(phi) . S) with the axis
    m(phi) = (-sin phi, cos phi, 0) to the highest-weight state; the
    stereographic route expands in binomial amplitudes of
    z = tan(theta/2) exp(i phi). The two must agree to 1e-9, which guards
    both the spin matrices and the amplitude formula at once.
    """
    if not isinstance(two_s, (int, np.integer)) or two_s < 0:
        raise RangeError(f"2s must be a nonnegative integer, got {two_s}")
    if not 0.0 <= theta <= np.pi:
        raise RangeError(f"theta must be in [0, pi], got {theta}")
    phi = float(phi) % (2.0 * np.pi)
    sx, sy, sz = spin_operators(two_s)
    axis = -np.sin(phi) * sx + np.cos(phi) * sy
    rotated = expm(-1j * theta * axis)[:, 0]
    stereo = _stereographic_amplitudes(two_s, theta, phi)
    gap = float(np.linalg.norm(rotated - stereo))
    if gap > CROSS_CHECK_ATOL:
        raise TomographyError(
            f"coherent-state construction mismatch: rotation and "
            f"stereographic routes differ by {gap:.3e}"
        )
    return SpinCoherentState(two_s=int(two_s), theta=float(theta), phi=phi, vector=stereo)


@dataclass
class SpinQuorum:
    """(2s+1)^2 coherent-state projectors on nested cones with their duals."""

    two_s: int
    polar_angles: np.ndarray
    directions: np.ndarray
    cone_indices: np.ndarray
    azimuth_indices: np.ndarray
    projectors: np.ndarray
    duals: np.ndarray
    gram_eigenvalues: np.ndarray
    complete: bool
    condition_number: float
    jitter_seed: int
    jitter_attempts: int
    frame: Optional[object] = field(default=None, repr=False)

    @property
    def dim(self):
        return self.two_s + 1

    @property
    def k(self):
        return (self.two_s + 1) ** 2

    @property
    def rank(self):
        w = self.gram_eigenvalues
        return int(np.count_nonzero(w > 1e-12 * max(float(w[-1]), 0.0)))

    def dual_frame(self):
        if self.frame is None:
            self.frame = build_dual_frame(OperatorBasis(self.projectors))
        return self.frame


def _default_polar_angles(two_s):
    k = np.arange(two_s + 1)
    return np.pi * (k + 1) / (two_s + 2)


def _assemble(two_s, polar):
    n = two_s + 1
    directions, cones, azimuths, vectors = [], [], [], []
    for k in range(n):
        for l in range(n):
            # per-cone azimuth offset breaks accidental degeneracy between
            # cones while preserving the 2 pi/(2s+1) rotation symmetry
            phi = 2.0 * np.pi * l / n + k * np.pi / n**2
            state = spin_coherent_state(two_s, float(polar[k]), phi)
            directions.append((state.theta, state.phi))
            cones.append(k)
            azimuths.append(l)
            vectors.append(state.vector)
    projectors = np.stack([np.outer(v, v.conj()) for v in vectors])
    return np.array(directions), np.array(cones), np.array(azimuths), projectors


def build_spin_quorum(two_s, polar_scheme=None, jitter_seed=0):
    """Coherent-state quorum for spin s = two_s / 2.

    Default polar angles are pi (k+1)/(2s+2) for k = 0..2s; a custom
    scheme must supply 2s+1 distinct angles strictly inside (0, pi).
    If the resulting operator-space Gram matrix has condition number
    above MAX_CONDITION, the polar angles are jittered by up to
    JITTER_FRACTION of the cone spacing (seeded, deterministic) and the
    quorum rebuilt, up to JITTER_ATTEMPTS times before giving up.
    """
    if not isinstance(two_s, (int, np.integer)) or two_s < 0:
        raise RangeError(f"2s must be a nonnegative integer, got {two_s}")
    n = two_s + 1
    if polar_scheme is not None:
        base_polar = np.asarray(polar_scheme, dtype=float)
        if base_polar.shape != (n,):
            raise RangeError(f"polar scheme needs {n} angles, got {base_polar.shape}")
        if np.unique(base_polar).size != n:
            raise RangeError("polar angles must be distinct")
        if base_polar.min() <= 0.0 or base_polar.max() >= np.pi:
            raise RangeError("polar angles must lie strictly inside (0, pi)")
    else:
        base_polar = _default_polar_angles(two_s)
    spacing = np.pi / (two_s + 2)
    last_spectrum = None
    attempts_used = 0
    for attempt in range(JITTER_ATTEMPTS + 1):
        if attempt == 0:
            polar = base_polar
        else:
            rng = np.random.default_rng([jitter_seed, attempt])
            delta = rng.uniform(-JITTER_FRACTION, JITTER_FRACTION, size=n) * spacing
            polar = np.clip(base_polar + delta, 1e-6, np.pi - 1e-6)
        directions, cones, azimuths, projectors = _assemble(two_s, polar)
        frame = build_dual_frame(OperatorBasis(projectors))
        condition = frame.gram.condition_number
        last_spectrum = frame.gram.eigenvalues
        attempts_used = attempt
        if frame.complete and condition <= MAX_CONDITION:
            return SpinQuorum(
                two_s=int(two_s),
                polar_angles=polar,
                directions=directions,
                cone_indices=cones,
                azimuth_indices=azimuths,
                projectors=projectors,
                duals=frame.duals,
                gram_eigenvalues=frame.gram.eigenvalues,
                complete=frame.complete,
                condition_number=condition,
                jitter_seed=int(jitter_seed),
                jitter_attempts=attempt,
                frame=frame,
            )
    raise ConditioningError(
        f"quorum Gram stayed rank-deficient or above condition limit "
        f"{MAX_CONDITION:.0e} after {attempts_used} jitter attempts",
        spectrum=last_spectrum,
    )


def spin_probabilities(quorum, rho):
    """Exact direction probabilities p_n = <n|rho|n>."""
    rho = require_density_matrix(rho)
    return operator_expectations(quorum.projectors, rho)


def spin_reconstruct(quorum, frequencies, reference=None):
    """Linear inversion rho = sum_n p_n Q_n from direction frequencies.

    For exact probabilities of a valid state the trace comes out 1 (the
    normalization ties one probability to the other 4s(s+1)); sampled
    frequencies drift by the usual statistical amount, reported as is.
    """
    p = np.asarray(frequencies, dtype=float)
    if p.shape != (quorum.k,):
        raise DimensionError(f"{p.shape} frequencies for {quorum.k} settings")
    if p.min() < -1e-9 or p.max() > 1.0 + 1e-9:
        raise DataError(
            f"frequencies outside [0, 1]: min {p.min():.3e}, max {p.max():.3e}"
        )
    rho = np.einsum("k,kab->ab", p, quorum.duals)
    rho = 0.5 * (rho + rho.conj().T)
    return build_report(
        probabilities=p,
        matrix=rho,
        condition_number=quorum.condition_number,
        reference=reference,
    )


@dataclass
class CommutatorSummary:
    """Frobenius norms of pairwise projector commutators.

    All strictly positive for a proper coherent-state quorum; a zero entry
    flags duplicated (or jointly diagonal) measurement directions.
    """

    max_norm: float
    min_norm: float
    degenerate_pairs: list


def quorum_compatibility_report(quorum, degenerate_atol=1e-12):
    p = quorum.projectors
    k = p.shape[0]
    max_norm = 0.0
    min_norm = np.inf
    degenerate = []
    for i in range(k):
        for j in range(i + 1, k):
            norm = float(np.linalg.norm(p[i] @ p[j] - p[j] @ p[i]))
            max_norm = max(max_norm, norm)
            min_norm = min(min_norm, norm)
            if norm <= degenerate_atol:
                degenerate.append((i, j))
    return CommutatorSummary(
        max_norm=max_norm, min_norm=float(min_norm), degenerate_pairs=degenerate
    )


def export_directions_csv(quorum, path):
    """Write the quorum directions as CSV rows (k, l, theta, phi)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["k", "l", "theta", "phi"])
        for k, l, (theta, phi) in zip(
            quorum.cone_indices, quorum.azimuth_indices, quorum.directions
        ):
            writer.writerow([int(k), int(l), repr(float(theta)), repr(float(phi))])
