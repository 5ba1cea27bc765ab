"""Linear-matrix-inequality feasibility, duality gap, complementary
slackness, and closed-form coefficient extraction for frame truncations.

The primal problem is: minimize c^T x subject to
F(x) = F0 + sum_i x_i F_i >= 0 (PSD). The dual maximizes -tr(F0 Z) over
PSD Z with tr(F_i Z) = c_i. No iterative solver is shipped: truncation
optima have closed-form coefficients, and this module checks the
optimality certificates (feasibility margins, duality gap, slackness)
for any candidate primal/dual pair.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DimensionError, DataError, FeasibilityError
from .opspace import DualFrame
from .states import require_density_matrix, require_hermitian

FEASIBILITY_ATOL = 1e-9
OPTIMALITY_RESIDUAL = 1e-8


@dataclass
class SdpProblem:
    """Constraint data F(x) = f0 + sum_i x_i fs[i] and objective vector c."""

    f0: np.ndarray
    fs: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        self.f0 = require_hermitian(self.f0, "F0")
        fs = np.asarray(self.fs, dtype=complex)
        if fs.ndim != 3 or fs.shape[1:] != self.f0.shape:
            raise DimensionError(
                f"constraint matrices of shape {fs.shape} do not match F0 {self.f0.shape}"
            )
        for i in range(fs.shape[0]):
            require_hermitian(fs[i], f"F{i + 1}")
        self.fs = fs
        c = np.asarray(self.c, dtype=float)
        if c.shape != (fs.shape[0],):
            raise DimensionError(f"{c.shape} objective entries for {fs.shape[0]} constraints")
        if not np.all(np.isfinite(c)):
            raise DataError("objective vector contains non-finite entries")
        self.c = c

    @property
    def size(self):
        return self.fs.shape[0]


@dataclass
class SdpPoint:
    """Candidate primal variables x and optional dual matrix z."""

    x: np.ndarray
    z: Optional[np.ndarray] = None

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        if self.z is not None:
            self.z = require_hermitian(self.z, "Z")


def evaluate_constraint(problem, x):
    """Constraint matrix F(x) and its smallest eigenvalue.

    The point is primal feasible when the minimum eigenvalue is at least
    -FEASIBILITY_ATOL.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (problem.size,):
        raise DimensionError(f"{x.shape} variables for {problem.size} constraint matrices")
    fx = problem.f0 + np.einsum("i,iab->ab", x, problem.fs)
    fx = 0.5 * (fx + fx.conj().T)
    w = np.linalg.eigvalsh(fx)
    return fx, float(w[0])


def _require_feasible(problem, point):
    if point.z is None:
        raise FeasibilityError("point carries no dual matrix Z")
    fx, margin = evaluate_constraint(problem, point.x)
    if margin < -FEASIBILITY_ATOL:
        raise FeasibilityError(
            f"primal constraint F(x) >= 0 violated: min eigenvalue {margin:.3e}"
        )
    wz = np.linalg.eigvalsh(point.z)
    if wz[0] < -FEASIBILITY_ATOL * max(1.0, float(abs(wz[-1]))):
        raise FeasibilityError(f"dual matrix not PSD: min eigenvalue {wz[0]:.3e}")
    traces = np.einsum("iab,ba->i", problem.fs, point.z)
    for i, (t, ci) in enumerate(zip(traces, problem.c)):
        if abs(t - ci) > FEASIBILITY_ATOL * max(1.0, abs(ci)):
            raise FeasibilityError(
                f"dual equality tr(F{i + 1} Z) = c{i + 1} violated: "
                f"{complex(t):.6e} vs {ci:.6e}"
            )
    return fx


def duality_gap(problem, point):
    """Duality gap tr(F(x) Z) = c^T x + tr(F0 Z) of a feasible pair.

    Nonnegative (within tolerance) for any feasible pair; zero exactly at
    a jointly optimal one.
    """
    fx = _require_feasible(problem, point)
    gap = complex(np.trace(fx @ point.z))
    assert abs(gap.imag) <= 1e-9
    return float(gap.real)


def check_slackness(problem, point):
    """Complementary-slackness residual max(||F(x) Z||_F, ||Z F(x)||_F).

    A feasible pair is certified optimal when the residual is at most
    OPTIMALITY_RESIDUAL.
    """
    fx = _require_feasible(problem, point)
    left = float(np.linalg.norm(fx @ point.z))
    right = float(np.linalg.norm(point.z @ fx))
    return max(left, right)


@dataclass
class TruncationProblem:
    """Truncate a state onto the span of a retained operator family."""

    rho: np.ndarray
    frame: DualFrame

    def __post_init__(self):
        self.rho = require_density_matrix(self.rho)
        if self.rho.shape[0] != self.frame.basis.dim:
            raise DimensionError(
                f"state dimension {self.rho.shape[0]} does not match "
                f"frame dimension {self.frame.basis.dim}"
            )


def truncation_sdp(problem):
    """Encode a truncation as an LMI problem.

    The constraint rho - sum_j x_j N_j >= 0 becomes F(x) >= 0 with
    F0 = rho and F_j = -N_j; the objective c_j = -tr(N_j) maximizes the
    trace retained by the truncation.
    """
    elements = problem.frame.basis.elements
    traces = np.einsum("jaa->j", elements).real
    return SdpProblem(f0=problem.rho, fs=-elements, c=-traces)


@dataclass
class TruncationResult:
    """Coefficients, truncated state, and eigenvalues of the slack rho - rho_n."""

    coefficients: np.ndarray
    truncated: np.ndarray
    slack_spectrum: np.ndarray


def extract_coefficients(problem):
    """Closed-form truncation coefficients lambda_j = tr(Q_j^dag rho).

    Computed by solving the Gram system G lambda = b with
    b_j = tr(N_j^dag rho), which coincides with the dual pairing. The
    slack spectrum is nonnegative when the retained family consists of
    mutually orthogonal projectors from the state's own spectral
    decomposition; for general frames it is reported as is.
    """
    elements = problem.frame.basis.elements
    b = np.einsum("jab,ab->j", elements.conj(), problem.rho)
    lam = problem.frame.gram.pseudo_inverse() @ b
    truncated = np.einsum("j,jab->ab", lam, elements)
    slack = problem.rho - truncated
    slack = 0.5 * (slack + slack.conj().T)
    spectrum = np.linalg.eigvalsh(slack)
    return TruncationResult(coefficients=lam, truncated=truncated, slack_spectrum=spectrum)


def kernel_projector(matrix, atol=FEASIBILITY_ATOL):
    """Projector onto the span of eigenvectors with |eigenvalue| <= atol."""
    m = require_hermitian(matrix, "matrix", rtol=1e-6)
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    keep = np.abs(w) <= atol * max(1.0, float(np.abs(w).max()))
    vk = v[:, keep]
    return vk @ vk.conj().T


def truncation_certificate(problem):
    """Candidate optimal pair: closed-form coefficients plus a dual matrix
    supported on the kernel of the slack F(x)."""
    result = extract_coefficients(problem)
    x = result.coefficients.real
    slack = problem.rho - result.truncated
    z = kernel_projector(slack)
    return SdpPoint(x=x, z=z)


@dataclass
class SdpDiagnostics:
    feasibility_margin: float
    duality_gap: float
    slackness_residual: float


def optimality_diagnostics(problem):
    """Non-raising optimality summary for reports.

    Unlike :func:`duality_gap` and :func:`check_slackness`, this does not
    gate on feasibility: the margin, gap, and residual are returned even
    for truncations where the slack is indefinite, so callers can surface
    honest diagnostics for incomplete or mismatched frames.
    """
    point = truncation_certificate(problem)
    sdp = truncation_sdp(problem)
    fx, margin = evaluate_constraint(sdp, point.x)
    gap = complex(np.trace(fx @ point.z))
    residual = max(
        float(np.linalg.norm(fx @ point.z)), float(np.linalg.norm(point.z @ fx))
    )
    return SdpDiagnostics(
        feasibility_margin=margin,
        duality_gap=float(gap.real),
        slackness_residual=residual,
    )
