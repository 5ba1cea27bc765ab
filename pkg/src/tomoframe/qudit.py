"""SU(D) generator bases, Bloch-style expansions, and discrete projector
quorums for qubits, qudits, and multi-qubit products.

Generators are normalized so that tr(g_i g_j) = delta_ij; together with
I/sqrt(D) they form an orthonormal Hermitian basis of the D x D operator
space. A quorum is a family of rank-1 projectors whose expectation values
determine a state; reconstruction is the dual-frame pairing
rho = sum_a p_a Q_a with p_a = tr(N_a rho).
"""

import functools
import itertools
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .errors import (
    CompletenessError,
    DataError,
    DesignError,
    DimensionError,
    RangeError,
    ResourceError,
    StateError,
)
from .opspace import OperatorBasis, build_dual_frame, operator_expectations
from .report import build_report
from .states import require_density_matrix

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = np.stack([PAULI_X, PAULI_Y, PAULI_Z])

DESIGN_ATOL = 1e-9
PROJECTOR_ATOL = 1e-9
PRODUCT_CAP = 4096

_PHI = (1.0 + np.sqrt(5.0)) / 2.0

TETRAHEDRON_DIRECTIONS = np.array(
    [(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)], dtype=float
) / np.sqrt(3.0)

OCTAHEDRON_DIRECTIONS = np.array(
    [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)],
    dtype=float,
)

ICOSAHEDRON_DIRECTIONS = np.array(
    [
        (0, 1, _PHI), (0, -1, _PHI), (0, 1, -_PHI), (0, -1, -_PHI),
        (1, _PHI, 0), (-1, _PHI, 0), (1, -_PHI, 0), (-1, -_PHI, 0),
        (_PHI, 0, 1), (_PHI, 0, -1), (-_PHI, 0, 1), (-_PHI, 0, -1),
    ],
    dtype=float,
) / np.sqrt(1.0 + _PHI**2)

NAMED_QUBIT_DESIGNS = {
    "tetrahedron": TETRAHEDRON_DIRECTIONS,
    "octahedron": OCTAHEDRON_DIRECTIONS,
    "icosahedron": ICOSAHEDRON_DIRECTIONS,
}


@dataclass
class SuDBasis:
    """Orthonormal Hermitian basis: D^2 - 1 traceless generators plus I/sqrt(D)."""

    d: int
    generators: np.ndarray
    identity_element: np.ndarray

    def elements_with_identity(self):
        """Full basis stack with the scaled identity first."""
        return np.concatenate([self.identity_element[None], self.generators])


def su_generators(d):
    """Traceless orthonormal generators for dimension d, in the order
    diagonal family (a = 2..d), symmetric off-diagonal family (a < b),
    antisymmetric off-diagonal family (a < b).

    At d = 2 these are the Pauli matrices over sqrt(2) (z, x, y order);
    at d = 3 the Gell-Mann matrices over sqrt(2), reordered.
    """
    if not isinstance(d, (int, np.integer)) or d < 2:
        raise RangeError(f"dimension must be an integer >= 2, got {d}")
    gens = []
    for a in range(2, d + 1):
        g = np.zeros((d, d), dtype=complex)
        for b in range(1, a):
            g[b - 1, b - 1] = 1.0
        g[a - 1, a - 1] = -(a - 1)
        gens.append(g / np.sqrt(a * (a - 1)))
    for a in range(1, d + 1):
        for b in range(a + 1, d + 1):
            g = np.zeros((d, d), dtype=complex)
            g[a - 1, b - 1] = 1.0
            g[b - 1, a - 1] = 1.0
            gens.append(g / np.sqrt(2.0))
    for a in range(1, d + 1):
        for b in range(a + 1, d + 1):
            g = np.zeros((d, d), dtype=complex)
            g[a - 1, b - 1] = -1j
            g[b - 1, a - 1] = 1j
            gens.append(g / np.sqrt(2.0))
    return SuDBasis(
        d=int(d),
        generators=np.stack(gens),
        identity_element=np.eye(d, dtype=complex) / np.sqrt(d),
    )


@dataclass
class BlochVector:
    """Real generator-basis coefficients of a unit-trace operator,
    rho = (I + sum_j c_j g_j) / d. Pure states have |c| = sqrt(d(d-1))."""

    d: int
    c: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float)
        if c.shape != (self.d**2 - 1,):
            raise DimensionError(
                f"{c.shape} coefficients for dimension {self.d} (need {self.d**2 - 1})"
            )
        if not np.all(np.isfinite(c)):
            raise DataError("Bloch coefficients contain non-finite entries")
        self.c = c


def bloch_expand(rho):
    """Generator coefficients c_j = d tr(rho g_j) of a density matrix."""
    rho = require_density_matrix(rho)
    d = rho.shape[0]
    basis = su_generators(d)
    c = d * np.einsum("jab,ba->j", basis.generators, rho)
    return BlochVector(d=d, c=c.real)


class ContractedState(NamedTuple):
    matrix: np.ndarray
    psd: bool
    min_eigenvalue: float


def bloch_contract(v):
    """Operator (I + sum_j c_j g_j) / d for a coefficient vector.

    Always Hermitian with unit trace; the PSD flag reports whether the
    result is an actual state (useful when diagnosing bad data).
    """
    basis = su_generators(v.d)
    m = (np.eye(v.d, dtype=complex) + np.einsum("j,jab->ab", v.c, basis.generators)) / v.d
    w = np.linalg.eigvalsh(m)
    return ContractedState(matrix=m, psd=bool(w[0] >= -1e-9), min_eigenvalue=float(w[0]))


@dataclass
class ProjectorQuorum:
    """Rank-1 projector family with its dual operators.

    ``directions`` is (K, 3) for single-qubit designs, (K, m, 3) for
    m-fold products, a (K, d^2 - 1) stack of unit generator-space
    directions for qudit designs, or None for raw projector lists.
    ``frame`` caches the full operator-space dual frame when it has been
    built explicitly (lazily via :meth:`dual_frame` otherwise).
    """

    dim: int
    projectors: np.ndarray
    duals: np.ndarray
    gram_eigenvalues: np.ndarray
    complete: bool
    directions: Optional[np.ndarray] = None
    frame: Optional[object] = field(default=None, repr=False)

    def __post_init__(self):
        p = np.asarray(self.projectors, dtype=complex)
        if p.ndim != 3 or p.shape[1:] != (self.dim, self.dim):
            raise DimensionError(f"projector stack of shape {p.shape} for dim {self.dim}")
        idem = float(np.abs(np.matmul(p, p) - p).max())
        if idem > PROJECTOR_ATOL:
            raise StateError(f"quorum elements are not projectors: P^2 - P = {idem:.3e}")
        traces = np.einsum("kaa->k", p)
        if float(np.abs(traces - 1.0).max()) > PROJECTOR_ATOL:
            raise StateError("quorum projectors must have unit trace")
        self.projectors = p

    @property
    def k(self):
        return self.projectors.shape[0]

    @property
    def rank(self):
        w = self.gram_eigenvalues
        return int(np.count_nonzero(w > 1e-12 * max(float(w[-1]), 0.0)))

    @property
    def condition_number(self):
        w = self.gram_eigenvalues
        kept = w[w > 1e-12 * max(float(w[-1]), 0.0)]
        if kept.size == 0:
            return float("inf")
        return float(kept[-1] / kept[0])

    def dual_frame(self):
        if self.frame is None:
            self.frame = build_dual_frame(OperatorBasis(self.projectors))
        return self.frame


def _design_residuals(directions):
    k = directions.shape[0]
    first = float(np.abs(directions.sum(axis=0)).max())
    second = float(np.abs(directions.T @ directions / k - np.eye(3) / 3.0).max())
    return first, second


def qubit_design_quorum(design):
    """Qubit quorum N_a = (I + n_a . sigma)/2 from a named design
    (tetrahedron, octahedron, icosahedron) or an explicit unit-vector list.

    Both design conditions are enforced: the directions must sum to zero
    and their second moment must equal I/3.
    """
    if isinstance(design, str):
        try:
            directions = NAMED_QUBIT_DESIGNS[design]
        except KeyError:
            raise DataError(
                f"unknown design {design!r}; named designs: "
                f"{sorted(NAMED_QUBIT_DESIGNS)}"
            ) from None
    else:
        directions = np.asarray(design, dtype=float)
    if directions.ndim != 2 or directions.shape[1] != 3 or directions.shape[0] < 1:
        raise DimensionError(f"directions must be (K, 3), got {directions.shape}")
    norms = np.linalg.norm(directions, axis=1)
    if float(np.abs(norms - 1.0).max()) > 1e-9:
        raise DataError("directions must be unit vectors")
    first, second = _design_residuals(directions)
    if first > DESIGN_ATOL or second > DESIGN_ATOL:
        raise DesignError(
            "direction set violates the design conditions: "
            f"sum of directions residual {first:.3e}, "
            f"second moment residual {second:.3e} (tolerance {DESIGN_ATOL:.0e})",
            first_moment_residual=first,
            second_moment_residual=second,
        )
    projectors = 0.5 * (
        np.eye(2, dtype=complex)[None]
        + np.einsum("kj,jab->kab", directions, PAULIS)
    )
    frame = build_dual_frame(OperatorBasis(projectors))
    return ProjectorQuorum(
        dim=2,
        projectors=projectors,
        duals=frame.duals,
        gram_eigenvalues=frame.gram.eigenvalues,
        complete=frame.complete,
        directions=directions,
        frame=frame,
    )


def projector_quorum(projectors, directions=None):
    """Quorum from an explicit projector list, with duals from generic
    Gram inversion. Works for any dimension and any informationally
    complete (or deficient) family."""
    p = np.asarray(projectors, dtype=complex)
    if p.ndim != 3 or p.shape[1] != p.shape[2]:
        raise DimensionError(f"projector stack must be (K, d, d), got {p.shape}")
    frame = build_dual_frame(OperatorBasis(p))
    return ProjectorQuorum(
        dim=p.shape[1],
        projectors=p,
        duals=frame.duals,
        gram_eigenvalues=frame.gram.eigenvalues,
        complete=frame.complete,
        directions=directions,
        frame=frame,
    )


def qutrit_sic_quorum():
    """Nine symmetric rank-1 projectors for dimension 3, the clock/shift
    orbit of the fiducial (0, 1, -1)/sqrt(2); pairwise overlaps all 1/4."""
    d = 3
    omega = np.exp(2j * np.pi / d)
    shift = np.zeros((d, d), dtype=complex)
    for a in range(d):
        shift[(a + 1) % d, a] = 1.0
    clock = np.diag([omega**a for a in range(d)])
    fiducial = np.array([0.0, 1.0, -1.0], dtype=complex) / np.sqrt(2.0)
    vectors = [
        np.linalg.matrix_power(shift, j) @ np.linalg.matrix_power(clock, k) @ fiducial
        for j in range(d)
        for k in range(d)
    ]
    projectors = np.stack([np.outer(v, v.conj()) for v in vectors])
    gens = su_generators(d).generators
    bloch = d * np.einsum("kab,jba->kj", projectors, gens).real
    directions = bloch / np.linalg.norm(bloch, axis=1, keepdims=True)
    return projector_quorum(projectors, directions=directions)


@dataclass
class QuorumGramReport:
    """How closely a quorum's Gram superoperator matches the design form
    diag(K/D, K/(D(D+1)), ...) in the orthonormal generator basis, and how
    the generic duals compare against the design closed form
    Q_a = (D(D+1)/K) (N_a - I/(D+1))."""

    gram_residual: float
    duals: np.ndarray
    closed_form_duals: np.ndarray
    dual_mismatch: float


def qudit_quorum_gram(quorum):
    """Check a quorum's Gram superoperator against the design closed form.

    The residual is not fatal: for quorums without the design symmetry the
    generic Gram-inverted duals remain valid and are returned regardless.
    Rank-deficient quorums raise :class:`CompletenessError`.
    """
    d = quorum.dim
    if not quorum.complete or quorum.rank != d**2:
        raise CompletenessError(
            f"quorum spans rank {quorum.rank} of {d**2} operator dimensions"
        )
    k = quorum.k
    basis = su_generators(d).elements_with_identity()
    overlaps = np.einsum("nij,aji->na", quorum.projectors, basis).real
    gram_super = overlaps.T @ overlaps
    expected = np.diag(
        [k / d] + [k / (d * (d + 1.0))] * (d**2 - 1)
    )
    residual = float(np.abs(gram_super - expected).max())
    generic = quorum.dual_frame().duals
    closed = (d * (d + 1.0) / k) * (
        quorum.projectors - np.eye(d, dtype=complex)[None] / (d + 1.0)
    )
    mismatch = float(np.abs(generic - closed).max())
    return QuorumGramReport(
        gram_residual=residual,
        duals=generic,
        closed_form_duals=closed,
        dual_mismatch=mismatch,
    )


def outcome_probabilities(quorum, rho):
    """Exact outcome probabilities p_a = tr(N_a rho) for a state."""
    rho = require_density_matrix(rho)
    return operator_expectations(quorum.projectors, rho)


def reconstruct_from_probabilities(quorum, probabilities, reference=None):
    """Linear-inversion reconstruction rho = sum_a p_a Q_a.

    Exact for informationally complete quorums fed exact probabilities;
    for sampled frequencies the report's trace and minimum eigenvalue
    quantify the statistical distortion.
    """
    p = np.asarray(probabilities, dtype=float)
    if p.shape != (quorum.k,):
        raise DimensionError(f"{p.shape} probabilities for {quorum.k} settings")
    if p.min() < -1e-9 or p.max() > 1.0 + 1e-9:
        raise DataError(
            f"probabilities outside [0, 1]: min {p.min():.3e}, max {p.max():.3e}"
        )
    rho = np.einsum("k,kab->ab", p, quorum.duals)
    rho = 0.5 * (rho + rho.conj().T)
    return build_report(
        probabilities=p,
        matrix=rho,
        condition_number=quorum.condition_number,
        reference=reference,
    )


def product_quorum(base, m, cap=PRODUCT_CAP):
    """m-fold Kronecker-product quorum over a (dim^m)-dimensional space.

    Projectors and duals are Kronecker products of the base ones, indexed
    in row-major order (first factor varies slowest, leftmost in the
    product). The Gram spectrum of the product is the m-fold outer product
    of the base spectrum, so completeness and conditioning are inherited.
    """
    if not isinstance(m, (int, np.integer)) or m < 1:
        raise RangeError(f"factor count must be a positive integer, got {m}")
    if base.k**m > cap:
        raise ResourceError(
            f"product quorum size {base.k}^{m} exceeds the cap {cap}"
        )
    if m == 1:
        return base
    index_tuples = list(itertools.product(range(base.k), repeat=m))
    projectors = np.stack(
        [
            functools.reduce(np.kron, [base.projectors[i] for i in t])
            for t in index_tuples
        ]
    )
    duals = np.stack(
        [functools.reduce(np.kron, [base.duals[i] for i in t]) for t in index_tuples]
    )
    eigenvalues = base.gram_eigenvalues
    for _ in range(m - 1):
        eigenvalues = np.outer(eigenvalues, base.gram_eigenvalues).ravel()
    eigenvalues = np.sort(eigenvalues)
    directions = None
    if base.directions is not None and base.directions.ndim == 2:
        directions = np.stack(
            [np.stack([base.directions[i] for i in t]) for t in index_tuples]
        )
    return ProjectorQuorum(
        dim=base.dim**m,
        projectors=projectors,
        duals=duals,
        gram_eigenvalues=eigenvalues,
        complete=base.complete,
        directions=directions,
    )
