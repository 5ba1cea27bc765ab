"""Operator-space linear algebra: trace inner product, Gram matrices,
dual frames, and operator expansion/reconstruction.

Operators are dense complex square ndarrays. A family {N_j} of Hermitian
operators spanning (a subspace of) the dim x dim matrices is held in an
:class:`OperatorBasis`. Its Gram matrix G[j, k] = tr(N_j^dag N_k) is
diagonalized once; the spectral pseudo-inverse then yields canonical dual
operators Q_j = sum_k Ginv[j, k] N_k with the reproducing property

    A = sum_j N_j tr(Q_j^dag A) = sum_j Q_j tr(N_j^dag A)

for every A in the span of the family. When the family is complete
(Gram rank equals dim^2) this expands arbitrary operators; otherwise the
two sums return the orthogonal projection of A onto the span.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError
from .states import require_hermitian

# Gram eigenvalues below this fraction of the largest one are treated as
# zero when inverting (numerically rank-deficient input).
GRAM_CUTOFF_RTOL = 1e-12


def trace_inner_product(a, b):
    """Trace inner product tr(a^dag b).

    Conjugate symmetric: swapping the arguments conjugates the result.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape != b.shape:
        raise DimensionError(
            f"trace inner product needs two square matrices of equal "
            f"dimension, got shapes {a.shape} and {b.shape}"
        )
    return complex(np.vdot(a, b))


def operator_expectations(operators, rho):
    """Real expectation values tr(N_k rho) for a stack of Hermitian operators."""
    ops = np.asarray(operators, dtype=complex)
    state = np.asarray(rho, dtype=complex)
    if ops.ndim != 3 or ops.shape[1:] != state.shape:
        raise DimensionError(
            f"operator stack of shape {ops.shape} does not match state "
            f"of shape {state.shape}"
        )
    vals = np.einsum("kij,ji->k", ops, state)
    return vals.real


class OperatorBasis:
    """Ordered family of same-dimension Hermitian operators."""

    def __init__(self, elements, labels=None):
        ops = np.asarray(elements, dtype=complex)
        if ops.ndim != 3 or ops.shape[1] != ops.shape[2]:
            raise DimensionError(
                f"operator basis must be a stack of square matrices, got shape {ops.shape}"
            )
        if ops.shape[0] == 0:
            raise DimensionError("operator basis must be non-empty")
        for k in range(ops.shape[0]):
            require_hermitian(ops[k], name=f"basis element {k}")
        if labels is None:
            labels = tuple(f"N{k}" for k in range(ops.shape[0]))
        labels = tuple(str(x) for x in labels)
        if len(labels) != ops.shape[0]:
            raise DimensionError(
                f"{len(labels)} labels for {ops.shape[0]} basis elements"
            )
        self.elements = ops
        self.dim = int(ops.shape[1])
        self.labels = labels

    def __len__(self):
        return self.elements.shape[0]


@dataclass
class GramSuperoperator:
    """Gram matrix of an operator family with its spectral data.

    ``eigenvalues`` are ascending; ``rank`` counts those above
    ``cutoff`` = GRAM_CUTOFF_RTOL times the largest eigenvalue.
    """

    matrix: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    rank: int
    cutoff: float

    @property
    def size(self):
        return self.matrix.shape[0]

    @property
    def condition_number(self):
        """Ratio of largest to smallest retained eigenvalue."""
        kept = self.eigenvalues[self.eigenvalues > self.cutoff]
        if kept.size == 0:
            return float("inf")
        return float(kept[-1] / kept[0])

    def pseudo_inverse(self):
        """Spectral pseudo-inverse; exact inverse when full rank."""
        w = self.eigenvalues
        keep = w > self.cutoff
        inv = np.zeros_like(w)
        inv[keep] = 1.0 / w[keep]
        return (self.eigenvectors * inv) @ self.eigenvectors.conj().T


def build_gram(basis):
    """Gram matrix G[j, k] = tr(N_j^dag N_k) of an operator basis."""
    ops = basis.elements
    g = np.einsum("aij,bij->ab", ops.conj(), ops)
    g = 0.5 * (g + g.conj().T)
    w, v = np.linalg.eigh(g)
    cutoff = GRAM_CUTOFF_RTOL * max(float(w[-1]), 0.0)
    rank = int(np.count_nonzero(w > cutoff))
    return GramSuperoperator(
        matrix=g, eigenvalues=w, eigenvectors=v, rank=rank, cutoff=cutoff
    )


@dataclass
class DualFrame:
    """An operator basis paired with its canonical dual family.

    ``complete`` is true when the basis spans the whole operator space
    (Gram rank = dim^2); only then do expansions reproduce arbitrary
    operators rather than their projection onto the span.
    """

    basis: OperatorBasis
    duals: np.ndarray
    gram: GramSuperoperator
    complete: bool


def build_dual_frame(basis):
    """Dual operators Q_j = sum_k Ginv[j, k] N_k via the Gram pseudo-inverse."""
    gram = build_gram(basis)
    ginv = gram.pseudo_inverse()
    duals = np.einsum("jk,kab->jab", ginv, basis.elements)
    # ginv is Hermitian with real entries for Hermitian bases; any residual
    # asymmetry in the duals is rounding noise.
    duals = 0.5 * (duals + duals.conj().transpose(0, 2, 1))
    complete = gram.rank == basis.dim**2
    return DualFrame(basis=basis, duals=duals, gram=gram, complete=complete)


def expand(frame, a):
    """Expansion coefficients c_j = tr(Q_j^dag a) against the dual family.

    When the frame is complete, sum_j c_j N_j reproduces ``a``; otherwise
    it reproduces the orthogonal projection of ``a`` onto the span.
    """
    a = np.asarray(a, dtype=complex)
    d = frame.basis.dim
    if a.shape != (d, d):
        raise DimensionError(
            f"operand of shape {a.shape} does not match frame dimension {d}"
        )
    return np.einsum("jab,ab->j", frame.duals.conj(), a)


def reconstruct(frame, coefficients):
    """Synthesis sum_j c_j N_j of a coefficient list over the basis."""
    c = np.asarray(coefficients, dtype=complex)
    n = len(frame.basis)
    if c.shape != (n,):
        raise DimensionError(f"coefficient shape {c.shape} for {n} basis elements")
    return np.einsum("j,jab->ab", c, frame.basis.elements)
