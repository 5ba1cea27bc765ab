"""Finite frames for complex vector spaces.

A frame is a finite family {f_i} in C^dim, possibly overcomplete or
rank-deficient. With the inner product <x, y> = sum_k conj(x_k) y_k
(conjugate linear in the first slot), the synthesis map T c = sum_i c_i f_i
and its adjoint compose to the frame operator S = T T^dag = sum_i f_i f_i^dag,
whose extreme nonzero eigenvalues are the optimal frame bounds.
"""

from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple

import numpy as np

from .errors import DataError, DimensionError, RangeError, SpanError

EIG_CUTOFF_RTOL = 1e-12
SPAN_ATOL = 1e-9


@dataclass
class VectorFrame:
    """Finite vector family; row i of ``vectors`` is the frame vector f_i.

    ``bounds`` holds the optimal frame bounds (A, B) once computed by
    :func:`frame_operator`.
    """

    vectors: np.ndarray
    bounds: Optional[Tuple[float, float]] = None

    def __post_init__(self):
        v = np.asarray(self.vectors, dtype=complex)
        if v.ndim != 2 or v.shape[0] < 1 or v.shape[1] < 1:
            raise DimensionError(
                f"frame must be a non-empty stack of vectors, got shape {v.shape}"
            )
        self.vectors = v
        if self.bounds is not None:
            a, b = self.bounds
            if not 0 < a <= b:
                raise DataError(f"frame bounds must satisfy 0 < A <= B, got {self.bounds}")

    @property
    def dim(self):
        return self.vectors.shape[1]

    def __len__(self):
        return self.vectors.shape[0]


@dataclass
class FrameOperatorData:
    """Frame operator S = sum_i f_i f_i^dag and its ascending eigenvalues."""

    matrix: np.ndarray
    eigenvalues: np.ndarray


class ProjectionResult(NamedTuple):
    coefficients: np.ndarray
    projection: np.ndarray
    error: float


def _check_vector(frame, f):
    f = np.asarray(f, dtype=complex)
    if f.shape != (frame.dim,):
        raise DimensionError(
            f"vector of shape {f.shape} does not match frame dimension {frame.dim}"
        )
    return f


def analysis(frame, f):
    """Analysis coefficients <f_i, f> = sum_k conj(f_i[k]) f[k].

    This is the adjoint of :func:`synthesis`, so for an orthonormal basis
    it returns the ordinary expansion coefficients of ``f``.
    """
    f = _check_vector(frame, f)
    return frame.vectors.conj() @ f


def synthesis(frame, coeffs):
    """Preframe map sum_i c_i f_i."""
    c = np.asarray(coeffs, dtype=complex)
    if c.shape != (len(frame),):
        raise DimensionError(f"{c.shape} coefficients for {len(frame)} frame vectors")
    return c @ frame.vectors


def _operator_and_pinv(vectors):
    s = vectors.T @ vectors.conj()
    s = 0.5 * (s + s.conj().T)
    w, v = np.linalg.eigh(s)
    cutoff = EIG_CUTOFF_RTOL * max(float(w[-1]), 0.0)
    inv = np.zeros_like(w)
    keep = w > cutoff
    inv[keep] = 1.0 / w[keep]
    s_pinv = (v * inv) @ v.conj().T
    return s, w, s_pinv


def frame_operator(frame):
    """Frame operator of the family; records optimal bounds on the frame.

    The optimal bounds (A, B) are the smallest nonzero and the largest
    eigenvalue of S, valid on the span of the frame.
    """
    s, w, _ = _operator_and_pinv(frame.vectors)
    cutoff = EIG_CUTOFF_RTOL * max(float(w[-1]), 0.0)
    nonzero = w[w > cutoff]
    if nonzero.size:
        frame.bounds = (float(nonzero[0]), float(w[-1]))
    return FrameOperatorData(matrix=s, eigenvalues=w)


def frame_coefficients(frame, f, span_atol=SPAN_ATOL):
    """Canonical coefficients <f_i, Sinv f> of a vector in the frame span.

    Synthesizing these coefficients reproduces ``f``. Vectors outside the
    span (projection residual above ``span_atol`` relative to the vector
    norm) raise :class:`SpanError`.
    """
    f = _check_vector(frame, f)
    s, _, s_pinv = _operator_and_pinv(frame.vectors)
    g = s_pinv @ f
    residual = float(np.linalg.norm(s @ g - f))
    if residual > span_atol * max(1.0, float(np.linalg.norm(f))):
        raise SpanError(
            f"vector lies outside the frame span: residual {residual:.3e}",
            residual=residual,
        )
    return frame.vectors.conj() @ g


def projection_method(frame, f, n):
    """Finite-section coefficients over the first n frame vectors.

    Builds the sub-frame {f_1..f_n}, inverts its frame operator S_n on the
    sub-span only, and returns the coefficients <f_i, S_n^+ f>, the
    orthogonal projection P_n f of ``f`` onto the sub-span, and the error
    norm ||P_n f - f||. Growing n through nested sub-frames can only
    shrink the error.
    """
    f = _check_vector(frame, f)
    if not 1 <= n <= len(frame):
        raise RangeError(f"n must be in [1, {len(frame)}], got {n}")
    sub = frame.vectors[:n]
    s, _, s_pinv = _operator_and_pinv(sub)
    g = s_pinv @ f
    projection = s @ g
    coefficients = sub.conj() @ g
    error = float(np.linalg.norm(projection - f))
    return ProjectionResult(coefficients=coefficients, projection=projection, error=error)
