"""Reconstruction report shared by the tomography front ends."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .states import fidelity, trace_distance


@dataclass
class TomographyReport:
    """Outcome of one reconstruction: the data used, the matrix, and its
    basic quality diagnostics. Fidelity and trace distance are filled in
    only when a reference state was available."""

    probabilities: np.ndarray
    matrix: np.ndarray
    trace: float
    min_eigenvalue: float
    condition_number: Optional[float] = None
    fidelity: Optional[float] = None
    trace_distance: Optional[float] = None


def build_report(probabilities, matrix, condition_number=None, reference=None):
    herm = 0.5 * (matrix + matrix.conj().T)
    w = np.linalg.eigvalsh(herm)
    fid = dist = None
    if reference is not None:
        fid = fidelity(herm, reference)
        dist = trace_distance(herm, reference)
    return TomographyReport(
        probabilities=np.asarray(probabilities, dtype=float),
        matrix=matrix,
        trace=float(np.trace(matrix).real),
        min_eigenvalue=float(w[0]),
        condition_number=condition_number,
        fidelity=fid,
        trace_distance=dist,
    )
