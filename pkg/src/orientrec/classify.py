"""Ridge-coding (collaborative representation) and nearest-neighbor
classification over stacked real/imaginary embeddings.

A complex embedding of dimension d becomes a real vector of length 2d by
stacking its real parts over its imaginary parts; the stacking is an
isometry, so Euclidean geometry is preserved.  The ridge coder solves

    min_a ||y - D a||^2 + lam * ||a||^2

in closed form and scores each class j by the regularized residual
``||y - D_j a_j|| / ||a_j||``: reconstruction error discounted by how much
coefficient mass the class received.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import NumericError


@dataclass
class RealDictionary:
    """Real 2d x N dictionary with one column per training sample.

    ``classes`` is the sorted label roster; ``class_indices`` maps each
    label to the column positions of its samples.
    """

    matrix: np.ndarray
    labels: list[str]
    classes: list[str] = field(init=False)
    class_indices: dict[str, np.ndarray] = field(init=False)

    def __post_init__(self) -> None:
        self.matrix = np.asarray(self.matrix, dtype=np.float64)
        if self.matrix.ndim != 2:
            raise NumericError(f"dictionary must be 2-D, got shape {self.matrix.shape}")
        if self.matrix.shape[1] != len(self.labels):
            raise NumericError(
                f"{self.matrix.shape[1]} dictionary columns but {len(self.labels)} labels"
            )
        if not self.labels:
            raise NumericError("dictionary needs at least one column")
        self.labels = [str(lbl) for lbl in self.labels]
        self.classes = sorted(set(self.labels))
        arr = np.asarray(self.labels)
        self.class_indices = {cls: np.flatnonzero(arr == cls) for cls in self.classes}

    @property
    def n_samples(self) -> int:
        return self.matrix.shape[1]


@dataclass
class CrcCoder:
    """Ridge coder with the solve operator ``(D^T D + lam I)^-1 D^T``
    cached as an explicit N x 2d matrix."""

    dictionary: RealDictionary
    lam: float
    solve_op: np.ndarray


def stack_real_imag(values: np.ndarray, labels: list[str] | None = None):
    """Stack real parts over imaginary parts.

    A d-vector becomes a 2d query vector; a d x N matrix becomes a
    2d x N matrix, returned as a RealDictionary when labels are given.
    """
    values = np.asarray(values, dtype=np.complex128)
    stacked = np.concatenate([values.real, values.imag], axis=0)
    if labels is None:
        return stacked
    if stacked.ndim != 2:
        raise NumericError("labels were given but the embeddings are not a d x N matrix")
    return RealDictionary(stacked, list(labels))


def crc_fit(dictionary: RealDictionary, lam: float) -> CrcCoder:
    """Precompute the ridge solve operator via Cholesky of the SPD system."""
    if not lam > 0:
        raise NumericError(f"lambda must be positive, got {lam}")
    D = dictionary.matrix
    if not np.all(np.isfinite(D)):
        raise NumericError("dictionary contains non-finite values")
    gram = D.T @ D + lam * np.eye(dictionary.n_samples)
    try:
        factor = scipy.linalg.cho_factor(gram)
    except scipy.linalg.LinAlgError as exc:
        raise NumericError(f"ridge system is not positive definite: {exc}") from exc
    solve_op = scipy.linalg.cho_solve(factor, D.T)
    return CrcCoder(dictionary=dictionary, lam=float(lam), solve_op=solve_op)


def _check_query(coder_matrix: np.ndarray, query: np.ndarray) -> np.ndarray:
    query = np.asarray(query, dtype=np.float64)
    if query.shape != (coder_matrix.shape[0],):
        raise NumericError(
            f"query length {query.shape} does not match dictionary height {coder_matrix.shape[0]}"
        )
    return query


def crc_code(coder: CrcCoder, query: np.ndarray) -> np.ndarray:
    """Closed-form ridge coefficients of the query over the whole dictionary."""
    query = _check_query(coder.dictionary.matrix, query)
    return coder.solve_op @ query


def crc_classify(coder: CrcCoder, query: np.ndarray) -> tuple[str, np.ndarray]:
    """Class with the smallest regularized residual.

    Returns the winning label and the per-class residuals aligned with
    the sorted class roster.  A class whose coefficient slice is exactly
    zero gets residual +inf; ties go to the earlier class in the roster.
    """
    query = _check_query(coder.dictionary.matrix, query)
    alpha = coder.solve_op @ query
    dictionary = coder.dictionary
    residuals = np.empty(len(dictionary.classes))
    for j, cls in enumerate(dictionary.classes):
        idx = dictionary.class_indices[cls]
        coef = alpha[idx]
        energy = np.linalg.norm(coef)
        if energy == 0.0:
            residuals[j] = np.inf
        else:
            residuals[j] = np.linalg.norm(query - dictionary.matrix[:, idx] @ coef) / energy
    winner = dictionary.classes[int(np.argmin(residuals))]
    return winner, residuals


def nnc_distances(dictionary: RealDictionary, query: np.ndarray) -> np.ndarray:
    """Per-class minimum Euclidean distance between the query and the
    class's dictionary columns, aligned with the sorted class roster."""
    query = _check_query(dictionary.matrix, query)
    dists = np.linalg.norm(dictionary.matrix - query[:, None], axis=0)
    return np.array([dists[dictionary.class_indices[cls]].min() for cls in dictionary.classes])


def nnc_classify(dictionary: RealDictionary, query: np.ndarray) -> str:
    """Label of the nearest dictionary column; ties go to the earliest column."""
    query = _check_query(dictionary.matrix, query)
    dists = np.linalg.norm(dictionary.matrix - query[:, None], axis=0)
    return dictionary.labels[int(np.argmin(dists))]
