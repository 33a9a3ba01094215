"""Complex linear subspace learning on mapped feature vectors.

Finds the d orthonormal complex directions that minimize the squared
Frobenius reconstruction error ``||X - B B^H X||_F^2`` of the (uncentered)
feature matrix X, i.e. the top-d eigenvectors of ``X X^H``.  Since the
feature dimension K is much larger than the sample count N in practice,
the eigenproblem is solved through the N x N Gram matrix ``X^H X`` and the
eigenvectors are recovered by back-multiplication; the K x K matrix is
never formed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DataError, NumericError

SUBSPACE_FORMAT = "orientrec-subspace"
SUBSPACE_VERSION = 1

# eigenvalues below this fraction of the total energy count as rank loss
_RANK_RTOL = 1e-12


@dataclass
class SubspaceModel:
    """Orthonormal complex basis with its eigenvalue spectrum.

    ``basis`` is K x d with orthonormal columns ordered by descending
    eigenvalue of ``X X^H``; ``spectrum`` holds those eigenvalues.  When
    the requested d exceeds the numerical rank of the training matrix,
    the trailing columns are an arbitrary (but deterministic) orthonormal
    completion and ``effective_rank`` records how many directions carry
    energy.
    """

    basis: np.ndarray
    spectrum: np.ndarray
    image_shape: tuple[int, int] | None = None
    feature_order: str | None = None
    effective_rank: int | None = None

    @property
    def feature_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def to_dict(self) -> dict:
        if self.image_shape is None or self.feature_order is None:
            raise DataError("subspace model lacks image shape / feature order; cannot serialize")
        return {
            "rows": int(self.image_shape[0]),
            "cols": int(self.image_shape[1]),
            "feature_order": self.feature_order,
            "dim": int(self.dim),
            "effective_rank": int(self.effective_rank if self.effective_rank is not None else self.dim),
            "basis_real": self.basis.real.tolist(),
            "basis_imag": self.basis.imag.tolist(),
            "spectrum": self.spectrum.tolist(),
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "SubspaceModel":
        try:
            basis = np.asarray(payload["basis_real"], dtype=np.float64) + 1j * np.asarray(
                payload["basis_imag"], dtype=np.float64
            )
            model = cls(
                basis=basis,
                spectrum=np.asarray(payload["spectrum"], dtype=np.float64),
                image_shape=(int(payload["rows"]), int(payload["cols"])),
                feature_order=str(payload["feature_order"]),
                effective_rank=int(payload["effective_rank"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise DataError(f"malformed subspace payload: {exc}") from exc
        if basis.ndim != 2 or int(payload["dim"]) != basis.shape[1]:
            raise DataError("malformed subspace payload: basis shape disagrees with dim")
        return model


def _orthonormal_completion(basis: np.ndarray, count: int) -> np.ndarray:
    """Deterministic unit vectors orthogonal to the given columns (and to
    each other), built from canonical basis vectors."""
    feature_dim = basis.shape[0]
    cols = [basis[:, k] for k in range(basis.shape[1])]
    added: list[np.ndarray] = []
    for i in range(feature_dim):
        if len(added) == count:
            break
        vec = np.zeros(feature_dim, dtype=np.complex128)
        vec[i] = 1.0
        for _ in range(2):  # two Gram-Schmidt sweeps for stability
            for col in cols:
                vec = vec - col * np.vdot(col, vec)
        norm = np.linalg.norm(vec)
        if norm > 0.5:
            vec = vec / norm
            cols.append(vec)
            added.append(vec)
    if len(added) < count:
        raise NumericError("could not complete an orthonormal basis")
    return np.column_stack(added)


def fit_complex_pca(
    features: np.ndarray,
    dim: int,
    image_shape: tuple[int, int] | None = None,
    feature_order: str | None = None,
) -> SubspaceModel:
    """Top-``dim`` eigenvectors of ``X X^H`` for a K x N feature matrix X.

    No mean is subtracted.  The decomposition runs on the N x N Gram
    matrix; recovered directions are re-orthonormalized with a QR polish
    whose phases are fixed so the result is deterministic.
    """
    X = np.asarray(features, dtype=np.complex128)
    if X.ndim == 1:
        X = X[:, None]
    if X.ndim != 2:
        raise NumericError(f"expected a K x N feature matrix, got shape {X.shape}")
    if not np.all(np.isfinite(X.real)) or not np.all(np.isfinite(X.imag)):
        raise NumericError("feature matrix contains non-finite values")
    feature_dim, count = X.shape
    if not 1 <= dim <= min(feature_dim, count):
        raise NumericError(
            f"d out of range: d={dim} must satisfy 1 <= d <= min(K={feature_dim}, N={count})"
        )

    gram = X.conj().T @ X
    gram = 0.5 * (gram + gram.conj().T)
    evals, evecs = np.linalg.eigh(gram)  # ascending
    order = np.argsort(-evals, kind="stable")
    evals = np.maximum(evals[order], 0.0)
    evecs = evecs[:, order]

    cutoff = _RANK_RTOL * float(np.sum(evals))
    effective_rank = int(np.sum(evals > cutoff))

    kept = min(dim, effective_rank)
    columns = []
    if kept > 0:
        columns.append((X @ evecs[:, :kept]) / np.sqrt(evals[:kept]))
    if dim > kept:
        partial = columns[0] if columns else np.zeros((feature_dim, 0), dtype=np.complex128)
        columns.append(_orthonormal_completion(partial, dim - kept))
    basis = np.column_stack(columns) if len(columns) > 1 else columns[0]

    # QR polish: restores orthonormality lost to roundoff without moving
    # any leading subspace; the phase fix keeps columns aligned with the
    # back-multiplied directions.
    q, r = np.linalg.qr(basis)
    diag = np.diagonal(r).copy()
    diag[np.abs(diag) == 0.0] = 1.0
    basis = q * (diag / np.abs(diag))

    spectrum = evals[:dim].copy()
    return SubspaceModel(
        basis=basis,
        spectrum=spectrum,
        image_shape=tuple(image_shape) if image_shape is not None else None,
        feature_order=feature_order,
        effective_rank=effective_rank,
    )


def project(model: SubspaceModel, features: np.ndarray) -> np.ndarray:
    """Embed one feature vector (K,) or a feature matrix (K, N) as
    ``basis^H @ features``."""
    values = np.asarray(features, dtype=np.complex128)
    if values.shape[0] != model.feature_dim:
        raise NumericError(
            f"feature length {values.shape[0]} does not match model dimension {model.feature_dim}"
        )
    return model.basis.conj().T @ values


def reconstruction_error(model: SubspaceModel, features: np.ndarray) -> float:
    """Squared Frobenius norm of ``X - B B^H X``; equals the sum of the
    discarded eigenvalues when X is the training matrix."""
    X = np.asarray(features, dtype=np.complex128)
    if X.ndim == 1:
        X = X[:, None]
    residual = X - model.basis @ project(model, X)
    return float(np.linalg.norm(residual, "fro") ** 2)


def save_subspace(model: SubspaceModel, path: str | Path) -> None:
    payload = {"format": SUBSPACE_FORMAT, "version": SUBSPACE_VERSION}
    payload.update(model.to_dict())
    Path(path).write_text(json.dumps(payload), encoding="utf-8")


def load_subspace(path: str | Path) -> SubspaceModel:
    path = Path(path)
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise DataError(f"model not found: {path}") from None
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"could not parse model file {path}: {exc}") from exc
    if not isinstance(payload, dict) or payload.get("format") != SUBSPACE_FORMAT:
        raise DataError(f"{path}: not a subspace model file")
    if payload.get("version") != SUBSPACE_VERSION:
        raise DataError(
            f"{path}: unsupported model version {payload.get('version')!r}"
            f" (expected {SUBSPACE_VERSION})"
        )
    return SubspaceModel.from_dict(payload)
