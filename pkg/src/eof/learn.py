"""Regularized linear models over sparse or dense feature matrices.

Both solvers work on the M x M Gram accumulated from the (typically sparse)
feature matrix, so training is linear in nnz(F).  Ridge uses the normal
equations; logistic uses damped Newton.  The regularizer enters as
lambda * N inside the normal equations so that lambda is comparable across
sample sizes; the default follows lambda = N^{-1/2}.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np
import scipy.sparse as sp
from scipy.special import expit

from .errors import ConvergenceError, DimError, InvalidData

REGRESSION = "regression"
CLASSIFICATION = "classification"


@dataclass
class Model:
    weights: np.ndarray
    feature_map: Any = None
    lam: float = 0.0
    task: str = REGRESSION
    train_seconds: float = 0.0
    nnz_F: int = 0


def default_lambda(N: int) -> float:
    """The N^{-1/2} regularization schedule."""
    return float(N) ** -0.5


def _check_features(F, y):
    y = np.asarray(y, dtype=float).ravel()
    if not np.all(np.isfinite(y)):
        raise InvalidData("targets contain non-finite values")
    if F.shape[0] != len(y):
        raise DimError(f"{F.shape[0]} rows but {len(y)} targets")
    return y


def _gram(F):
    G = F.T @ F
    return G.toarray() if sp.issparse(G) else np.asarray(G)


def ridge_fit(F, y, lam: float, feature_map=None) -> Model:
    """Solve (F^T F + lam N I) w = F^T y on the accumulated Gram."""
    if not lam > 0:
        raise InvalidData("lam must be positive")
    y = _check_features(F, y)
    N, M = F.shape
    t0 = time.perf_counter()
    A = _gram(F) + lam * N * np.eye(M)
    b = np.asarray(F.T @ y).ravel()
    w = np.linalg.solve(A, b)
    dt = time.perf_counter() - t0
    nnz = F.nnz if sp.issparse(F) else int(np.count_nonzero(F))
    return Model(w, feature_map, lam, REGRESSION, dt, nnz)


def logistic_fit(F, y, lam: float, max_iter: int = 100, tol: float = 1e-8,
                 feature_map=None) -> Model:
    """L2-regularized logistic regression on labels in {-1, +1}.

    Minimizes (1/N) sum log(1 + exp(-y_i F_i w)) + lam ||w||^2 by damped
    Newton; raises ``ConvergenceError`` (with the last gradient norm) if the
    gradient norm is still above ``tol`` after ``max_iter`` iterations.
    """
    if not lam > 0:
        raise InvalidData("lam must be positive")
    y = _check_features(F, y)
    if not np.all(np.isin(y, (-1.0, 1.0))):
        raise InvalidData("labels must be -1 or +1")
    N, M = F.shape
    Fc = F.tocsr() if sp.issparse(F) else np.asarray(F, dtype=float)
    t0 = time.perf_counter()
    w = np.zeros(M)

    def margins(wv):
        return y * np.asarray(Fc @ wv).ravel()

    def objective(wv):
        m = margins(wv)
        return float(np.mean(np.logaddexp(0.0, -m)) + lam * wv @ wv)

    obj = objective(w)
    for _ in range(max_iter):
        m = margins(w)
        s = expit(-m)                          # sigma(-y F w)
        grad = -np.asarray(Fc.T @ (y * s)).ravel() / N + 2.0 * lam * w
        gnorm = float(np.linalg.norm(grad))
        if gnorm < tol:
            break
        d = s * (1.0 - s)
        if sp.issparse(Fc):
            H = (Fc.T @ Fc.multiply(d[:, None])).toarray() / N
        else:
            H = Fc.T @ (Fc * d[:, None]) / N
        H += 2.0 * lam * np.eye(M)
        step = np.linalg.solve(H, grad)
        # backtracking keeps the objective monotone
        eta = 1.0
        while eta > 1e-12:
            cand = w - eta * step
            cand_obj = objective(cand)
            if cand_obj <= obj - 1e-4 * eta * float(grad @ step):
                w, obj = cand, cand_obj
                break
            eta *= 0.5
        else:
            break
    m = margins(w)
    s = expit(-m)
    grad = -np.asarray(Fc.T @ (y * s)).ravel() / N + 2.0 * lam * w
    gnorm = float(np.linalg.norm(grad))
    if gnorm >= tol:
        raise ConvergenceError(
            f"logistic solver stopped with gradient norm {gnorm:.3e}", gnorm)
    dt = time.perf_counter() - t0
    nnz = F.nnz if sp.issparse(F) else int(np.count_nonzero(F))
    return Model(w, feature_map, lam, CLASSIFICATION, dt, nnz)


MODEL_FORMAT = "eof-model-v1"


def save_model(model: Model, path, metadata: Optional[dict] = None) -> None:
    """Write a model as version-tagged flat text: header lines, then weights."""
    meta = dict(metadata or {})
    meta.setdefault("task", model.task)
    meta.setdefault("lambda", repr(model.lam))
    meta.setdefault("nnz_F", model.nnz_F)
    with open(path, "w") as fh:
        fh.write(f"# {MODEL_FORMAT}\n")
        for key in sorted(meta):
            fh.write(f"# {key}={meta[key]}\n")
        for w in model.weights:
            fh.write(f"{float(w)!r}\n")


def load_model(path) -> Model:
    """Read a model written by ``save_model``."""
    meta = {}
    weights = []
    with open(path) as fh:
        first = fh.readline().strip()
        if first != f"# {MODEL_FORMAT}":
            raise InvalidData(f"not an {MODEL_FORMAT} file: {path}")
        for line in fh:
            line = line.strip()
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition("=")
                meta[key] = value
            elif line:
                weights.append(float(line))
    return Model(np.asarray(weights),
                 feature_map=meta,
                 lam=float(meta.get("lambda", "0") or 0.0),
                 task=meta.get("task", REGRESSION),
                 nnz_F=int(meta.get("nnz_F", "0") or 0))


def predict(model: Model, Z) -> np.ndarray:
    """Raw linear predictions Z @ w."""
    if Z.shape[1] != len(model.weights):
        raise DimError(f"{Z.shape[1]} columns but {len(model.weights)} weights")
    return np.asarray(Z @ model.weights).ravel()


def test_error(model: Model, Z, y) -> float:
    """MSE for regression; misclassification rate (sign(0) -> +1) otherwise."""
    y = np.asarray(y, dtype=float).ravel()
    pred = predict(model, Z)
    if len(pred) != len(y):
        raise DimError("prediction / target length mismatch")
    if model.task == REGRESSION:
        return float(np.mean((pred - y) ** 2))
    labels = np.where(pred >= 0.0, 1.0, -1.0)
    return float(np.mean(labels != y))
