"""Representation-coefficient solvers.

Two routes to the coefficient vector alpha with y ~ X alpha:

* ridge-regularized least squares with the closed form
  alpha = (X^T X + mu I)^-1 X^T y, factorizing whichever of the Gram
  (N x N) or dual (P x P) system is smaller;
* l1-regularized least squares, minimizing
  F(alpha) = 1/2 ||y - X alpha||^2 + lam ||alpha||_1
  by proximal-gradient (ISTA) iteration with a fixed 1/L step.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .core import ConfigError, DataError, Dictionary, Sample


@dataclass(frozen=True)
class CrcConfig:
    """Ridge regularizer for the l2 closed form (on unit-norm columns)."""

    mu: float = 0.01

    def __post_init__(self):
        if not (self.mu > 0 and np.isfinite(self.mu)):
            raise ConfigError("mu must be a positive finite real")


@dataclass(frozen=True)
class SrcConfig:
    """Settings for the l1 proximal-gradient solver.

    ``lam`` <= 0 means "auto": 0.01 * ||X^T y||_inf, recomputed per query.
    """

    lam: float = 0.0
    max_iters: int = 2000
    tol: float = 1e-10

    def __post_init__(self):
        if self.max_iters < 1:
            raise ConfigError("max_iters must be >= 1")
        if not (self.tol > 0):
            raise ConfigError("tol must be positive")


@dataclass(frozen=True)
class SrcResult:
    coefficients: np.ndarray
    converged: bool
    n_iters: int
    objective: float


def _check_query(dictionary: Dictionary, query: Sample) -> np.ndarray:
    y = query.values if isinstance(query, Sample) else np.asarray(query, dtype=np.float64)
    if y.shape != (dictionary.dim,):
        raise DataError(
            f"query length {y.shape} does not match dictionary dimension {dictionary.dim}"
        )
    if not np.all(np.isfinite(y)):
        raise DataError("query contains non-finite entries")
    return y


def _refine(chol, system, rhs, x):
    # one step of iterative refinement on a Cholesky solve
    return x + cho_solve(chol, rhs - system @ x)


def solve_crc(dictionary: Dictionary, query, cfg: CrcConfig = CrcConfig(),
              gram: np.ndarray | None = None) -> np.ndarray:
    """Closed-form ridge coefficients alpha = (X^T X + mu I)^-1 X^T y.

    Uses the N x N Gram system when N <= P, otherwise the equivalent P x P
    dual system alpha = X^T (X X^T + mu I)^-1 y (Woodbury identity).  Pass
    ``gram`` to reuse a precomputed X^T X.
    """
    y = _check_query(dictionary, query)
    X = dictionary.columns
    P, N = X.shape
    if gram is not None or N <= P:
        G = dictionary.gram() if gram is None else gram
        A = G + cfg.mu * np.eye(N)
        b = X.T @ y
        chol = cho_factor(A, lower=True)
        alpha = cho_solve(chol, b)
        alpha = _refine(chol, A, b, alpha)
    else:
        A = X @ X.T + cfg.mu * np.eye(P)
        chol = cho_factor(A, lower=True)
        z = cho_solve(chol, y)
        z = _refine(chol, A, y, z)
        alpha = X.T @ z
    return alpha


def solve_crc_gram(gram_sub: np.ndarray, xty_sub: np.ndarray, mu: float) -> np.ndarray:
    """Ridge solve from a precomputed Gram submatrix and X^T y slice."""
    A = gram_sub + mu * np.eye(gram_sub.shape[0])
    chol = cho_factor(A, lower=True)
    alpha = cho_solve(chol, xty_sub)
    return _refine(chol, A, xty_sub, alpha)


def _soft_threshold(v, t):
    return np.sign(v) * np.maximum(np.abs(v) - t, 0.0)


def _spectral_norm_sq(X, iters=100, tol=1e-10):
    """Largest eigenvalue of X^T X by power iteration on the Gram operator."""
    N = X.shape[1]
    v = np.full(N, 1.0 / np.sqrt(N))
    sigma = 0.0
    for _ in range(iters):
        w = X.T @ (X @ v)
        norm = np.linalg.norm(w)
        if norm == 0.0:
            return 0.0
        v = w / norm
        new_sigma = v @ (X.T @ (X @ v))
        if abs(new_sigma - sigma) <= tol * max(1.0, new_sigma):
            sigma = new_sigma
            break
        sigma = new_sigma
    return sigma


def effective_l1_weight(dictionary: Dictionary, query, cfg: SrcConfig) -> float:
    y = _check_query(dictionary, query)
    if cfg.lam > 0:
        return cfg.lam
    return 0.01 * np.max(np.abs(dictionary.columns.T @ y))


def solve_src(dictionary: Dictionary, query, cfg: SrcConfig = SrcConfig()) -> SrcResult:
    """ISTA for F(alpha) = 1/2 ||y - X alpha||^2 + lam ||alpha||_1.

    Stops when the relative objective change drops below ``cfg.tol`` or at
    ``cfg.max_iters``; hitting the cap is reported via ``converged=False``,
    never raised.  The objective is non-increasing across iterates.
    """
    y = _check_query(dictionary, query)
    X = dictionary.columns
    lam = effective_l1_weight(dictionary, query, cfg)
    sigma = _spectral_norm_sq(X)
    alpha = np.zeros(X.shape[1])
    if sigma == 0.0 or not np.any(y):
        # X == 0 or y == 0: alpha = 0 is the minimizer
        resid = y - X @ alpha
        return SrcResult(alpha, True, 0, 0.5 * resid @ resid)
    # tiny inflation keeps the step at or below 1/L despite the power
    # iteration converging to sigma from below
    step = 1.0 / (sigma * (1.0 + 1e-9))

    def objective(a, r):
        return 0.5 * (r @ r) + lam * np.sum(np.abs(a))

    resid = y - X @ alpha
    obj = objective(alpha, resid)
    converged = False
    n_iters = 0
    for n_iters in range(1, cfg.max_iters + 1):
        grad = -(X.T @ resid)
        alpha = _soft_threshold(alpha - step * grad, step * lam)
        resid = y - X @ alpha
        new_obj = objective(alpha, resid)
        if abs(obj - new_obj) <= cfg.tol * max(1.0, abs(obj)):
            obj = new_obj
            converged = True
            break
        obj = new_obj
    return SrcResult(alpha, converged, n_iters, obj)
