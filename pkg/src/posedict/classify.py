"""Per-class reconstruction errors, labeling and iterative class elimination.

Classification labels a query by the class whose columns, weighted by the
matching coefficient entries, reconstruct it with the smallest l2 error.
The elimination scheme repeatedly drops the worst-reconstructing class and
re-solves on the shrunken dictionary before the final decision.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import ClassReport, ConfigError, DataError, Dictionary, Sample
from .solvers import CrcConfig, SrcConfig, solve_crc, solve_crc_gram, solve_src


@dataclass(frozen=True)
class EliminationConfig:
    """Fraction of classes to remove before the final decision, plus solver."""

    proportion: float = 0.0
    solver: CrcConfig | SrcConfig = field(default_factory=CrcConfig)

    def __post_init__(self):
        if not (0.0 <= self.proportion < 1.0):
            raise ConfigError("proportion must lie in [0, 1)")


@dataclass(frozen=True)
class EliminationTrace:
    rounds: tuple  # (removed-class-id, error at removal) pairs
    surviving_classes: tuple
    final_report: ClassReport


def _solve(dictionary: Dictionary, query, solver) -> np.ndarray:
    if isinstance(solver, CrcConfig):
        return solve_crc(dictionary, query, solver)
    if isinstance(solver, SrcConfig):
        return solve_src(dictionary, query, solver).coefficients
    raise ConfigError(f"unknown solver config: {solver!r}")


def class_reconstructions(dictionary: Dictionary, alpha: np.ndarray):
    """Per-class partial reconstructions c_k = sum_m alpha_{k,m} x_{k,m}."""
    alpha = np.asarray(alpha, dtype=np.float64)
    if alpha.shape != (dictionary.n_samples,):
        raise DataError("coefficient vector is not aligned with the dictionary")
    out = []
    for cid in dictionary.classes:
        idx = dictionary.class_index[cid]
        out.append((cid, dictionary.columns[:, idx] @ alpha[idx]))
    return out


def _report(dictionary: Dictionary, y: np.ndarray, alpha: np.ndarray) -> ClassReport:
    per_class = []
    best = None
    for cid, recon in class_reconstructions(dictionary, alpha):
        err = float(np.linalg.norm(y - recon))
        per_class.append((cid, recon, err))
        if best is None or err < best[1]:
            best = (cid, err)  # ties keep the lexicographically first class
    return ClassReport(tuple(per_class), best[0])


def classify_query(dictionary: Dictionary, query, solver=None) -> ClassReport:
    """Label a query by minimal per-class reconstruction error."""
    if solver is None:
        solver = CrcConfig()
    y = query.values if isinstance(query, Sample) else np.asarray(query, dtype=np.float64)
    alpha = _solve(dictionary, query, solver)
    return _report(dictionary, y, alpha)


def elimination_rounds(proportion: float, n_classes: int) -> int:
    return math.floor(proportion * n_classes)


def classify_with_elimination(dictionary: Dictionary, query,
                              cfg: EliminationConfig = EliminationConfig(),
                              rounds: int | None = None) -> EliminationTrace:
    """Classify after iteratively dropping the worst-reconstructing classes.

    Runs ``rounds`` (default ``floor(proportion * K)``) elimination rounds;
    each round re-solves on the surviving columns and removes every column
    of the single class with the largest reconstruction error (ties broken
    toward the lexicographically last class id).  With zero rounds this
    reduces exactly to ``classify_query``.
    """
    initial = dictionary.classes
    K = len(initial)
    if K < 2:
        raise ConfigError("elimination needs at least 2 classes")
    L = elimination_rounds(cfg.proportion, K) if rounds is None else rounds
    if not (0 <= L <= K - 1):
        raise ConfigError(f"round count {L} must lie in [0, {K - 1}]")
    y = query.values if isinstance(query, Sample) else np.asarray(query, dtype=np.float64)
    if y.shape != (dictionary.dim,):
        raise DataError("query length does not match dictionary dimension")

    surviving = list(initial)
    removed = []
    use_gram = isinstance(cfg.solver, CrcConfig)
    if use_gram:
        gram = dictionary.gram()
        xty = dictionary.columns.T @ y
    for _ in range(L):
        if use_gram:
            active = sorted(j for c in surviving for j in dictionary.class_index[c])
            alpha_active = solve_crc_gram(
                gram[np.ix_(active, active)], xty[active], cfg.solver.mu
            )
            pos = {j: i for i, j in enumerate(active)}
            worst = None
            for cid in surviving:
                idx = dictionary.class_index[cid]
                local = [pos[j] for j in idx]
                recon = dictionary.columns[:, idx] @ alpha_active[local]
                err = float(np.linalg.norm(y - recon))
                # >= keeps the lexicographically last class among ties
                if worst is None or err >= worst[1]:
                    worst = (cid, err)
        else:
            current = dictionary.restricted(surviving)
            alpha = _solve(current, query, cfg.solver)
            worst = None
            for cid, recon in class_reconstructions(current, alpha):
                err = float(np.linalg.norm(y - recon))
                if worst is None or err >= worst[1]:
                    worst = (cid, err)
        removed.append(worst)
        surviving.remove(worst[0])

    final_dict = dictionary.restricted(surviving)
    final_report = classify_query(final_dict, query, cfg.solver)
    return EliminationTrace(tuple(removed), tuple(surviving), final_report)
