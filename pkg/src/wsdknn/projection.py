"""Exact t-SNE projection of a word's vectors into 2D with sense labels.

Plain O(n^2) t-SNE: Gaussian high-dimensional affinities calibrated per
point by bisection to a target perplexity, Student-t (1 df) kernel in
2D, gradient descent with momentum and early exaggeration.  Inputs at
the intended scale are a few hundred points per word.
"""
from __future__ import annotations

import io
import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

_EPS = 1e-12


@dataclass
class ProjectionConfig:
    perplexity: float = 30.0
    iterations: int = 1000
    learning_rate: float = 200.0
    momentum: float = 0.5
    final_momentum: float = 0.8
    momentum_switch_iter: int = 250
    early_exaggeration_factor: float = 12.0
    early_exaggeration_iters: int = 250
    seed: int = 42
    normalize: bool = False  # length-normalize inputs first

    def validate(self) -> None:
        if self.perplexity <= 1:
            raise ValueError("perplexity must be > 1")
        if self.iterations < 1 or self.learning_rate <= 0:
            raise ValueError("invalid optimizer settings")
        if not (0 <= self.momentum < 1 and 0 <= self.final_momentum < 1):
            raise ValueError("momentum must be in [0, 1)")
        if self.early_exaggeration_factor < 1 or self.early_exaggeration_iters < 0:
            raise ValueError("invalid early exaggeration settings")


@dataclass
class Coords2D:
    xy: np.ndarray  # (n, 2)
    labels: list[str]
    provenance: list[str]

    @property
    def points(self) -> list[tuple[float, float, str, str]]:
        return [(float(x), float(y), l, p) for (x, y), l, p in
                zip(self.xy, self.labels, self.provenance)]


def _sq_distances(X: np.ndarray) -> np.ndarray:
    sq = np.sum(X * X, axis=1)
    D = sq[:, None] + sq[None, :] - 2.0 * (X @ X.T)
    np.fill_diagonal(D, 0.0)
    return np.maximum(D, 0.0)


def _row_affinities(d_row: np.ndarray, beta: float) -> tuple[np.ndarray, float]:
    """Conditional probabilities and perplexity for one row at bandwidth beta."""
    p = np.exp(-beta * (d_row - d_row.min()))
    s = p.sum()
    p /= s
    h = np.log(s) + beta * np.sum(p * (d_row - d_row.min()))
    return p, float(np.exp(h))


def pairwise_affinities(X: np.ndarray, perplexity: float,
                        tol: float = 1e-5, max_steps: int = 64) -> np.ndarray:
    """Symmetric, normalized t-SNE affinity matrix P.

    Per-row bandwidths are found by bisection so each conditional
    distribution's perplexity hits the target within tol.  Duplicate
    points simply share conditional mass.  A row that fails to converge
    in max_steps uses the last bracket midpoint and emits a warning.
    """
    X = np.asarray(X, dtype=np.float64)
    n = len(X)
    if n < 3:
        raise ValueError("need at least 3 points")
    if not perplexity < n:
        raise ValueError(f"perplexity {perplexity} must be < point count {n}")
    D = _sq_distances(X)
    mask = ~np.eye(n, dtype=bool)
    P = np.zeros((n, n))
    for i in range(n):
        d = D[i][mask[i]]
        lo, hi = 0.0, np.inf
        beta = 1.0
        p, perp = _row_affinities(d, beta)
        for _ in range(max_steps):
            if abs(perp - perplexity) <= tol:
                break
            if perp > perplexity:
                lo = beta
                beta = beta * 2.0 if hi == np.inf else (lo + hi) / 2.0
            else:
                hi = beta
                beta = (lo + hi) / 2.0
            p, perp = _row_affinities(d, beta)
        else:
            warnings.warn(f"bandwidth search did not converge for point {i} "
                          f"(perplexity {perp:.4f} vs target {perplexity})")
        P[i][mask[i]] = p
    P = (P + P.T) / (2.0 * n)
    return P / P.sum()


def _student_t_kernel(Y: np.ndarray) -> np.ndarray:
    num = 1.0 / (1.0 + _sq_distances(Y))
    np.fill_diagonal(num, 0.0)
    return num


def kl_gradient(P: np.ndarray, Y: np.ndarray) -> tuple[float, np.ndarray]:
    """KL(P || Q) and its gradient w.r.t. the 2D coordinates Y."""
    num = _student_t_kernel(Y)
    Q = num / num.sum()
    kl = float(np.sum(P[P > 0] * np.log(P[P > 0] / np.maximum(Q[P > 0], _EPS))))
    W = (P - Q) * num
    grad = 4.0 * (np.diag(W.sum(axis=1)) - W) @ Y
    return kl, grad


def tsne(X: Sequence, labels: Sequence[str], provenance: Sequence[str],
         config: Optional[ProjectionConfig] = None,
         return_trace: bool = False):
    """Project vectors to 2D; deterministic for a fixed config seed.

    Returns Coords2D, or (Coords2D, trace) with the per-iteration KL
    objective when return_trace is set.
    """
    config = config or ProjectionConfig()
    config.validate()
    X = np.asarray(X, dtype=np.float64)
    n = len(X)
    if n < 3:
        raise ValueError("need at least 3 points")
    if not (len(labels) == len(provenance) == n):
        raise ValueError("labels/provenance length mismatch")
    if config.normalize:
        norms = np.linalg.norm(X, axis=1, keepdims=True)
        X = X / np.maximum(norms, _EPS)

    perplexity = min(config.perplexity, (n - 1) / 3.0)
    P = pairwise_affinities(X, perplexity)

    rng = np.random.default_rng(config.seed)
    Y = rng.normal(0.0, 1e-4, size=(n, 2))
    velocity = np.zeros_like(Y)
    # adaptive per-coordinate gains, as in reference t-SNE optimizers
    gains = np.ones_like(Y)
    trace = np.empty(config.iterations)
    for it in range(config.iterations):
        exaggerate = it < config.early_exaggeration_iters
        P_eff = P * config.early_exaggeration_factor if exaggerate else P
        kl, grad = kl_gradient(P_eff, Y)
        trace[it] = kl
        m = (config.momentum if it < config.momentum_switch_iter
             else config.final_momentum)
        same_sign = np.sign(grad) == np.sign(velocity)
        gains = np.where(same_sign, gains * 0.8, gains + 0.2)
        np.clip(gains, 0.01, None, out=gains)
        velocity = m * velocity - config.learning_rate * gains * grad
        Y = Y + velocity

    coords = Coords2D(xy=Y, labels=list(labels), provenance=list(provenance))
    return (coords, trace) if return_trace else coords


def export_plot_data(coords: Coords2D, min_label_frequency: int = 2) -> bytes:
    """CSV (x,y,sense,provenance); senses rarer than the threshold dropped."""
    counts: dict[str, int] = {}
    for label in coords.labels:
        counts[label] = counts.get(label, 0) + 1
    buf = io.StringIO()
    buf.write("x,y,sense,provenance\n")
    for x, y, label, prov in coords.points:
        if counts[label] < min_label_frequency:
            continue
        buf.write(f"{x:.17g},{y:.17g},{label},{prov}\n")
    return buf.getvalue().encode("utf-8")


def export_trace(trace: np.ndarray) -> bytes:
    buf = io.StringIO()
    buf.write("iteration,kl\n")
    for i, kl in enumerate(trace):
        buf.write(f"{i},{kl:.17g}\n")
    return buf.getvalue().encode("utf-8")
