"""Soft-margin kernel SVM trained on a precomputed Gram matrix.

The dual

    maximise   sum_i a_i - 1/2 sum_ij a_i a_j y_i y_j K_ij
    subject to sum_i a_i y_i = 0,  0 <= a_i <= C

is solved with Platt-style sequential minimal optimisation: an outer loop
alternates full sweeps (in a seeded random order) with sweeps over the
unbounded multipliers, the second multiplier of each pair is picked by
maximal |E_i - E_j|, and every pair step is the closed-form two-variable
optimum clipped to the box. Training stops once ``max_passes`` consecutive
full sweeps change nothing.
"""

from dataclasses import dataclass, field
import json
import logging
import warnings

import numpy as np

from .errors import ValidationError

log = logging.getLogger(__name__)

HARD_SWEEP_CAP = 10_000


@dataclass
class SvmModel:
    alphas: np.ndarray
    bias: float
    labels: np.ndarray
    C: float
    support_epsilon: float = 1e-8
    converged: bool = True
    sweeps: int = 0
    kernel: dict = field(default=None)

    @property
    def support_indices(self):
        return np.flatnonzero(self.alphas > self.support_epsilon)

    def dual_objective(self, gram):
        return dual_objective(self.alphas, self.labels, gram)

    def to_json(self):
        doc = {
            "alphas": [float(a) for a in self.alphas],
            "bias": float(self.bias),
            "labels": [int(y) for y in self.labels],
            "C": float(self.C),
            "support_epsilon": self.support_epsilon,
            "converged": self.converged,
            "sweeps": self.sweeps,
            "kernel": self.kernel,
        }
        return json.dumps(doc, sort_keys=True)

    @classmethod
    def from_json(cls, text):
        doc = json.loads(text)
        return cls(
            alphas=np.array(doc["alphas"], dtype=float),
            bias=float(doc["bias"]),
            labels=np.array(doc["labels"], dtype=int),
            C=float(doc["C"]),
            support_epsilon=float(doc["support_epsilon"]),
            converged=bool(doc["converged"]),
            sweeps=int(doc["sweeps"]),
            kernel=doc.get("kernel"),
        )


def dual_objective(alphas, labels, gram):
    ay = np.asarray(alphas, dtype=float) * np.asarray(labels, dtype=float)
    return float(np.sum(alphas) - 0.5 * ay @ np.asarray(gram, dtype=float) @ ay)


def _validate(gram, labels):
    K = np.asarray(gram, dtype=float)
    y = np.asarray(labels)
    if K.ndim != 2 or K.shape[0] != K.shape[1]:
        raise ValidationError(f"Gram matrix must be square, got shape {K.shape}")
    if y.ndim != 1 or y.shape[0] != K.shape[0]:
        raise ValidationError("one label per Gram row is required")
    if not np.all(np.isin(y, (-1, 1))):
        raise ValidationError("labels must be -1 or +1")
    if np.unique(y).size < 2:
        raise ValidationError("training needs both classes")
    if not np.array_equal(K, K.T):
        raise ValidationError("Gram matrix is not symmetric")
    if not np.all(np.isfinite(K)):
        raise ValidationError("Gram matrix has non-finite entries")
    return K, y.astype(float)


class _Smo:
    def __init__(self, K, y, C, tol, seed):
        self.K, self.y, self.C, self.tol = K, y, C, tol
        self.n = len(y)
        self.alpha = np.zeros(self.n)
        self.b = 0.0
        # decision values without bias; E_i = g_i + b - y_i
        self.g = np.zeros(self.n)
        self.rng = np.random.default_rng(seed)
        self.eps = 1e-12

    def error(self, i):
        return self.g[i] + self.b - self.y[i]

    def take_step(self, i1, i2):
        if i1 == i2:
            return False
        K, y, C = self.K, self.y, self.C
        a1, a2 = self.alpha[i1], self.alpha[i2]
        y1, y2 = y[i1], y[i2]
        E1, E2 = self.error(i1), self.error(i2)
        s = y1 * y2
        if s < 0:
            L, H = max(0.0, a2 - a1), min(C, C + a2 - a1)
        else:
            L, H = max(0.0, a1 + a2 - C), min(C, a1 + a2)
        if H - L <= self.eps:
            return False
        k11, k12, k22 = K[i1, i1], K[i1, i2], K[i2, i2]
        eta = k11 + k22 - 2.0 * k12
        if eta > self.eps:
            a2n = min(H, max(L, a2 + y2 * (E1 - E2) / eta))
        else:
            # non-positive curvature along the pair line: take the better end.
            # objective change for a2 -> a2 + t is y2 (E1 - E2) t - eta t^2 / 2
            def gain(t):
                return y2 * (E1 - E2) * t - 0.5 * eta * t * t

            g_lo, g_hi = gain(L - a2), gain(H - a2)
            if g_lo > g_hi + self.eps:
                a2n = L
            elif g_hi > g_lo + self.eps:
                a2n = H
            else:
                a2n = a2
        if abs(a2n - a2) < self.eps * (a2n + a2 + self.eps):
            return False
        a1n = a1 + s * (a2 - a2n)
        # clip rounding spill-over back into the box, preserving sum(a_i y_i)
        if a1n < 0.0:
            a2n += s * a1n
            a1n = 0.0
        elif a1n > C:
            a2n += s * (a1n - C)
            a1n = C
        d1, d2 = a1n - a1, a2n - a2
        b1 = self.b - E1 - y1 * d1 * k11 - y2 * d2 * k12
        b2 = self.b - E2 - y1 * d1 * k12 - y2 * d2 * k22
        if 0.0 < a1n < C:
            b_new = b1
        elif 0.0 < a2n < C:
            b_new = b2
        else:
            b_new = 0.5 * (b1 + b2)
        self.g += y1 * d1 * K[i1] + y2 * d2 * K[i2]
        self.alpha[i1], self.alpha[i2] = a1n, a2n
        self.b = b_new
        return True

    def examine(self, i2):
        y2, a2 = self.y[i2], self.alpha[i2]
        r2 = self.error(i2) * y2
        if not ((r2 < -self.tol and a2 < self.C) or (r2 > self.tol and a2 > 0.0)):
            return False
        free = np.flatnonzero((self.alpha > 0.0) & (self.alpha < self.C))
        if free.size > 1:
            E = self.g[free] + self.b - self.y[free]
            i1 = int(free[np.argmax(np.abs(E - self.error(i2)))])
            if self.take_step(i1, i2):
                return True
        for i1 in np.roll(free, -int(self.rng.integers(max(free.size, 1)))):
            if self.take_step(int(i1), i2):
                return True
        for i1 in np.roll(np.arange(self.n), -int(self.rng.integers(self.n))):
            if self.take_step(int(i1), i2):
                return True
        return False

    def solve(self, max_passes):
        quiet_sweeps = 0
        examine_all = True
        sweeps = 0
        while quiet_sweeps < max_passes:
            if sweeps >= HARD_SWEEP_CAP:
                return sweeps, False
            sweeps += 1
            if examine_all:
                order = self.rng.permutation(self.n)
            else:
                order = np.flatnonzero((self.alpha > 0.0) & (self.alpha < self.C))
            changed = sum(self.examine(int(i)) for i in order)
            if examine_all:
                quiet_sweeps = quiet_sweeps + 1 if changed == 0 else 0
                examine_all = changed == 0
            elif changed == 0:
                examine_all = True
        return sweeps, True


def _final_bias(alpha, y, K, C, eps):
    g = K @ (alpha * y)
    margin = (alpha > eps) & (alpha < C - eps)
    if margin.any():
        return float(np.mean(y[margin] - g[margin]))
    at_zero = alpha <= eps
    at_c = ~at_zero
    r = y - g
    lower = r[((y > 0) & at_zero) | ((y < 0) & at_c)]
    upper = r[((y > 0) & at_c) | ((y < 0) & at_zero)]
    if lower.size and upper.size:
        return float(0.5 * (lower.max() + upper.min()))
    if lower.size:
        return float(lower.max())
    if upper.size:
        return float(upper.min())
    return 0.0


def train(gram, labels, C=1.0, tol=1e-3, max_passes=10, seed=0, support_epsilon=1e-8, kernel=None):
    """Fit multipliers and bias on a precomputed Gram matrix.

    ``labels`` are -1/+1. Non-convergence within ``HARD_SWEEP_CAP`` sweeps
    is reported through ``model.converged`` and a warning, not an error.
    ``kernel`` is an optional descriptor stored with the model.
    """
    if not C > 0:
        raise ValidationError("C must be positive")
    if not tol > 0:
        raise ValidationError("tol must be positive")
    if int(max_passes) != max_passes or max_passes < 1:
        raise ValidationError("max_passes must be a positive integer")
    K, y = _validate(gram, labels)
    smo = _Smo(K, y, float(C), float(tol), seed)
    sweeps, converged = smo.solve(int(max_passes))
    if not converged:
        warnings.warn(f"SMO hit the {HARD_SWEEP_CAP}-sweep cap without converging", RuntimeWarning)
    alpha = np.clip(smo.alpha, 0.0, C)
    bias = _final_bias(alpha, y, K, C, support_epsilon)
    log.debug("SMO finished after %d sweeps (converged=%s)", sweeps, converged)
    return SvmModel(
        alphas=alpha,
        bias=bias,
        labels=y.astype(int),
        C=float(C),
        support_epsilon=support_epsilon,
        converged=converged,
        sweeps=sweeps,
        kernel=kernel,
    )


def decision_values(model, cross):
    """sum_i a_i y_i K(x_i, x) + b for every row of ``cross``."""
    cross = np.asarray(cross, dtype=float)
    n = model.alphas.shape[0]
    if cross.size == 0 and (cross.ndim < 2 or cross.shape[0] == 0):
        return np.zeros(0)
    if cross.ndim != 2 or cross.shape[1] != n:
        raise ValidationError(f"kernel rows must have {n} columns, got shape {cross.shape}")
    return cross @ (model.alphas * model.labels) + model.bias


def predict(model, cross):
    """Labels in {-1, +1}; a decision value of exactly 0 maps to +1."""
    return np.where(decision_values(model, cross) >= 0.0, 1, -1)
