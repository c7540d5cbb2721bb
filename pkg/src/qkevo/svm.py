"""Soft-margin kernel SVM trained on a precomputed Gram matrix.

The dual problem

    max  sum_i a_i - 1/2 sum_ij a_i a_j y_i y_j K_ij
    s.t. sum_i a_i y_i = 0,   0 <= a_i <= C

is solved by sequential two-variable analytic updates (SMO).  Pair
selection is fully deterministic: the same Gram matrix, labels and config
always produce the same model.  After the update loop the bias is
recomputed from the KKT bounds, which pins it down even when every alpha
sits on a box constraint (e.g. for degenerate, constant kernels).
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import TrainingError

# Minimum meaningful alpha step, relative to the pair being updated.
_STEP_EPS = 1e-8
# Alphas closer than this to a box bound are not counted as support vectors.
_SV_EPS = 1e-8


@dataclass
class TrainConfig:
    C: float = 1.0
    tolerance: float = 1e-3
    max_passes: int = 10
    max_iterations: int = 100_000

    def __post_init__(self):
        if self.C <= 0 or self.tolerance <= 0:
            raise ValueError("C and tolerance must be positive")
        if self.max_passes < 1 or self.max_iterations < 1:
            raise ValueError("max_passes and max_iterations must be >= 1")


@dataclass
class SvmModel:
    alphas: np.ndarray
    bias: float
    support_indices: np.ndarray
    train_labels: np.ndarray
    regularization: float


class _Smo:
    # Scalar-heavy inner loops run on plain Python floats (list caches of
    # the Gram matrix and labels); only the error cache stays vectorised.
    def __init__(self, K: np.ndarray, y: np.ndarray, config: TrainConfig):
        self.K = K
        self.Krows = K.tolist()
        self.y = y
        self.ylist = [float(v) for v in y]
        self.C = config.C
        self.tol = config.tolerance
        self.alpha = [0.0] * len(y)
        self.b = 0.0
        self.errors = -y.astype(float)  # E_i = f(x_i) - y_i with f = 0 initially
        self.steps = 0

    def take_step(self, i1: int, i2: int) -> bool:
        if i1 == i2:
            return False
        alpha = self.alpha
        a1, a2 = alpha[i1], alpha[i2]
        y1, y2 = self.ylist[i1], self.ylist[i2]
        s = y1 * y2
        if s < 0:
            low, high = max(0.0, a2 - a1), min(self.C, self.C + a2 - a1)
        else:
            low, high = max(0.0, a1 + a2 - self.C), min(self.C, a1 + a2)
        if low >= high:
            return False
        row1 = self.Krows[i1]
        k11 = row1[i1]
        k12 = row1[i2]
        k22 = self.Krows[i2][i2]
        e1 = float(self.errors[i1])
        e2 = float(self.errors[i2])
        eta = k11 + k22 - 2.0 * k12
        if eta > 0:
            a2_new = a2 + y2 * (e1 - e2) / eta
            a2_new = min(max(a2_new, low), high)
        else:
            # Objective is flat/concave along the constraint line: compare
            # the two box endpoints (minimisation form, as in Platt 1998).
            v1 = y1 * (e1 - self.b) - a1 * k11 - s * a2 * k12
            v2 = y2 * (e2 - self.b) - s * a1 * k12 - a2 * k22
            l1 = a1 + s * (a2 - low)
            h1 = a1 + s * (a2 - high)
            obj_low = (l1 * v1 + low * v2 + 0.5 * l1 * l1 * k11
                       + 0.5 * low * low * k22 + s * low * l1 * k12)
            obj_high = (h1 * v1 + high * v2 + 0.5 * h1 * h1 * k11
                        + 0.5 * high * high * k22 + s * high * h1 * k12)
            if obj_low < obj_high - _STEP_EPS:
                a2_new = low
            elif obj_low > obj_high + _STEP_EPS:
                a2_new = high
            else:
                return False
        if abs(a2_new - a2) < _STEP_EPS * (a2_new + a2 + _STEP_EPS):
            return False
        # Mirror step on a1 preserves sum(alpha*y) exactly; clip guards the
        # one-ulp float excursions outside the box.
        a1_new = min(max(a1 + s * (a2 - a2_new), 0.0), self.C)
        d1 = y1 * (a1_new - a1)
        d2 = y2 * (a2_new - a2)
        b1 = self.b - e1 - d1 * k11 - d2 * k12
        b2 = self.b - e2 - d1 * k12 - d2 * k22
        if 0.0 < a1_new < self.C:
            b_new = b1
        elif 0.0 < a2_new < self.C:
            b_new = b2
        else:
            b_new = 0.5 * (b1 + b2)
        self.errors += d1 * self.K[i1] + d2 * self.K[i2] + (b_new - self.b)
        alpha[i1] = a1_new
        alpha[i2] = a2_new
        self.b = b_new
        self.steps += 1
        return True

    def _non_bound(self) -> list[int]:
        C = self.C
        return [i for i, a in enumerate(self.alpha) if 0.0 < a < C]

    def examine(self, i2: int) -> bool:
        y2 = self.ylist[i2]
        a2 = self.alpha[i2]
        r2 = float(self.errors[i2]) * y2
        if not ((r2 < -self.tol and a2 < self.C) or (r2 > self.tol and a2 > 0.0)):
            return False
        non_bound = self._non_bound()
        if len(non_bound) > 1:
            e2 = float(self.errors[i2])
            i1 = max(non_bound, key=lambda i: abs(float(self.errors[i]) - e2))
            if self.take_step(i1, i2):
                return True
        for i1 in non_bound:
            if self.take_step(i1, i2):
                return True
        for i1 in range(len(self.ylist)):
            if self.take_step(i1, i2):
                return True
        return False

    def run(self, max_passes: int, max_iterations: int) -> None:
        # Pair selection is deterministic, so one full sweep without any
        # alpha change is a fixed point; max_passes >= 1 values behave alike.
        examine_all = True
        num_changed = 1
        while (num_changed > 0 or examine_all) and self.steps < max_iterations:
            num_changed = 0
            targets = range(len(self.ylist)) if examine_all else self._non_bound()
            for i2 in targets:
                num_changed += self.examine(i2)
                if self.steps >= max_iterations:
                    break
            if examine_all:
                examine_all = False
            elif num_changed == 0:
                examine_all = True

    def final_bias(self) -> float:
        """Bias from the KKT bounds at the final alphas.

        Interior support vectors pin the bias exactly; with every alpha at
        a bound the feasible interval midpoint is used.
        """
        alpha = np.asarray(self.alpha)
        g = self.K @ (alpha * self.y)
        interior = (alpha > _SV_EPS) & (alpha < self.C - _SV_EPS)
        if interior.any():
            return float(np.mean(self.y[interior] - g[interior]))
        v = self.y - g
        at_zero = alpha <= _SV_EPS
        pos = self.y > 0
        lower = (at_zero & pos) | (~at_zero & ~pos)
        upper = (at_zero & ~pos) | (~at_zero & pos)
        b_lo = np.max(v[lower]) if lower.any() else -np.inf
        b_hi = np.min(v[upper]) if upper.any() else np.inf
        if not np.isfinite(b_lo):
            return float(b_hi)
        if not np.isfinite(b_hi):
            return float(b_lo)
        return float(0.5 * (b_lo + b_hi))


def _check_gram(gram: np.ndarray) -> np.ndarray:
    K = np.asarray(gram, dtype=float)
    if K.ndim != 2 or K.shape[0] != K.shape[1]:
        raise ValueError(f"gram matrix must be square, got shape {K.shape}")
    if not np.allclose(K, K.T, atol=1e-8):
        raise ValueError("gram matrix must be symmetric")
    return K


def train_dual(gram, y, config: TrainConfig | None = None) -> SvmModel:
    """Train a binary SVM from a precomputed Gram matrix and -1/+1 labels."""
    if config is None:
        config = TrainConfig()
    K = _check_gram(gram)
    y = np.asarray(y, dtype=float)
    if y.shape != (K.shape[0],):
        raise ValueError(f"need {K.shape[0]} labels, got shape {y.shape}")
    if not np.all(np.isin(y, (-1.0, 1.0))):
        raise ValueError("labels must be -1 or +1")
    if np.all(y == y[0]):
        raise TrainingError("training labels contain a single class")
    smo = _Smo(K, y, config)
    smo.run(config.max_passes, config.max_iterations)
    bias = smo.final_bias()
    alphas = np.asarray(smo.alpha)
    support = np.flatnonzero(alphas > _SV_EPS)
    return SvmModel(alphas=alphas, bias=bias, support_indices=support,
                    train_labels=y, regularization=config.C)


def decision_values(model: SvmModel, cross) -> np.ndarray:
    """f(x) = sum_i alpha_i y_i K(x_i, x) + b for each row of the cross kernel."""
    cross = np.asarray(cross, dtype=float)
    if cross.ndim == 1:
        cross = cross[None, :]
    if cross.shape[1] != model.alphas.size:
        raise ValueError(
            f"cross kernel must have {model.alphas.size} columns, got {cross.shape[1]}"
        )
    return cross @ (model.alphas * model.train_labels) + model.bias


def predict(model: SvmModel, cross) -> np.ndarray:
    """Signs of the decision values; an exact zero maps to +1."""
    return np.where(decision_values(model, cross) >= 0.0, 1, -1)


def accuracy(predicted, truth) -> float:
    predicted = np.asarray(predicted)
    truth = np.asarray(truth)
    if predicted.shape != truth.shape:
        raise ValueError(f"length mismatch: {predicted.shape} vs {truth.shape}")
    return float(np.mean(predicted == truth))


def dual_objective(alphas, gram, y) -> float:
    """Value of the dual objective at ``alphas``."""
    alphas = np.asarray(alphas, dtype=float)
    y = np.asarray(y, dtype=float)
    coeff = alphas * y
    return float(np.sum(alphas) - 0.5 * coeff @ np.asarray(gram, dtype=float) @ coeff)


@dataclass
class MulticlassModel:
    """One-vs-one ensemble: one binary model per class pair."""

    classes: np.ndarray
    pairs: list[tuple[int, int]]  # indices into ``classes``
    models: list[SvmModel]
    pair_rows: list[np.ndarray]  # training-row indices behind each model


def train_multiclass(gram, y, config: TrainConfig | None = None) -> MulticlassModel:
    """Train one-vs-one binary models for every class pair.

    Within a pair (a, b), a < b in class order, class a is coded +1.
    """
    K = _check_gram(gram)
    y = np.asarray(y)
    if y.shape != (K.shape[0],):
        raise ValueError(f"need {K.shape[0]} labels, got shape {y.shape}")
    classes = np.unique(y)
    if classes.size < 2:
        raise TrainingError("multiclass training needs at least 2 classes")
    pairs, models, pair_rows = [], [], []
    for ia, ib in combinations(range(classes.size), 2):
        rows = np.flatnonzero((y == classes[ia]) | (y == classes[ib]))
        sub_y = np.where(y[rows] == classes[ia], 1.0, -1.0)
        try:
            model = train_dual(K[np.ix_(rows, rows)], sub_y, config)
        except TrainingError as exc:
            raise TrainingError(
                f"degenerate pair ({classes[ia]!r}, {classes[ib]!r}): {exc}"
            ) from exc
        pairs.append((ia, ib))
        models.append(model)
        pair_rows.append(rows)
    return MulticlassModel(classes=classes, pairs=pairs, models=models,
                           pair_rows=pair_rows)


def predict_multiclass(ensemble: MulticlassModel, cross) -> np.ndarray:
    """Majority vote over pair models; vote ties break by summed |decision|,
    any remaining tie by class order."""
    cross = np.asarray(cross, dtype=float)
    if cross.ndim == 1:
        cross = cross[None, :]
    n_test = cross.shape[0]
    n_classes = ensemble.classes.size
    votes = np.zeros((n_test, n_classes), dtype=int)
    strength = np.zeros((n_test, n_classes))
    for (ia, ib), model, rows in zip(ensemble.pairs, ensemble.models,
                                     ensemble.pair_rows):
        dec = decision_values(model, cross[:, rows])
        won_a = dec >= 0.0
        votes[won_a, ia] += 1
        votes[~won_a, ib] += 1
        strength[won_a, ia] += np.abs(dec[won_a])
        strength[~won_a, ib] += np.abs(dec[~won_a])
    # Lexicographic argmax on (votes, strength), first class wins full ties.
    best = np.zeros(n_test, dtype=int)
    for r in range(n_test):
        keys = list(zip(votes[r], strength[r]))
        best[r] = max(range(n_classes), key=lambda c: (keys[c], -c))
    return ensemble.classes[best]
