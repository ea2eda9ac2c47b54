"""Classifier decoupled from propagation, plus evaluation utilities.

A two-layer perceptron scores each node from its features alone; class
probabilities come from averaging those scores over every node's restart
distribution (softmax of P @ logits). Training backpropagates through
the averaging with plain gradient descent and patience-based early
stopping on the supervised cross-entropy.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field, replace

import numpy as np

from .propagate import PropagationMatrix
from .util import substream

N_CLASSES = 2
MIN_LOSS_IMPROVEMENT = 1e-6  # smaller deltas do not reset patience


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.01
    hidden: int = 64
    max_epochs: int = 3000
    patience: int = 10
    seed: int = 0

    def __post_init__(self) -> None:
        if self.learning_rate < 0.0:
            raise ValueError(f"learning rate must be non-negative, got {self.learning_rate}")
        if self.hidden < 1:
            raise ValueError(f"hidden width must be at least 1, got {self.hidden}")
        if self.max_epochs < 1:
            raise ValueError(f"max_epochs must be at least 1, got {self.max_epochs}")
        if self.patience < 1:
            raise ValueError(f"patience must be at least 1, got {self.patience}")


@dataclass
class Classifier:
    """relu two-layer perceptron with a 2-way output head."""

    w1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    b2: np.ndarray

    def copy(self) -> "Classifier":
        return Classifier(self.w1.copy(), self.b1.copy(), self.w2.copy(), self.b2.copy())


@dataclass
class TrainHistory:
    losses: list[float] = field(default_factory=list)
    epoch_seconds: list[float] = field(default_factory=list)
    best_epoch: int = 0
    stopped_early: bool = False
    train_seconds: float = 0.0


def init_classifier(d_in: int, hidden: int, seed: int) -> Classifier:
    """Scaled-uniform initial weights from a dedicated substream."""
    if d_in < 1 or hidden < 1:
        raise ValueError(f"bad layer sizes: d_in={d_in}, hidden={hidden}")
    rng = substream(seed, "classifier-init")
    lim1 = np.sqrt(6.0 / (d_in + hidden))
    lim2 = np.sqrt(6.0 / (hidden + N_CLASSES))
    return Classifier(
        w1=rng.uniform(-lim1, lim1, size=(d_in, hidden)),
        b1=np.zeros(hidden),
        w2=rng.uniform(-lim2, lim2, size=(hidden, N_CLASSES)),
        b2=np.zeros(N_CLASSES),
    )


def forward(c: Classifier, x: np.ndarray) -> np.ndarray:
    """Per-node logits, shape (n, 2)."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != c.w1.shape[0]:
        raise ValueError(
            f"features of shape {x.shape} do not match input width {c.w1.shape[0]}"
        )
    hidden = np.maximum(x @ c.w1 + c.b1, 0.0)
    return hidden @ c.w2 + c.b2


def _softmax_rows(z: np.ndarray) -> np.ndarray:
    shifted = z - z.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def predict(p: PropagationMatrix, logits: np.ndarray) -> np.ndarray:
    """Class probabilities for every stored row: softmax(P @ logits)."""
    logits = np.asarray(logits, dtype=np.float64)
    if logits.ndim != 2 or logits.shape != (p.n, N_CLASSES):
        raise ValueError(
            f"logits of shape {logits.shape} do not match ({p.n}, {N_CLASSES})"
        )
    return _softmax_rows(p.matrix @ logits)


def _loss_and_grads(
    c: Classifier,
    x: np.ndarray,
    p: PropagationMatrix,
    sup_pos: np.ndarray,
    targets: np.ndarray,
) -> tuple[float, Classifier]:
    """Mean cross-entropy over supervised rows and its parameter gradients.

    sup_pos indexes rows of p.matrix; targets are per-row class
    distributions (hard news labels or soft author labels).
    """
    pre = x @ c.w1 + c.b1
    hidden = np.maximum(pre, 0.0)
    logits = hidden @ c.w2 + c.b2
    probs = _softmax_rows(p.matrix[sup_pos] @ logits)
    eps = 1e-12  # keeps log finite when a probability underflows
    loss = float(-(targets * np.log(probs + eps)).sum() / sup_pos.size)

    # d loss / d (P @ logits) = (probs - targets) / m, pulled back through P.
    dz = (probs - targets) / sup_pos.size
    dlogits = p.matrix[sup_pos].T @ dz
    dw2 = hidden.T @ dlogits
    db2 = dlogits.sum(axis=0)
    dhidden = (dlogits @ c.w2.T) * (pre > 0.0)
    dw1 = x.T @ dhidden
    db1 = dhidden.sum(axis=0)
    return loss, Classifier(dw1, db1, dw2, db2)


def train(
    x: np.ndarray,
    p: PropagationMatrix,
    supervised_ids: np.ndarray,
    targets: np.ndarray,
    cfg: TrainConfig,
) -> tuple[Classifier, TrainHistory]:
    """Fit the classifier on the supervised nodes.

    x holds features for all p.n nodes in node order. supervised_ids are
    node ids (each must have a stored row in p); targets is the matching
    (m, 2) class-distribution array. Returns the parameters of the
    best-loss epoch.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape[0] != p.n:
        raise ValueError(f"features cover {x.shape[0]} nodes, operator spans {p.n}")
    supervised_ids = np.asarray(supervised_ids, dtype=np.int64)
    if supervised_ids.size == 0:
        raise ValueError("no supervised nodes to train on")
    targets = np.asarray(targets, dtype=np.float64)
    if targets.shape != (supervised_ids.size, N_CLASSES):
        raise ValueError(
            f"targets of shape {targets.shape} do not match "
            f"({supervised_ids.size}, {N_CLASSES})"
        )
    missing = [int(i) for i in supervised_ids if not p.has_row(int(i))]
    if missing:
        raise ValueError(f"supervised nodes without stored rows: {missing[:5]}")
    sup_pos = np.array([p._row_pos[int(i)] for i in supervised_ids], dtype=np.int64)

    c = init_classifier(x.shape[1], cfg.hidden, cfg.seed)
    best = c.copy()
    best_loss = np.inf
    best_epoch = 0
    stale = 0
    hist = TrainHistory()
    t_start = time.perf_counter()
    for epoch in range(cfg.max_epochs):
        t0 = time.perf_counter()
        loss, g = _loss_and_grads(c, x, p, sup_pos, targets)
        hist.losses.append(loss)
        if loss <= best_loss - MIN_LOSS_IMPROVEMENT:
            best_loss = loss
            best = c.copy()
            best_epoch = epoch
            stale = 0
        else:
            stale += 1
        if stale >= cfg.patience:
            hist.epoch_seconds.append(time.perf_counter() - t0)
            hist.stopped_early = True
            break
        c.w1 -= cfg.learning_rate * g.w1
        c.b1 -= cfg.learning_rate * g.b1
        c.w2 -= cfg.learning_rate * g.w2
        c.b2 -= cfg.learning_rate * g.b2
        hist.epoch_seconds.append(time.perf_counter() - t0)
    hist.best_epoch = best_epoch
    hist.train_seconds = time.perf_counter() - t_start
    return best, hist


def kfold_split(n_items: int, k: int, seed: int) -> list[np.ndarray]:
    """Shuffled partition into k folds whose sizes differ by at most one."""
    if k < 1:
        raise ValueError(f"fold count must be at least 1, got {k}")
    if k > n_items:
        raise ValueError(f"cannot split {n_items} items into {k} folds")
    rng = substream(seed, "fold-split")
    perm = rng.permutation(n_items)
    return [np.sort(fold) for fold in np.array_split(perm, k)]


@dataclass(frozen=True)
class MetricsReport:
    accuracy: float
    precision: float
    recall: float
    f1: float
    auc: float
    train_seconds: float = 0.0

    def as_dict(self) -> dict[str, float]:
        return {
            "accuracy": self.accuracy,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "auc": self.auc,
            "train_seconds": self.train_seconds,
        }


def evaluate(probs: np.ndarray, labels: np.ndarray, threshold: float = 0.5) -> MetricsReport:
    """Threshold metrics plus rank-statistic AUC, positive class 1 (real).

    probs may be (n,) scores for class 1 or an (n, 2) probability array.
    Zero-denominator precision, recall, and F1 are 0; AUC with a single
    class present is 0.5.
    """
    probs = np.asarray(probs, dtype=np.float64)
    scores = probs[:, 1] if probs.ndim == 2 else probs
    labels = np.asarray(labels)
    if scores.size == 0:
        raise ValueError("nothing to evaluate")
    if scores.shape != labels.shape:
        raise ValueError(f"{scores.size} scores vs {labels.size} labels")
    if not np.isin(labels, (0, 1)).all():
        raise ValueError("labels must be 0 or 1")

    pred = scores >= threshold
    actual = labels.astype(bool)
    tp = int(np.sum(pred & actual))
    fp = int(np.sum(pred & ~actual))
    fn = int(np.sum(~pred & actual))
    tn = int(np.sum(~pred & ~actual))
    accuracy = (tp + tn) / labels.size
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = (
        2.0 * precision * recall / (precision + recall)
        if precision + recall
        else 0.0
    )

    n_pos = int(actual.sum())
    n_neg = labels.size - n_pos
    if n_pos == 0 or n_neg == 0:
        auc = 0.5
    else:
        # Mann-Whitney rank form; midranks count ties as half a win, which
        # matches the pairwise definition exactly (both are sums of the
        # same dyadic increments).
        order = np.argsort(scores, kind="stable")
        ranks = np.empty(scores.size)
        sorted_scores = scores[order]
        i = 0
        while i < scores.size:
            j = i
            while j + 1 < scores.size and sorted_scores[j + 1] == sorted_scores[i]:
                j += 1
            ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
            i = j + 1
        auc = (ranks[actual].sum() - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)
    return MetricsReport(accuracy, precision, recall, f1, float(auc))


def mean_report(reports: list[MetricsReport]) -> MetricsReport:
    """Field-wise mean across folds."""
    if not reports:
        raise ValueError("no reports to average")
    return MetricsReport(
        accuracy=float(np.mean([r.accuracy for r in reports])),
        precision=float(np.mean([r.precision for r in reports])),
        recall=float(np.mean([r.recall for r in reports])),
        f1=float(np.mean([r.f1 for r in reports])),
        auc=float(np.mean([r.auc for r in reports])),
        train_seconds=float(np.mean([r.train_seconds for r in reports])),
    )


def with_time(report: MetricsReport, seconds: float) -> MetricsReport:
    return replace(report, train_seconds=seconds)
