"""From corpus tables to cross-validated metrics.

Holds the per-relation propagation state so dynamic edge updates can
repair just the affected channel instead of rebuilding everything.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, replace

import numpy as np

from .errors import DataError
from .graph import HeteroGraph, relation_adjacency
from .model import (
    MetricsReport,
    TrainConfig,
    evaluate,
    forward,
    kfold_split,
    mean_report,
    predict,
    train,
    with_time,
)
from .propagate import (
    MixedWeights,
    PropagationMatrix,
    StochasticMatrix,
    full_propagation,
    mixed_propagation,
    pushout_update,
    two_hop_operator,
)
from .sparse import column_normalize
from .textgraph import FeatureTable
from .util import substream_seed

SCHEMES = ("dbgnn", "dhgnn")
ROW_MODES = ("labeled", "all")


@dataclass(frozen=True)
class RunConfig:
    """Everything a training or benchmark run depends on."""

    alpha: float = 0.85
    tol: float = 1e-9
    betas: tuple[float, float, float] = (1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0)
    q: int = 3
    folds: int = 4
    scheme: str = "dhgnn"
    rows: str = "labeled"
    hidden: int = 64
    learning_rate: float = 0.01
    max_epochs: int = 3000
    patience: int = 10
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0.0 <= self.alpha < 1.0:
            raise ValueError(f"alpha must be in [0, 1), got {self.alpha}")
        if self.tol <= 0.0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        MixedWeights(*self.betas)  # validates
        if self.q < 1:
            raise ValueError(f"q must be at least 1, got {self.q}")
        if self.folds < 2:
            raise ValueError(f"fold count must be at least 2, got {self.folds}")
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}, got {self.scheme!r}")
        if self.rows not in ROW_MODES:
            raise ValueError(f"rows mode must be one of {ROW_MODES}, got {self.rows!r}")

    def train_config(self, seed: int) -> TrainConfig:
        return TrainConfig(
            learning_rate=self.learning_rate,
            hidden=self.hidden,
            max_epochs=self.max_epochs,
            patience=self.patience,
            seed=seed,
        )


def features_matrix(g: HeteroGraph, table: FeatureTable) -> np.ndarray:
    """Stack feature vectors for all nodes, news first then authors."""
    if table.dim == 0 and g.n_combined > 0:
        raise DataError("feature table is empty")
    out = np.empty((g.n_combined, table.dim))
    for i, r in enumerate(g.news):
        out[i] = table.vector("news", r.id)
    for j, a in enumerate(g.authors):
        out[g.n_news + j] = table.vector("author", a.id)
    return out


def supervised_targets(
    g: HeteroGraph, news_subset: np.ndarray | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Supervised combined node ids and their (m, 2) target distributions.

    News carry hard labels; authors carry derived fractional labels l as
    soft targets [1 - l, l]. news_subset restricts which news appear
    (per-type indices); labeled authors are always included.
    """
    news_ids = np.arange(g.n_news) if news_subset is None else np.asarray(news_subset)
    ids = []
    targets = []
    for i in news_ids:
        r = g.news[int(i)]
        ids.append(int(i))
        targets.append((1.0 - r.label, float(r.label)))
    for j, a in enumerate(g.authors):
        if a.derived_label is not None:
            ids.append(g.n_news + j)
            targets.append((1.0 - a.derived_label, a.derived_label))
    if not ids:
        raise DataError("no supervised nodes: corpus has no labels")
    return np.array(ids, dtype=np.int64), np.array(targets)


def labeled_row_ids(g: HeteroGraph) -> np.ndarray:
    """Combined ids of all news plus all labeled authors."""
    ids, _ = supervised_targets(g)
    return ids


@dataclass(frozen=True)
class PropagationState:
    """Per-relation operators and row sets, ready for incremental repair."""

    scheme: str
    betas: MixedWeights
    split: int
    p_an: PropagationMatrix
    m_an2: StochasticMatrix
    p_nn: PropagationMatrix | None = None
    m_nn: StochasticMatrix | None = None
    p_aa: PropagationMatrix | None = None
    m_aa: StochasticMatrix | None = None

    def combined(self) -> PropagationMatrix:
        if self.scheme == "dbgnn":
            return self.p_an
        return mixed_propagation(self.p_an, self.p_nn, self.p_aa, self.betas)


def _row_sets(g: HeteroGraph, rows: str):
    if rows == "all":
        return None, None, None
    combined = labeled_row_ids(g)
    news_rows = combined[combined < g.n_news]
    author_rows = combined[combined >= g.n_news] - g.n_news
    return combined, news_rows, author_rows


def build_state(g: HeteroGraph, cfg: RunConfig) -> PropagationState:
    """Propagate every channel the scheme needs, from scratch."""
    combined_rows, news_rows, author_rows = _row_sets(g, cfg.rows)
    m_an2 = two_hop_operator(relation_adjacency(g, "an"), g.n_news)
    p_an = full_propagation(m_an2, cfg.alpha, cfg.tol, rows=combined_rows,
                            scheme="two_hop")
    if cfg.scheme == "dbgnn":
        return PropagationState(
            scheme=cfg.scheme, betas=MixedWeights(*cfg.betas), split=g.n_news,
            p_an=p_an, m_an2=m_an2,
        )
    m_nn = column_normalize(relation_adjacency(g, "nn"))
    m_aa = column_normalize(relation_adjacency(g, "aa"))
    p_nn = full_propagation(m_nn, cfg.alpha, cfg.tol, rows=news_rows)
    p_aa = full_propagation(m_aa, cfg.alpha, cfg.tol, rows=author_rows)
    return PropagationState(
        scheme=cfg.scheme, betas=MixedWeights(*cfg.betas), split=g.n_news,
        p_an=p_an, m_an2=m_an2, p_nn=p_nn, m_nn=m_nn, p_aa=p_aa, m_aa=m_aa,
    )


def update_state(state: PropagationState, g_new: HeteroGraph,
                 relation: str) -> PropagationState:
    """Repair the one channel the edited relation feeds.

    g_new must be the state's graph after edge edits in that relation
    only. dbgnn has no nn or aa channels, so those edits leave it as is.
    """
    if relation == "an":
        m_an2 = two_hop_operator(relation_adjacency(g_new, "an"), state.split)
        p_an = pushout_update(state.p_an, state.m_an2, m_an2)
        return replace(state, m_an2=m_an2, p_an=p_an)
    if relation not in ("nn", "aa"):
        raise ValueError(f"unknown relation {relation!r}")
    if state.scheme == "dbgnn":
        return state
    if relation == "nn":
        m_nn = column_normalize(relation_adjacency(g_new, "nn"))
        p_nn = pushout_update(state.p_nn, state.m_nn, m_nn)
        return replace(state, m_nn=m_nn, p_nn=p_nn)
    m_aa = column_normalize(relation_adjacency(g_new, "aa"))
    p_aa = pushout_update(state.p_aa, state.m_aa, m_aa)
    return replace(state, m_aa=m_aa, p_aa=p_aa)


@dataclass
class CrossValResult:
    fold_reports: list[MetricsReport]
    mean: MetricsReport
    propagation_seconds: float
    fold_epochs: list[int]
    fold_stopped_early: list[bool]


def cross_validate(g: HeteroGraph, table: FeatureTable, cfg: RunConfig) -> CrossValResult:
    """K-fold over news; authors supervise every fold.

    Each fold's train_seconds includes the (shared) propagation build
    plus that fold's gradient descent time.
    """
    x = features_matrix(g, table)
    t0 = time.perf_counter()
    state = build_state(g, cfg)
    p = state.combined()
    prop_seconds = time.perf_counter() - t0

    folds = kfold_split(g.n_news, cfg.folds, cfg.seed)
    labels = np.array([r.label for r in g.news], dtype=np.int64)
    reports = []
    fold_epochs = []
    fold_stopped = []
    for f, val_ids in enumerate(folds):
        train_ids = np.sort(np.concatenate([folds[i] for i in range(len(folds)) if i != f]))
        sup_ids, targets = supervised_targets(g, news_subset=train_ids)
        t1 = time.perf_counter()
        clf, hist = train(x, p, sup_ids, targets,
                          cfg.train_config(substream_seed(cfg.seed, f"fold-{f}")))
        gd_seconds = time.perf_counter() - t1
        probs = predict(p, forward(clf, x))
        val_probs = probs[p.positions(val_ids)]
        report = evaluate(val_probs, labels[val_ids])
        reports.append(with_time(report, prop_seconds + gd_seconds))
        fold_epochs.append(len(hist.losses))
        fold_stopped.append(hist.stopped_early)
    return CrossValResult(
        fold_reports=reports,
        mean=mean_report(reports),
        propagation_seconds=prop_seconds,
        fold_epochs=fold_epochs,
        fold_stopped_early=fold_stopped,
    )
