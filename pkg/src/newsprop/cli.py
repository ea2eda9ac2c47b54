"""Command line front end.

Commands: synth (toy corpus), build (validate tables, report counts),
train (cross-validated metrics), bench-update (push-out repair vs full
recompute), replay (rerun a recorded manifest). Every command writes a
run manifest JSON; replaying it reproduces all outputs except
wall-clock timing fields.

Exit codes: 0 ok, 1 usage, 2 bad data, 3 non-convergence.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .errors import DataError, NonConvergenceError
from .graph import HeteroGraph, apply_update, build_mappings, derive_author_labels, load_graph
from .model import MetricsReport
from .pipeline import RunConfig, build_state, cross_validate, update_state
from .propagate import full_propagation
from .synth import make_corpus
from .textgraph import aggregate_words, read_features_tsv, read_word_features, write_features_tsv

USAGE_EXIT, DATA_EXIT, CONVERGENCE_EXIT = 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_EXIT)


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alpha", type=float, default=0.85, help="restart strength in [0, 1)")
    p.add_argument("--tol", type=float, default=1e-9, help="series truncation tolerance")
    p.add_argument("--betas", default="1/3,1/3,1/3",
                   help="an,nn,aa channel weights, comma separated")
    p.add_argument("--q", type=int, default=3, help="word graph neighbourhood radius")
    p.add_argument("--folds", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--hidden", type=int, default=64)
    p.add_argument("--lr", type=float, default=0.01)
    p.add_argument("--max-epochs", type=int, default=3000)
    p.add_argument("--patience", type=int, default=10)
    p.add_argument("--rows", choices=("labeled", "all"), default="labeled",
                   help="which propagation rows to materialize")
    p.add_argument("--scheme", choices=("dbgnn", "dhgnn"), default="dhgnn")
    p.add_argument("--json", action="store_true", help="machine-readable stdout")


def _parse_beta(text: str) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise ValueError(f"expected three comma-separated weights, got {text!r}")
    vals = []
    for part in parts:
        if "/" in part:
            num, den = part.split("/", 1)
            vals.append(float(num) / float(den))
        else:
            vals.append(float(part))
    return tuple(vals)  # type: ignore[return-value]


def _config_from(args: dict) -> RunConfig:
    betas = args["betas"]
    if isinstance(betas, str):
        betas = _parse_beta(betas)
    return RunConfig(
        alpha=args["alpha"], tol=args["tol"], betas=tuple(betas), q=args["q"],
        folds=args["folds"], scheme=args["scheme"], rows=args["rows"],
        hidden=args["hidden"], learning_rate=args["lr"],
        max_epochs=args["max_epochs"], patience=args["patience"], seed=args["seed"],
    )


def _load_corpus(data_dir: str) -> HeteroGraph:
    d = Path(data_dir)
    g = load_graph(d / "news.tsv", d / "authors.tsv", d / "subjects.tsv", d / "sources.tsv")
    return derive_author_labels(build_mappings(g))


def _load_features(data_dir: str, cfg: RunConfig):
    d = Path(data_dir)
    if (d / "features.tsv").exists():
        return read_features_tsv(d / "features.tsv")
    if (d / "words.tsv").exists():
        return aggregate_words(read_word_features(d / "words.tsv"),
                               cfg.q, cfg.alpha, cfg.tol)
    raise DataError(f"no features.tsv or words.tsv in {data_dir}")


def _write_json(path: Path, payload) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _write_manifest(out: Path, command: str, config: dict, started: str) -> None:
    _write_json(out / "manifest.json", {
        "command": command,
        "version": __version__,
        "config": config,
        "started_at": started,
        "finished_at": datetime.now(timezone.utc).isoformat(),
    })


def _report_line(prefix: str, r: MetricsReport) -> str:
    return (f"{prefix} accuracy={r.accuracy:.6f} precision={r.precision:.6f} "
            f"recall={r.recall:.6f} f1={r.f1:.6f} auc={r.auc:.6f} "
            f"train_seconds={r.train_seconds:.3f}")


def run_synth(config: dict, out_dir: str) -> int:
    started = datetime.now(timezone.utc).isoformat()
    out = Path(out_dir)
    paths = make_corpus(out, n_news=config["news"], n_authors=config["authors"],
                        n_subjects=config["subjects"], n_sources=config["sources"],
                        dim=config["dim"], noise=config["noise"], seed=config["seed"])
    for name, path in paths.items():
        print(f"{name}={path}")
    _write_manifest(out, "synth", config, started)
    return 0


def run_build(config: dict, out_dir: str) -> int:
    started = datetime.now(timezone.utc).isoformat()
    cfg = _config_from(config)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    g = _load_corpus(config["data_dir"])
    table = _load_features(config["data_dir"], cfg)
    for r in g.news:
        table.vector("news", r.id)
    for a in g.authors:
        table.vector("author", a.id)
    counts = g.counts()
    counts["feature_dim"] = table.dim
    if config.get("json"):
        print(json.dumps(counts, indent=2, sort_keys=True))
    else:
        for key, value in counts.items():
            print(f"{key}={value}")
    _write_json(out / "counts.json", counts)
    with open(out / "edges.tsv", "w", encoding="utf-8") as fh:
        for i, j in g.edges_an:
            fh.write(f"an\t{g.authors[j].id}\t{g.news[i].id}\n")
        for i, j in g.edges_nn:
            fh.write(f"nn\t{g.news[i].id}\t{g.news[j].id}\n")
        for i, j in g.edges_aa:
            fh.write(f"aa\t{g.authors[i].id}\t{g.authors[j].id}\n")
    if not (Path(config["data_dir"]) / "features.tsv").exists():
        write_features_tsv(table, out / "features.tsv")  # aggregated from words.tsv
    _write_manifest(out, "build", config, started)
    return 0


def run_train(config: dict, out_dir: str) -> int:
    started = datetime.now(timezone.utc).isoformat()
    cfg = _config_from(config)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    g = _load_corpus(config["data_dir"])
    table = _load_features(config["data_dir"], cfg)
    result = cross_validate(g, table, cfg)
    fold_payload = [{"fold": f, **r.as_dict()} for f, r in enumerate(result.fold_reports)]
    payload = {
        "folds": fold_payload,
        "mean": {"fold": "mean", **result.mean.as_dict()},
        "diagnostics": {
            "scheme": cfg.scheme,
            "propagation_seconds": result.propagation_seconds,
            "fold_epochs": result.fold_epochs,
            "fold_stopped_early": result.fold_stopped_early,
        },
    }
    if config.get("json"):
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for f, r in enumerate(result.fold_reports):
            print(_report_line(f"fold={f}", r))
        print(_report_line("fold=mean", result.mean))
    _write_json(out / "metrics.json", payload)
    _write_manifest(out, "train", config, started)
    return 0


def _parse_updates(path: str) -> list[tuple[int, str, str, str, str]]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    rows = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 4:
            raise DataError(
                f"{path}:{line_no}: expected 4 tab-separated fields, got {len(fields)}"
            )
        rows.append((line_no, *fields))
    return rows


def run_bench_update(config: dict, out_dir: str) -> int:
    started = datetime.now(timezone.utc).isoformat()
    cfg = _config_from(config)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    g = _load_corpus(config["data_dir"])
    updates = _parse_updates(config["updates"])
    state = build_state(g, cfg)

    header = ("idx\tstatus\top\trelation\tsrc\tdst\tpushout_seconds\t"
              "recompute_seconds\tspeedup\tmax_row_l1")
    as_json = bool(config.get("json"))
    records = []
    lines = [header]
    if not as_json:
        print(header)
    ratios = []
    for idx, (line_no, op, relation, src, dst) in enumerate(updates):
        try:
            g = apply_update(g, op, relation, src, dst)
        except DataError as exc:
            raise DataError(f"{config['updates']}:{line_no}: {exc}") from None
        if state.scheme == "dbgnn" and relation in ("nn", "aa"):
            line = f"{idx}\tnoop\t{op}\t{relation}\t{src}\t{dst}\t0\t0\t1\t0"
            lines.append(line)
            records.append({"idx": idx, "status": "noop", "op": op,
                            "relation": relation, "src": src, "dst": dst})
            if not as_json:
                print(line)
            continue
        old_channel = {"an": state.p_an, "nn": state.p_nn, "aa": state.p_aa}[relation]
        t0 = time.perf_counter()
        state = update_state(state, g, relation)
        push_s = time.perf_counter() - t0
        new_channel = {"an": state.p_an, "nn": state.p_nn, "aa": state.p_aa}[relation]
        m_new = {"an": state.m_an2, "nn": state.m_nn, "aa": state.m_aa}[relation]
        t0 = time.perf_counter()
        fresh = full_propagation(m_new, cfg.alpha, cfg.tol,
                                 rows=old_channel.row_ids, scheme=new_channel.scheme)
        full_s = time.perf_counter() - t0
        err = float(np.abs(new_channel.matrix - fresh.matrix).sum(axis=1).max())
        ratio = full_s / push_s if push_s > 0 else float("inf")
        ratios.append(ratio)
        line = (f"{idx}\tok\t{op}\t{relation}\t{src}\t{dst}\t{push_s:.6f}\t"
                f"{full_s:.6f}\t{ratio:.2f}\t{err:.3e}")
        lines.append(line)
        records.append({"idx": idx, "status": "ok", "op": op, "relation": relation,
                        "src": src, "dst": dst, "pushout_seconds": push_s,
                        "recompute_seconds": full_s, "speedup": ratio,
                        "max_row_l1": err})
        if not as_json:
            print(line)
    if as_json:
        print(json.dumps(records, indent=2, sort_keys=True))
    elif ratios:
        print(f"mean_speedup={sum(ratios) / len(ratios):.2f}")
    (out / "bench.tsv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    _write_manifest(out, "bench-update", config, started)
    return 0


def run_replay(manifest_path: str, out_override: str | None) -> int:
    try:
        manifest = json.loads(Path(manifest_path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise DataError(f"cannot read {manifest_path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DataError(f"{manifest_path}: not valid JSON: {exc}") from exc
    command = manifest.get("command")
    config = manifest.get("config")
    if command not in _RUNNERS or not isinstance(config, dict):
        raise DataError(f"{manifest_path}: not a usable run manifest")
    out_dir = out_override or str(Path(manifest_path).parent)
    return _RUNNERS[command](config, out_dir)


_RUNNERS = {
    "synth": run_synth,
    "build": run_build,
    "train": run_train,
    "bench-update": run_bench_update,
}


def _build_parser() -> _Parser:
    parser = _Parser(prog="newsprop", description=__doc__)
    parser.add_argument("--version", action="version", version=f"newsprop {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a separable toy corpus")
    p.add_argument("--out", required=True)
    p.add_argument("--news", type=int, default=200)
    p.add_argument("--authors", type=int, default=40)
    p.add_argument("--subjects", type=int, default=2)
    p.add_argument("--sources", type=int, default=2)
    p.add_argument("--dim", type=int, default=16)
    p.add_argument("--noise", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)

    for name, help_text in (
        ("build", "validate a corpus and report its graph counts"),
        ("train", "cross-validated training and metrics"),
        ("bench-update", "time push-out repair against full recompute"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--data-dir", required=True)
        p.add_argument("--out", required=True)
        if name == "bench-update":
            p.add_argument("--updates", required=True, help="edge edit script (TSV)")
        _add_config_flags(p)

    p = sub.add_parser("replay", help="rerun a recorded manifest")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", default=None, help="override the output directory")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "replay":
            return run_replay(args.manifest, args.out)
        config = {k: v for k, v in vars(args).items() if k not in ("command", "out")}
        try:
            return _RUNNERS[args.command](config, args.out)
        except ValueError as exc:
            if isinstance(exc, DataError):
                raise
            print(f"newsprop: error: {exc}", file=sys.stderr)
            return USAGE_EXIT
    except DataError as exc:
        print(f"newsprop: data error: {exc}", file=sys.stderr)
        return DATA_EXIT
    except NonConvergenceError as exc:
        print(f"newsprop: did not converge: {exc}", file=sys.stderr)
        return CONVERGENCE_EXIT


if __name__ == "__main__":
    sys.exit(main())
