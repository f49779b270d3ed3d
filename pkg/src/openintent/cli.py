"""Command-line front end.

Subcommands: select-k, cluster, label, evaluate, pipeline. Every command
reads inputs named by flags, writes fixed-name reports into --out-dir,
and never mutates its inputs. Option precedence is command line over
config file over built-in defaults. Exit codes: 0 success, 1 validation
or usage, 2 I/O. Errors print exactly one line on standard error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .clustering import KMeansConfig, kmeans_fit
from .data_io import (
    dumps_canonical,
    read_clustering,
    read_conllu,
    read_corpus,
    read_embeddings,
    write_report,
)
from .errors import ValidationError
from .evaluation import evaluate
from .labeling import DEFAULT_RELATIONS, generate_labels
from .model_selection import SelectionConfig, select_k

_PATH_KEYS = ("corpus", "embeddings", "conllu", "out_dir")
_INT_KEYS = ("k", "k_min", "k_max", "seed", "restarts", "max_iters", "silhouette_sample")
_FLOAT_KEYS = ("lambda", "tol")
_BOOL_KEYS = ("normalize", "emit_centroids")
_STR_KEYS = ("relations",)
_ALL_KEYS = _PATH_KEYS + _INT_KEYS + _FLOAT_KEYS + _BOOL_KEYS + _STR_KEYS

DEFAULTS = {
    "corpus": None,
    "embeddings": None,
    "conllu": None,
    "out_dir": None,
    "k": None,
    "k_min": None,
    "k_max": None,
    "lambda": 0.5,
    "seed": 0,
    "restarts": 10,
    "max_iters": 300,
    "tol": 1e-6,
    "normalize": False,
    "silhouette_sample": None,
    "relations": ",".join(DEFAULT_RELATIONS),
    "emit_centroids": False,
}


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; the contract reserves 2 for I/O
    def error(self, message):
        raise ValidationError(message)


def _add_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--corpus", default=None)
    p.add_argument("--embeddings", default=None)
    p.add_argument("--conllu", default=None)
    p.add_argument("--out-dir", dest="out_dir", default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--k-min", dest="k_min", type=int, default=None)
    p.add_argument("--k-max", dest="k_max", type=int, default=None)
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--restarts", type=int, default=None)
    p.add_argument("--max-iters", dest="max_iters", type=int, default=None)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--normalize", action="store_true", default=None)
    p.add_argument(
        "--silhouette-sample", dest="silhouette_sample", type=int, default=None
    )
    p.add_argument("--relations", default=None)
    p.add_argument("--emit-centroids", dest="emit_centroids", action="store_true", default=None)
    p.add_argument("--config", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="openintent", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("select-k", "cluster", "label", "evaluate", "pipeline"):
        _add_flags(sub.add_parser(name, add_help=True))
    return parser


def _load_config_file(path: str) -> dict:
    with open(path, encoding="utf-8") as f:
        try:
            obj = json.load(f)
        except json.JSONDecodeError as e:
            raise ValidationError(f"config file {path}: malformed JSON: {e.msg}") from e
    if not isinstance(obj, dict):
        raise ValidationError(f"config file {path}: expected a flat JSON object")
    for key in obj:
        if key not in _ALL_KEYS:
            raise ValidationError(f"config file {path}: unknown key {key!r}")
    return obj


def effective_config(args: argparse.Namespace) -> dict:
    """Layer defaults, then the config file, then explicit flags."""
    cfg = dict(DEFAULTS)
    if args.config is not None:
        file_cfg = _load_config_file(args.config)
        for key, value in file_cfg.items():
            if key in _INT_KEYS and value is not None:
                value = int(value)
            elif key in _FLOAT_KEYS and value is not None:
                value = float(value)
            elif key in _BOOL_KEYS and value is not None:
                value = bool(value)
            cfg[key] = value
    cli_values = {
        "corpus": args.corpus,
        "embeddings": args.embeddings,
        "conllu": args.conllu,
        "out_dir": args.out_dir,
        "k": args.k,
        "k_min": args.k_min,
        "k_max": args.k_max,
        "lambda": args.lam,
        "seed": args.seed,
        "restarts": args.restarts,
        "max_iters": args.max_iters,
        "tol": args.tol,
        "normalize": args.normalize,
        "silhouette_sample": args.silhouette_sample,
        "relations": args.relations,
        "emit_centroids": args.emit_centroids,
    }
    for key, value in cli_values.items():
        if value is not None:
            cfg[key] = value
    paths = [cfg[k] for k in ("corpus", "embeddings", "conllu") if cfg[k] is not None]
    if len(set(paths)) != len(paths):
        raise ValidationError("input paths must be distinct")
    return cfg


def _require(cfg: dict, key: str, command: str) -> None:
    if cfg.get(key) is None:
        flag = "--" + key.replace("_", "-")
        raise ValidationError(f"{flag} is required for {command}")


def _relations(cfg: dict) -> tuple[str, ...]:
    raw = cfg["relations"]
    if isinstance(raw, (list, tuple)):
        parts = [str(r).strip() for r in raw]
    else:
        parts = [r.strip() for r in str(raw).split(",")]
    parts = [r for r in parts if r]
    if not parts:
        raise ValidationError("relations must name at least one dependency relation")
    return tuple(parts)


def _out_dir(cfg: dict, command: str) -> Path:
    _require(cfg, "out_dir", command)
    out = Path(cfg["out_dir"])
    out.mkdir(parents=True, exist_ok=True)
    return out


def _selection_config(cfg: dict, command: str) -> SelectionConfig:
    _require(cfg, "k_min", command)
    _require(cfg, "k_max", command)
    return SelectionConfig(
        k_min=cfg["k_min"],
        k_max=cfg["k_max"],
        lam=cfg["lambda"],
        seed=cfg["seed"],
        restarts=cfg["restarts"],
        max_iters=cfg["max_iters"],
        tol=cfg["tol"],
        normalize=cfg["normalize"],
        sample=cfg["silhouette_sample"],
    )


def _run_select_k(cfg: dict, out: Path) -> int:
    _require(cfg, "corpus", "select-k")
    _require(cfg, "embeddings", "select-k")
    corpus = read_corpus(cfg["corpus"])
    embeddings = read_embeddings(cfg["embeddings"], corpus)
    result = select_k(embeddings, _selection_config(cfg, "select-k"))
    write_report(result.curve, out / "scores.csv", "csv")
    write_report(result.curve, out / "scores.json", "json")
    write_report(
        result.clustering,
        out / "clustering.json",
        "json",
        ids=corpus.ids,
        emit_centroids=cfg["emit_centroids"],
    )
    return result.best_k


def cmd_select_k(cfg: dict) -> int:
    out = _out_dir(cfg, "select-k")
    best_k = _run_select_k(cfg, out)
    print(f"chosen_k={best_k}")
    return 0


def cmd_cluster(cfg: dict) -> int:
    _require(cfg, "corpus", "cluster")
    _require(cfg, "embeddings", "cluster")
    _require(cfg, "k", "cluster")
    out = _out_dir(cfg, "cluster")
    corpus = read_corpus(cfg["corpus"])
    embeddings = read_embeddings(cfg["embeddings"], corpus)
    km = KMeansConfig(
        k=cfg["k"],
        seed=cfg["seed"],
        restarts=cfg["restarts"],
        max_iters=cfg["max_iters"],
        tol=cfg["tol"],
        normalize=cfg["normalize"],
    )
    clustering = kmeans_fit(embeddings, km)
    write_report(
        clustering,
        out / "clustering.json",
        "json",
        ids=corpus.ids,
        emit_centroids=cfg["emit_centroids"],
    )
    print(f"wrote {out / 'clustering.json'}")
    return 0


def _run_label(cfg: dict, out: Path) -> None:
    _require(cfg, "corpus", "label")
    _require(cfg, "conllu", "label")
    corpus = read_corpus(cfg["corpus"])
    parses = read_conllu(cfg["conllu"], corpus)
    clustering = read_clustering(out / "clustering.json", corpus)
    labels = generate_labels(clustering, parses, corpus, relations=_relations(cfg))
    write_report(labels, out / "labels.json", "json")


def cmd_label(cfg: dict) -> int:
    out = _out_dir(cfg, "label")
    _run_label(cfg, out)
    print(f"wrote {out / 'labels.json'}")
    return 0


def _run_evaluate(cfg: dict, out: Path) -> None:
    _require(cfg, "corpus", "evaluate")
    corpus = read_corpus(cfg["corpus"])
    clustering = read_clustering(out / "clustering.json", corpus)
    report = evaluate(clustering, corpus)
    write_report(report, out / "eval.json", "json")


def cmd_evaluate(cfg: dict) -> int:
    out = _out_dir(cfg, "evaluate")
    _run_evaluate(cfg, out)
    print(f"wrote {out / 'eval.json'}")
    return 0


def cmd_pipeline(cfg: dict) -> int:
    out = _out_dir(cfg, "pipeline")
    for key in ("corpus", "embeddings", "conllu", "k_min", "k_max"):
        _require(cfg, key, "pipeline")
    corpus = read_corpus(cfg["corpus"])
    stages = []
    notes = []
    chosen_k = None

    def run_stage(name, fn, skip_reason=None):
        nonlocal chosen_k
        if skip_reason is not None:
            stages.append({"name": name, "status": f"skipped ({skip_reason})"})
            notes.append(f"evaluation: skipped ({skip_reason})")
            return
        start = time.perf_counter()
        try:
            result = fn()
        except Exception as e:
            raise type(e)(f"pipeline stage {name}: {e}") from e
        entry = {"name": name, "status": "completed", "seconds": round(time.perf_counter() - start, 3)}
        if name == "select-k":
            chosen_k = result
            entry["chosen_k"] = result
        stages.append(entry)

    run_stage("select-k", lambda: _run_select_k(cfg, out))
    run_stage("label", lambda: _run_label(cfg, out))
    if corpus.has_gold:
        run_stage("evaluate", lambda: _run_evaluate(cfg, out))
    else:
        run_stage("evaluate", None, skip_reason="no gold")

    manifest = {
        "command": "pipeline",
        "config": {k: cfg[k] for k in _ALL_KEYS},
        "versions": {
            "openintent": __version__,
            "python": sys.version.split()[0],
            "numpy": np.__version__,
            "scipy": scipy.__version__,
        },
        "stages": stages,
        "notes": notes,
    }
    (out / "manifest.json").write_text(dumps_canonical(manifest), encoding="utf-8")
    print(f"chosen_k={chosen_k}")
    return 0


_COMMANDS = {
    "select-k": cmd_select_k,
    "cluster": cmd_cluster,
    "label": cmd_label,
    "evaluate": cmd_evaluate,
    "pipeline": cmd_pipeline,
}


def _diagnostic(e: Exception) -> str:
    return " ".join(str(e).split()) or type(e).__name__


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = effective_config(args)
        return _COMMANDS[args.command](cfg)
    except ValidationError as e:
        print(f"error: {_diagnostic(e)}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: {_diagnostic(e)}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
