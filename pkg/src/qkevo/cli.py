"""Command-line experiment runner.

Subcommands
===========
evolve        evolve feature maps for a dataset; writes pareto.json,
              history.csv, separability.csv and manifest.json per run
kernels       accuracy table: four classical kernels vs the best evolved
              quantum kernel, one row per feature combo plus a mean row
separability  SI / HMI / DSI per feature combo plus a mean row
decode        print the circuit encoded by a genome bit string
report        aggregate run directories; Spearman correlation of each
              separability index against the best-record CNOT count

Exit codes: 0 success, 1 usage/config error, 2 data error, 3 runtime error.
All data files are deterministic for a fixed config and seeds; run
metadata (including timestamps) lives only in manifest.json.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .data import (Dataset, SplitSpec, load_csv, make_split, minmax_scale,
                   sample_feature_combos, subset_features)
from .errors import ConfigError, DataError, EvaluationError, TrainingError
from .featuremap import Genome, decode, gate_counts
from .kernel import CLASSICAL_KINDS, classical_kernel, quantum_gram
from .nsga2 import (EarlyStop, EvolveConfig, EvolveResult, evolve,
                    svm_evaluator)
from .report import correlation_rows, gate_means, scan_runs
from .separability import compute_indexes
from .svm import (TrainConfig, accuracy, predict, predict_multiclass,
                  train_dual, train_multiclass)

DEFAULT_SCALE_HI = math.pi


@dataclass
class RunConfig:
    dataset_path: str
    label_column: str | int
    positive_class: str | None = None
    features: list[int] | None = None  # explicit feature list ...
    combo_count: int | None = None     # ... or sampled combos of size n_qubits
    combo_seed: int = 0
    n_qubits: int | None = None
    n_train: int = 100
    n_test: int = 50
    split_seed: int = 0
    stratified: bool = True
    scale_lo: float = 0.0
    scale_hi: float = DEFAULT_SCALE_HI
    svm: TrainConfig = field(default_factory=TrainConfig)
    evolve: EvolveConfig | None = None
    hmi_mode: str = "sum"
    out_dir: str = "runs"


class _Parser(argparse.ArgumentParser):
    """argparse variant whose usage failures exit 1, not 2."""

    def error(self, message):
        raise ConfigError(message)


def _add_common_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="JSON config file; flags override it")
    sub.add_argument("--dataset", help="CSV dataset path")
    sub.add_argument("--label-col", help="label column name (or integer index)")
    sub.add_argument("--positive-class", help="class coded +1 for binary runs")
    sub.add_argument("--qubits", type=int, help="number of qubits = features used")
    sub.add_argument("--features", help="explicit feature indices, e.g. 0,2,5")
    sub.add_argument("--combos", type=int,
                     help="sample this many random feature combinations instead")
    sub.add_argument("--combo-seed", type=int, help="seed for combo sampling")
    sub.add_argument("--seed", type=int, help="evolution seed")
    sub.add_argument("--split-seed", type=int, help="train/test split seed")
    sub.add_argument("--train-size", type=int, help="training rows (default 100)")
    sub.add_argument("--test-size", type=int, help="test rows (default 50)")
    sub.add_argument("--no-stratify", action="store_true",
                     help="disable stratified splitting")
    sub.add_argument("--scale-lo", type=float, help="feature scaling lower bound")
    sub.add_argument("--scale-hi", type=float,
                     help="feature scaling upper bound (default pi)")
    sub.add_argument("--population", type=int, help="GA population size")
    sub.add_argument("--generations", type=int, help="GA generations")
    sub.add_argument("--crossover-prob", type=float)
    sub.add_argument("--mutation-prob", type=float)
    sub.add_argument("--tournament-size", type=int)
    sub.add_argument("--target-accuracy", type=float,
                     help="early stop once best accuracy reaches this")
    sub.add_argument("--stagnation", type=int,
                     help="early stop after this many stagnant generations")
    sub.add_argument("--svm-c", type=float, help="SVM box constraint C")
    sub.add_argument("--hmi-mode", choices=("sum", "mean"))
    sub.add_argument("--out", help="output directory")


def _build_parser() -> _Parser:
    parser = _Parser(prog="qkevo", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    subs = parser.add_subparsers(dest="command")

    p_evolve = subs.add_parser("evolve", parents=[], help="evolve feature maps")
    _add_common_flags(p_evolve)
    p_evolve.set_defaults(func=cmd_evolve)

    p_kernels = subs.add_parser("kernels", help="classical vs quantum accuracy table")
    _add_common_flags(p_kernels)
    p_kernels.add_argument("--classical-only", action="store_true",
                           help="skip the evolved quantum column")
    p_kernels.add_argument("--dump-grams", metavar="DIR",
                           help="dump every training Gram matrix as CSV here")
    p_kernels.set_defaults(func=cmd_kernels)

    p_sep = subs.add_parser("separability", help="SI/HMI/DSI table")
    _add_common_flags(p_sep)
    p_sep.set_defaults(func=cmd_separability)

    p_decode = subs.add_parser("decode", help="print the circuit for a genome")
    p_decode.add_argument("genome", help="bit string of '0'/'1'")
    p_decode.add_argument("--qubits", type=int, required=True)
    p_decode.set_defaults(func=cmd_decode)

    p_report = subs.add_parser("report", help="aggregate run directories")
    p_report.add_argument("runs_dir", help="directory of completed runs")
    p_report.add_argument("--out", help="output directory (default: runs_dir)")
    p_report.set_defaults(func=cmd_report)
    return parser


def _load_config_file(path: str | None) -> dict:
    if not path:
        return {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError(f"config root must be an object: {path}")
    return cfg


def _parse_feature_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError as exc:
        raise ConfigError(f"bad --features value {text!r}: {exc}") from exc


def _pick(flag, cfg: dict, key: str, default):
    if flag is not None:
        return flag
    return cfg.get(key, default)


def _resolve(args) -> RunConfig:
    cfg = _load_config_file(getattr(args, "config", None))
    ds_cfg = cfg.get("dataset", {})
    split_cfg = cfg.get("split", {})
    scale_cfg = cfg.get("scaling", {})
    svm_cfg = cfg.get("svm", {})
    ga_cfg = cfg.get("evolve", {})
    feat_cfg = cfg.get("features", {})

    dataset_path = _pick(args.dataset, ds_cfg, "path", None)
    if not dataset_path:
        raise ConfigError("a dataset path is required (--dataset or config)")
    label_column = _pick(args.label_col, ds_cfg, "label_column", None)
    if label_column is None:
        raise ConfigError("a label column is required (--label-col or config)")
    if isinstance(label_column, str) and label_column.lstrip("-").isdigit():
        label_column = int(label_column)

    features = None
    if args.features is not None:
        features = _parse_feature_list(args.features)
    elif "list" in feat_cfg:
        features = [int(i) for i in feat_cfg["list"]]
    combo_count = _pick(args.combos, feat_cfg, "combos", None)
    if features is not None and combo_count is not None:
        raise ConfigError("choose either explicit --features or --combos, not both")
    n_qubits = _pick(args.qubits, feat_cfg, "k", None)
    if features is not None:
        if n_qubits is not None and n_qubits != len(features):
            raise ConfigError(
                f"--qubits {n_qubits} disagrees with {len(features)} features"
            )
        n_qubits = len(features)
    if n_qubits is None:
        raise ConfigError("a qubit count is required (--qubits, --features or config)")
    if combo_count is None and features is None:
        features = list(range(n_qubits))

    early = ga_cfg.get("early_stop", {})
    target_acc = _pick(args.target_accuracy, early, "target_accuracy", None)
    stagnation = _pick(args.stagnation, early, "stagnation_generations", None)
    evolve_config = EvolveConfig(
        n_qubits=int(n_qubits),
        population_size=int(_pick(args.population, ga_cfg, "population_size", 32)),
        generations=int(_pick(args.generations, ga_cfg, "generations", 50)),
        crossover_prob=float(_pick(args.crossover_prob, ga_cfg, "crossover_prob", 0.8)),
        mutation_prob=_pick(args.mutation_prob, ga_cfg, "mutation_prob", None),
        tournament_size=int(_pick(args.tournament_size, ga_cfg, "tournament_size", 2)),
        seed=int(_pick(args.seed, ga_cfg, "seed", 0)),
        early_stop=EarlyStop(
            target_accuracy=None if target_acc is None else float(target_acc),
            stagnation_generations=None if stagnation is None else int(stagnation),
        ),
    )
    train_config = TrainConfig(
        C=float(_pick(args.svm_c, svm_cfg, "C", 1.0)),
        tolerance=float(svm_cfg.get("tolerance", 1e-3)),
        max_passes=int(svm_cfg.get("max_passes", 10)),
        max_iterations=int(svm_cfg.get("max_iterations", 100_000)),
    )
    return RunConfig(
        dataset_path=str(dataset_path),
        label_column=label_column,
        positive_class=_pick(args.positive_class, ds_cfg, "positive_class", None),
        features=features,
        combo_count=None if combo_count is None else int(combo_count),
        combo_seed=int(_pick(args.combo_seed, feat_cfg, "seed", 0)),
        n_qubits=int(n_qubits),
        n_train=int(_pick(args.train_size, split_cfg, "n_train", 100)),
        n_test=int(_pick(args.test_size, split_cfg, "n_test", 50)),
        split_seed=int(_pick(args.split_seed, split_cfg, "seed", 0)),
        stratified=not args.no_stratify and bool(split_cfg.get("stratified", True)),
        scale_lo=float(_pick(args.scale_lo, scale_cfg, "lo", 0.0)),
        scale_hi=float(_pick(args.scale_hi, scale_cfg, "hi", DEFAULT_SCALE_HI)),
        svm=train_config,
        evolve=evolve_config,
        hmi_mode=_pick(getattr(args, "hmi_mode", None), cfg, "hmi_mode", "sum"),
        out_dir=str(_pick(args.out, cfg, "out", "runs")),
    )


def _feature_combos(run: RunConfig, dataset: Dataset) -> list[tuple[int, ...]]:
    if run.features is not None:
        return [tuple(run.features)]
    return sample_feature_combos(dataset.X.shape[1], run.n_qubits,
                                 run.combo_count, seed=run.combo_seed)


def _prepared_split(run: RunConfig, dataset: Dataset, combo):
    sub = subset_features(dataset, combo)
    scaled = minmax_scale(sub, run.scale_lo, run.scale_hi)
    spec = SplitSpec(n_train=run.n_train, n_test=run.n_test,
                     seed=run.split_seed, stratified=run.stratified)
    return sub, make_split(scaled, spec)


def _combo_label(combo) -> str:
    return "-".join(str(i) for i in combo)


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _pareto_records(result: EvolveResult) -> list[dict]:
    records = []
    for ind in result.pareto_front:
        genome = ind.genome.to_string()
        records.append({
            "genome": genome,
            "accuracy": ind.objectives.accuracy,
            "local_gates": ind.objectives.local_gates,
            "cnot_gates": ind.objectives.cnot_gates,
            "rank": ind.rank,
            "generation_found": result.first_seen[genome],
        })
    records.sort(key=lambda r: (-r["accuracy"], r["local_gates"],
                                r["cnot_gates"], r["genome"]))
    return records


def _write_run_outputs(out_dir: Path, run: RunConfig, combo,
                       dataset: Dataset, sub: Dataset,
                       result: EvolveResult) -> list[dict]:
    out_dir.mkdir(parents=True, exist_ok=True)
    records = _pareto_records(result)
    (out_dir / "pareto.json").write_text(
        json.dumps(records, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    _write_csv(out_dir / "history.csv",
               ["generation", "best_accuracy", "front_size", "min_local", "min_cnot"],
               [[s.generation, repr(s.best_accuracy), s.front_size,
                 s.min_local, s.min_cnot] for s in result.history])
    si, hmi, dsi_val = compute_indexes(sub.X, sub.y, hmi_mode=run.hmi_mode)
    _write_csv(out_dir / "separability.csv",
               ["dataset", "features", "n_instances", "si", "hmi", "dsi"],
               [[Path(run.dataset_path).stem, ";".join(str(i) for i in combo),
                 sub.X.shape[0], repr(si), repr(hmi), repr(dsi_val)]])
    manifest = {
        "dataset": run.dataset_path,
        "label_column": run.label_column,
        "positive_class": run.positive_class,
        "features": list(combo),
        "n_qubits": run.n_qubits,
        "split": {"n_train": run.n_train, "n_test": run.n_test,
                  "seed": run.split_seed, "stratified": run.stratified},
        "scaling": {"lo": run.scale_lo, "hi": run.scale_hi},
        "svm": asdict(run.svm),
        "evolve": asdict(run.evolve),
        "created": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
    }
    (out_dir / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return records


def cmd_evolve(args) -> int:
    run = _resolve(args)
    dataset = load_csv(run.dataset_path, run.label_column, run.positive_class)
    combos = _feature_combos(run, dataset)
    base = Path(run.out_dir)
    for combo in combos:
        sub, tts = _prepared_split(run, dataset, combo)
        result = evolve(run.evolve, svm_evaluator(tts, run.svm))
        out_dir = base if len(combos) == 1 else base / f"combo_{_combo_label(combo)}"
        records = _write_run_outputs(out_dir, run, combo, dataset, sub, result)
        best = records[0]
        print(f"{out_dir}: front size {len(records)}, "
              f"best accuracy {best['accuracy']:.4f} "
              f"(local {best['local_gates']}, cnot {best['cnot_gates']})")
    return 0


def _classical_accuracy(kind: str, tts, multiclass: bool, svm: TrainConfig) -> float:
    gram = classical_kernel(kind, tts.X_train, tts.X_train)
    cross = classical_kernel(kind, tts.X_test, tts.X_train)
    if multiclass:
        model = train_multiclass(gram, tts.y_train, svm)
        predicted = predict_multiclass(model, cross)
    else:
        model = train_dual(gram, tts.y_train, svm)
        predicted = predict(model, cross)
    return accuracy(predicted, tts.y_test)


def cmd_kernels(args) -> int:
    run = _resolve(args)
    dataset = load_csv(run.dataset_path, run.label_column, run.positive_class)
    combos = _feature_combos(run, dataset)
    quantum = not args.classical_only
    header = ["features", *CLASSICAL_KINDS] + (["quantum"] if quantum else [])
    rows = []
    for combo in combos:
        sub, tts = _prepared_split(run, dataset, combo)
        multiclass = not set(np.unique(tts.y_train)).issubset({-1, 1})
        accs = [_classical_accuracy(kind, tts, multiclass, run.svm)
                for kind in CLASSICAL_KINDS]
        if args.dump_grams:
            dump_dir = Path(args.dump_grams)
            for kind in CLASSICAL_KINDS:
                gram = classical_kernel(kind, tts.X_train, tts.X_train)
                _write_csv(dump_dir / f"gram_{_combo_label(combo)}_{kind}.csv",
                           [f"c{i}" for i in range(gram.shape[1])],
                           [[repr(v) for v in row] for row in gram])
        if quantum:
            result = evolve(run.evolve, svm_evaluator(tts, run.svm))
            records = _pareto_records(result)
            accs.append(records[0]["accuracy"])
            if args.dump_grams:
                template = decode(Genome.from_string(records[0]["genome"], run.n_qubits))
                gram = quantum_gram(template, tts.X_train)
                _write_csv(Path(args.dump_grams) / f"gram_{_combo_label(combo)}_quantum.csv",
                           [f"c{i}" for i in range(gram.shape[1])],
                           [[repr(v) for v in row] for row in gram])
        rows.append([";".join(str(i) for i in combo)] + [repr(a) for a in accs])
    means = [repr(float(np.mean([float(r[c]) for r in rows])))
             for c in range(1, len(header))]
    rows.append(["mean"] + means)
    out_path = Path(run.out_dir) / "kernels.csv"
    _write_csv(out_path, header, rows)
    print(f"wrote {out_path} ({len(rows)} rows)")
    return 0


def cmd_separability(args) -> int:
    run = _resolve(args)
    dataset = load_csv(run.dataset_path, run.label_column, run.positive_class)
    combos = _feature_combos(run, dataset)
    name = Path(run.dataset_path).stem
    rows = []
    values = []
    for combo in combos:
        sub = subset_features(dataset, combo)
        si, hmi, dsi_val = compute_indexes(sub.X, sub.y, hmi_mode=run.hmi_mode)
        values.append((si, hmi, dsi_val))
        rows.append([name, ";".join(str(i) for i in combo), sub.X.shape[0],
                     repr(si), repr(hmi), repr(dsi_val)])
    arr = np.asarray(values)
    rows.append([name, "mean", dataset.X.shape[0],
                 repr(float(arr[:, 0].mean())), repr(float(arr[:, 1].mean())),
                 repr(float(arr[:, 2].mean()))])
    out_path = Path(run.out_dir) / "separability.csv"
    _write_csv(out_path, ["dataset", "features", "n_instances", "si", "hmi", "dsi"], rows)
    print(f"wrote {out_path} ({len(rows)} rows)")
    return 0


def cmd_decode(args) -> int:
    if args.qubits is None or args.qubits < 1:
        raise ConfigError("--qubits must be a positive integer")
    genome = Genome.from_string(args.genome, args.qubits)
    template = decode(genome)
    counts = gate_counts(template)
    axis = template.rotation_axis
    print(f"qubits: {template.n_qubits}  axis: {axis}  depth: {template.depth}")
    for rep in range(template.depth):
        print(f"repetition {rep + 1}:")
        print("  " + "  ".join(f"H q{q}" for q in range(template.n_qubits)))
        for q in range(template.n_qubits):
            if template.rotation_enabled[q]:
                print(f"  R{axis}(x{q}) q{q}")
        for i, j in template.entangle_pairs:
            print(f"  CNOT q{i}->q{j}   RZ(x{i}*x{j}) q{j}   CNOT q{i}->q{j}")
    print(f"local gates: {counts.local}")
    print(f"cnot gates: {counts.cnot}")
    return 0


def cmd_report(args) -> int:
    records, warnings = scan_runs(args.runs_dir)
    for warning in warnings:
        print(f"warning: {warning}", file=sys.stderr)
    if not records:
        raise DataError(f"{args.runs_dir}: nothing to aggregate")
    out_dir = Path(args.out) if args.out else Path(args.runs_dir)
    _write_csv(out_dir / "aggregate.csv",
               ["run", "n_qubits", "si", "hmi", "dsi", "best_accuracy",
                "local_gates", "cnot_gates"],
               [[r.name, r.n_qubits, repr(r.si), repr(r.hmi), repr(r.dsi),
                 repr(r.accuracy), r.local_gates, r.cnot_gates] for r in records])
    corr = correlation_rows(records)
    _write_csv(out_dir / "correlations.csv",
               ["index", "spearman_vs_cnot", "n_runs"],
               [[name, "n/a" if value is None else repr(value), len(records)]
                for name, value in corr])
    _write_csv(out_dir / "gate_means.csv",
               ["n_qubits", "mean_local", "mean_cnot", "n_runs"],
               [[n, repr(loc), repr(cnt), cnt_runs]
                for n, loc, cnt, cnt_runs in gate_means(records)])
    for name, value in corr:
        shown = "n/a" if value is None else f"{value:+.4f}"
        print(f"spearman({name}, cnot) = {shown} over {len(records)} runs")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "func", None):
            parser.print_usage(sys.stderr)
            return 1
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except (TrainingError, EvaluationError, OSError, ValueError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
