"""Aggregation of evolve-run outputs and rank correlations.

A completed run directory holds ``pareto.json``, ``history.csv``,
``separability.csv`` and ``manifest.json`` as written by the ``evolve``
subcommand.  The reporter joins each run's separability indexes with the
CNOT count of its best-accuracy Pareto record, computes Spearman rank
correlations of each index against the CNOT count, and averages gate
counts per qubit size.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DataError
from .featuremap import Genome, decode, gate_counts


def average_ranks(values) -> np.ndarray:
    """Ranks 1..n with ties assigned their average rank."""
    values = np.asarray(values, dtype=float)
    order = np.argsort(values, kind="stable")
    ranks = np.empty(values.size)
    i = 0
    sorted_vals = values[order]
    while i < values.size:
        j = i
        while j + 1 < values.size and sorted_vals[j + 1] == sorted_vals[i]:
            j += 1
        ranks[order[i:j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def spearman(a, b) -> float | None:
    """Spearman rank correlation; None when undefined (constant input or
    fewer than 2 points).  Exactly +/-1.0 for perfectly monotone data."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size != b.size:
        raise ValueError("samples must have equal length")
    if a.size < 2 or np.all(a == a[0]) or np.all(b == b[0]):
        return None
    ra, rb = average_ranks(a), average_ranks(b)
    if np.array_equal(ra, rb):
        return 1.0
    if np.array_equal(ra, a.size + 1.0 - rb):
        return -1.0
    ra -= ra.mean()
    rb -= rb.mean()
    return float((ra @ rb) / np.sqrt((ra @ ra) * (rb @ rb)))


@dataclass
class RunRecord:
    name: str
    n_qubits: int
    si: float
    hmi: float
    dsi: float
    accuracy: float
    local_gates: int
    cnot_gates: int
    genome: str


def best_pareto_record(records: list[dict]) -> dict:
    """Highest accuracy; ties -> fewer total gates, then fewer CNOTs,
    then genome string."""
    if not records:
        raise DataError("empty pareto archive")
    return min(records, key=lambda r: (-r["accuracy"],
                                       r["local_gates"] + r["cnot_gates"],
                                       r["cnot_gates"], r["genome"]))


def _read_separability_row(path: Path) -> tuple[float, float, float]:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    data_rows = [r for r in rows if r.get("features") != "mean"]
    if not data_rows:
        raise DataError(f"{path}: no separability rows")
    row = data_rows[0]
    return float(row["si"]), float(row["hmi"]), float(row["dsi"])


def load_run(run_dir) -> RunRecord:
    """Read one run directory; raises DataError when anything is missing
    or inconsistent."""
    run_dir = Path(run_dir)
    pareto_path = run_dir / "pareto.json"
    sep_path = run_dir / "separability.csv"
    if not pareto_path.is_file():
        raise DataError(f"{run_dir}: missing pareto.json")
    if not sep_path.is_file():
        raise DataError(f"{run_dir}: missing separability.csv")
    try:
        records = json.loads(pareto_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise DataError(f"{pareto_path}: invalid JSON: {exc}") from exc
    if not isinstance(records, list) or not records:
        raise DataError(f"{pareto_path}: expected a non-empty list of records")
    best = best_pareto_record(records)
    manifest_path = run_dir / "manifest.json"
    n_qubits = None
    if manifest_path.is_file():
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
        n_qubits = manifest.get("n_qubits")
    if n_qubits is None:
        n_qubits = _qubits_from_genome_length(len(best["genome"]))
    counts = gate_counts(decode(Genome.from_string(best["genome"], n_qubits)))
    if counts.local != best["local_gates"] or counts.cnot != best["cnot_gates"]:
        raise DataError(f"{pareto_path}: gate counts disagree with genome")
    si, hmi, dsi = _read_separability_row(sep_path)
    return RunRecord(name=run_dir.name, n_qubits=n_qubits, si=si, hmi=hmi,
                     dsi=dsi, accuracy=float(best["accuracy"]),
                     local_gates=int(best["local_gates"]),
                     cnot_gates=int(best["cnot_gates"]), genome=best["genome"])


def _qubits_from_genome_length(length: int) -> int:
    for n in range(1, 64):
        if n + n * (n - 1) // 2 + 4 == length:
            return n
    raise DataError(f"no qubit count yields genome length {length}")


def scan_runs(runs_dir) -> tuple[list[RunRecord], list[str]]:
    """Load every run under ``runs_dir``; the directory itself counts as a
    run when it holds a pareto.json.  Returns (records, warnings)."""
    runs_dir = Path(runs_dir)
    if not runs_dir.is_dir():
        raise DataError(f"{runs_dir}: not a directory")
    candidates = []
    if (runs_dir / "pareto.json").is_file():
        candidates.append(runs_dir)
    candidates.extend(sorted(p for p in runs_dir.iterdir() if p.is_dir()))
    records, warnings = [], []
    for cand in candidates:
        if not (cand / "pareto.json").is_file() and cand != runs_dir:
            continue
        try:
            records.append(load_run(cand))
        except (DataError, KeyError, ValueError) as exc:
            warnings.append(f"skipping {cand}: {exc}")
    return records, warnings


def correlation_rows(records: list[RunRecord]) -> list[tuple[str, float | None]]:
    cnot = [r.cnot_gates for r in records]
    return [("si", spearman([r.si for r in records], cnot)),
            ("hmi", spearman([r.hmi for r in records], cnot)),
            ("dsi", spearman([r.dsi for r in records], cnot))]


def gate_means(records: list[RunRecord]) -> list[tuple[int, float, float, int]]:
    """(n_qubits, mean local, mean cnot, n_runs) per qubit size."""
    out = []
    for n in sorted({r.n_qubits for r in records}):
        group = [r for r in records if r.n_qubits == n]
        out.append((n, float(np.mean([r.local_gates for r in group])),
                    float(np.mean([r.cnot_gates for r in group])), len(group)))
    return out
