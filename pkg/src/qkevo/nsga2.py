"""NSGA-II over feature-map genomes with the three circuit objectives.

Objectives: maximise test accuracy, minimise local gates, minimise CNOT
gates — no weighting between them.  All randomness flows from one seeded
generator in a fixed draw order (init, then per generation: selection,
crossover, mutation), so a run is exactly reproducible from its config.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .data import TrainTestSplit
from .errors import ConfigError, EvaluationError, TrainingError
from .featuremap import Genome, decode, gate_counts, genome_length
from .kernel import quantum_cross, quantum_gram
from .svm import (TrainConfig, accuracy, predict, predict_multiclass,
                  train_dual, train_multiclass)


@dataclass(frozen=True)
class Objectives:
    accuracy: float
    local_gates: int
    cnot_gates: int


@dataclass
class Individual:
    genome: Genome
    objectives: Objectives
    rank: int = 0
    crowding: float = 0.0


@dataclass
class EarlyStop:
    target_accuracy: float | None = None
    stagnation_generations: int | None = None


@dataclass
class EvolveConfig:
    n_qubits: int
    population_size: int = 32
    generations: int = 50
    crossover_prob: float = 0.8
    mutation_prob: float | None = None  # None -> 1 / genome_length
    tournament_size: int = 2
    seed: int = 0
    early_stop: EarlyStop = field(default_factory=EarlyStop)

    def __post_init__(self):
        if self.population_size < 4 or self.population_size % 2:
            raise ConfigError("population_size must be even and >= 4")
        if self.generations < 0:
            raise ConfigError("generations must be >= 0")
        if not 0.0 <= self.crossover_prob <= 1.0:
            raise ConfigError("crossover_prob must lie in [0, 1]")
        if self.mutation_prob is not None and not 0.0 <= self.mutation_prob <= 1.0:
            raise ConfigError("mutation_prob must lie in [0, 1]")
        if self.tournament_size < 1:
            raise ConfigError("tournament_size must be >= 1")


@dataclass
class GenerationStats:
    generation: int
    best_accuracy: float
    front_size: int
    min_local: int
    min_cnot: int


@dataclass
class EvolveResult:
    population: list[Individual]
    pareto_front: list[Individual]
    history: list[GenerationStats]
    first_seen: dict[str, int]  # genome bits -> generation it first hit rank 1


def dominates(a: Objectives, b: Objectives) -> bool:
    """True iff ``a`` is no worse in all three objectives and better in one."""
    no_worse = (a.accuracy >= b.accuracy and a.local_gates <= b.local_gates
                and a.cnot_gates <= b.cnot_gates)
    better = (a.accuracy > b.accuracy or a.local_gates < b.local_gates
              or a.cnot_gates < b.cnot_gates)
    return no_worse and better


def _objective_columns(objectives) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    acc = np.array([o.accuracy for o in objectives], dtype=float)
    loc = np.array([o.local_gates for o in objectives], dtype=float)
    cnt = np.array([o.cnot_gates for o in objectives], dtype=float)
    return acc, loc, cnt


def fast_nondominated_sort(objectives) -> list[list[int]]:
    """Deb's front peeling; front k holds the points non-dominated once
    fronts 1..k-1 are removed.  Returns index lists, ascending within a front."""
    objs = list(objectives)
    if not objs:
        raise ValueError("population must be non-empty")
    acc, loc, cnt = _objective_columns(objs)
    no_worse = ((acc[:, None] >= acc[None, :]) & (loc[:, None] <= loc[None, :])
                & (cnt[:, None] <= cnt[None, :]))
    better = ((acc[:, None] > acc[None, :]) | (loc[:, None] < loc[None, :])
              | (cnt[:, None] < cnt[None, :]))
    dom = no_worse & better  # dom[p, q]: p dominates q
    n_dominators = dom.sum(axis=0)
    fronts = []
    remaining = n_dominators.copy()
    current = np.flatnonzero(remaining == 0)
    assigned = np.zeros(len(objs), dtype=bool)
    while current.size:
        fronts.append([int(i) for i in current])
        assigned[current] = True
        remaining = remaining - dom[current].sum(axis=0)
        remaining[assigned] = -1
        current = np.flatnonzero(remaining == 0)
    return fronts


def crowding_distance(objectives) -> np.ndarray:
    """Crowding distances for one front.

    Computed per objective on the sorted *unique* values, so duplicated
    objective vectors always receive equal distance; extreme values get
    infinity, interior values the normalised neighbour gap.
    """
    objs = list(objectives)
    dist = np.zeros(len(objs))
    if not objs:
        return dist
    for col in _objective_columns(objs):
        uniq = np.unique(col)
        if uniq.size < 2:
            continue
        gaps = np.empty(uniq.size)
        gaps[0] = gaps[-1] = np.inf
        if uniq.size > 2:
            gaps[1:-1] = (uniq[2:] - uniq[:-2]) / (uniq[-1] - uniq[0])
        dist += gaps[np.searchsorted(uniq, col)]
    return dist


def svm_evaluator(split: TrainTestSplit,
                  svm_config: TrainConfig | None = None) -> Callable[[Genome], Objectives]:
    """Fitness function: decode, build quantum kernels, train, score.

    Labels entirely within {-1, +1} train a single binary model; any other
    label coding trains a one-vs-one ensemble.
    """
    def evaluate(genome: Genome) -> Objectives:
        template = decode(genome)
        counts = gate_counts(template)
        if np.unique(split.y_train).size < 2:
            raise EvaluationError("training split contains a single class")
        gram = quantum_gram(template, split.X_train)
        cross = quantum_cross(template, split.X_test, split.X_train)
        binary = set(np.unique(split.y_train)).issubset({-1, 1})
        try:
            if binary:
                model = train_dual(gram, split.y_train, svm_config)
                predicted = predict(model, cross)
            else:
                ensemble = train_multiclass(gram, split.y_train, svm_config)
                predicted = predict_multiclass(ensemble, cross)
        except TrainingError as exc:
            raise EvaluationError(str(exc)) from exc
        acc = accuracy(predicted, split.y_test)
        return Objectives(acc, counts.local, counts.cnot)

    return evaluate


def evaluate_genome(genome: Genome, split: TrainTestSplit,
                    svm_config: TrainConfig | None = None) -> Objectives:
    """One-shot form of :func:`svm_evaluator`."""
    return svm_evaluator(split, svm_config)(genome)


def _safe_eval(evaluator: Callable[[Genome], Objectives], genome: Genome) -> Objectives:
    try:
        return evaluator(genome)
    except EvaluationError:
        counts = gate_counts(decode(genome))
        return Objectives(0.0, counts.local, counts.cnot)


def _assign_fronts(pop: list[Individual]) -> None:
    fronts = fast_nondominated_sort([ind.objectives for ind in pop])
    for k, front in enumerate(fronts):
        dist = crowding_distance([pop[i].objectives for i in front])
        for d, i in zip(dist, front):
            pop[i].rank = k + 1
            pop[i].crowding = float(d)


def _stats(pop: list[Individual], generation: int) -> GenerationStats:
    front = [ind for ind in pop if ind.rank == 1]
    return GenerationStats(
        generation=generation,
        best_accuracy=max(ind.objectives.accuracy for ind in front),
        front_size=len(front),
        min_local=min(ind.objectives.local_gates for ind in front),
        min_cnot=min(ind.objectives.cnot_gates for ind in front),
    )


def _tournament(pop: list[Individual], draws: np.ndarray) -> list[Individual]:
    parents = []
    for row in draws:
        best = pop[row[0]]
        for idx in row[1:]:
            cand = pop[idx]
            if (cand.rank, -cand.crowding) < (best.rank, -best.crowding):
                best = cand
        parents.append(best)
    return parents


def _make_offspring(parents: list[Individual], config: EvolveConfig,
                    mutation_prob: float, rng: np.random.Generator) -> np.ndarray:
    pop_size = config.population_size
    length = genome_length(config.n_qubits)
    cross_draws = rng.random(pop_size // 2)
    cut_draws = rng.integers(1, length, size=pop_size // 2)
    children = np.empty((pop_size, length), dtype=np.int8)
    for pair in range(pop_size // 2):
        bits_a = parents[2 * pair].genome.bits
        bits_b = parents[2 * pair + 1].genome.bits
        if cross_draws[pair] < config.crossover_prob:
            cut = int(cut_draws[pair])
            children[2 * pair] = np.concatenate([bits_a[:cut], bits_b[cut:]])
            children[2 * pair + 1] = np.concatenate([bits_b[:cut], bits_a[cut:]])
        else:
            children[2 * pair] = bits_a
            children[2 * pair + 1] = bits_b
    flips = rng.random((pop_size, length)) < mutation_prob
    return children ^ flips


def _refill(merged: list[Individual], pop_size: int) -> list[Individual]:
    """Environmental selection: fill by front, truncate the last front by
    crowding (descending), preferring higher accuracy among ties so the
    best-accuracy point always survives."""
    fronts = fast_nondominated_sort([ind.objectives for ind in merged])
    new_pop: list[Individual] = []
    for k, front in enumerate(fronts):
        members = [merged[i] for i in front]
        dist = crowding_distance([ind.objectives for ind in members])
        for ind, d in zip(members, dist):
            ind.rank = k + 1
            ind.crowding = float(d)
        if len(new_pop) + len(members) <= pop_size:
            new_pop.extend(members)
            if len(new_pop) == pop_size:
                break
        else:
            order = sorted(range(len(members)),
                           key=lambda t: (-dist[t], -members[t].objectives.accuracy, t))
            new_pop.extend(members[t] for t in order[:pop_size - len(new_pop)])
            break
    return new_pop


def evolve(config: EvolveConfig,
           evaluator: Callable[[Genome], Objectives]) -> EvolveResult:
    """Run the NSGA-II loop and return the final population, the rank-1
    front, per-generation history and first-seen generations."""
    length = genome_length(config.n_qubits)
    mutation_prob = (config.mutation_prob if config.mutation_prob is not None
                     else 1.0 / length)
    rng = np.random.default_rng(config.seed)

    init_bits = rng.integers(0, 2, size=(config.population_size, length), dtype=np.int8)
    genomes = [Genome(config.n_qubits, bits.copy()) for bits in init_bits]
    pop = [Individual(g, _safe_eval(evaluator, g)) for g in genomes]
    _assign_fronts(pop)

    history = [_stats(pop, 0)]
    first_seen: dict[str, int] = {}
    for ind in pop:
        if ind.rank == 1:
            first_seen.setdefault(ind.genome.to_string(), 0)

    stagnation = 0
    early = config.early_stop
    for gen in range(1, config.generations + 1):
        last = history[-1]
        if early.target_accuracy is not None and last.best_accuracy >= early.target_accuracy:
            break
        if (early.stagnation_generations is not None
                and stagnation >= early.stagnation_generations):
            break

        draws = rng.integers(0, config.population_size,
                             size=(config.population_size, config.tournament_size))
        parents = _tournament(pop, draws)
        child_bits = _make_offspring(parents, config, mutation_prob, rng)
        child_genomes = [Genome(config.n_qubits, bits.copy()) for bits in child_bits]
        offspring = [Individual(g, _safe_eval(evaluator, g)) for g in child_genomes]
        pop = _refill(pop + offspring, config.population_size)

        stats = _stats(pop, gen)
        history.append(stats)
        for ind in pop:
            if ind.rank == 1:
                first_seen.setdefault(ind.genome.to_string(), gen)
        if (stats.best_accuracy == last.best_accuracy
                and stats.front_size == last.front_size):
            stagnation += 1
        else:
            stagnation = 0

    pareto = [ind for ind in pop if ind.rank == 1]
    return EvolveResult(population=pop, pareto_front=pareto, history=history,
                        first_seen=first_seen)
