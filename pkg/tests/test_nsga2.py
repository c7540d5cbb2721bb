"""Domination, sorting, crowding, evaluation and the evolve loop."""
import numpy as np
import pytest

from qkevo.data import SplitSpec, TrainTestSplit, load_csv, make_split, \
    minmax_scale, subset_features
from qkevo.errors import ConfigError, EvaluationError
from qkevo.featuremap import Genome, decode, gate_counts, genome_length
from qkevo.nsga2 import (EarlyStop, EvolveConfig, Objectives,
                         crowding_distance, dominates, evaluate_genome,
                         evolve, fast_nondominated_sort, svm_evaluator)

from conftest import REPO_ROOT
from oracles import peel_fronts


def test_dominates_basics():
    assert dominates(Objectives(0.9, 5, 2), Objectives(0.8, 6, 3))
    a = Objectives(0.7, 4, 4)
    assert not dominates(a, a)
    assert not dominates(Objectives(0.9, 5, 2), Objectives(0.95, 4, 1))
    assert dominates(Objectives(0.95, 4, 1), Objectives(0.9, 5, 2))


def test_dominates_requires_strict_improvement():
    assert not dominates(Objectives(0.5, 3, 3), Objectives(0.5, 3, 3))
    assert dominates(Objectives(0.5, 2, 3), Objectives(0.5, 3, 3))


def test_sort_hand_example():
    # equal accuracy; minimise the two gate counts
    objs = [Objectives(0.5, 1, 1), Objectives(0.5, 1.5, 0.5), Objectives(0.5, 2, 2)]
    fronts = fast_nondominated_sort(objs)
    assert fronts == [[0, 1], [2]]


def test_sort_identical_objectives_single_front():
    objs = [Objectives(0.5, 3, 3)] * 5
    assert fast_nondominated_sort(objs) == [[0, 1, 2, 3, 4]]


def test_sort_empty_population_rejected():
    with pytest.raises(ValueError):
        fast_nondominated_sort([])


def test_sort_matches_bruteforce_peeling():
    rng = np.random.default_rng(41)
    for _ in range(30):
        n = int(rng.integers(2, 60))
        objs = [Objectives(float(rng.integers(0, 6)) / 5.0,
                           int(rng.integers(0, 6)), int(rng.integers(0, 6)))
                for _ in range(n)]
        got = fast_nondominated_sort(objs)
        want = peel_fronts(objs)
        assert [sorted(f) for f in got] == [sorted(f) for f in want]


def test_crowding_front_of_two():
    dist = crowding_distance([Objectives(0.2, 1, 0), Objectives(0.8, 0, 1)])
    assert np.all(np.isinf(dist))


def test_crowding_three_evenly_spaced():
    objs = [Objectives(0.1, 5, 5), Objectives(0.2, 5, 5), Objectives(0.3, 5, 5)]
    dist = crowding_distance(objs)
    assert np.isinf(dist[0]) and np.isinf(dist[2])
    assert abs(dist[1] - 1.0) < 1e-12


def test_crowding_duplicates_equal():
    objs = [Objectives(0.1, 5, 5), Objectives(0.2, 5, 5),
            Objectives(0.2, 5, 5), Objectives(0.4, 5, 5)]
    dist = crowding_distance(objs)
    assert dist[1] == dist[2]


def _iris_split(k=2):
    iris = load_csv(REPO_ROOT / "data" / "iris.csv", "species")
    scaled = minmax_scale(subset_features(iris, list(range(k))), 0.0, np.pi)
    return make_split(scaled, SplitSpec(60, 30, seed=5))


def test_evaluate_constant_kernel_gives_majority_fraction():
    X = np.vstack([np.linspace(0, 1, 20), np.linspace(1, 0, 20)]).T * np.pi
    y = np.array([1.0] * 12 + [-1.0] * 8)
    split = TrainTestSplit(X_train=X, y_train=y,
                           X_test=X[:10], y_test=np.array([1.0] * 6 + [-1.0] * 4))
    genome = Genome(2, np.zeros(genome_length(2), dtype=int))  # Hadamard-only
    objectives = svm_evaluator(split)(genome)
    # the constant Gram collapses to a majority-class predictor
    assert objectives.accuracy == 0.6
    assert (objectives.local_gates, objectives.cnot_gates) == (2, 0)


def test_evaluate_passes_through_gate_counts():
    split = _iris_split()
    rng = np.random.default_rng(44)
    for _ in range(3):
        genome = Genome(2, rng.integers(0, 2, size=genome_length(2)))
        counts = gate_counts(decode(genome))
        objectives = evaluate_genome(genome, split)
        assert (objectives.local_gates, objectives.cnot_gates) == \
            (counts.local, counts.cnot)


def test_evaluate_deterministic():
    split = _iris_split()
    genome = Genome(2, [1, 0, 1, 0, 1, 0, 1])
    assert evaluate_genome(genome, split) == evaluate_genome(genome, split)


def test_evaluate_single_class_train_raises():
    X = np.random.default_rng(0).uniform(0, np.pi, size=(8, 2))
    split = TrainTestSplit(X_train=X, y_train=np.ones(8),
                           X_test=X, y_test=np.ones(8))
    with pytest.raises(EvaluationError):
        evaluate_genome(Genome(2, np.zeros(7, dtype=int)), split)


def onemax(genome):
    return Objectives(float(np.mean(genome.bits)), 0, 0)


def test_config_validation():
    with pytest.raises(ConfigError):
        EvolveConfig(n_qubits=3, population_size=5)
    with pytest.raises(ConfigError):
        EvolveConfig(n_qubits=3, crossover_prob=1.2)
    with pytest.raises(ConfigError):
        EvolveConfig(n_qubits=3, generations=-1)


def test_generations_zero_returns_initial_population():
    cfg = EvolveConfig(n_qubits=3, population_size=8, generations=0, seed=2)
    res = evolve(cfg, onemax)
    assert len(res.history) == 1
    assert len(res.population) == 8
    assert all(ind.rank >= 1 for ind in res.population)


def test_same_seed_identical_runs():
    cfg = EvolveConfig(n_qubits=4, population_size=12, generations=8, seed=9)
    res_a = evolve(cfg, onemax)
    res_b = evolve(cfg, onemax)
    assert [i.genome.to_string() for i in res_a.population] == \
        [i.genome.to_string() for i in res_b.population]
    assert res_a.history == res_b.history
    assert res_a.first_seen == res_b.first_seen


def test_onemax_progress():
    cfg = EvolveConfig(n_qubits=10, population_size=32, generations=50, seed=3)
    res = evolve(cfg, onemax)
    best = max(ind.objectives.accuracy for ind in res.pareto_front)
    assert best >= 0.95


def test_front_one_mutually_nondominating():
    cfg = EvolveConfig(n_qubits=4, population_size=12, generations=6, seed=13)

    def surrogate(genome):
        counts = gate_counts(decode(genome))
        return Objectives(float(np.mean(genome.bits)), counts.local, counts.cnot)

    res = evolve(cfg, surrogate)
    front = [ind.objectives for ind in res.pareto_front]
    for i, a in enumerate(front):
        for j, b in enumerate(front):
            if i != j:
                assert not dominates(a, b)


def test_best_accuracy_monotone_and_elitist():
    cfg = EvolveConfig(n_qubits=5, population_size=16, generations=25, seed=21)

    def surrogate(genome):
        counts = gate_counts(decode(genome))
        return Objectives(float(np.mean(genome.bits)), counts.local, counts.cnot)

    res = evolve(cfg, surrogate)
    best = [s.best_accuracy for s in res.history]
    assert all(b2 >= b1 for b1, b2 in zip(best, best[1:]))


def test_early_stop_target_accuracy():
    cfg = EvolveConfig(n_qubits=10, population_size=16, generations=200, seed=2,
                       early_stop=EarlyStop(target_accuracy=0.8))
    res = evolve(cfg, onemax)
    assert len(res.history) - 1 < 200
    assert res.history[-1].best_accuracy >= 0.8


def test_early_stop_stagnation():
    def constant(genome):
        return Objectives(0.5, 1, 1)

    cfg = EvolveConfig(n_qubits=3, population_size=8, generations=100, seed=4,
                       early_stop=EarlyStop(stagnation_generations=3))
    res = evolve(cfg, constant)
    assert len(res.history) - 1 <= 6


def test_evaluation_errors_demote_not_abort():
    def flaky(genome):
        if genome.bits[0] == 1:
            raise EvaluationError("boom")
        return Objectives(float(np.mean(genome.bits)), 1, 1)

    cfg = EvolveConfig(n_qubits=3, population_size=8, generations=4, seed=6)
    res = evolve(cfg, flaky)
    assert len(res.population) == 8
    for ind in res.population:
        if ind.genome.bits[0] == 1:
            assert ind.objectives.accuracy == 0.0


def test_first_seen_tracks_rank_one_entry():
    cfg = EvolveConfig(n_qubits=3, population_size=8, generations=5, seed=12)
    res = evolve(cfg, onemax)
    for ind in res.pareto_front:
        assert ind.genome.to_string() in res.first_seen
        gen = res.first_seen[ind.genome.to_string()]
        assert 0 <= gen <= len(res.history) - 1
