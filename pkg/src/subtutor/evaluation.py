"""Rank-based metrics over an evaluation split.

Every substitution sample is scored separately: the learner ranks all
candidate ingredients for the sample's query and the 1-based rank of the
sample's target is recorded. hit@k is the fraction of samples with rank at
most k (inclusive); MRR is the mean of reciprocal ranks.

CSV layout (one row per checkpoint):
  run_id,policy,learner,representation,examples_seen,split,hit1,hit10,mrr,seconds
Aggregated CSV replaces run_id with per-checkpoint mean/std columns.
"""

from __future__ import annotations

import csv
import statistics
import time
from dataclasses import dataclass, field

import numpy as np

from .corpus import SubstitutionExample
from .errors import DataError
from .learners import (FrequencyLearner, ScoringSnapshot, VectorLearner)
from .representation import (DescriptiveWeights, RepresentationProvider,
                             query_representation)

DEFAULT_K_VALUES = (1, 10)


@dataclass
class EvalRecord:
    examples_seen: int
    split: str
    run_id: int
    hits: dict[int, float]
    mrr: float
    wall_time: float = 0.0

    @property
    def hit1(self) -> float:
        return self.hits.get(1, float("nan"))

    @property
    def hit10(self) -> float:
        return self.hits.get(10, float("nan"))


# A learning curve is a list of EvalRecords with increasing examples_seen.
LearningCurve = list[EvalRecord]


def metrics_from_ranks(ranks: list[int],
                       k_values=DEFAULT_K_VALUES) -> tuple[dict[int, float], float]:
    """hit@k for each k plus MRR, from 1-based target ranks."""
    if not ranks:
        raise DataError("cannot evaluate an empty split")
    n = len(ranks)
    hits = {k: sum(1 for r in ranks if r <= k) / n for k in k_values}
    mrr = sum(1.0 / r for r in ranks) / n
    return hits, mrr


# ---------------------------------------------------------------------
# Per-sample target ranks
# ---------------------------------------------------------------------

def _baseline_ranks(learner: FrequencyLearner,
                    examples: list[SubstitutionExample],
                    n_candidates: int) -> list[int]:
    state = learner.state
    counts = np.zeros(n_candidates, dtype=np.int64)
    for target, count in state.target_count.items():
        counts[target] = count
    # global order: target frequency descending, then id ascending
    order = np.lexsort((np.arange(n_candidates), -counts))
    position = np.empty(n_candidates, dtype=np.int64)
    position[order] = np.arange(n_candidates)
    by_source = state.by_source()

    ranks = []
    for example in examples:
        pairs = by_source.get(example.source, {})
        own = pairs.get(example.target, 0)
        if own > 0:
            better = sum(
                1 for t, c in pairs.items()
                if c > own or (c == own and position[t] < position[example.target]))
        else:
            # every nonzero pair outranks; the zero tier is in global order
            ahead_in_zero_tier = position[example.target] - sum(
                1 for t in pairs if position[t] < position[example.target])
            better = len(pairs) + ahead_in_zero_tier
        ranks.append(1 + better)
    return ranks


def _vector_ranks(learner: VectorLearner,
                  examples: list[SubstitutionExample],
                  provider: RepresentationProvider,
                  weights: DescriptiveWeights,
                  source_weight: float) -> list[int]:
    snapshot = ScoringSnapshot(learner.state, learner.method,
                               learner.similarity)
    ranks = []
    for example in examples:
        query_vec = query_representation(example, provider, weights,
                                         source_weight)
        ranks.append(snapshot.rank_of(query_vec, example.target))
    return ranks


def target_ranks(learner, examples, n_candidates: int,
                 provider: RepresentationProvider | None = None,
                 weights: DescriptiveWeights | None = None,
                 source_weight: float = 0.9) -> list[int]:
    """1-based rank of each sample's target, candidates = all ids."""
    if isinstance(learner, FrequencyLearner):
        return _baseline_ranks(learner, examples, n_candidates)
    if provider is None or weights is None:
        raise DataError("vector learners need a provider and descriptive "
                        "weights for evaluation")
    return _vector_ranks(learner, examples, provider, weights, source_weight)


def evaluate(learner, examples, n_candidates: int, *,
             provider: RepresentationProvider | None = None,
             weights: DescriptiveWeights | None = None,
             source_weight: float = 0.9,
             k_values=DEFAULT_K_VALUES,
             examples_seen: int = 0, split: str = "validation",
             run_id: int = 0) -> EvalRecord:
    """Evaluate the full split; read-only on the learner state."""
    started = time.perf_counter()
    ranks = target_ranks(learner, examples, n_candidates,
                         provider, weights, source_weight)
    hits, mrr = metrics_from_ranks(ranks, k_values)
    return EvalRecord(examples_seen=examples_seen, split=split,
                      run_id=run_id, hits=hits, mrr=mrr,
                      wall_time=time.perf_counter() - started)


# ---------------------------------------------------------------------
# Multi-run aggregation
# ---------------------------------------------------------------------

@dataclass
class AggregateRecord:
    examples_seen: int
    split: str
    n_runs: int
    mean: dict[str, float] = field(default_factory=dict)
    std: dict[str, float] = field(default_factory=dict)


def _std(values: list[float]) -> float:
    return statistics.stdev(values) if len(values) > 1 else 0.0


def aggregate_runs(curves: list[LearningCurve]) -> list[AggregateRecord]:
    """Per-checkpoint mean and sample standard deviation across runs."""
    if not curves:
        raise DataError("no curves to aggregate")
    grid = [(rec.split, rec.examples_seen) for rec in curves[0]]
    for curve in curves[1:]:
        if [(rec.split, rec.examples_seen) for rec in curve] != grid:
            raise DataError("learning curves have mismatched checkpoint "
                            "grids; cannot aggregate")
    aggregated = []
    for idx, (split, seen) in enumerate(grid):
        records = [curve[idx] for curve in curves]
        metrics = {
            "hit1": [rec.hit1 for rec in records],
            "hit10": [rec.hit10 for rec in records],
            "mrr": [rec.mrr for rec in records],
            "seconds": [rec.wall_time for rec in records],
        }
        aggregated.append(AggregateRecord(
            examples_seen=seen, split=split, n_runs=len(records),
            mean={k: statistics.mean(v) for k, v in metrics.items()},
            std={k: _std(v) for k, v in metrics.items()}))
    return aggregated


# ---------------------------------------------------------------------
# CSV output
# ---------------------------------------------------------------------

CURVE_HEADER = ["run_id", "policy", "learner", "representation",
                "examples_seen", "split", "hit1", "hit10", "mrr", "seconds"]


def write_curve_csv(path, curve: LearningCurve, *, policy: str,
                    learner: str, representation: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(CURVE_HEADER)
        for rec in curve:
            writer.writerow([rec.run_id, policy, learner, representation,
                             rec.examples_seen, rec.split,
                             repr(rec.hit1), repr(rec.hit10), repr(rec.mrr),
                             f"{rec.wall_time:.6f}"])


def write_aggregate_csv(path, aggregated: list[AggregateRecord], *,
                        policy: str, learner: str,
                        representation: str) -> None:
    header = ["policy", "learner", "representation", "examples_seen",
              "split", "n_runs"]
    for metric in ("hit1", "hit10", "mrr", "seconds"):
        header += [f"{metric}_mean", f"{metric}_std"]
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        for rec in aggregated:
            row = [policy, learner, representation, rec.examples_seen,
                   rec.split, rec.n_runs]
            for metric in ("hit1", "hit10", "mrr", "seconds"):
                row += [repr(rec.mean[metric]), repr(rec.std[metric])]
            writer.writerow(row)
