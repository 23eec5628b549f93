"""Incremental learners: frequency baseline, prototype, and accumulative.

All three consume one substitution example at a time. The frequency
baseline counts (source, target) pairs and ranks by per-source frequency
with a global-frequency fallback. The two vector methods accumulate query
representations per target; `accumulative` scores candidates by the inner
product with the accumulated vector (popularity grows the magnitude),
`prototype` by similarity to the accumulated vector divided by its count.

Vector rankings have two tiers: every ingredient observed as a target ranks
above every ingredient never observed as one.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .corpus import SubstitutionExample
from .errors import ConfigError, DataError
from .kernels import DenseScorer, SparseScorer
from .vectors import FeatureVector

STATE_FORMAT = "subtutor-state"
STATE_VERSION = 1

VECTOR_METHODS = ("prototype", "accumulative")
SIMILARITIES = ("cosine", "dot")


# ---------------------------------------------------------------------
# Rankings
# ---------------------------------------------------------------------

class Ranking:
    """Scored permutation of the candidate set; rank is the 1-based position."""

    def __init__(self, entries: list[tuple[int, float]]):
        self.entries = entries
        self._position: dict[int, int] | None = None

    def rank_of(self, ingredient: int) -> int:
        if self._position is None:
            self._position = {ing: pos for pos, (ing, _) in
                              enumerate(self.entries, 1)}
        return self._position[ingredient]

    def top(self, k: int) -> list[tuple[int, float]]:
        return self.entries[:k]

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


# ---------------------------------------------------------------------
# Frequency baseline
# ---------------------------------------------------------------------

@dataclass
class FrequencyState:
    pair_count: dict[tuple[int, int], int] = field(default_factory=dict)
    target_count: dict[int, int] = field(default_factory=dict)
    observed_targets: set[int] = field(default_factory=set)

    def train_one(self, example: SubstitutionExample,
                  query_vec: FeatureVector | None = None) -> None:
        pair = (example.source, example.target)
        self.pair_count[pair] = self.pair_count.get(pair, 0) + 1
        self.target_count[example.target] = \
            self.target_count.get(example.target, 0) + 1
        self.observed_targets.add(example.target)

    def by_source(self) -> dict[int, dict[int, int]]:
        view: dict[int, dict[int, int]] = {}
        for (source, target), count in self.pair_count.items():
            view.setdefault(source, {})[target] = count
        return view


def rank_baseline(state: FrequencyState, source: int, candidates) -> Ranking:
    """Sort by pair frequency, then global target frequency, then id."""
    pair_count = state.pair_count
    target_count = state.target_count
    ordered = sorted(
        candidates,
        key=lambda t: (-pair_count.get((source, t), 0),
                       -target_count.get(t, 0), t))
    return Ranking([(t, float(pair_count.get((source, t), 0)))
                    for t in ordered])


# ---------------------------------------------------------------------
# Vector methods
# ---------------------------------------------------------------------

@dataclass
class VectorState:
    """Accumulated query vectors and counts per observed target.

    The prototype (mean) is always derived as accumulated/count, never
    stored, so the two vector methods share one state.
    """

    dim: int
    sparse: bool
    acc: dict[int, FeatureVector] = field(default_factory=dict)
    count: dict[int, int] = field(default_factory=dict)

    @property
    def observed_targets(self) -> set[int]:
        return set(self.count)

    def train_one(self, example: SubstitutionExample,
                  query_vec: FeatureVector) -> None:
        if query_vec.dim != self.dim:
            raise DataError(f"query dim {query_vec.dim} != state dim "
                            f"{self.dim}")
        target = example.target
        if target in self.acc:
            self.acc[target].add_(query_vec)
            self.count[target] += 1
        else:
            self.acc[target] = query_vec.copy()
            self.count[target] = 1

    def prototype(self, target: int) -> FeatureVector:
        return self.acc[target].divided_by(float(self.count[target]))


class ScoringSnapshot:
    """Frozen view of a VectorState for scoring many queries.

    Rows are the observed targets in ascending id order; for the prototype
    method each row is accumulated/count. Scoring goes through the kernels
    (compiled or numpy) and matches per-vector Python dots bit for bit.
    """

    def __init__(self, state: VectorState, method: str,
                 similarity: str = "cosine"):
        if method not in VECTOR_METHODS:
            raise ConfigError(f"unknown vector method {method!r}")
        if similarity not in SIMILARITIES:
            raise ConfigError(f"unknown similarity {similarity!r}")
        self.method = method
        self.similarity = similarity
        self.dim = state.dim
        self.sparse = state.sparse
        self.observed = np.array(sorted(state.count), dtype=np.int64)
        rows = []
        for target in self.observed:
            vec = state.acc[int(target)]
            if method == "prototype":
                vec = vec.divided_by(float(state.count[int(target)]))
            rows.append(vec)
        if state.sparse:
            indptr = np.zeros(len(rows) + 1, dtype=np.int64)
            indices, data = [], []
            for k, vec in enumerate(rows):
                items = vec.sorted_items()
                indptr[k + 1] = indptr[k] + len(items)
                indices.extend(i for i, _ in items)
                data.extend(v for _, v in items)
            self.scorer = SparseScorer(
                indptr, np.array(indices, dtype=np.int64),
                np.array(data), state.dim)
        else:
            matrix = (np.vstack([v.data for v in rows]) if rows
                      else np.zeros((0, state.dim)))
            self.scorer = DenseScorer(matrix)
        self._norms = (self.scorer.row_norms()
                       if method == "prototype" and similarity == "cosine"
                       else None)

    def scores(self, query_vec: FeatureVector) -> np.ndarray:
        """Score of every observed target for this query, in observed order."""
        if len(self.observed) == 0:
            return np.zeros(0)
        if self.sparse:
            items = query_vec.sorted_items()
            q_idx = np.array([i for i, _ in items], dtype=np.int64)
            q_val = np.array([v for _, v in items])
            dots = self.scorer.dots(q_idx, q_val)
        else:
            dots = self.scorer.dots(query_vec.data)
        if self.method == "accumulative" or self.similarity == "dot":
            return dots
        q_norm = query_vec.norm()
        denom = q_norm * self._norms
        out = np.zeros(len(dots))
        nonzero = denom != 0.0
        out[nonzero] = dots[nonzero] / denom[nonzero]
        return out

    def rank_of(self, query_vec: FeatureVector, target: int) -> int:
        """1-based rank of `target` with the whole id range as candidates.

        Equivalent to building the full two-tier ranking and looking the
        target up, without materializing it.
        """
        observed = self.observed
        position = np.searchsorted(observed, target)
        is_observed = (position < len(observed)
                       and observed[position] == target)
        if not is_observed:
            # unobserved tier, ordered by id: skip all observed targets and
            # the unobserved ids smaller than this one
            return len(observed) + (target - position) + 1
        scores = self.scores(query_vec)
        own = scores[position]
        better = int(np.count_nonzero(scores > own))
        ties_before = int(np.count_nonzero(
            (scores == own) & (observed < target)))
        return 1 + better + ties_before


def rank_vector(state: VectorState, query_vec: FeatureVector, candidates,
                method: str, similarity: str = "cosine") -> Ranking:
    """Two-tier ranking: observed targets by score, then the rest by id."""
    snapshot = ScoringSnapshot(state, method, similarity)
    candidate_list = sorted(candidates)
    candidate_set = set(candidate_list)
    scores = snapshot.scores(query_vec)
    observed_entries = sorted(
        ((int(t), float(s)) for t, s in zip(snapshot.observed, scores)
         if int(t) in candidate_set),
        key=lambda pair: (-pair[1], pair[0]))
    observed_ids = set(snapshot.observed.tolist())
    unobserved_entries = [(t, 0.0) for t in candidate_list
                          if t not in observed_ids]
    return Ranking(observed_entries + unobserved_entries)


# ---------------------------------------------------------------------
# Learner façade used by the runner
# ---------------------------------------------------------------------

class FrequencyLearner:
    name = "baseline"
    needs_queries = False

    def __init__(self):
        self.state = FrequencyState()

    def train_one(self, example, query_vec=None):
        self.state.train_one(example, query_vec)

    def rank(self, example: SubstitutionExample, query_vec, candidates):
        return rank_baseline(self.state, example.source, candidates)


class VectorLearner:
    needs_queries = True

    def __init__(self, method: str, dim: int, sparse: bool,
                 similarity: str = "cosine"):
        if method not in VECTOR_METHODS:
            raise ConfigError(f"unknown vector method {method!r}")
        self.name = method
        self.method = method
        self.similarity = similarity
        self.state = VectorState(dim=dim, sparse=sparse)

    def train_one(self, example, query_vec):
        self.state.train_one(example, query_vec)

    def rank(self, example, query_vec, candidates):
        return rank_vector(self.state, query_vec, candidates,
                           self.method, self.similarity)


def make_learner(name: str, dim: int = 0, sparse: bool = True,
                 similarity: str = "cosine"):
    if name == "baseline":
        return FrequencyLearner()
    if name in VECTOR_METHODS:
        return VectorLearner(name, dim, sparse, similarity)
    raise ConfigError(f"unknown learner {name!r}; expected baseline, "
                      f"prototype, or accumulative")


# ---------------------------------------------------------------------
# State snapshots (checkpoint/resume)
# ---------------------------------------------------------------------
# JSON, versioned. Frequency: {"pairs": [[source, target, count], ...]}.
# Vector: {"dim", "sparse", "targets": [[target, count, entries], ...]}
# where entries is [[index, weight], ...] for sparse states or the dense
# value list. Floats round-trip exactly (repr-based JSON encoding).

def save_state(state, path) -> None:
    if isinstance(state, FrequencyState):
        payload = {
            "format": STATE_FORMAT, "version": STATE_VERSION,
            "kind": "frequency",
            "pairs": [[s, t, c] for (s, t), c
                      in sorted(state.pair_count.items())],
        }
    elif isinstance(state, VectorState):
        targets = []
        for target in sorted(state.count):
            vec = state.acc[target]
            entries = (vec.sorted_items() if state.sparse
                       else vec.data.tolist())
            targets.append([target, state.count[target], entries])
        payload = {
            "format": STATE_FORMAT, "version": STATE_VERSION,
            "kind": "vector", "dim": state.dim, "sparse": state.sparse,
            "targets": targets,
        }
    else:
        raise ConfigError(f"cannot serialize state of type {type(state)}")
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle)


def load_state(path):
    with open(path, encoding="utf-8") as handle:
        payload = json.load(handle)
    if payload.get("format") != STATE_FORMAT:
        raise DataError(f"{path}: not a {STATE_FORMAT} file")
    if payload.get("version") != STATE_VERSION:
        raise DataError(f"{path}: unsupported state version "
                        f"{payload.get('version')}")
    if payload["kind"] == "frequency":
        state = FrequencyState()
        for source, target, count in payload["pairs"]:
            state.pair_count[(source, target)] = count
            state.target_count[target] = \
                state.target_count.get(target, 0) + count
            state.observed_targets.add(target)
        return state
    if payload["kind"] == "vector":
        state = VectorState(dim=payload["dim"], sparse=payload["sparse"])
        for target, count, entries in payload["targets"]:
            if state.sparse:
                vec = FeatureVector.sparse(
                    state.dim, {int(i): v for i, v in entries})
            else:
                vec = FeatureVector.dense(np.array(entries))
            state.acc[target] = vec
            state.count[target] = count
        return state
    raise DataError(f"{path}: unknown state kind {payload['kind']!r}")
