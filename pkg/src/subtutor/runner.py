"""Experiment orchestration: corpus -> knowledge -> representation ->
tutoring policy -> learner -> checkpointed evaluation.

Each run r uses seed = base_seed + r for its example order. The validation
split is evaluated at every checkpoint; the test split once, after all
training examples have been consumed. Outputs per run are a learning-curve
CSV (plus an optional order-audit file); across runs an aggregate CSV and a
manifest with content hashes of every input file. Given the same config and
base seed, every output byte except the timing columns is identical.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
from dataclasses import asdict, dataclass, field

from . import corpus, evaluation, knowledge, representation, tutoring
from .errors import ConfigError, DataError, SubtutorError
from .learners import make_learner

logger = logging.getLogger("subtutor")

DEFAULT_CHECKPOINTS = (100, 1000, 5000, 10000, 20000, "all")

LEARNERS = ("baseline", "prototype", "accumulative")


@dataclass
class ExperimentConfig:
    dataset: str = ""
    vocabulary: str = ""
    aliases: str | None = None
    classes: str | None = None
    edges: str | None = None
    assignments: str | None = None
    embeddings: str | None = None
    representation: str = "one_hot"
    learner: str = "accumulative"
    policy: str = "random"
    source_weight: float = 0.9
    link_threshold: float = 0.6
    max_hops: int = 5
    prototype_similarity: str = "cosine"
    missing_descriptive: str = "max"
    checkpoints: tuple = DEFAULT_CHECKPOINTS
    n_runs: int = 4
    base_seed: int = 0
    out_dir: str = "out"
    dump_order: bool = False

    def validate(self) -> None:
        if not self.dataset or not self.vocabulary:
            raise ConfigError("dataset and vocabulary paths are required")
        if self.learner not in LEARNERS:
            raise ConfigError(f"unknown learner {self.learner!r}")
        if self.policy not in tutoring.POLICIES:
            raise ConfigError(f"unknown policy {self.policy!r}")
        if self.representation not in representation.MODES:
            raise ConfigError(f"unknown representation "
                              f"{self.representation!r}")
        if self.n_runs < 1:
            raise ConfigError("n_runs must be >= 1")
        if not 0.0 <= self.source_weight <= 1.0:
            raise ConfigError("source_weight must be in [0, 1]")
        if self.learner != "baseline" and self.representation == "one_hot_kg":
            if not self.assignments and not (self.classes and self.edges):
                raise ConfigError("one_hot_kg needs either an assignments "
                                  "cache or classes+edges files")
        if self.learner != "baseline" and self.representation == "dense" \
                and not self.embeddings:
            raise ConfigError("dense representation needs an embeddings file")
        if not self.checkpoints:
            raise ConfigError("at least one checkpoint is required")
        for point in self.checkpoints:
            if point != "all" and (not isinstance(point, int) or point < 1):
                raise ConfigError(f"bad checkpoint {point!r}; expected a "
                                  f"positive integer or 'all'")


def parse_checkpoints(text: str) -> tuple:
    points = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        if token == "all":
            points.append("all")
        else:
            try:
                points.append(int(token))
            except ValueError as exc:
                raise ConfigError(f"bad checkpoint {token!r}") from exc
    return tuple(points)


# Flat key=value config files; '#' starts a comment. Keys match
# ExperimentConfig field names.
_BOOL_KEYS = {"dump_order"}
_INT_KEYS = {"max_hops", "n_runs", "base_seed"}
_FLOAT_KEYS = {"source_weight", "link_threshold"}


def load_config(path) -> ExperimentConfig:
    config = ExperimentConfig()
    valid = set(asdict(config))
    try:
        handle = open(path, encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    with handle:
        for lineno, line in enumerate(handle, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value")
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if key not in valid:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            try:
                if key in _BOOL_KEYS:
                    parsed = value.lower() in ("1", "true", "yes")
                elif key in _INT_KEYS:
                    parsed = int(value)
                elif key in _FLOAT_KEYS:
                    parsed = float(value)
                elif key == "checkpoints":
                    parsed = parse_checkpoints(value)
                else:
                    parsed = value
            except ValueError as exc:
                raise ConfigError(f"{path}:{lineno}: bad value for "
                                  f"{key}: {value!r}") from exc
            setattr(config, key, parsed)
    return config


def _sha256(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _stage(name: str):
    class _StageContext:
        def __enter__(self):
            return self

        def __exit__(self, exc_type, exc, tb):
            if exc is not None and isinstance(exc, SubtutorError):
                exc.args = (f"[stage: {name}] {exc}",)
            return False
    return _StageContext()


def _resolve_checkpoints(checkpoints, n_train: int) -> list[int]:
    resolved = set()
    for point in checkpoints:
        if point == "all":
            resolved.add(n_train)
        elif point <= n_train:
            resolved.add(point)
    return sorted(resolved)


def run_experiment(config: ExperimentConfig) -> dict:
    """Execute all runs; returns a summary with output paths."""
    config.validate()

    with _stage("corpus"):
        vocab = corpus.load_vocabulary(config.vocabulary)
        aliases = corpus.load_aliases(config.aliases) if config.aliases \
            else None
        dataset = corpus.load_dataset(config.dataset, vocab, aliases)
        dataset, filter_report = corpus.filter_degenerate(dataset)
        if not dataset.train:
            raise DataError("training split is empty after filtering")
        if not dataset.validation or not dataset.test:
            raise DataError("validation and test splits must be non-empty")

    # the baseline ignores representations entirely; skip building them
    representation_used = config.learner != "baseline"
    provider = None
    weights = None
    assignments = None
    if representation_used:
        with _stage("knowledge"):
            if config.representation == "one_hot_kg":
                if config.assignments:
                    assignments = knowledge.load_assignments(config.assignments)
                else:
                    hierarchy = knowledge.load_hierarchy(config.classes,
                                                         config.edges)
                    assignments = knowledge.link_and_expand(
                        vocab, hierarchy, config.link_threshold,
                        config.max_hops)
        with _stage("representation"):
            provider = representation.build_provider(
                config.representation, vocab, assignments,
                config.embeddings)
            weights = representation.compute_descriptive_weights(
                dataset.recipe_corpus, config.missing_descriptive)

    n_train = len(dataset.train)
    checkpoints = _resolve_checkpoints(config.checkpoints, n_train)
    os.makedirs(config.out_dir, exist_ok=True)

    curves = []
    run_paths = []
    for run_id in range(config.n_runs):
        seed = config.base_seed + run_id
        with _stage("tutoring"):
            order = tutoring.make_order(config.policy, dataset.train, seed)
        if config.dump_order:
            order_path = os.path.join(config.out_dir,
                                      f"order_{run_id}.txt")
            tutoring.save_order(order, order_path)
        with _stage("training"):
            curve = _run_single(config, dataset, vocab, provider, weights,
                                order, checkpoints, run_id)
        curves.append(curve)
        path = os.path.join(config.out_dir, f"run_{run_id}.csv")
        evaluation.write_curve_csv(
            path, curve, policy=config.policy, learner=config.learner,
            representation=config.representation if representation_used
            else "ignored")
        run_paths.append(path)
        logger.info("run %d finished: %d checkpoint evaluations",
                    run_id, len(curve))

    with _stage("aggregation"):
        aggregated = evaluation.aggregate_runs(curves)
    aggregate_path = os.path.join(config.out_dir, "aggregate.csv")
    evaluation.write_aggregate_csv(
        aggregate_path, aggregated, policy=config.policy,
        learner=config.learner,
        representation=config.representation if representation_used
        else "ignored")

    manifest = {
        "config": _manifest_config(config),
        "representation_used": representation_used,
        "inputs": {name: _sha256(path) for name, path in [
            ("dataset", config.dataset), ("vocabulary", config.vocabulary),
            ("aliases", config.aliases), ("classes", config.classes),
            ("edges", config.edges), ("assignments", config.assignments),
            ("embeddings", config.embeddings)] if path},
        "counts": {
            "vocabulary": len(vocab),
            "train": len(dataset.train),
            "validation": len(dataset.validation),
            "test": len(dataset.test),
            "filtered": filter_report.removed,
            "dim": provider.dim if provider else len(vocab),
        },
        "checkpoints": checkpoints,
    }
    manifest_path = os.path.join(config.out_dir, "manifest.json")
    with open(manifest_path, "w", encoding="utf-8") as handle:
        json.dump(manifest, handle, indent=2, sort_keys=True)
        handle.write("\n")

    return {"runs": run_paths, "aggregate": aggregate_path,
            "manifest": manifest_path, "curves": curves,
            "aggregated": aggregated}


def _manifest_config(config: ExperimentConfig) -> dict:
    data = asdict(config)
    data["checkpoints"] = [str(c) for c in config.checkpoints]
    return data


def _run_single(config, dataset, vocab, provider, weights, order,
                checkpoints, run_id):
    learner = make_learner(
        config.learner,
        dim=provider.dim if provider else 0,
        sparse=provider.is_sparse if provider else True,
        similarity=config.prototype_similarity)
    eval_kwargs = dict(provider=provider, weights=weights,
                       source_weight=config.source_weight,
                       run_id=run_id)
    checkpoint_set = set(checkpoints)
    curve = []
    for seen, index in enumerate(order, 1):
        example = dataset.train[index]
        query_vec = None
        if learner.needs_queries:
            query_vec = representation.query_representation(
                example, provider, weights, config.source_weight)
        learner.train_one(example, query_vec)
        if seen in checkpoint_set:
            record = evaluation.evaluate(
                learner, dataset.validation, len(vocab),
                examples_seen=seen, split="validation", **eval_kwargs)
            curve.append(record)
            logger.info("run %d: %d examples -> validation hit@1 %.4f "
                        "hit@10 %.4f mrr %.4f", run_id, seen,
                        record.hit1, record.hit10, record.mrr)
    # test split is touched exactly once, after the full stream
    curve.append(evaluation.evaluate(
        learner, dataset.test, len(vocab), examples_seen=len(order),
        split="test", **eval_kwargs))
    return curve
