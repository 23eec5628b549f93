"""Ingredient feature vectors and substitution-query composition.

Three provider modes:
  * ``one_hot``:    orthogonal unit vectors, dim = |vocabulary|
  * ``one_hot_kg``: one-hot block plus a class block holding the hop
                    weights of the ingredient's hierarchy properties
  * ``dense``:      precomputed embeddings from a word2vec-style text file

A query over (recipe, source) is composed as
``source_weight * source_vec + (1 - source_weight) * context_vec`` where the
context is the descriptive-weight-normalized sum of the remaining recipe
ingredients' vectors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import SubstitutionExample, Vocabulary
from .errors import ConfigError, DataError
from .knowledge import PropertyAssignment
from .vectors import FeatureVector, weighted_sum

MODES = ("one_hot", "one_hot_kg", "dense")
DEFAULT_SOURCE_WEIGHT = 0.9


class RepresentationProvider:
    """Immutable map from IngredientId to FeatureVector."""

    def __init__(self, mode: str, dim: int,
                 vectors: dict[int, FeatureVector],
                 class_dims: dict[str, int] | None = None):
        self.mode = mode
        self.dim = dim
        self.vectors = vectors
        self.class_dims = class_dims or {}

    @property
    def is_sparse(self) -> bool:
        return self.mode != "dense"

    def vector(self, ingredient: int) -> FeatureVector:
        vec = self.vectors.get(ingredient)
        if vec is None:
            raise DataError(f"no vector for ingredient {ingredient}")
        return vec


def _one_hot_provider(vocab: Vocabulary) -> RepresentationProvider:
    dim = len(vocab)
    vectors = {i: FeatureVector.sparse(dim, {i: 1.0}) for i in range(dim)}
    return RepresentationProvider("one_hot", dim, vectors)


def _one_hot_kg_provider(vocab: Vocabulary,
                         assignments: list[PropertyAssignment]
                         ) -> RepresentationProvider:
    base = len(vocab)
    # class block laid out in sorted class-id order, after the one-hot block
    class_ids = sorted({a.class_id for a in assignments})
    class_dims = {cid: base + k for k, cid in enumerate(class_ids)}
    dim = base + len(class_ids)
    entries: dict[int, dict[int, float]] = {i: {i: 1.0} for i in range(base)}
    for a in assignments:
        if not 0 <= a.ingredient < base:
            raise DataError(f"assignment ingredient {a.ingredient} outside "
                            f"vocabulary of size {base}")
        entries[a.ingredient][class_dims[a.class_id]] = a.weight
    vectors = {i: FeatureVector.sparse(dim, e) for i, e in entries.items()}
    return RepresentationProvider("one_hot_kg", dim, vectors, class_dims)


def load_embedding_file(path, vocab: Vocabulary) -> dict[int, np.ndarray]:
    """word2vec text format: header ``count dim`` then ``name v1 ... vdim``."""
    rows: dict[int, np.ndarray] = {}
    with open(path, encoding="utf-8") as handle:
        header = handle.readline().split()
        if len(header) != 2:
            raise DataError(f"{path}: expected 'count dim' header")
        try:
            count, dim = int(header[0]), int(header[1])
        except ValueError as exc:
            raise DataError(f"{path}: non-integer header") from exc
        n_rows = 0
        for lineno, line in enumerate(handle, 2):
            if not line.strip():
                continue
            parts = line.split()
            if len(parts) != dim + 1:
                raise DataError(f"{path}:{lineno}: expected {dim} values, "
                                f"got {len(parts) - 1}")
            n_rows += 1
            if parts[0] not in vocab:
                continue  # embeddings may cover a superset of the vocabulary
            try:
                values = np.array([float(v) for v in parts[1:]])
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: bad float") from exc
            rows[vocab.resolve(parts[0])] = values
    if n_rows != count:
        raise DataError(f"{path}: header claims {count} rows, found {n_rows}")
    missing = [vocab.name_of(i) for i in range(len(vocab)) if i not in rows]
    if missing:
        listing = ", ".join(missing[:10])
        raise DataError(f"{path}: no embedding for {len(missing)} "
                        f"ingredient(s): {listing}")
    return rows


def _dense_provider(vocab: Vocabulary, embedding_path) -> RepresentationProvider:
    rows = load_embedding_file(embedding_path, vocab)
    dim = len(next(iter(rows.values())))
    vectors = {i: FeatureVector.dense(rows[i]) for i in range(len(vocab))}
    return RepresentationProvider("dense", dim, vectors)


def build_provider(mode: str, vocab: Vocabulary,
                   assignments: list[PropertyAssignment] | None = None,
                   embedding_path=None) -> RepresentationProvider:
    if mode not in MODES:
        raise ConfigError(f"unknown representation mode {mode!r}; "
                          f"expected one of {MODES}")
    if mode == "one_hot_kg" and assignments is None:
        raise ConfigError("one_hot_kg mode requires property assignments")
    if mode == "dense" and embedding_path is None:
        raise ConfigError("dense mode requires an embedding file")
    if mode == "one_hot":
        return _one_hot_provider(vocab)
    if mode == "one_hot_kg":
        return _one_hot_kg_provider(vocab, assignments)
    return _dense_provider(vocab, embedding_path)


# ---------------------------------------------------------------------
# Descriptive weights
# ---------------------------------------------------------------------

@dataclass
class DescriptiveWeights:
    """Inverse recipe-occurrence weights: rarer ingredients weigh more.

    Ingredients never seen in the statistics corpus have no defined weight;
    by default they get the maximum observed weight (treated as maximally
    rare), or raise if ``missing="error"``.
    """

    occurrences: dict[int, int]
    inverse: dict[int, float]
    missing: str = "max"

    def weight(self, ingredient: int) -> float:
        value = self.inverse.get(ingredient)
        if value is not None:
            return value
        if self.missing == "error":
            raise DataError(f"ingredient {ingredient} absent from the "
                            f"recipe statistics corpus")
        return max(self.inverse.values())

    def absent(self, vocab: Vocabulary) -> list[int]:
        return [i for i in range(len(vocab)) if i not in self.inverse]


def compute_descriptive_weights(recipe_corpus, missing: str = "max"
                                ) -> DescriptiveWeights:
    if missing not in ("max", "error"):
        raise ConfigError(f"missing policy must be 'max' or 'error', "
                          f"got {missing!r}")
    if not recipe_corpus:
        raise DataError("recipe corpus is empty")
    occurrences: dict[int, int] = {}
    for recipe in recipe_corpus:
        for ingredient in set(recipe):
            occurrences[ingredient] = occurrences.get(ingredient, 0) + 1
    if not occurrences:
        raise DataError("recipe corpus contains only empty recipes")
    inverse = {i: 1.0 / n for i, n in occurrences.items()}
    return DescriptiveWeights(occurrences, inverse, missing)


# ---------------------------------------------------------------------
# Query composition
# ---------------------------------------------------------------------

def query_representation(example: SubstitutionExample,
                         provider: RepresentationProvider,
                         weights: DescriptiveWeights,
                         source_weight: float = DEFAULT_SOURCE_WEIGHT
                         ) -> FeatureVector:
    """Weighted blend of the source vector and the recipe-context vector.

    Context ingredients are combined with their descriptive weights
    normalized to sum to one over the remaining recipe, so the result is
    invariant to rescaling all descriptive weights.
    """
    if not 0.0 <= source_weight <= 1.0:
        raise ConfigError(f"source_weight must be in [0, 1], "
                          f"got {source_weight}")
    remaining = sorted(example.remaining)
    if not remaining:
        raise DataError("query has no remaining ingredients; run "
                        "filter_degenerate first")
    raw = [weights.weight(i) for i in remaining]
    total = sum(raw)
    context_weight = 1.0 - source_weight
    terms = [(source_weight, provider.vector(example.source))]
    for ingredient, value in zip(remaining, raw):
        terms.append((context_weight * (value / total),
                      provider.vector(ingredient)))
    return weighted_sum(terms, provider.dim, provider.is_sparse)
