"""Link vocabulary ingredients to an external class hierarchy.

Ingredients are matched to class labels by tf-idf cosine similarity over
name tokens, then each match is expanded upward through the superclass
relation. A class reached after h hops describes the ingredient with weight
2^-(h+1); the lexical match itself counts as hop 1, so weights start at 0.25
and halve per hop.

Hierarchy files are preprocessed TSVs (no ontology parsing here):
  * classes: ``class_id<TAB>label``
  * edges:   ``class_id<TAB>parent_id``
Assignments cache: ``ingredient_id<TAB>class_id<TAB>hops<TAB>weight``.
"""

from __future__ import annotations

import math
import re
from collections import Counter, deque
from dataclasses import dataclass

from .corpus import Vocabulary
from .errors import DataError

DEFAULT_THRESHOLD = 0.6
DEFAULT_MAX_HOPS = 5

_TOKEN_SPLIT = re.compile(r"[^0-9a-z]+")


def tokenize(text: str) -> list[str]:
    """Lowercase and split on non-alphanumeric runs; no stemming."""
    return [tok for tok in _TOKEN_SPLIT.split(text.lower()) if tok]


@dataclass
class ClassHierarchy:
    labels: dict[str, str]            # class_id -> label
    parents: dict[str, set[str]]      # class_id -> parent class_ids

    def __post_init__(self):
        for child, parent_ids in self.parents.items():
            if child not in self.labels:
                raise DataError(f"edge child {child!r} is not a known class")
            for parent in parent_ids:
                if parent not in self.labels:
                    raise DataError(f"parent {parent!r} of {child!r} is not "
                                    f"a known class")

    def parents_of(self, class_id: str) -> set[str]:
        return self.parents.get(class_id, set())

    def __len__(self) -> int:
        return len(self.labels)


def load_hierarchy(classes_path, edges_path) -> ClassHierarchy:
    labels: dict[str, str] = {}
    with open(classes_path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise DataError(f"{classes_path}:{lineno}: expected "
                                f"'class_id<TAB>label', got {line!r}")
            class_id, label = parts
            if class_id in labels:
                raise DataError(f"{classes_path}:{lineno}: duplicate class "
                                f"id {class_id!r}")
            labels[class_id] = label
    parents: dict[str, set[str]] = {}
    with open(edges_path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise DataError(f"{edges_path}:{lineno}: expected "
                                f"'class_id<TAB>parent_id', got {line!r}")
            child, parent = parts
            parents.setdefault(child, set()).add(parent)
    return ClassHierarchy(labels, parents)


@dataclass(frozen=True)
class PropertyAssignment:
    """A class property describing an ingredient, weighted by hop distance."""

    ingredient: int
    class_id: str
    hops: int
    weight: float


def hop_weight(hops: int) -> float:
    return 2.0 ** -(hops + 1)


# ---------------------------------------------------------------------
# Lexical linking
# ---------------------------------------------------------------------

def _tfidf_vector(tokens: list[str], idf: dict[str, float]) -> dict[str, float]:
    counts = Counter(tokens)
    return {tok: count * idf[tok] for tok, count in counts.items()}


def _cosine(a: dict[str, float], b: dict[str, float]) -> float:
    if len(b) < len(a):
        a, b = b, a
    dot = sum(val * b[tok] for tok, val in a.items() if tok in b)
    if dot == 0.0:
        return 0.0
    norm_a = math.sqrt(sum(v * v for v in a.values()))
    norm_b = math.sqrt(sum(v * v for v in b.values()))
    return dot / (norm_a * norm_b)


def tfidf_link(vocab: Vocabulary, hierarchy: ClassHierarchy,
               threshold: float = DEFAULT_THRESHOLD
               ) -> list[tuple[int, str, float]]:
    """Lexical ingredient->class links with cosine similarity above threshold.

    The tf-idf corpus is all ingredient names plus all class labels, one
    document each; idf(t) = ln((1+N)/(1+df(t))) + 1. "Above" is strict, so
    a threshold of 1.0 links nothing. An ingredient may link to any number
    of classes.
    """
    if not 0.0 <= threshold <= 1.0:
        raise DataError(f"threshold must be in [0, 1], got {threshold}")
    if not hierarchy.labels:
        return []

    ingredient_tokens = [tokenize(name) for name in vocab.names]
    class_ids = sorted(hierarchy.labels)
    class_tokens = {cid: tokenize(hierarchy.labels[cid]) for cid in class_ids}

    documents = ingredient_tokens + [class_tokens[cid] for cid in class_ids]
    n_docs = len(documents)
    df = Counter()
    for doc in documents:
        df.update(set(doc))
    idf = {tok: math.log((1 + n_docs) / (1 + count)) + 1.0
           for tok, count in df.items()}

    class_vectors = {cid: _tfidf_vector(class_tokens[cid], idf)
                     for cid in class_ids}
    by_token: dict[str, list[str]] = {}
    for cid in class_ids:
        for tok in set(class_tokens[cid]):
            by_token.setdefault(tok, []).append(cid)

    links: list[tuple[int, str, float]] = []
    for ingredient, tokens in enumerate(ingredient_tokens):
        vec = _tfidf_vector(tokens, idf)
        candidates = set()
        for tok in vec:
            candidates.update(by_token.get(tok, ()))
        for cid in sorted(candidates):
            sim = _cosine(vec, class_vectors[cid])
            if sim > threshold:
                links.append((ingredient, cid, sim))
    return links


# ---------------------------------------------------------------------
# Hop expansion and pruning
# ---------------------------------------------------------------------

def expand_hops(links: list[tuple[int, str, float]],
                hierarchy: ClassHierarchy,
                max_hops: int = DEFAULT_MAX_HOPS) -> list[PropertyAssignment]:
    """Breadth-first ascent from each lexically linked class.

    The linked class is hop 1, its parents hop 2, and so on up to max_hops.
    When a class is reachable along several paths (or from several lexical
    matches of the same ingredient) the minimal hop count wins. Cycles are
    cut by the visited set.
    """
    if max_hops < 1:
        raise DataError(f"max_hops must be >= 1, got {max_hops}")
    seeds: dict[int, set[str]] = {}
    for ingredient, class_id, _sim in links:
        seeds.setdefault(ingredient, set()).add(class_id)

    assignments: list[PropertyAssignment] = []
    for ingredient in sorted(seeds):
        best: dict[str, int] = {cid: 1 for cid in seeds[ingredient]}
        queue = deque((cid, 1) for cid in sorted(seeds[ingredient]))
        while queue:
            class_id, hops = queue.popleft()
            if hops == max_hops:
                continue
            for parent in sorted(hierarchy.parents_of(class_id)):
                if parent not in best:
                    best[parent] = hops + 1
                    queue.append((parent, hops + 1))
        for class_id in sorted(best):
            hops = best[class_id]
            assignments.append(PropertyAssignment(
                ingredient, class_id, hops, hop_weight(hops)))
    return assignments


def prune_singletons(assignments: list[PropertyAssignment]
                     ) -> list[PropertyAssignment]:
    """Drop classes that describe fewer than two distinct ingredients."""
    ingredients_per_class: dict[str, set[int]] = {}
    for assignment in assignments:
        ingredients_per_class.setdefault(
            assignment.class_id, set()).add(assignment.ingredient)
    keep = {cid for cid, members in ingredients_per_class.items()
            if len(members) >= 2}
    return [a for a in assignments if a.class_id in keep]


def link_and_expand(vocab: Vocabulary, hierarchy: ClassHierarchy,
                    threshold: float = DEFAULT_THRESHOLD,
                    max_hops: int = DEFAULT_MAX_HOPS
                    ) -> list[PropertyAssignment]:
    """Full pipeline: lexical links -> hop expansion -> singleton pruning."""
    links = tfidf_link(vocab, hierarchy, threshold)
    return prune_singletons(expand_hops(links, hierarchy, max_hops))


# ---------------------------------------------------------------------
# Assignment cache I/O
# ---------------------------------------------------------------------

def save_assignments(assignments: list[PropertyAssignment], path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for a in assignments:
            handle.write(f"{a.ingredient}\t{a.class_id}\t{a.hops}\t{a.weight!r}\n")


def load_assignments(path) -> list[PropertyAssignment]:
    assignments = []
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 4:
                raise DataError(f"{path}:{lineno}: expected 4 columns, got "
                                f"{len(parts)}")
            try:
                ingredient = int(parts[0])
                hops = int(parts[2])
                weight = float(parts[3])
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: bad numeric field") from exc
            if hops < 1:
                raise DataError(f"{path}:{lineno}: hops must be >= 1")
            if weight != hop_weight(hops):
                raise DataError(f"{path}:{lineno}: weight {weight} does not "
                                f"match hops {hops}")
            assignments.append(PropertyAssignment(ingredient, parts[1],
                                                  hops, weight))
    return assignments
