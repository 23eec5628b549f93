"""Ingredient vocabulary, substitution examples, and dataset loading.

File formats:
  * vocabulary: TSV ``id<TAB>name``, ids dense from 0
  * alias map:  TSV ``raw_name<TAB>canonical_name`` (optional)
  * dataset:    JSONL, one object per line:
    ``{"split": "train"|"validation"|"test", "recipe": [name, ...],
       "source": name, "target": name}``
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .errors import DataError

SPLITS = ("train", "validation", "test")

_WHITESPACE = re.compile(r"\s+")


def canonicalize(name: str) -> str:
    """Lowercase, trim, and collapse internal whitespace runs to '_'."""
    return _WHITESPACE.sub("_", name.strip().lower())


class Vocabulary:
    """Ordered ingredient symbol set; position in `names` is the IngredientId."""

    def __init__(self, names):
        self.names: list[str] = []
        self.index: dict[str, int] = {}
        for name in names:
            canon = canonicalize(name)
            if canon in self.index:
                raise DataError(f"duplicate ingredient name after "
                                f"canonicalization: {canon!r}")
            if not canon:
                raise DataError("empty ingredient name")
            self.index[canon] = len(self.names)
            self.names.append(canon)

    def __len__(self) -> int:
        return len(self.names)

    def __contains__(self, name: str) -> bool:
        return canonicalize(name) in self.index

    def resolve(self, name: str, aliases: dict[str, str] | None = None) -> int:
        canon = canonicalize(name)
        if aliases and canon in aliases:
            canon = aliases[canon]
        ingredient = self.index.get(canon)
        if ingredient is None:
            raise DataError(f"unknown ingredient name: {name!r}")
        return ingredient

    def name_of(self, ingredient: int) -> str:
        return self.names[ingredient]


def load_vocabulary(path) -> Vocabulary:
    names: dict[int, str] = {}
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise DataError(f"{path}:{lineno}: expected 'id<TAB>name', "
                                f"got {line!r}")
            try:
                ingredient = int(parts[0])
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: non-integer id "
                                f"{parts[0]!r}") from exc
            if ingredient in names:
                raise DataError(f"{path}:{lineno}: duplicate id {ingredient}")
            names[ingredient] = parts[1]
    if sorted(names) != list(range(len(names))):
        raise DataError(f"{path}: ids must be dense integers from 0")
    return Vocabulary(names[i] for i in range(len(names)))


def save_vocabulary(vocab: Vocabulary, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for ingredient, name in enumerate(vocab.names):
            handle.write(f"{ingredient}\t{name}\n")


def load_aliases(path) -> dict[str, str]:
    """Alias TSV; both columns are canonicalized on load."""
    aliases: dict[str, str] = {}
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise DataError(f"{path}:{lineno}: expected "
                                f"'raw<TAB>canonical', got {line!r}")
            aliases[canonicalize(parts[0])] = canonicalize(parts[1])
    return aliases


@dataclass(frozen=True)
class SubstitutionExample:
    """One teaching example: replace `source` with `target` in `recipe`."""

    recipe: frozenset[int]
    source: int
    target: int

    def __post_init__(self):
        if self.source not in self.recipe:
            raise DataError(f"source {self.source} not in recipe "
                            f"{sorted(self.recipe)}")

    @property
    def remaining(self) -> frozenset[int]:
        return self.recipe - {self.source}


@dataclass
class Dataset:
    train: list[SubstitutionExample]
    validation: list[SubstitutionExample]
    test: list[SubstitutionExample]
    # None means "derive from the training split" (the default recipe
    # statistics corpus for descriptive weights).
    _recipe_corpus: list[frozenset[int]] | None = field(default=None)

    @property
    def recipe_corpus(self) -> list[frozenset[int]]:
        if self._recipe_corpus is not None:
            return self._recipe_corpus
        return [example.recipe for example in self.train]

    def split(self, name: str) -> list[SubstitutionExample]:
        if name not in SPLITS:
            raise DataError(f"unknown split {name!r}")
        return getattr(self, name)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return (self.train, self.validation, self.test) == \
               (other.train, other.validation, other.test)


@dataclass
class FilterReport:
    removed: dict[str, int]

    @property
    def total(self) -> int:
        return sum(self.removed.values())


def _parse_line(obj, lineno: int, path, vocab: Vocabulary,
                aliases, unknown: set[str]):
    if not isinstance(obj, dict):
        raise DataError(f"{path}:{lineno}: expected a JSON object")
    for key in ("split", "recipe", "source", "target"):
        if key not in obj:
            raise DataError(f"{path}:{lineno}: missing key {key!r}")
    split = obj["split"]
    if split not in SPLITS:
        raise DataError(f"{path}:{lineno}: bad split {split!r}")
    recipe_names = obj["recipe"]
    if (not isinstance(recipe_names, list) or not recipe_names
            or not all(isinstance(n, str) for n in recipe_names)):
        raise DataError(f"{path}:{lineno}: 'recipe' must be a non-empty "
                        f"list of strings")
    if not isinstance(obj["source"], str) or not isinstance(obj["target"], str):
        raise DataError(f"{path}:{lineno}: 'source' and 'target' must be "
                        f"strings")

    def resolve(name: str) -> int | None:
        try:
            return vocab.resolve(name, aliases)
        except DataError:
            unknown.add(canonicalize(name))
            return None

    recipe = {resolve(name) for name in recipe_names}
    source = resolve(obj["source"])
    target = resolve(obj["target"])
    if None in recipe or source is None or target is None:
        return None  # unknown names are reported for the whole file
    if source not in recipe:
        raise DataError(f"{path}:{lineno}: source {obj['source']!r} does not "
                        f"appear in the recipe")
    return split, SubstitutionExample(frozenset(recipe), source, target)


def load_dataset(path, vocab: Vocabulary,
                 aliases: dict[str, str] | None = None) -> Dataset:
    """Load all three splits in file order.

    Malformed lines and names that do not resolve in the vocabulary are hard
    errors; nothing is silently dropped.
    """
    splits: dict[str, list[SubstitutionExample]] = {s: [] for s in SPLITS}
    unknown: set[str] = set()
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError(f"{path}:{lineno}: malformed JSON "
                                f"({exc.msg})") from exc
            parsed = _parse_line(obj, lineno, path, vocab, aliases, unknown)
            if parsed is not None:
                split, example = parsed
                splits[split].append(example)
    if unknown:
        listing = ", ".join(sorted(unknown)[:20])
        more = "" if len(unknown) <= 20 else f" (+{len(unknown) - 20} more)"
        raise DataError(f"{path}: {len(unknown)} unknown ingredient "
                        f"name(s): {listing}{more}")
    return Dataset(splits["train"], splits["validation"], splits["test"])


def save_dataset(dataset: Dataset, vocab: Vocabulary, path) -> None:
    """Write JSONL with splits in train/validation/test order.

    Recipes are emitted sorted by ingredient id, so output is deterministic
    and reloading yields equal examples in identical order.
    """
    with open(path, "w", encoding="utf-8") as handle:
        for split in SPLITS:
            for example in dataset.split(split):
                obj = {
                    "split": split,
                    "recipe": [vocab.name_of(i) for i in sorted(example.recipe)],
                    "source": vocab.name_of(example.source),
                    "target": vocab.name_of(example.target),
                }
                handle.write(json.dumps(obj, sort_keys=False) + "\n")


def filter_degenerate(dataset: Dataset) -> tuple[Dataset, FilterReport]:
    """Drop examples whose recipe is only the source ingredient."""
    kept: dict[str, list[SubstitutionExample]] = {}
    removed: dict[str, int] = {}
    for split in SPLITS:
        examples = dataset.split(split)
        kept[split] = [e for e in examples if e.remaining]
        removed[split] = len(examples) - len(kept[split])
    filtered = Dataset(kept["train"], kept["validation"], kept["test"],
                       _recipe_corpus=dataset._recipe_corpus)
    return filtered, FilterReport(removed)
