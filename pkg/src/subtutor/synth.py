"""Synthetic corpus generator for desk-scale experiments and tests.

Ground truth is a fixed table of (source -> target) substitution rules.
Rules are grouped into families that share a target; family members also
share a name token with their family's class label, so the tf-idf linker
recovers the family classes and the knowledge-extended representation gets
a real generalization signal (a family sibling predicts the same target).
Each family class has its own superclass so hop expansion is exercised
without creating a shared root dimension across families.

Examples are drawn by sampling a rule with Zipf-like popularity
(probability proportional to 1/rank^skew), then a recipe containing the
rule's source. A perfect learner can therefore approach hit@1 = 1.

Emitted files use exactly the corpus and hierarchy formats of this package.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .corpus import Dataset, SubstitutionExample, Vocabulary, save_dataset, \
    save_vocabulary
from .errors import ConfigError
from .knowledge import ClassHierarchy

DEFAULT_SYNTH = dict(n_ingredients=50, n_classes=14, n_recipes=120,
                     n_examples=1200, n_rules=20, skew=1.0, seed=7)


@dataclass(frozen=True)
class SynthConfig:
    n_ingredients: int = 50
    n_classes: int = 14
    n_recipes: int = 120
    n_examples: int = 1200
    n_rules: int = 20
    skew: float = 1.0
    seed: int = 7

    def __post_init__(self):
        for name in ("n_ingredients", "n_classes", "n_recipes",
                     "n_examples", "n_rules"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1")
        if self.skew < 0:
            raise ConfigError("skew must be >= 0")

    @property
    def n_families(self) -> int:
        return min(self.n_rules, max(1, self.n_classes // 2))


@dataclass(frozen=True)
class SynthRule:
    source: int
    target: int
    family: int
    probability: float


def _validate(config: SynthConfig) -> None:
    pairs = config.n_ingredients * (config.n_ingredients - 1)
    if config.n_rules > pairs:
        raise ConfigError(f"{config.n_rules} rules need more ingredient "
                          f"pairs than {config.n_ingredients} ingredients "
                          f"provide ({pairs})")
    needed = config.n_rules + config.n_families + 2
    if config.n_ingredients < needed:
        raise ConfigError(f"need at least {needed} ingredients for "
                          f"{config.n_rules} rule sources, "
                          f"{config.n_families} targets, and 2 fillers; "
                          f"got {config.n_ingredients}")
    if config.n_recipes < config.n_rules:
        raise ConfigError(f"need at least one recipe per rule source: "
                          f"n_recipes={config.n_recipes} < "
                          f"n_rules={config.n_rules}")


def _rule_probabilities(n_rules: int, skew: float) -> np.ndarray:
    raw = (np.arange(n_rules) + 1.0) ** -skew
    return raw / raw.sum()


def generate(config: SynthConfig
             ) -> tuple[Vocabulary, Dataset, ClassHierarchy, list[SynthRule]]:
    _validate(config)
    rng = np.random.default_rng(config.seed)
    families = config.n_families

    # vocabulary: rule sources, family targets, then fillers.
    # A source's name shares its leading token with the family class label
    # ("famNN"), while the member token ("mK") recurs across families and
    # stays low-idf, which keeps the lexical match above the 0.6 threshold.
    names: list[str] = []
    member_index = [0] * families
    for rule in range(config.n_rules):
        family = rule % families
        member_index[family] += 1
        names.append(f"fam{family:02d}_m{member_index[family]}")
    for family in range(families):
        names.append(f"tgt{family:02d}")
    n_fillers = config.n_ingredients - len(names)
    names.extend(f"filler_{k:03d}" for k in range(n_fillers))
    vocab = Vocabulary(names)

    rules = []
    probabilities = _rule_probabilities(config.n_rules, config.skew)
    for rule in range(config.n_rules):
        rules.append(SynthRule(source=rule,
                               target=config.n_rules + rule % families,
                               family=rule % families,
                               probability=float(probabilities[rule])))

    # hierarchy: one class per family, one superclass per family (while the
    # class budget lasts), unmatchable spare classes for the remainder
    labels: dict[str, str] = {}
    parents: dict[str, set[str]] = {}
    n_supers = min(families, config.n_classes - families)
    for family in range(families):
        labels[f"fam{family:02d}"] = f"fam{family:02d}"
    for family in range(n_supers):
        labels[f"supfam{family:02d}"] = f"supfam{family:02d}"
        parents[f"fam{family:02d}"] = {f"supfam{family:02d}"}
    for spare in range(config.n_classes - families - n_supers):
        labels[f"sparecat{spare:02d}"] = f"sparecat{spare:02d}"
    hierarchy = ClassHierarchy(labels, parents)

    # recipes: every rule source anchors at least one recipe
    filler_ids = np.arange(config.n_ingredients - n_fillers,
                           config.n_ingredients)
    recipes_by_source: dict[int, list[frozenset[int]]] = \
        {rule.source: [] for rule in rules}
    for i in range(config.n_recipes):
        anchor = rules[i % config.n_rules].source
        n_fill = int(rng.integers(2, 5)) if n_fillers >= 4 else n_fillers
        chosen = rng.choice(filler_ids, size=min(n_fill, n_fillers),
                            replace=False)
        recipes_by_source[anchor].append(
            frozenset({anchor} | {int(f) for f in chosen}))

    rule_draws = rng.choice(config.n_rules, size=config.n_examples,
                            p=probabilities)
    examples = []
    for rule_id in rule_draws:
        rule = rules[int(rule_id)]
        options = recipes_by_source[rule.source]
        recipe = options[int(rng.integers(len(options)))]
        examples.append(SubstitutionExample(recipe, rule.source, rule.target))

    n_train = int(config.n_examples * 0.70)
    n_val = int(config.n_examples * 0.15)
    dataset = Dataset(examples[:n_train],
                      examples[n_train:n_train + n_val],
                      examples[n_train + n_val:])
    return vocab, dataset, hierarchy, rules


def write_synth_files(config: SynthConfig, out_dir) -> dict[str, str]:
    """Generate and write all artifact files; byte-identical per seed."""
    vocab, dataset, hierarchy, rules = generate(config)
    os.makedirs(out_dir, exist_ok=True)
    paths = {name: os.path.join(out_dir, filename) for name, filename in [
        ("vocabulary", "vocabulary.tsv"), ("dataset", "dataset.jsonl"),
        ("classes", "classes.tsv"), ("edges", "edges.tsv"),
        ("rules", "rules.tsv")]}
    save_vocabulary(vocab, paths["vocabulary"])
    save_dataset(dataset, vocab, paths["dataset"])
    with open(paths["classes"], "w", encoding="utf-8") as handle:
        for class_id in sorted(hierarchy.labels):
            handle.write(f"{class_id}\t{hierarchy.labels[class_id]}\n")
    with open(paths["edges"], "w", encoding="utf-8") as handle:
        for child in sorted(hierarchy.parents):
            for parent in sorted(hierarchy.parents[child]):
                handle.write(f"{child}\t{parent}\n")
    with open(paths["rules"], "w", encoding="utf-8") as handle:
        for rule in rules:
            handle.write(f"{vocab.name_of(rule.source)}\t"
                         f"{vocab.name_of(rule.target)}\t"
                         f"{rule.family}\t{rule.probability!r}\n")
    return paths
