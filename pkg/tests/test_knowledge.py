import math
import random
from collections import Counter

import pytest

from subtutor.corpus import Vocabulary
from subtutor.errors import DataError
from subtutor.knowledge import (ClassHierarchy, PropertyAssignment,
                                expand_hops, hop_weight, load_assignments,
                                load_hierarchy, prune_singletons,
                                save_assignments, tfidf_link, tokenize)

from conftest import write_tsv


# ---------------------------------------------------------------------
# Independent oracles (deliberately separate implementations)
# ---------------------------------------------------------------------

def oracle_tfidf_cosine(doc_a, doc_b, documents):
    """Straight-from-the-definition tf-idf cosine over token lists."""
    n = len(documents)
    df = Counter()
    for doc in documents:
        for token in set(doc):
            df[token] += 1

    def vec(doc):
        counts = Counter(doc)
        return {t: c * (math.log((1 + n) / (1 + df[t])) + 1.0)
                for t, c in counts.items()}

    va, vb = vec(doc_a), vec(doc_b)
    dot = sum(va[t] * vb[t] for t in va if t in vb)
    if dot == 0:
        return 0.0
    na = math.sqrt(sum(v * v for v in va.values()))
    nb = math.sqrt(sum(v * v for v in vb.values()))
    return dot / (na * nb)


def oracle_min_hops(hierarchy, seed_classes, max_hops):
    """Brute-force shortest hop count via iterative relaxation."""
    dist = {cid: 1 for cid in seed_classes}
    changed = True
    while changed:
        changed = False
        for child in list(dist):
            for parent in hierarchy.parents_of(child):
                candidate = dist[child] + 1
                if candidate <= max_hops and candidate < dist.get(
                        parent, max_hops + 1):
                    dist[parent] = candidate
                    changed = True
    return dist


# ---------------------------------------------------------------------
# Lexical linking
# ---------------------------------------------------------------------

class TestTfidfLink:
    def test_identical_token_multiset_links_at_one(self):
        vocab = Vocabulary(["sea salt", "tomato"])
        hierarchy = ClassHierarchy({"c1": "sea salt"}, {})
        links = tfidf_link(vocab, hierarchy, threshold=0.6)
        assert [(i, c) for i, c, _ in links] == [(0, "c1")]
        assert links[0][2] == pytest.approx(1.0, abs=1e-12)

    def test_disjoint_tokens_do_not_link(self):
        vocab = Vocabulary(["salt"])
        hierarchy = ClassHierarchy({"c1": "yellow bean pod"}, {})
        assert tfidf_link(vocab, hierarchy, threshold=0.0) == []

    def test_toy_corpus_matches_hand_oracle(self):
        # one shared token ("salt") across partially overlapping documents
        names = ["sea salt", "salt", "tomato"]
        labels = {"c1": "sea salt", "c2": "salt", "c3": "yellow bean pod"}
        vocab = Vocabulary(names)
        hierarchy = ClassHierarchy(labels, {})
        documents = [tokenize(n) for n in names] + \
            [tokenize(labels[c]) for c in sorted(labels)]
        links = {(i, c): s for i, c, s in
                 tfidf_link(vocab, hierarchy, threshold=0.6)}
        # frozen from the oracle: cos("salt", "sea salt") = 0.586... < 0.6
        for ingredient, name in enumerate(names):
            for class_id in sorted(labels):
                expected = oracle_tfidf_cosine(tokenize(name),
                                               tokenize(labels[class_id]),
                                               documents)
                if expected > 0.6:
                    assert links[(ingredient, class_id)] == \
                        pytest.approx(expected, abs=1e-12)
                else:
                    assert (ingredient, class_id) not in links
        assert set(links) == {(0, "c1"), (1, "c2")}
        cross = oracle_tfidf_cosine(tokenize("salt"), tokenize("sea salt"),
                                    documents)
        assert cross == pytest.approx(0.5861569567966913, abs=1e-12)

    def test_threshold_monotonicity(self):
        rng = random.Random(3)
        words = ["red", "bean", "salt", "oil", "dry", "leaf"]
        names = [" ".join(rng.sample(words, rng.randint(1, 3))) + f" x{i}"
                 for i in range(8)]
        labels = {f"c{i}": " ".join(rng.sample(words, rng.randint(1, 3)))
                  for i in range(6)}
        vocab = Vocabulary(names)
        hierarchy = ClassHierarchy(labels, {})
        sizes = [len(tfidf_link(vocab, hierarchy, threshold=t))
                 for t in (0.0, 0.2, 0.4, 0.6, 0.8, 1.0)]
        assert sizes == sorted(sizes, reverse=True)
        assert sizes[-1] == 0  # strictly-above semantics at 1.0

    def test_empty_hierarchy(self):
        vocab = Vocabulary(["salt"])
        assert tfidf_link(vocab, ClassHierarchy({}, {}), 0.6) == []

    def test_bad_threshold(self):
        vocab = Vocabulary(["salt"])
        with pytest.raises(DataError):
            tfidf_link(vocab, ClassHierarchy({}, {}), 1.5)


# ---------------------------------------------------------------------
# Hop expansion
# ---------------------------------------------------------------------

def chain_hierarchy(length):
    labels = {f"n{i}": f"label {i}" for i in range(length)}
    parents = {f"n{i}": {f"n{i + 1}"} for i in range(length - 1)}
    return ClassHierarchy(labels, parents)


class TestExpandHops:
    def test_chain_weights(self):
        hierarchy = chain_hierarchy(3)
        got = expand_hops([(0, "n0", 1.0)], hierarchy, max_hops=5)
        assert [(a.class_id, a.hops, a.weight) for a in got] == [
            ("n0", 1, 0.25), ("n1", 2, 0.125), ("n2", 3, 0.0625)]

    def test_cap_at_max_hops(self):
        hierarchy = chain_hierarchy(10)
        got = expand_hops([(0, "n0", 1.0)], hierarchy, max_hops=5)
        assert len(got) == 5
        assert max(a.hops for a in got) == 5

    def test_diamond_takes_minimal_hops(self):
        labels = {c: c for c in "abcd"}
        # two paths to d: a->d (short) and a->b->c->d (long)
        parents = {"a": {"b", "d"}, "b": {"c"}, "c": {"d"}}
        hierarchy = ClassHierarchy(labels, parents)
        got = {a.class_id: a.hops
               for a in expand_hops([(0, "a", 1.0)], hierarchy, 5)}
        oracle = oracle_min_hops(hierarchy, {"a"}, 5)
        assert got == oracle
        assert got["d"] == 2

    def test_cycles_terminate(self):
        labels = {c: c for c in "ab"}
        parents = {"a": {"b"}, "b": {"a"}}
        got = expand_hops([(0, "a", 1.0)], ClassHierarchy(labels, parents), 5)
        assert {(a.class_id, a.hops) for a in got} == {("a", 1), ("b", 2)}

    def test_weight_table_is_closed(self):
        rng = random.Random(7)
        allowed = {0.25, 0.125, 0.0625, 0.03125, 0.015625}
        for _ in range(25):
            n = rng.randint(2, 12)
            labels = {f"n{i}": f"n{i}" for i in range(n)}
            parents = {}
            for i in range(n):
                targets = {f"n{rng.randrange(n)}"
                           for _ in range(rng.randint(0, 2))}
                if targets:
                    parents[f"n{i}"] = targets
            hierarchy = ClassHierarchy(labels, parents)
            seeds = [(0, f"n{rng.randrange(n)}", 1.0) for _ in range(2)]
            got = expand_hops(seeds, hierarchy, 5)
            assert all(a.weight in allowed for a in got)
            assert all(1 <= a.hops <= 5 for a in got)
            assert got == sorted(
                got, key=lambda a: (a.ingredient, a.class_id))
            # min-hops against the brute-force oracle
            oracle = oracle_min_hops(hierarchy,
                                     {c for _, c, _ in seeds}, 5)
            assert {a.class_id: a.hops for a in got} == oracle

    def test_edge_iteration_order_irrelevant(self):
        labels = {f"n{i}": f"n{i}" for i in range(6)}
        edges = [("n0", "n1"), ("n0", "n2"), ("n1", "n3"), ("n2", "n3"),
                 ("n3", "n4"), ("n4", "n5")]
        seeds = [(0, "n0", 1.0), (1, "n2", 1.0)]
        results = []
        for flip in (False, True):
            ordered = list(reversed(edges)) if flip else edges
            parents = {}
            for child, parent in ordered:
                parents.setdefault(child, set()).add(parent)
            results.append(expand_hops(seeds,
                                       ClassHierarchy(labels, parents), 5))
        assert results[0] == results[1]


class TestPruneSingletons:
    def assignments(self, pairs):
        return [PropertyAssignment(i, c, 1, hop_weight(1)) for i, c in pairs]

    def test_singleton_class_dropped(self):
        got = prune_singletons(self.assignments([(0, "a"), (1, "b"),
                                                 (2, "b")]))
        assert {a.class_id for a in got} == {"b"}

    def test_two_ingredient_class_kept_for_both(self):
        got = prune_singletons(self.assignments([(0, "a"), (1, "a")]))
        assert len(got) == 2

    def test_toy_counts(self):
        pairs = [(0, "a"), (1, "a"), (0, "b"), (1, "c"), (2, "c"), (3, "d")]
        got = prune_singletons(self.assignments(pairs))
        # brute-force distinct-ingredient count per class
        per_class = {}
        for i, c in pairs:
            per_class.setdefault(c, set()).add(i)
        survivors = {c for c, members in per_class.items()
                     if len(members) >= 2}
        assert {a.class_id for a in got} == survivors == {"a", "c"}

    def test_idempotent(self):
        first = prune_singletons(self.assignments(
            [(0, "a"), (1, "a"), (2, "b"), (0, "c"), (5, "c")]))
        assert prune_singletons(first) == first


class TestHierarchyIO:
    def test_load_and_validate(self, tmp_path):
        classes = write_tsv(tmp_path / "classes.tsv",
                            [("c1", "salt"), ("c2", "mineral")])
        edges = write_tsv(tmp_path / "edges.tsv", [("c1", "c2")])
        hierarchy = load_hierarchy(classes, edges)
        assert hierarchy.parents_of("c1") == {"c2"}

    def test_unknown_parent_rejected(self, tmp_path):
        classes = write_tsv(tmp_path / "classes.tsv", [("c1", "salt")])
        edges = write_tsv(tmp_path / "edges.tsv", [("c1", "ghost")])
        with pytest.raises(DataError, match="ghost"):
            load_hierarchy(classes, edges)

    def test_assignments_round_trip(self, tmp_path):
        original = [PropertyAssignment(0, "c1", 1, hop_weight(1)),
                    PropertyAssignment(3, "c2", 4, hop_weight(4))]
        path = tmp_path / "assign.tsv"
        save_assignments(original, path)
        assert load_assignments(path) == original

    def test_inconsistent_weight_rejected(self, tmp_path):
        path = tmp_path / "assign.tsv"
        path.write_text("0\tc1\t2\t0.25\n")
        with pytest.raises(DataError, match="does not match"):
            load_assignments(path)
