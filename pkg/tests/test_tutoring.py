import itertools
import math
from collections import Counter

import numpy as np
import pytest

from subtutor.corpus import SubstitutionExample
from subtutor.errors import ConfigError
from subtutor.tutoring import (balanced_order, balanced_schedule, make_order,
                               random_order, save_order)


def examples_from_bucket_sizes(sizes):
    """One (source, target) pair per bucket; each bucket `size` examples."""
    out = []
    for pair_id, size in enumerate(sizes):
        source, target = pair_id, 1000 + pair_id
        out.extend(
            SubstitutionExample(frozenset({source, 999}), source, target)
            for _ in range(size))
    return out


def reference_balanced(train, rng_seed):
    """Plain-scan reference for the two-loop balanced procedure.

    Independent of the heap implementation: each step scans all reduced
    buckets for the largest remaining capacity (ties to the smallest
    (source, target) pair) and draws one random unused example.
    """
    rng = np.random.default_rng(rng_seed)
    buckets = {}
    for index, example in enumerate(train):
        buckets.setdefault((example.source, example.target),
                           []).append(index)
    iterations = []
    while buckets:
        quota = {key: int(math.floor(math.log2(len(members)))) + 1
                 for key, members in buckets.items()}
        emitted = []
        while any(quota.values()):
            key = min((k for k, q in quota.items() if q > 0),
                      key=lambda k: (-quota[k], k))
            members = buckets[key]
            pick = int(rng.integers(len(members)))
            members[pick], members[-1] = members[-1], members[pick]
            emitted.append(members.pop())
            quota[key] -= 1
        buckets = {k: m for k, m in buckets.items() if m}
        iterations.append(emitted)
    return iterations


class TestRandomOrder:
    def test_same_seed_same_permutation(self):
        train = examples_from_bucket_sizes([3, 2, 4])
        assert random_order(train, 5) == random_order(train, 5)
        assert random_order(train, 5) != random_order(train, 6)

    def test_is_permutation(self):
        train = examples_from_bucket_sizes([7, 1, 5])
        order = random_order(train, 0)
        assert sorted(order) == list(range(len(train)))

    def test_empty(self):
        assert random_order([], 3) == []

    def test_all_permutations_occur_uniformly(self):
        # n=3: all 6 permutations appear over many seeds, roughly evenly
        train = examples_from_bucket_sizes([1, 1, 1])
        counts = Counter(tuple(random_order(train, seed))
                         for seed in range(10_000))
        assert set(counts) == set(itertools.permutations(range(3)))
        expected = 10_000 / 6
        chi_square = sum((count - expected) ** 2 / expected
                         for count in counts.values())
        assert chi_square < 20.52  # chi2 critical value, df=5, p=0.001


class TestBalancedOrder:
    def test_first_iteration_quotas_8_1(self):
        train = examples_from_bucket_sizes([8, 1])
        schedule = balanced_schedule(train, 0)
        first = schedule[0]
        assert len(first) == 5  # floor(log2 8)+1 = 4, floor(log2 1)+1 = 1
        drawn_per_bucket = Counter(train[i].source for i in first)
        assert drawn_per_bucket == {0: 4, 1: 1}
        remaining = Counter(train[i].source
                            for it in schedule[1:] for i in it)
        assert remaining == {0: 4}

    def test_bucket_size_100_first_quota_is_7(self):
        train = examples_from_bucket_sizes([100])
        schedule = balanced_schedule(train, 1)
        assert len(schedule[0]) == 7

    def test_emits_permutation(self):
        train = examples_from_bucket_sizes([8, 1, 30, 2, 2])
        order = balanced_order(train, 9)
        assert sorted(order) == list(range(len(train)))

    def test_determinism(self):
        train = examples_from_bucket_sizes([5, 9, 1])
        assert balanced_order(train, 4) == balanced_order(train, 4)

    def test_matches_reference_implementation(self):
        train = examples_from_bucket_sizes([12, 7, 1, 10])  # 30 examples
        got = balanced_schedule(train, 33)
        expected = reference_balanced(train, 33)
        assert got == expected

    def test_reference_agreement_on_random_configs(self):
        rng = np.random.default_rng(100)
        for trial in range(10):
            sizes = [int(rng.integers(1, 40))
                     for _ in range(int(rng.integers(1, 8)))]
            train = examples_from_bucket_sizes(sizes)
            seed = int(rng.integers(1_000_000))
            got = balanced_schedule(train, seed)
            assert got == reference_balanced(train, seed)
            assert sorted(i for it in got for i in it) == \
                list(range(len(train)))

    def test_first_iteration_draw_counts(self):
        rng = np.random.default_rng(200)
        for _ in range(10):
            sizes = [int(rng.integers(1, 200)) for _ in range(6)]
            train = examples_from_bucket_sizes(sizes)
            first = balanced_schedule(train, 3)[0]
            drawn = Counter(train[i].source for i in first)
            for pair_id, size in enumerate(sizes):
                assert drawn[pair_id] == min(size, size.bit_length())

    def test_every_surviving_bucket_draws_each_iteration(self):
        train = examples_from_bucket_sizes([33, 4, 1, 17])
        schedule = balanced_schedule(train, 8)
        remaining = Counter(train[i].source for i in range(len(train)))
        for iteration in schedule:
            drawn = Counter(train[i].source for i in iteration)
            for pair_id, left in remaining.items():
                if left > 0:
                    assert drawn[pair_id] >= 1
            remaining -= drawn

    def test_quotas_shrink_with_current_size(self):
        # size 8 -> quota 4; 4 remain -> quota 3; 1 remains -> quota 1
        train = examples_from_bucket_sizes([8])
        schedule = balanced_schedule(train, 2)
        assert [len(it) for it in schedule] == [4, 3, 1]

    def test_empty_train(self):
        assert balanced_order([], 0) == []


class TestPolicyRegistry:
    def test_make_order(self):
        train = examples_from_bucket_sizes([3, 3])
        assert sorted(make_order("random", train, 1)) == list(range(6))
        assert sorted(make_order("balanced", train, 1)) == list(range(6))
        with pytest.raises(ConfigError):
            make_order("alphabetical", train, 1)

    def test_save_order(self, tmp_path):
        path = tmp_path / "order.txt"
        save_order([3, 0, 2, 1], path)
        assert path.read_text().splitlines() == ["3", "0", "2", "1"]
