"""Tutoring policies: the order in which training examples are presented.

``random_order`` is a uniform shuffle. ``balanced_order`` groups examples
into per-(source, target) buckets and repeats a two-loop procedure: each
outer iteration gives every non-empty bucket a logarithmic draw quota,
floor(log2(size)) + 1 of its current size; the inner loop repeatedly draws
one uniformly random unused example from the bucket with the largest
remaining quota capacity. Popular pairs keep reappearing (exploitation)
while every surviving pair is revisited each iteration (exploration).
"""

from __future__ import annotations

import heapq

import numpy as np

from .corpus import SubstitutionExample
from .errors import ConfigError

POLICIES = ("random", "balanced")


def random_order(train: list[SubstitutionExample], rng_seed: int) -> list[int]:
    """Uniform permutation of training indices, determined by the seed."""
    rng = np.random.default_rng(rng_seed)
    return [int(i) for i in rng.permutation(len(train))]


def _quota(bucket_size: int) -> int:
    # floor(log2(n)) + 1, exactly (no float log)
    return bucket_size.bit_length()


def balanced_schedule(train: list[SubstitutionExample],
                      rng_seed: int) -> list[list[int]]:
    """Balanced-policy draws grouped by outer iteration.

    Draws are without replacement; buckets shrink across iterations and
    quotas are recomputed from the current sizes. Ties on remaining
    capacity go to the smallest (source, target) pair.
    """
    rng = np.random.default_rng(rng_seed)
    buckets: dict[tuple[int, int], list[int]] = {}
    for index, example in enumerate(train):
        buckets.setdefault((example.source, example.target), []).append(index)

    iterations: list[list[int]] = []
    while buckets:
        capacity = {key: _quota(len(members))
                    for key, members in buckets.items()}
        heap = [(-cap, key) for key, cap in capacity.items()]
        heapq.heapify(heap)
        emitted: list[int] = []
        while heap:
            neg_cap, key = heapq.heappop(heap)
            if capacity[key] != -neg_cap:
                continue  # stale entry; a fresher one is in the heap
            members = buckets[key]
            pick = int(rng.integers(len(members)))
            members[pick], members[-1] = members[-1], members[pick]
            emitted.append(members.pop())
            capacity[key] -= 1
            if capacity[key] > 0:
                heapq.heappush(heap, (-capacity[key], key))
        buckets = {key: members for key, members in buckets.items()
                   if members}
        iterations.append(emitted)
    return iterations


def balanced_order(train: list[SubstitutionExample],
                   rng_seed: int) -> list[int]:
    """Flattened balanced schedule; a permutation of all training indices."""
    return [index for iteration in balanced_schedule(train, rng_seed)
            for index in iteration]


def make_order(policy: str, train: list[SubstitutionExample],
               rng_seed: int) -> list[int]:
    if policy == "random":
        return random_order(train, rng_seed)
    if policy == "balanced":
        return balanced_order(train, rng_seed)
    raise ConfigError(f"unknown policy {policy!r}; expected one of {POLICIES}")


def save_order(order: list[int], path) -> None:
    """One index per line, for auditing the emitted sequence."""
    with open(path, "w", encoding="utf-8") as handle:
        for index in order:
            handle.write(f"{index}\n")
