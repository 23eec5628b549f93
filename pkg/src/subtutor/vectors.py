"""Sparse/dense feature vectors used for ingredients and substitution queries.

A FeatureVector is either sparse (dict of dimension -> weight, no explicit
zeros) or dense (a float64 numpy array). Sparse dot products and norms
iterate indices in ascending order so that results are bit-identical to the
CSR scoring kernels, which walk row indices in the same order.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DataError


class FeatureVector:
    __slots__ = ("dim", "entries", "data")

    def __init__(self, dim: int, entries: dict[int, float] | None = None,
                 data: np.ndarray | None = None):
        if (entries is None) == (data is None):
            raise ValueError("exactly one of entries/data must be given")
        self.dim = int(dim)
        self.entries = entries
        self.data = data

    # -- constructors -------------------------------------------------

    @classmethod
    def sparse(cls, dim: int, entries: dict[int, float]) -> "FeatureVector":
        clean = {}
        for idx, val in entries.items():
            val = float(val)
            if not math.isfinite(val):
                raise DataError(f"non-finite weight {val!r} at dimension {idx}")
            if not 0 <= idx < dim:
                raise DataError(f"dimension {idx} out of range for dim={dim}")
            if val != 0.0:
                clean[int(idx)] = val
        return cls(dim, entries=clean)

    @classmethod
    def dense(cls, data: np.ndarray) -> "FeatureVector":
        arr = np.asarray(data, dtype=np.float64)
        if arr.ndim != 1:
            raise DataError(f"dense vector must be 1-d, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise DataError("dense vector contains non-finite values")
        return cls(arr.shape[0], data=arr)

    # -- basics --------------------------------------------------------

    @property
    def is_sparse(self) -> bool:
        return self.entries is not None

    def copy(self) -> "FeatureVector":
        if self.is_sparse:
            return FeatureVector(self.dim, entries=dict(self.entries))
        return FeatureVector(self.dim, data=self.data.copy())

    def sorted_items(self) -> list[tuple[int, float]]:
        """Nonzero (index, weight) pairs in ascending index order."""
        if self.is_sparse:
            return sorted(self.entries.items())
        idx = np.nonzero(self.data)[0]
        return [(int(i), float(self.data[i])) for i in idx]

    def to_dense(self) -> np.ndarray:
        if not self.is_sparse:
            return self.data.copy()
        out = np.zeros(self.dim)
        for idx, val in self.entries.items():
            out[idx] = val
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, FeatureVector):
            return NotImplemented
        if self.dim != other.dim:
            return False
        if self.is_sparse and other.is_sparse:
            return self.entries == other.entries
        return bool(np.array_equal(self.to_dense(), other.to_dense()))

    def __repr__(self) -> str:
        if self.is_sparse:
            return f"FeatureVector(dim={self.dim}, nnz={len(self.entries)})"
        return f"FeatureVector(dim={self.dim}, dense)"

    # -- arithmetic ----------------------------------------------------

    def add_(self, other: "FeatureVector") -> None:
        """In-place accumulation; drops sparse entries that cancel to zero."""
        self._check_dim(other)
        if self.is_sparse != other.is_sparse:
            raise DataError("cannot accumulate sparse and dense vectors "
                            "together")
        if self.is_sparse:
            for idx, val in other.entries.items():
                new = self.entries.get(idx, 0.0) + val
                if new == 0.0:
                    self.entries.pop(idx, None)
                else:
                    self.entries[idx] = new
        else:
            self.data += other.data

    def divided_by(self, divisor: float) -> "FeatureVector":
        """Elementwise division (used for prototype = accumulated / count)."""
        if self.is_sparse:
            return FeatureVector(
                self.dim, entries={i: v / divisor for i, v in self.entries.items()})
        return FeatureVector(self.dim, data=self.data / divisor)

    def dot(self, other: "FeatureVector") -> float:
        self._check_dim(other)
        if self.is_sparse and other.is_sparse:
            total = 0.0
            for idx, val in self.sorted_items():
                ov = other.entries.get(idx)
                if ov is not None:
                    total += val * ov
            return total
        if not self.is_sparse and not other.is_sparse:
            return float(self.data @ other.data)
        sparse, dense = (self, other) if self.is_sparse else (other, self)
        return sum(val * dense.data[idx] for idx, val in sparse.sorted_items())

    def norm(self) -> float:
        if self.is_sparse:
            total = 0.0
            for _, val in self.sorted_items():
                total += val * val
            return math.sqrt(total)
        return float(np.linalg.norm(self.data))

    def _check_dim(self, other: "FeatureVector") -> None:
        if self.dim != other.dim:
            raise DataError(f"dimension mismatch: {self.dim} vs {other.dim}")


def weighted_sum(terms: list[tuple[float, FeatureVector]], dim: int,
                 sparse: bool) -> FeatureVector:
    """Sum of coefficient * vector; zero-coefficient terms are skipped.

    Terms are combined in the given order; sparse accumulation visits each
    term's indices in ascending order for reproducibility.
    """
    if sparse:
        acc: dict[int, float] = {}
        for coef, vec in terms:
            if coef == 0.0:
                continue
            for idx, val in vec.sorted_items():
                new = acc.get(idx, 0.0) + coef * val
                if new == 0.0:
                    acc.pop(idx, None)
                else:
                    acc[idx] = new
        return FeatureVector(dim, entries=acc)
    out = np.zeros(dim)
    for coef, vec in terms:
        if coef == 0.0:
            continue
        out += coef * vec.data
    return FeatureVector(dim, data=out)
