"""Pure-numpy scoring kernels (fallback when the extension is not built).

SparseScorer computes, for one sparse query at a time, the inner product
with every row of a CSR matrix. Accumulation visits nonzeros in CSR order
(row-major, ascending column index within a row), which makes the results
bit-identical to the compiled kernel and to ascending-index Python dots.
"""

from __future__ import annotations

import numpy as np


class SparseScorer:
    def __init__(self, indptr, indices, data, dim: int):
        self.indptr = np.ascontiguousarray(indptr, dtype=np.int64)
        self.indices = np.ascontiguousarray(indices, dtype=np.int64)
        self.data = np.ascontiguousarray(data, dtype=np.float64)
        self.dim = int(dim)
        self.n_rows = len(self.indptr) - 1
        self._row_ids = np.repeat(np.arange(self.n_rows),
                                  np.diff(self.indptr))
        self._work = np.zeros(self.dim)

    def dots(self, q_indices, q_values) -> np.ndarray:
        qi = np.asarray(q_indices, dtype=np.int64)
        qv = np.asarray(q_values, dtype=np.float64)
        work = self._work
        work[qi] = qv
        # np.bincount adds sequentially in array order == CSR order
        contrib = self.data * work[self.indices]
        out = np.bincount(self._row_ids, weights=contrib,
                          minlength=self.n_rows)
        work[qi] = 0.0
        return out

    def row_norms(self) -> np.ndarray:
        sq = np.bincount(self._row_ids, weights=self.data * self.data,
                         minlength=self.n_rows)
        return np.sqrt(sq)


class DenseScorer:
    """Row-matrix scorer for dense states; numpy BLAS is the kernel here."""

    def __init__(self, matrix):
        self.matrix = np.ascontiguousarray(matrix, dtype=np.float64)
        self.n_rows = self.matrix.shape[0]
        self.dim = self.matrix.shape[1] if self.matrix.ndim == 2 else 0

    def dots(self, q: np.ndarray) -> np.ndarray:
        return self.matrix @ np.asarray(q, dtype=np.float64)

    def row_norms(self) -> np.ndarray:
        return np.sqrt(np.einsum("ij,ij->i", self.matrix, self.matrix))
