# cython: language_level=3
"""Compiled scoring kernels: sparse query vs CSR state rows.

Semantics match kernels._scoring_py.SparseScorer exactly (same accumulation
order, hence bit-identical results); this version only removes the
per-query numpy overhead in the hot evaluation loop.
"""

from libc.math cimport sqrt

import numpy as np

cimport numpy as cnp

cnp.import_array()


cdef class SparseScorer:
    cdef cnp.int64_t[::1] indptr
    cdef cnp.int64_t[::1] indices
    cdef cnp.float64_t[::1] data
    cdef cnp.float64_t[::1] work
    cdef public Py_ssize_t n_rows
    cdef public Py_ssize_t dim

    def __init__(self, indptr, indices, data, dim):
        self.indptr = np.ascontiguousarray(indptr, dtype=np.int64)
        self.indices = np.ascontiguousarray(indices, dtype=np.int64)
        self.data = np.ascontiguousarray(data, dtype=np.float64)
        self.dim = dim
        self.n_rows = self.indptr.shape[0] - 1
        self.work = np.zeros(dim, dtype=np.float64)

    def dots(self, q_indices, q_values):
        cdef cnp.int64_t[::1] qi = np.ascontiguousarray(q_indices, dtype=np.int64)
        cdef cnp.float64_t[::1] qv = np.ascontiguousarray(q_values, dtype=np.float64)
        out_arr = np.zeros(self.n_rows, dtype=np.float64)
        cdef cnp.float64_t[::1] out = out_arr
        cdef Py_ssize_t row, j, k
        cdef double acc
        for k in range(qi.shape[0]):
            self.work[qi[k]] = qv[k]
        for row in range(self.n_rows):
            acc = 0.0
            for j in range(self.indptr[row], self.indptr[row + 1]):
                acc = acc + self.data[j] * self.work[self.indices[j]]
            out[row] = acc
        for k in range(qi.shape[0]):
            self.work[qi[k]] = 0.0
        return out_arr

    def row_norms(self):
        out_arr = np.zeros(self.n_rows, dtype=np.float64)
        cdef cnp.float64_t[::1] out = out_arr
        cdef Py_ssize_t row, j
        cdef double acc
        for row in range(self.n_rows):
            acc = 0.0
            for j in range(self.indptr[row], self.indptr[row + 1]):
                acc = acc + self.data[j] * self.data[j]
            out[row] = sqrt(acc)
        return out_arr
