"""Scoring kernels with a compiled core and a pure-Python fallback.

The compiled extension is preferred when it imported cleanly; set
``SUBTUTOR_KERNELS=python`` to force the fallback (e.g. for benchmarking).
Both backends produce bit-identical scores.
"""

import os
import warnings

from ._scoring_py import DenseScorer
from ._scoring_py import SparseScorer as PySparseScorer

try:
    from ._scoring_cy import SparseScorer as CySparseScorer
except ImportError:
    CySparseScorer = None

_forced = os.environ.get("SUBTUTOR_KERNELS")
if _forced == "python" or CySparseScorer is None:
    if _forced == "cython" and CySparseScorer is None:
        warnings.warn("SUBTUTOR_KERNELS=cython requested but the extension "
                      "is not built; using the Python kernels")
    SparseScorer = PySparseScorer
    BACKEND = "python"
else:
    SparseScorer = CySparseScorer
    BACKEND = "cython"

__all__ = ["BACKEND", "DenseScorer", "SparseScorer", "PySparseScorer",
           "CySparseScorer"]
