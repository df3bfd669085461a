"""Kernel selection: compiled extension when importable, else pure Python.

Set ``ARBORLEAF_PURE_PYTHON=1`` to force the fallback. Graphs larger than the
compiled kernel's 64-vertex mask width are always routed to the fallback.
"""

from __future__ import annotations

import os

from arborleaf import _kernels_py

try:
    if os.environ.get("ARBORLEAF_PURE_PYTHON"):
        raise ImportError("pure-python kernels requested")
    from arborleaf import _kernels as _compiled
except ImportError:
    _compiled = None

IMPLEMENTATION = _compiled.IMPLEMENTATION if _compiled is not None else _kernels_py.IMPLEMENTATION


def _pick(n: int):
    if _compiled is not None and n <= _compiled.MAX_VERTICES:
        return _compiled
    return _kernels_py


def find_claw(nbr, pot, a_mask):
    return _pick(len(nbr)).find_claw(nbr, pot, a_mask)


def mwis_bnb(nbr, weight, budget):
    return _pick(len(nbr)).mwis_bnb(nbr, weight, budget)


def max_leaf_bnb(order, in_mask, n, budget):
    return _pick(n).max_leaf_bnb(order, in_mask, n, budget)
