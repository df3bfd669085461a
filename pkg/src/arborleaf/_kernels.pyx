# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels over 64-bit vertex masks.

Same contracts and search orders as ``arborleaf._kernels_py``; callers must
keep graphs at or below ``MAX_VERTICES`` vertices.
"""

from libc.stdlib cimport malloc, free

from arborleaf.errors import BudgetExceeded

IMPLEMENTATION = "cython"
MAX_VERTICES = 64

ctypedef unsigned long long u64


cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil
    int __builtin_popcountll(unsigned long long) nogil


cdef inline long long mask_sum(u64 m, long long* values) nogil:
    cdef long long total = 0
    while m:
        total += values[__builtin_ctzll(m)]
        m &= m - 1
    return total


cdef u64* _to_masks(object seq, int n) except NULL:
    cdef u64* out = <u64*> malloc(max(n, 1) * sizeof(u64))
    if out == NULL:
        raise MemoryError()
    for i in range(n):
        out[i] = <u64> seq[i]
    return out


cdef long long* _to_values(object seq, int n) except NULL:
    cdef long long* out = <long long*> malloc(max(n, 1) * sizeof(long long))
    if out == NULL:
        raise MemoryError()
    for i in range(n):
        out[i] = <long long> seq[i]
    return out


def find_claw(nbr, pot, a_mask):
    cdef int n = len(nbr)
    if n > 64:
        raise ValueError("compiled kernel supports at most 64 vertices")
    cdef u64* N = _to_masks(nbr, n)
    cdef long long* P = _to_values(pot, n)
    cdef u64 A = <u64> a_mask
    cdef u64 outside = ~A
    cdef int* cand = <int*> malloc(max(n, 1) * sizeof(int))
    cdef int z, i, j, l, k, t, x, y, u
    cdef u64 m, nxy
    cdef long long gain
    try:
        for t in range(n):
            if (A >> t) & 1:
                continue
            if P[t] > mask_sum(N[t] & A, P):
                return -1, (t,)
        for z in range(n):
            k = 0
            m = N[z] & outside
            while m:
                cand[k] = __builtin_ctzll(m)
                k += 1
                m &= m - 1
            for i in range(k):
                x = cand[i]
                for j in range(i + 1, k):
                    y = cand[j]
                    if (N[x] >> y) & 1:
                        continue
                    if P[x] + P[y] > mask_sum((N[x] | N[y]) & A, P):
                        return z, (x, y)
        for z in range(n):
            k = 0
            m = N[z] & outside
            while m:
                cand[k] = __builtin_ctzll(m)
                k += 1
                m &= m - 1
            for i in range(k):
                x = cand[i]
                for j in range(i + 1, k):
                    y = cand[j]
                    if (N[x] >> y) & 1:
                        continue
                    nxy = N[x] | N[y]
                    for l in range(j + 1, k):
                        u = cand[l]
                        if (nxy >> u) & 1:
                            continue
                        gain = P[x] + P[y] + P[u]
                        if gain > mask_sum((nxy | N[u]) & A, P):
                            return z, (x, y, u)
        return None
    finally:
        free(N)
        free(P)
        free(cand)


cdef struct MwisState:
    u64* nbr
    long long* weight
    long long best
    u64 best_mask
    long long nodes
    long long budget


cdef int _mwis_rec(MwisState* s, u64 remaining, u64 chosen, long long value, long long bound) nogil:
    cdef u64 low, rest, drop
    cdef int v = 0
    s.nodes += 1
    if s.nodes > s.budget:
        return -1
    if value + bound <= s.best:
        return 0
    while remaining:
        low = remaining & (~remaining + 1)
        v = __builtin_ctzll(remaining)
        if s.nbr[v] & remaining:
            break
        remaining ^= low
        chosen |= low
        value += s.weight[v]
        bound -= s.weight[v]
    if not remaining:
        if value > s.best:
            s.best = value
            s.best_mask = chosen
        return 0
    rest = remaining ^ low
    drop = s.nbr[v] & rest
    if _mwis_rec(s, rest & ~drop, chosen | low, value + s.weight[v],
                 bound - s.weight[v] - mask_sum(drop, s.weight)) < 0:
        return -1
    return _mwis_rec(s, rest, chosen, value, bound - s.weight[v])


def mwis_bnb(nbr, weight, budget):
    cdef int n = len(nbr)
    if n > 64:
        raise ValueError("compiled kernel supports at most 64 vertices")
    cdef MwisState s
    cdef u64 full = 0
    cdef long long total = 0
    cdef int rc
    s.nbr = _to_masks(nbr, n)
    s.weight = _to_values(weight, n)
    s.best = -1
    s.best_mask = 0
    s.nodes = 0
    s.budget = budget
    for i in range(n):
        full |= (<u64> 1) << i
        total += s.weight[i]
    try:
        rc = _mwis_rec(&s, full, 0, 0, total)
        if rc < 0:
            raise BudgetExceeded("exact_wmis", budget)
        return int(s.best), int(s.best_mask), int(s.nodes)
    finally:
        free(s.nbr)
        free(s.weight)


cdef struct LeafState:
    int* order
    u64* in_mask
    int* parent
    int* best_parent
    int n
    int m
    int best
    long long nodes
    long long budget


cdef int _leaf_rec(LeafState* s, int idx, u64 used, int used_count) nogil:
    cdef int v, u
    cdef u64 common, m
    s.nodes += 1
    if s.nodes > s.budget:
        return -1
    while idx < s.m:
        v = s.order[idx]
        common = s.in_mask[v] & used
        if not common:
            break
        s.parent[v] = __builtin_ctzll(common)
        idx += 1
    if idx == s.m:
        if s.n - used_count > s.best:
            s.best = s.n - used_count
            for u in range(s.n):
                s.best_parent[u] = s.parent[u]
        return 0
    if s.n - used_count - 1 <= s.best:
        return 0
    v = s.order[idx]
    m = s.in_mask[v]
    while m:
        u = __builtin_ctzll(m)
        m &= m - 1
        s.parent[v] = u
        if _leaf_rec(s, idx + 1, used | ((<u64> 1) << u), used_count + 1) < 0:
            return -1
    return 0


def max_leaf_bnb(order, in_mask, n, budget):
    if n > 64:
        raise ValueError("compiled kernel supports at most 64 vertices")
    cdef int m = len(order)
    if m == 0:
        return 1, [-1] * n, 1
    cdef LeafState s
    cdef int i, rc
    s.n = n
    s.m = m
    s.best = -1
    s.nodes = 0
    s.budget = budget
    s.order = <int*> malloc(m * sizeof(int))
    s.parent = <int*> malloc(n * sizeof(int))
    s.best_parent = <int*> malloc(n * sizeof(int))
    s.in_mask = _to_masks(in_mask, n)
    for i in range(m):
        s.order[i] = order[i]
    for i in range(n):
        s.parent[i] = -1
        s.best_parent[i] = -1
    try:
        rc = _leaf_rec(&s, 0, 0, 0)
        if rc < 0:
            raise BudgetExceeded("exact_max_leaf", budget)
        return int(s.best), [s.best_parent[i] for i in range(n)], int(s.nodes)
    finally:
        free(s.order)
        free(s.parent)
        free(s.best_parent)
        free(s.in_mask)
