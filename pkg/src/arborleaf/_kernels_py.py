"""Pure-Python hot kernels over bitmask graphs.

These mirror ``_kernels.pyx`` exactly (same search orders, same results) and
are used when the compiled module is unavailable or a graph has more than 64
vertices. Vertex sets are Python ints used as bitsets.
"""

from __future__ import annotations

from collections.abc import Sequence

from arborleaf.errors import BudgetExceeded

IMPLEMENTATION = "python"
MAX_VERTICES = None  # arbitrary-precision masks


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _mask_sum(mask: int, values: Sequence[int]) -> int:
    total = 0
    while mask:
        low = mask & -mask
        total += values[low.bit_length() - 1]
        mask ^= low
    return total


def find_claw(
    nbr: Sequence[int], pot: Sequence[int], a_mask: int
) -> tuple[int, tuple[int, ...]] | None:
    """First claw whose talon swap raises the potential of ``a_mask``.

    Returns ``(center, talons)`` with ``center == -1`` for a 1-claw, or
    ``None``. Order: talon count 1, 2, 3; centers ascending; talon tuples
    lexicographic. Talons are drawn from vertices outside ``a_mask``.
    """
    n = len(nbr)
    free = [v for v in range(n) if not (a_mask >> v) & 1]
    loss = [_mask_sum(nbr[v] & a_mask, pot) for v in range(n)]
    for t in free:
        if pot[t] > loss[t]:
            return -1, (t,)
    outside = ~a_mask
    for z in range(n):
        cand = _bits(nbr[z] & outside)
        for i, x in enumerate(cand):
            for y in cand[i + 1 :]:
                if (nbr[x] >> y) & 1:
                    continue
                if pot[x] + pot[y] > _mask_sum((nbr[x] | nbr[y]) & a_mask, pot):
                    return z, (x, y)
    for z in range(n):
        cand = _bits(nbr[z] & outside)
        k = len(cand)
        for i in range(k):
            x = cand[i]
            for j in range(i + 1, k):
                y = cand[j]
                if (nbr[x] >> y) & 1:
                    continue
                nxy = nbr[x] | nbr[y]
                for l in range(j + 1, k):
                    u = cand[l]
                    if (nxy >> u) & 1:
                        continue
                    gain = pot[x] + pot[y] + pot[u]
                    if gain > _mask_sum((nxy | nbr[u]) & a_mask, pot):
                        return z, (x, y, u)
    return None


def mwis_bnb(nbr: Sequence[int], weight: Sequence[int], budget: int) -> tuple[int, int, int]:
    """Exact maximum-weight independent set by include/exclude branching.

    Returns ``(best weight, witness mask, search nodes used)``.
    """
    n = len(nbr)
    best = [-1, 0]
    nodes = [0]

    def rec(remaining: int, chosen: int, value: int, bound: int) -> None:
        nodes[0] += 1
        if nodes[0] > budget:
            raise BudgetExceeded("exact_wmis", budget)
        if value + bound <= best[0]:
            return
        while remaining:
            low = remaining & -remaining
            v = low.bit_length() - 1
            if nbr[v] & remaining:
                break
            # isolated within the remaining graph: always take it
            remaining ^= low
            chosen |= low
            value += weight[v]
            bound -= weight[v]
        if not remaining:
            if value > best[0]:
                best[0], best[1] = value, chosen
            return
        rest = remaining ^ low
        drop = nbr[v] & rest
        rec(rest & ~drop, chosen | low, value + weight[v], bound - weight[v] - _mask_sum(drop, weight))
        rec(rest, chosen, value, bound - weight[v])

    full = (1 << n) - 1
    rec(full, 0, 0, sum(weight))
    return best[0], best[1], nodes[0]


def max_leaf_bnb(
    order: Sequence[int], in_mask: Sequence[int], n: int, budget: int
) -> tuple[int, list[int], int]:
    """Exact maximum-leaf parent function over a rooted DAG.

    ``order`` lists the non-root nodes in topological order. Every choice of
    one in-neighbour per non-root node is a spanning arborescence, and the
    leaf count depends only on the set of chosen parents, so a node whose
    in-neighbours already meet that set is assigned without branching.

    Returns ``(best leaf count, parent list with -1 at the root, nodes used)``.
    """
    parent = [-1] * n
    best_parent = [-1] * n
    best = [-1]
    nodes = [0]
    m = len(order)

    def rec(idx: int, used: int, used_count: int) -> None:
        nodes[0] += 1
        if nodes[0] > budget:
            raise BudgetExceeded("exact_max_leaf", budget)
        while idx < m:
            v = order[idx]
            common = in_mask[v] & used
            if not common:
                break
            parent[v] = (common & -common).bit_length() - 1
            idx += 1
        if idx == m:
            if n - used_count > best[0]:
                best[0] = n - used_count
                best_parent[:] = parent
            return
        if n - used_count - 1 <= best[0]:
            return
        v = order[idx]
        for u in _bits(in_mask[v]):
            parent[v] = u
            rec(idx + 1, used | (1 << u), used_count + 1)

    if m == 0:
        return 1, [-1] * n, 1
    rec(0, 0, 0)
    return best[0], best_parent, nodes[0]
