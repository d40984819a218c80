"""Witness sets: one family member per cover edge, laminar across edges.

For an inclusion-minimal cover I of a family F, each edge e in I must cover
some member uniquely (otherwise I minus e would still cover F).  Those
uniquely-covered members are e's witness candidates.  `laminar_witness`
searches for one candidate per edge such that the chosen sets are pairwise
non-crossing; the search is deterministic, so the first assignment found is
the lexicographically least under the canonical candidate order.
"""

from __future__ import annotations

from typing import Sequence

from .errors import CoverNotMinimalError, GuardError, NoLaminarWitnessError
from .setfam import Edge, ExplicitFamily, NodeSet, edge_crosses_mask

MAX_WITNESS_EDGES = 20


def is_laminar(sets: Sequence[NodeSet]) -> bool:
    """True when no two of the sets cross (any pair is nested or disjoint)."""
    for i, a in enumerate(sets):
        for b in sets[i + 1 :]:
            inter = a.mask & b.mask
            if inter and inter != a.mask and inter != b.mask:
                return False
    return True


def witness_candidates(f: ExplicitFamily, cover: Sequence[Edge]) -> list[tuple[NodeSet, ...]]:
    """Per-edge candidates: members covered by exactly that edge of the cover.

    Candidate lists are in canonical set order and are disjoint across edges
    by construction.  Raises CoverNotMinimalError when some edge has no
    candidate, and ValueError when the edges do not even cover the family.
    """
    cands: list[list[NodeSet]] = [[] for _ in cover]
    for s in f.members:
        crossing = [i for i, (u, v) in enumerate(cover) if edge_crosses_mask(s.mask, u, v)]
        if not crossing:
            raise ValueError(f"edges do not cover the family: {sorted(s.members())} is uncovered")
        if len(crossing) == 1:
            cands[crossing[0]].append(s)
    for i, lst in enumerate(cands):
        if not lst:
            raise CoverNotMinimalError(i)
    return [tuple(sorted(lst, key=NodeSet.sort_key)) for lst in cands]


def laminar_witness(f: ExplicitFamily, cover: Sequence[Edge]) -> tuple[NodeSet, ...]:
    """Pick one witness per cover edge so the picked sets form a laminar family.

    Depth-first over edges in position order, candidates in canonical order,
    pruning as soon as a crossing appears; the first complete assignment is
    returned.  Raises NoLaminarWitnessError when no assignment exists.
    """
    if len(cover) > MAX_WITNESS_EDGES:
        raise GuardError(
            f"instance too large for exhaustive witness search: {len(cover)} edges > {MAX_WITNESS_EDGES}"
        )
    cands = witness_candidates(f, cover)
    chosen: list[NodeSet] = []

    def compatible(s: NodeSet) -> bool:
        for t in chosen:
            inter = s.mask & t.mask
            if inter and inter != s.mask and inter != t.mask:
                return False
        return True

    def dfs(i: int) -> bool:
        if i == len(cands):
            return True
        for s in cands[i]:
            if compatible(s):
                chosen.append(s)
                if dfs(i + 1):
                    return True
                chosen.pop()
        return False

    if not dfs(0):
        raise NoLaminarWitnessError(
            "no laminar witness assignment exists for this cover"
        )
    return tuple(chosen)
