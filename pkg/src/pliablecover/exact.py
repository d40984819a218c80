"""Exact optimum by branch and bound, and certification of solver runs.

`brute_force_opt` is the reference optimum: a set-cover style search that
branches on the candidate edges of the first uncovered core.  It returns the
exact cost together with the lexicographically least optimal edge set (ids as
a sorted list, compared element by element with a shorter prefix winning).

`certify` re-derives everything checkable about a finished run from first
principles: dual feasibility, tightness of the solution, per-iteration load
bounds for the claimed family class, and the approximation-factor inequality
against the dual objective (and against the true optimum when supplied).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import GuardError, InfeasibleError
from .setfam import FamilyOracle, edge_crosses_mask
from .wgmv import CostedGraph, RunTrace

MAX_BRUTE_EDGES = 24


def _min_cover_cost(
    g: CostedGraph,
    oracle: FamilyOracle,
    base: list[int],
    allowed: list[int],
) -> Fraction | None:
    """Exact minimum extra cost of completing `base` with edges from `allowed`.

    Returns None when no subset of `allowed` yields a cover.
    """
    best: Fraction | None = None

    def rec(chosen: list[int], avail: tuple[int, ...], extra: Fraction) -> None:
        nonlocal best
        if best is not None and extra >= best:
            return  # completions only ever add nonnegative cost
        cores = oracle.cores([g.pair(e) for e in base + chosen])
        if not cores:
            best = extra
            return
        target = cores[0]
        cands = [e for e in avail if edge_crosses_mask(target.mask, *g.pair(e))]
        for k, e in enumerate(cands):
            # The first k candidates are banned in this subtree, which
            # partitions the search space and never revisits a subset.
            dropped = set(cands[: k + 1])
            rec(chosen + [e], tuple(x for x in avail if x not in dropped), extra + g.cost(e))

    rec([], tuple(allowed), Fraction(0))
    return best


def brute_force_opt(g: CostedGraph, oracle: FamilyOracle) -> tuple[Fraction, tuple[int, ...]]:
    """Exact optimum cost and the lexicographically least optimal edge set."""
    m = len(g.edges)
    if m > MAX_BRUTE_EDGES:
        raise GuardError(f"instance too large for exhaustive optimum: {m} edges > {MAX_BRUTE_EDGES}")
    all_ids = list(range(m))
    leftover = oracle.cores([g.pair(e) for e in all_ids])
    if leftover:
        raise InfeasibleError(leftover[0])
    opt = _min_cover_cost(g, oracle, [], all_ids)
    assert opt is not None

    prefix: list[int] = []
    for i in all_ids:
        pc = sum((g.cost(e) for e in prefix), Fraction(0))
        if pc == opt and oracle.is_covered([g.pair(e) for e in prefix]):
            break
        rest = [j for j in all_ids if j > i]
        extra = _min_cover_cost(g, oracle, prefix + [i], rest)
        if extra is not None and pc + g.cost(i) + extra == opt:
            prefix.append(i)
    assert oracle.is_covered([g.pair(e) for e in prefix])
    return opt, tuple(prefix)


FAMILY_CLASSES = ("gamma", "sparse", "beta", "uncrossable")


def guarantee_factor(family_class: str, beta: int | None = None) -> Fraction:
    """Approximation factor the run is certified against, per family class."""
    if family_class == "gamma":
        return Fraction(7)
    if family_class == "sparse":
        return Fraction(6)
    if family_class == "beta":
        if beta is None or beta < 1:
            raise ValueError("family class 'beta' needs a crossing number >= 1")
        return Fraction(6) - Fraction(1, beta + 1)
    if family_class == "uncrossable":
        return Fraction(2)
    raise ValueError(f"unknown family class {family_class!r}")


def iteration_load_bound(family_class: str, num_cores: int, beta: int | None = None) -> Fraction:
    """Upper bound on the summed final-solution degree of one iteration's cores."""
    if family_class == "gamma":
        return Fraction(7 * num_cores)
    if family_class == "sparse":
        return Fraction(6 * num_cores - 2)
    if family_class == "beta":
        return guarantee_factor("beta", beta) * num_cores
    if family_class == "uncrossable":
        return Fraction(2 * num_cores)
    raise ValueError(f"unknown family class {family_class!r}")


@dataclass(frozen=True)
class CheckRow:
    name: str
    ok: bool
    detail: str


@dataclass(frozen=True)
class IterationRow:
    index: int
    num_cores: int
    load: int
    bound: Fraction

    @property
    def ok(self) -> bool:
        return self.load <= self.bound


@dataclass(frozen=True)
class Certificate:
    instance_digest: str
    family_class: str
    beta: int | None
    factor: Fraction
    primal_cost: Fraction
    dual_objective: Fraction
    opt_cost: Fraction | None
    checks: tuple[CheckRow, ...]
    iteration_rows: tuple[IterationRow, ...]
    verdict: bool


def certify(
    g: CostedGraph,
    oracle: FamilyOracle,
    trace: RunTrace,
    family_class: str,
    *,
    beta: int | None = None,
    opt: Fraction | None = None,
    instance_digest: str = "",
) -> Certificate:
    factor = guarantee_factor(family_class, beta)
    checks: list[CheckRow] = []

    def add(name: str, ok: bool, detail: str = "") -> None:
        checks.append(CheckRow(name, ok, detail))

    # Recompute edge loads from the dual values alone.
    loads = [Fraction(0)] * len(g.edges)
    neg = [s for s, y in trace.dual.values if y < 0]
    for s, y in trace.dual.values:
        for eid, (u, v, _) in enumerate(g.edges):
            if edge_crosses_mask(s.mask, u, v):
                loads[eid] += y
    add("dual-nonnegative", not neg, f"{len(neg)} negative dual values" if neg else "")
    over = [e for e in range(len(g.edges)) if loads[e] > g.cost(e)]
    add("dual-feasible", not over, f"edges over cost: {over}" if over else "")
    slack = [e for e in trace.solution if loads[e] != g.cost(e)]
    add("solution-tight", not slack, f"non-tight solution edges: {slack}" if slack else "")

    sol_pairs = [g.pair(e) for e in trace.solution]
    covered = oracle.is_covered(sol_pairs)
    add("solution-covers-family", covered)
    loose = [
        e
        for e in trace.solution
        if oracle.is_covered([g.pair(x) for x in trace.solution if x != e])
    ]
    add("solution-minimal", not loose, f"removable edges: {loose}" if loose else "")

    rows: list[IterationRow] = []
    for idx, it in enumerate(trace.iterations):
        load = sum(
            1
            for core in it.cores
            for e in trace.solution
            if edge_crosses_mask(core.mask, *g.pair(e))
        )
        rows.append(IterationRow(idx, len(it.cores), load, iteration_load_bound(family_class, len(it.cores), beta)))
    bad_rows = [r.index for r in rows if not r.ok]
    add("iteration-load-bounds", not bad_rows, f"iterations over bound: {bad_rows}" if bad_rows else "")

    cost = trace.solution_cost(g)
    dual_obj = trace.dual.objective()
    add("cost-vs-dual", cost <= factor * dual_obj, f"{cost} vs {factor} * {dual_obj}")
    if opt is not None:
        add("cost-vs-opt", cost <= factor * opt, f"{cost} vs {factor} * {opt}")
        add("dual-below-opt", dual_obj <= opt, f"{dual_obj} vs {opt}")

    return Certificate(
        instance_digest=instance_digest,
        family_class=family_class,
        beta=beta,
        factor=factor,
        primal_cost=cost,
        dual_objective=dual_obj,
        opt_cost=opt,
        checks=tuple(checks),
        iteration_rows=tuple(rows),
        verdict=all(c.ok for c in checks) and not bad_rows,
    )
