"""Wire formats: canonical JSON for every object the tools exchange.

Rationals travel as ``[numerator, denominator]`` pairs (always in lowest
terms, denominator positive), node sets as sorted vertex lists, and every
document carries a schema version.  `dumps_canonical` fixes key order and
separators, so equal objects serialize to identical bytes; instance digests
are sha256 over that canonical form.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .exact import Certificate
from .setfam import CheckResult, ExplicitFamily, FamilyOracle, ExplicitFamilyOracle, NodeSet
from .smallcuts import CapGraph, SmallCutsOracle, materialize_family
from .treeanal import AnalysisReport, BoundReport, ShortcutTree
from .wgmv import CostedGraph, DualState, IterationRecord, RunTrace

SCHEMA_VERSION = "1"


class SchemaError(ValueError):
    """The JSON parsed, but does not match the expected document shape."""


def dumps_canonical(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def frac_to_json(x: Fraction) -> list[int]:
    return [x.numerator, x.denominator]


def frac_from_json(v: Any, where: str) -> Fraction:
    if (
        not isinstance(v, list)
        or len(v) != 2
        or not all(isinstance(t, int) and not isinstance(t, bool) for t in v)
    ):
        raise SchemaError(f"{where}: expected [numerator, denominator], got {v!r}")
    if v[1] <= 0:
        raise SchemaError(f"{where}: denominator must be positive")
    return Fraction(v[0], v[1])


def nodeset_to_json(s: NodeSet) -> list[int]:
    return sorted(s.members())


def _int_list(v: Any, where: str) -> list[int]:
    if not isinstance(v, list) or not all(isinstance(t, int) and not isinstance(t, bool) for t in v):
        raise SchemaError(f"{where}: expected a list of integers")
    return v


def _get(d: Any, key: str, where: str) -> Any:
    if not isinstance(d, dict):
        raise SchemaError(f"{where}: expected an object")
    if key not in d:
        raise SchemaError(f"{where}: missing key {key!r}")
    return d[key]


# ---------------------------------------------------------------------------
# Families and graphs


def family_to_json(f: ExplicitFamily) -> dict:
    return {
        "kind": "explicit",
        "n": f.n,
        "members": [nodeset_to_json(s) for s in f.members],
    }


def capgraph_to_json(h: CapGraph) -> dict:
    return {
        "kind": "small-cuts",
        "n": h.n,
        "capacities": [[u, v, frac_to_json(c)] for u, v, c in h.edges],
        "threshold": frac_to_json(h.k),
    }


def family_spec_from_json(doc: Any, where: str = "family") -> ExplicitFamily | CapGraph:
    kind = _get(doc, "kind", where)
    n = _get(doc, "n", where)
    if not isinstance(n, int) or n < 0:
        raise SchemaError(f"{where}.n: expected a nonnegative integer")
    if kind == "explicit":
        members = _get(doc, "members", where)
        if not isinstance(members, list):
            raise SchemaError(f"{where}.members: expected a list")
        try:
            return ExplicitFamily.from_sets(
                n, [_int_list(m, f"{where}.members[{i}]") for i, m in enumerate(members)]
            )
        except ValueError as exc:
            raise SchemaError(f"{where}: {exc}") from exc
    if kind == "small-cuts":
        caps = _get(doc, "capacities", where)
        if not isinstance(caps, list):
            raise SchemaError(f"{where}.capacities: expected a list")
        edges = []
        for i, row in enumerate(caps):
            if not isinstance(row, list) or len(row) != 3:
                raise SchemaError(f"{where}.capacities[{i}]: expected [u, v, cap]")
            u, v = row[0], row[1]
            if not isinstance(u, int) or not isinstance(v, int):
                raise SchemaError(f"{where}.capacities[{i}]: endpoints must be integers")
            edges.append((u, v, frac_from_json(row[2], f"{where}.capacities[{i}].cap")))
        k = frac_from_json(_get(doc, "threshold", where), f"{where}.threshold")
        try:
            return CapGraph(n, tuple(edges), k)
        except ValueError as exc:
            raise SchemaError(f"{where}: {exc}") from exc
    raise SchemaError(f"{where}.kind: unknown family kind {kind!r}")


def graph_to_json(g: CostedGraph) -> dict:
    return {
        "n": g.n,
        "edges": [[u, v, frac_to_json(c)] for u, v, c in g.edges],
    }


def graph_from_json(doc: Any, where: str = "graph") -> CostedGraph:
    n = _get(doc, "n", where)
    if not isinstance(n, int) or n < 0:
        raise SchemaError(f"{where}.n: expected a nonnegative integer")
    rows = _get(doc, "edges", where)
    if not isinstance(rows, list):
        raise SchemaError(f"{where}.edges: expected a list")
    edges = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != 3:
            raise SchemaError(f"{where}.edges[{i}]: expected [u, v, cost]")
        u, v = row[0], row[1]
        if not isinstance(u, int) or not isinstance(v, int):
            raise SchemaError(f"{where}.edges[{i}]: endpoints must be integers")
        edges.append((u, v, frac_from_json(row[2], f"{where}.edges[{i}].cost")))
    try:
        return CostedGraph(n, tuple(edges))
    except ValueError as exc:
        raise SchemaError(f"{where}: {exc}") from exc


# ---------------------------------------------------------------------------
# Instances


@dataclass(frozen=True)
class Instance:
    """A covering problem: candidate edges plus the family to cover."""

    graph: CostedGraph
    family: ExplicitFamily | CapGraph

    def oracle(self) -> FamilyOracle:
        if isinstance(self.family, ExplicitFamily):
            return ExplicitFamilyOracle(self.family)
        return SmallCutsOracle(self.family)

    def explicit_family(self) -> ExplicitFamily:
        if isinstance(self.family, ExplicitFamily):
            return self.family
        return materialize_family(self.family)


def instance_to_json(inst: Instance) -> dict:
    fam = (
        family_to_json(inst.family)
        if isinstance(inst.family, ExplicitFamily)
        else capgraph_to_json(inst.family)
    )
    return {
        "version": SCHEMA_VERSION,
        "graph": graph_to_json(inst.graph),
        "family": fam,
    }


def instance_from_json(doc: Any) -> Instance:
    graph = graph_from_json(_get(doc, "graph", "instance"))
    family = family_spec_from_json(_get(doc, "family", "instance"))
    fam_n = family.n
    if fam_n != graph.n:
        raise SchemaError(
            f"instance: graph universe {graph.n} differs from family universe {fam_n}"
        )
    return Instance(graph, family)


def instance_digest(inst: Instance) -> str:
    return hashlib.sha256(dumps_canonical(instance_to_json(inst)).encode()).hexdigest()


# ---------------------------------------------------------------------------
# Traces, certificates, reports


def _iteration_to_json(it: IterationRecord) -> dict:
    return {
        "cores": [nodeset_to_json(c) for c in it.cores],
        "eps": frac_to_json(it.eps),
        "added": it.added,
        "ties": list(it.ties),
    }


def _dual_to_json(d: DualState) -> dict:
    return {
        "values": [[nodeset_to_json(s), frac_to_json(y)] for s, y in d.values],
        "loads": [frac_to_json(x) for x in d.loads],
    }


def trace_to_json(g: CostedGraph, trace: RunTrace, digest: str = "") -> dict:
    return {
        "version": SCHEMA_VERSION,
        "instance_digest": digest,
        "iterations": [_iteration_to_json(it) for it in trace.iterations],
        "deleted": list(trace.deleted),
        "solution": list(trace.solution),
        "dual": _dual_to_json(trace.dual),
        "cost": frac_to_json(trace.solution_cost(g)),
        "dual_objective": frac_to_json(trace.dual.objective()),
    }


def trace_from_json(doc: Any, n: int) -> RunTrace:
    iters = []
    for i, row in enumerate(_get(doc, "iterations", "trace")):
        where = f"trace.iterations[{i}]"
        cores = tuple(
            NodeSet.from_members(n, _int_list(c, f"{where}.cores"))
            for c in _get(row, "cores", where)
        )
        iters.append(
            IterationRecord(
                cores=cores,
                eps=frac_from_json(_get(row, "eps", where), f"{where}.eps"),
                added=_get(row, "added", where),
                ties=tuple(_int_list(_get(row, "ties", where), f"{where}.ties")),
            )
        )
    values = []
    dual = _get(doc, "dual", "trace")
    for i, row in enumerate(_get(dual, "values", "trace.dual")):
        if not isinstance(row, list) or len(row) != 2:
            raise SchemaError(f"trace.dual.values[{i}]: expected [members, value]")
        values.append(
            (
                NodeSet.from_members(n, _int_list(row[0], f"trace.dual.values[{i}]")),
                frac_from_json(row[1], f"trace.dual.values[{i}]"),
            )
        )
    loads = tuple(
        frac_from_json(x, f"trace.dual.loads[{i}]")
        for i, x in enumerate(_get(dual, "loads", "trace.dual"))
    )
    return RunTrace(
        iterations=tuple(iters),
        deleted=tuple(_int_list(_get(doc, "deleted", "trace"), "trace.deleted")),
        solution=tuple(_int_list(_get(doc, "solution", "trace"), "trace.solution")),
        dual=DualState(values=tuple(values), loads=loads),
    )


def certificate_to_json(cert: Certificate) -> dict:
    return {
        "version": SCHEMA_VERSION,
        "instance_digest": cert.instance_digest,
        "family_class": cert.family_class,
        "beta": cert.beta,
        "factor": frac_to_json(cert.factor),
        "primal_cost": frac_to_json(cert.primal_cost),
        "dual_objective": frac_to_json(cert.dual_objective),
        "opt_cost": None if cert.opt_cost is None else frac_to_json(cert.opt_cost),
        "checks": [
            {"name": c.name, "ok": c.ok, "detail": c.detail} for c in cert.checks
        ],
        "iterations": [
            {
                "index": r.index,
                "num_cores": r.num_cores,
                "load": r.load,
                "bound": frac_to_json(r.bound),
                "ok": r.ok,
            }
            for r in cert.iteration_rows
        ],
        "verdict": cert.verdict,
    }


def bound_report_to_json(rep: BoundReport) -> dict:
    return {
        "family_class": rep.family_class,
        "beta": rep.beta,
        "total_weight": rep.total_weight,
        "counts": {
            "black": rep.num_black,
            "white": rep.num_white_all,
            "white_surviving": rep.num_white_surviving,
            "leaves": rep.num_leaves,
            "cores": rep.num_cores,
            "tree_edges": rep.num_tree_edges,
        },
        "classifications": [[i, shape] for i, shape in rep.classifications],
        "bad_pairs": [[p.lower, p.upper] for p in rep.bad_pairs],
        "reassignment": {
            "chosen": [[hi, lo] for hi, lo in rep.reassignment.chosen],
            "weights_after": list(rep.reassignment.weights_after),
            "max_before": rep.reassignment.max_before,
            "max_after": rep.reassignment.max_after,
        },
        "bounds": [
            {"name": b.name, "lhs": frac_to_json(b.lhs), "rhs": frac_to_json(b.rhs), "ok": b.ok}
            for b in rep.bounds
        ],
        "violations": list(rep.violations),
        "info": list(rep.info),
        "ok": rep.ok,
    }


def analysis_to_json(report: AnalysisReport) -> dict:
    return {
        "version": SCHEMA_VERSION,
        "family_class": report.family_class,
        "beta": report.beta,
        "ok": report.ok,
        "iterations": [
            {
                "index": it.index,
                "cores": [nodeset_to_json(c) for c in it.cores],
                "cover_edges": list(it.cover_edge_ids),
                "violations": list(it.violations),
                "report": None if it.report is None else bound_report_to_json(it.report),
                "ok": it.ok,
            }
            for it in report.iterations
        ],
    }


def tree_to_json(tree: ShortcutTree) -> dict:
    return {
        "nodes": [
            {
                "index": x.index,
                "set": nodeset_to_json(x.node_set),
                "parent": x.parent,
                "black": x.black,
                "owned_cores": list(x.owned_cores),
                "edge_id": x.edge_id,
                "contracted": x.contracted,
            }
            for x in tree.nodes
        ],
        "edges": [
            {
                "lower": e.lower,
                "upper": e.upper,
                "interior": list(e.interior),
                "cover_edges": list(e.cover_edges),
                "labels": [list(lab) for lab in e.labels],
                "weight": e.weight,
            }
            for e in tree.edges
        ],
        "cores": [nodeset_to_json(c) for c in tree.cores],
        "root": tree.root,
    }


def check_result_to_json(result: CheckResult) -> dict:
    out = result.to_json_dict()
    out["version"] = SCHEMA_VERSION
    return out


# ---------------------------------------------------------------------------
# Generator bundles


def bundle_to_json(bundle) -> dict:
    doc = {
        "version": SCHEMA_VERSION,
        "kind": bundle.kind,
        "leaves": bundle.leaves,
        "beta": bundle.beta,
        "n": bundle.n,
        "graph": graph_to_json(bundle.graph),
        "family": family_to_json(bundle.family),
        "witness": [nodeset_to_json(w) for w in bundle.witness],
        "cores": [nodeset_to_json(c) for c in bundle.cores],
        "total_cost": frac_to_json(bundle.total_cost),
        "dual_objective": frac_to_json(bundle.dual_objective),
        "ratio": frac_to_json(bundle.ratio),
    }
    return doc


def bundle_parts_from_json(doc: Any) -> tuple[CostedGraph, ExplicitFamily, list[NodeSet], list[NodeSet]]:
    """Graph, family, witness list, core list of a serialized bundle."""
    graph = graph_from_json(_get(doc, "graph", "bundle"))
    fam = family_spec_from_json(_get(doc, "family", "bundle"), "bundle.family")
    if not isinstance(fam, ExplicitFamily):
        raise SchemaError("bundle.family: expected an explicit family")
    witness = [
        NodeSet.from_members(graph.n, _int_list(w, f"bundle.witness[{i}]"))
        for i, w in enumerate(_get(doc, "witness", "bundle"))
    ]
    cores = [
        NodeSet.from_members(graph.n, _int_list(c, f"bundle.cores[{i}]"))
        for i, c in enumerate(_get(doc, "cores", "bundle"))
    ]
    return graph, fam, witness, cores
