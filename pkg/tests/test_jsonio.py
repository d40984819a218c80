"""Tests for the wire formats: canonical bytes, round trips, schema errors."""

import json
from fractions import Fraction

import pytest

from pliablecover.exact import brute_force_opt, certify
from pliablecover.gens import tight_six
from pliablecover.jsonio import (
    Instance,
    SchemaError,
    analysis_to_json,
    bound_report_to_json,
    bundle_parts_from_json,
    bundle_to_json,
    capgraph_to_json,
    certificate_to_json,
    check_result_to_json,
    dumps_canonical,
    family_spec_from_json,
    family_to_json,
    frac_from_json,
    frac_to_json,
    graph_from_json,
    graph_to_json,
    instance_digest,
    instance_from_json,
    instance_to_json,
    trace_from_json,
    trace_to_json,
    tree_to_json,
)
from pliablecover.setfam import (
    ExplicitFamily,
    ExplicitFamilyOracle,
    NodeSet,
    is_gamma_pliable,
)
from pliablecover.smallcuts import CapGraph
from pliablecover.treeanal import analyze_trace, build_tree, verify_bounds
from pliablecover.wgmv import CostedGraph, solve


def small_instance():
    g = CostedGraph.build(3, [(0, 1, 2), (1, 2, Fraction(1, 2))])
    f = ExplicitFamily.from_sets(3, [[0], [2]])
    return Instance(g, f)


# ---------------------------------------------------------------------------
# scalars and canonical form


def test_frac_round_trip():
    assert frac_to_json(Fraction(3, 4)) == [3, 4]
    assert frac_to_json(Fraction(-5)) == [-5, 1]
    assert frac_from_json([3, 4], "x") == Fraction(3, 4)
    assert frac_from_json([2, 4], "x") == Fraction(1, 2)


@pytest.mark.parametrize("bad", [[1], [1, 0], [1, -2], ["1", 2], [True, 1], 7, None])
def test_frac_rejects_malformed_values(bad):
    with pytest.raises(SchemaError):
        frac_from_json(bad, "x")


def test_dumps_canonical_sorts_keys_and_strips_spaces():
    assert dumps_canonical({"b": 1, "a": [1, 2]}) == '{"a":[1,2],"b":1}'
    # key order of the input dict must not matter
    assert dumps_canonical({"a": [1, 2], "b": 1}) == dumps_canonical({"b": 1, "a": [1, 2]})


# ---------------------------------------------------------------------------
# families and graphs


def test_family_round_trip():
    f = ExplicitFamily.from_sets(4, [[0], [1, 2], [0, 1, 2]])
    doc = family_to_json(f)
    assert doc == {"kind": "explicit", "n": 4, "members": [[0], [0, 1, 2], [1, 2]]}
    assert family_spec_from_json(doc) == f


def test_capgraph_round_trip():
    h = CapGraph(3, ((0, 1, Fraction(2)), (1, 2, Fraction(1, 2))), Fraction(3))
    doc = capgraph_to_json(h)
    assert doc["kind"] == "small-cuts"
    assert family_spec_from_json(doc) == h


@pytest.mark.parametrize(
    "doc,fragment",
    [
        ({"n": 3, "members": []}, "missing key 'kind'"),
        ({"kind": "explicit", "members": []}, "missing key 'n'"),
        ({"kind": "explicit", "n": -1, "members": []}, "nonnegative"),
        ({"kind": "explicit", "n": 3, "members": [[]]}, "family"),
        ({"kind": "explicit", "n": 3, "members": [[0, "x"]]}, "list of integers"),
        ({"kind": "laminar", "n": 3}, "unknown family kind"),
        ({"kind": "small-cuts", "n": 3, "capacities": [[0, 1]], "threshold": [1, 1]}, "expected [u, v, cap]"),
        ({"kind": "small-cuts", "n": 3, "capacities": [[0, 1, [1, 0]]], "threshold": [1, 1]}, "denominator"),
    ],
)
def test_family_spec_schema_errors(doc, fragment):
    with pytest.raises(SchemaError) as ei:
        family_spec_from_json(doc)
    assert fragment in str(ei.value).replace("'", "'")


def test_graph_round_trip_and_errors():
    g = CostedGraph.build(4, [(0, 1, Fraction(7, 2)), (2, 3, 1)])
    assert graph_from_json(graph_to_json(g)) == g
    with pytest.raises(SchemaError, match="expected"):
        graph_from_json({"n": 4, "edges": [[0, 1]]})
    with pytest.raises(SchemaError, match="endpoints"):
        graph_from_json({"n": 4, "edges": [[0, "1", [1, 1]]]})
    with pytest.raises(SchemaError, match="graph"):
        graph_from_json({"n": 2, "edges": [[0, 0, [1, 1]]]})  # self-loop


# ---------------------------------------------------------------------------
# instances and digests


def test_instance_round_trip_both_family_kinds():
    inst = small_instance()
    assert instance_from_json(instance_to_json(inst)) == inst
    h = CapGraph(3, ((0, 1, Fraction(1)), (1, 2, Fraction(1))), Fraction(2))
    inst2 = Instance(CostedGraph.build(3, [(0, 2, 3)]), h)
    assert instance_from_json(instance_to_json(inst2)) == inst2


def test_instance_rejects_mismatched_universes():
    doc = instance_to_json(small_instance())
    doc["family"]["n"] = 4
    doc["family"]["members"] = [[0], [3]]
    with pytest.raises(SchemaError, match="differs from family universe"):
        instance_from_json(doc)


def test_instance_digest_is_stable():
    inst = small_instance()
    assert (
        instance_digest(inst)
        == "fda429eef65b2c93a726965274051ac36ff33d220551135c4e72c97b1e9f2679"
    )
    # any change to the data changes the digest
    other = Instance(CostedGraph.build(3, [(0, 1, 2), (1, 2, 1)]), inst.family)
    assert instance_digest(other) != instance_digest(inst)


def test_instance_canonical_bytes_are_frozen():
    expected = (
        '{"family":{"kind":"explicit","members":[[0],[2]],"n":3},'
        '"graph":{"edges":[[0,1,[2,1]],[1,2,[1,2]]],"n":3},"version":"1"}'
    )
    assert dumps_canonical(instance_to_json(small_instance())) == expected


# ---------------------------------------------------------------------------
# traces, certificates, reports


def solved_instance():
    g = CostedGraph.build(4, [(0, 1, 1), (1, 2, 2), (2, 3, 1), (0, 3, 2)])
    f = ExplicitFamily.from_sets(4, [[0], [3], [0, 1]])
    trace = solve(g, ExplicitFamilyOracle(f))
    return g, f, trace


def test_trace_round_trip():
    g, _f, trace = solved_instance()
    doc = trace_to_json(g, trace, digest="abc")
    assert doc["version"] == "1" and doc["instance_digest"] == "abc"
    # canonical text survives a JSON round trip unchanged
    assert json.loads(dumps_canonical(doc)) == doc
    assert trace_from_json(doc, g.n) == trace


def test_trace_from_json_schema_errors():
    g, _f, trace = solved_instance()
    doc = trace_to_json(g, trace)
    bad = json.loads(dumps_canonical(doc))
    del bad["solution"]
    with pytest.raises(SchemaError, match="missing key 'solution'"):
        trace_from_json(bad, g.n)
    bad = json.loads(dumps_canonical(doc))
    bad["dual"]["values"][0] = [[0], [1, 1], "extra"]
    with pytest.raises(SchemaError, match="expected \\[members, value\\]"):
        trace_from_json(bad, g.n)


def test_certificate_to_json_shape():
    g, f, trace = solved_instance()
    oracle = ExplicitFamilyOracle(f)
    opt, _ = brute_force_opt(g, oracle)
    cert = certify(g, oracle, trace, "gamma", opt=opt, instance_digest="d")
    doc = certificate_to_json(cert)
    assert doc["version"] == "1"
    assert doc["family_class"] == "gamma"
    assert doc["factor"] == [7, 1]
    assert doc["verdict"] is True
    assert [c["name"] for c in doc["checks"]][:3] == [
        "dual-nonnegative",
        "dual-feasible",
        "solution-tight",
    ]
    assert all(set(r) == {"index", "num_cores", "load", "bound", "ok"} for r in doc["iterations"])
    json.dumps(doc)  # must be serializable as-is


def test_report_and_tree_to_json():
    t = build_tree(
        4,
        [(0, (0, 3)), (1, (1, 3)), (2, (2, 3))],
        [NodeSet.from_members(4, [v]) for v in (0, 1, 2)],
        [NodeSet.from_members(4, [v]) for v in (0, 1, 2)],
    )
    rep = verify_bounds(t, "gamma")
    doc = bound_report_to_json(rep)
    assert doc["ok"] is True
    assert doc["counts"] == {
        "black": 3,
        "white": 1,
        "white_surviving": 1,
        "leaves": 3,
        "cores": 3,
        "tree_edges": 3,
    }
    assert {b["name"] for b in doc["bounds"]} >= {"total-weight-gamma", "leaves-vs-black"}
    tdoc = tree_to_json(t)
    assert tdoc["root"] == t.root
    assert len(tdoc["nodes"]) == 4 and len(tdoc["edges"]) == 3
    json.dumps(doc), json.dumps(tdoc)


def test_analysis_to_json_shape():
    g, f, trace = solved_instance()
    rep = analyze_trace(g, f, trace, "gamma")
    doc = analysis_to_json(rep)
    assert doc["version"] == "1" and doc["ok"] is True
    assert len(doc["iterations"]) == len(trace.iterations)
    json.dumps(doc)


def test_check_result_to_json_carries_the_version():
    doc = check_result_to_json(is_gamma_pliable(ExplicitFamily.from_sets(3, [[0]])))
    assert doc["version"] == "1"
    assert doc["property"] == "gamma-pliable"
    assert doc["holds"] is True


# ---------------------------------------------------------------------------
# bundles


def test_bundle_round_trip_rebuilds_a_verifiable_tree():
    b = tight_six(4)
    doc = json.loads(dumps_canonical(bundle_to_json(b)))
    graph, fam, witness, cores = bundle_parts_from_json(doc)
    assert graph == b.graph and fam == b.family
    assert tuple(witness) == b.witness and tuple(cores) == b.cores
    tree = build_tree(graph.n, [(i, graph.pair(i)) for i in range(len(graph.edges))], witness, cores)
    assert verify_bounds(tree, "sparse").ok


def test_bundle_rejects_smallcut_family():
    b = tight_six(2)
    doc = bundle_to_json(b)
    doc["family"] = capgraph_to_json(CapGraph(b.n, (), Fraction(1)))
    with pytest.raises(SchemaError, match="expected an explicit family"):
        bundle_parts_from_json(doc)
