"""Command line front end.

Subcommands: solve, exact, certify, analyze, witness, check-family, gen.
All output is canonical JSON on stdout.  Exit codes: 0 success (and "the
property holds" / "the certificate verifies"), 1 negative verdict, finding,
or infeasible instance, 2 usage errors and malformed input, 3 an exhaustive
guard refused the computation.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import sys

from . import __version__
from .errors import (
    CoverNotMinimalError,
    GenerationError,
    GuardError,
    InfeasibleError,
    NoLaminarWitnessError,
)
from .exact import FAMILY_CLASSES, brute_force_opt, certify
from .gens import instance_rng, random_instance, tight_beta, tight_seven, tight_six
from .jsonio import (
    SCHEMA_VERSION,
    SchemaError,
    analysis_to_json,
    bound_report_to_json,
    bundle_parts_from_json,
    bundle_to_json,
    certificate_to_json,
    check_result_to_json,
    dumps_canonical,
    family_spec_from_json,
    instance_digest,
    instance_from_json,
    instance_to_json,
    Instance,
    nodeset_to_json,
    trace_from_json,
    trace_to_json,
)
from .setfam import (
    ExplicitFamily,
    crossing_number,
    is_gamma_pliable,
    is_pliable,
    is_proper_family,
    is_sparse,
    is_uncrossable,
    CheckResult,
)
from .treeanal import analyze_trace, build_tree, emit_dot, verify_bounds
from .wgmv import solve
from .witness import laminar_witness


def _read_json(path: str):
    text = sys.stdin.read() if path == "-" else open(path, "r", encoding="utf-8").read()
    return json.loads(text)


def _emit(doc) -> None:
    print(dumps_canonical(doc))


def _power_of_two(text: str) -> int:
    value = int(text)
    if value < 1 or value & (value - 1):
        raise argparse.ArgumentTypeError(f"{value} is not a power of two")
    return value


def _add_class_args(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--family-class",
        choices=FAMILY_CLASSES,
        default="gamma",
        help="family class whose guarantee is checked (default: gamma)",
    )
    p.add_argument("--beta", type=int, help="crossing number, required for class 'beta'")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pliablecover",
        description="primal-dual covers of set families with exact certificates",
    )
    parser.add_argument(
        "--version",
        action="version",
        version=f"pliablecover {__version__} (schema {SCHEMA_VERSION})",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run the two-phase solver, print the trace")
    p.add_argument("instance", nargs="?", default="-", help="instance JSON file, or - for stdin")

    p = sub.add_parser("exact", help="exact optimum by branch and bound")
    p.add_argument("instance", nargs="?", default="-")

    p = sub.add_parser("certify", help="verify a run against its guarantee")
    p.add_argument("instance", nargs="?", default="-")
    _add_class_args(p)
    p.add_argument("--trace", help="trace JSON to certify (default: re-run the solver)")
    p.add_argument(
        "--with-opt",
        action="store_true",
        help="also compare against the exact optimum (subject to the search guard)",
    )

    p = sub.add_parser("analyze", help="witness-tree analysis of a run or a generator bundle")
    p.add_argument("input", nargs="?", default="-", help="instance or bundle JSON, - for stdin")
    _add_class_args(p)
    p.add_argument("--dot", help="write the shortcut tree in DOT format to this file")

    p = sub.add_parser("witness", help="laminar witness of the solver's cover")
    p.add_argument("instance", nargs="?", default="-")

    p = sub.add_parser("check-family", help="decide a structural property of a family")
    p.add_argument("family", nargs="?", default="-", help="family JSON file, or - for stdin")
    p.add_argument(
        "--property",
        required=True,
        choices=["pliable", "gamma", "sparse", "proper", "uncrossable", "crossing-number"],
    )
    p.add_argument("--mode", choices=["exhaustive", "sampled"], default="exhaustive")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("gen", help="generate a tight construction or random instances")
    p.add_argument(
        "--kind",
        required=True,
        choices=["tight7", "tight6", "tight-beta", "gamma", "sparse", "uncrossable"],
    )
    p.add_argument("--leaves", type=_power_of_two, help="gadget count for the tight kinds")
    p.add_argument("--beta", type=_power_of_two, help="group size for kind tight-beta")
    p.add_argument("--count", type=int, default=1, help="number of random instances")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, help="universe size for random instances")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers for random batches")
    return parser


def _cmd_solve(args) -> int:
    inst = instance_from_json(_read_json(args.instance))
    trace = solve(inst.graph, inst.oracle())
    _emit(trace_to_json(inst.graph, trace, instance_digest(inst)))
    return 0


def _cmd_exact(args) -> int:
    inst = instance_from_json(_read_json(args.instance))
    opt, solution = brute_force_opt(inst.graph, inst.oracle())
    _emit(
        {
            "version": SCHEMA_VERSION,
            "instance_digest": instance_digest(inst),
            "opt_cost": [opt.numerator, opt.denominator],
            "solution": list(solution),
        }
    )
    return 0


def _cmd_certify(args) -> int:
    inst = instance_from_json(_read_json(args.instance))
    oracle = inst.oracle()
    if args.trace:
        trace = trace_from_json(_read_json(args.trace), inst.graph.n)
    else:
        trace = solve(inst.graph, oracle)
    opt = brute_force_opt(inst.graph, oracle)[0] if args.with_opt else None
    cert = certify(
        inst.graph,
        oracle,
        trace,
        args.family_class,
        beta=args.beta,
        opt=opt,
        instance_digest=instance_digest(inst),
    )
    _emit(certificate_to_json(cert))
    return 0 if cert.verdict else 1


def _cmd_analyze(args) -> int:
    doc = _read_json(args.input)
    if isinstance(doc, dict) and "witness" in doc:
        graph, fam, witness, cores = bundle_parts_from_json(doc)
        tree = build_tree(
            graph.n, [(i, graph.pair(i)) for i in range(len(graph.edges))], witness, cores
        )
        beta = args.beta if args.beta is not None else doc.get("beta")
        report = verify_bounds(tree, args.family_class, beta)
        if args.dot:
            with open(args.dot, "w", encoding="utf-8") as fh:
                fh.write(emit_dot(tree))
        _emit(
            {
                "version": SCHEMA_VERSION,
                "mode": "bundle",
                "family_class": args.family_class,
                "beta": beta,
                "ok": report.ok,
                "report": bound_report_to_json(report),
            }
        )
        return 0 if report.ok else 1
    inst = instance_from_json(doc)
    trace = solve(inst.graph, inst.oracle())
    report = analyze_trace(inst.graph, inst.explicit_family(), trace, args.family_class, args.beta)
    out = analysis_to_json(report)
    out["mode"] = "trace"
    _emit(out)
    return 0 if report.ok else 1


def _cmd_witness(args) -> int:
    inst = instance_from_json(_read_json(args.instance))
    trace = solve(inst.graph, inst.oracle())
    fam = inst.explicit_family()
    pairs = [inst.graph.pair(e) for e in trace.solution]
    assignment = laminar_witness(fam, pairs)
    _emit(
        {
            "version": SCHEMA_VERSION,
            "instance_digest": instance_digest(inst),
            "solution": list(trace.solution),
            "witness": [nodeset_to_json(w) for w in assignment],
        }
    )
    return 0


def _cmd_check_family(args) -> int:
    fam = family_spec_from_json(_read_json(args.family))
    if not isinstance(fam, ExplicitFamily):
        from .smallcuts import materialize_family

        fam = materialize_family(fam)
    if args.property == "crossing-number":
        beta = crossing_number(fam, mode=args.mode, samples=args.samples, seed=args.seed)
        _emit({"version": SCHEMA_VERSION, "crossing_number": beta, "mode": args.mode})
        return 0
    if args.property == "pliable":
        result = CheckResult("pliable", is_pliable(fam), None, "exhaustive")
    elif args.property == "proper":
        result = CheckResult("proper", is_proper_family(fam), None, "exhaustive")
    elif args.property == "uncrossable":
        result = CheckResult("uncrossable", is_uncrossable(fam), None, "exhaustive")
    elif args.property == "gamma":
        result = is_gamma_pliable(fam, mode=args.mode, samples=args.samples, seed=args.seed)
    else:
        result = is_sparse(fam, mode=args.mode, samples=args.samples, seed=args.seed)
    _emit(check_result_to_json(result))
    return 0 if result.holds else 1


def _gen_random_one(kind: str, seed: int, index: int, n: int | None) -> dict:
    graph, fam = random_instance(kind, instance_rng(seed, index), n)
    return instance_to_json(Instance(graph, fam))


def _cmd_gen(args) -> int:
    if args.kind in ("tight7", "tight6", "tight-beta"):
        if not args.leaves:
            raise SchemaError("--leaves is required for the tight kinds")
        if args.kind == "tight7":
            bundle = tight_seven(args.leaves)
        elif args.kind == "tight6":
            bundle = tight_six(args.leaves)
        else:
            if not args.beta:
                raise SchemaError("--beta is required for kind tight-beta")
            bundle = tight_beta(args.leaves, args.beta)
        _emit(bundle_to_json(bundle))
        return 0
    if args.count < 1:
        raise SchemaError("--count must be at least 1")
    if args.jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=args.jobs) as pool:
            docs = list(
                pool.map(
                    _gen_random_one,
                    [args.kind] * args.count,
                    [args.seed] * args.count,
                    range(args.count),
                    [args.n] * args.count,
                )
            )
    else:
        docs = [_gen_random_one(args.kind, args.seed, i, args.n) for i in range(args.count)]
    _emit(
        {
            "version": SCHEMA_VERSION,
            "kind": args.kind,
            "seed": args.seed,
            "instances": docs,
        }
    )
    return 0


_COMMANDS = {
    "solve": _cmd_solve,
    "exact": _cmd_exact,
    "certify": _cmd_certify,
    "analyze": _cmd_analyze,
    "witness": _cmd_witness,
    "check-family": _cmd_check_family,
    "gen": _cmd_gen,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except json.JSONDecodeError as exc:
        print(
            f"error: malformed JSON at line {exc.lineno} column {exc.colno} "
            f"(char {exc.pos}): {exc.msg}",
            file=sys.stderr,
        )
        return 2
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except GuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except InfeasibleError as exc:
        _emit(
            {
                "version": SCHEMA_VERSION,
                "error": "infeasible",
                "core": sorted(exc.core.members()),
            }
        )
        return 1
    except (CoverNotMinimalError, NoLaminarWitnessError) as exc:
        _emit({"version": SCHEMA_VERSION, "error": "finding", "detail": str(exc)})
        return 1
    except GenerationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
