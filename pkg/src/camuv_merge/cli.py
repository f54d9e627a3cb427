"""Command-line surface.

Subcommands cover the whole pipeline: ``generate`` a synthetic instance,
``project`` it to per-dataset CAM-UV results, ``inject`` estimation errors,
``enumerate`` the low-inconsistency DAGs (best-first) or sweep them with the
brute-force ``oracle``, ``evaluate`` accuracy metrics against the ground
truth, ``filter``/``sample`` solution sets, and ``serve`` a result file over
HTTP for the exploration UI.

Exit codes: 0 success, 1 usage, 2 validation, 3 search interrupted by a
safety limit (partial result still written).  Diagnostics go to stderr; data
goes to the output file or stdout.
"""
from __future__ import annotations

import argparse
import sys

from . import documents
from .instances import ErrorSpec, generate_instance, inject_errors, project_all
from .integrate import ORDER_POLICIES, overlap
from .metrics import evaluate_metrics
from .oracle import brute_force_enumerate
from .refine import filter_solutions, sample_result
from .search import SearchLimits, enumerate_dags
from .server import DEFAULT_PORT, PORT_ENV_VAR, serve_http


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_output(p: _Parser) -> None:
    p.add_argument("-o", "--output", default="-", help="output file (default: stdout)")


def _emit(args, text: str) -> None:
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)


def build_parser() -> _Parser:
    parser = _Parser(prog="camuv-merge", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--strict", action=argparse.BooleanOptionalAction, default=True,
                        help="reject unknown fields in input documents (default: on)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="sample a ground-truth instance")
    p.add_argument("--d", type=int, required=True, help="variable count")
    p.add_argument("--p", type=float, required=True, help="edge probability")
    p.add_argument("--m", type=int, required=True, help="dataset count")
    p.add_argument("--u", type=int, required=True, help="unobserved variables per dataset")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--max-attempts", type=int, default=10_000)
    _add_output(p)
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("project", help="ideal CAM-UV projection of an instance")
    p.add_argument("--instance", required=True)
    _add_output(p)
    p.set_defaults(func=_cmd_project)

    p = sub.add_parser("inject", help="perturb CAM-UV results with estimation errors")
    p.add_argument("--input", required=True, help="camuv-input file")
    p.add_argument("--mode", required=True, choices=("spurious-n", "dropped-edge", "dropped-n"))
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    _add_output(p)
    p.set_defaults(func=_cmd_inject)

    p = sub.add_parser("enumerate", help="best-first enumeration of low-cost DAGs")
    p.add_argument("--input", required=True, help="camuv-input file")
    p.add_argument("--budget", type=int, default=0)
    p.add_argument("--order", default="constrained-first", choices=ORDER_POLICIES)
    p.add_argument("--max-popped", type=int, default=None,
                   help="override the popped-state safety limit")
    p.add_argument("--max-seconds", type=float, default=None,
                   help="override the wall-clock safety limit")
    p.add_argument("--repair", action="store_true",
                   help="drop cycle-closing edges instead of failing on a cyclic overlap")
    _add_output(p)
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("oracle", help="exhaustive sweep (reference implementation)")
    p.add_argument("--input", required=True, help="camuv-input file")
    p.add_argument("--budget", type=int, default=0)
    p.add_argument("--cap", type=int, default=12, help="maximum open-pair count")
    _add_output(p)
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("evaluate", help="accuracy metrics of a result against its instance")
    p.add_argument("--result", required=True)
    p.add_argument("--instance", required=True)
    _add_output(p)
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("filter", help="keep solutions satisfying constraints")
    p.add_argument("--result", required=True)
    p.add_argument("--constraints", required=True)
    _add_output(p)
    p.set_defaults(func=_cmd_filter)

    p = sub.add_parser("sample", help="uniform sample of a solution set")
    p.add_argument("--result", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    _add_output(p)
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("serve", help="serve a result file over HTTP")
    p.add_argument("--result", required=True)
    p.add_argument("--port", type=int, default=None,
                   help=f"port (default: ${PORT_ENV_VAR} or {DEFAULT_PORT})")
    p.add_argument("--host", default="127.0.0.1")
    p.set_defaults(func=_cmd_serve)

    return parser


def _cmd_generate(args) -> int:
    instance = generate_instance(args.d, args.p, args.m, args.u, args.seed, args.max_attempts)
    _emit(args, documents.dump_document("instance", documents.instance_payload(instance)))
    return 0


def _cmd_project(args) -> int:
    instance = documents.parse_instance(
        documents.read_document(args.instance, "instance", args.strict), args.strict)
    merged = project_all(instance)
    _emit(args, documents.dump_document("camuv-input", documents.input_payload(merged)))
    return 0


def _cmd_inject(args) -> int:
    merged = documents.parse_input(
        documents.read_document(args.input, "camuv-input", args.strict), args.strict)
    perturbed = inject_errors(merged, ErrorSpec(args.mode, args.count, args.seed))
    _emit(args, documents.dump_document("camuv-input", documents.input_payload(perturbed)))
    return 0


def _cmd_enumerate(args) -> int:
    merged = documents.parse_input(
        documents.read_document(args.input, "camuv-input", args.strict), args.strict)
    defaults = SearchLimits()
    limits = SearchLimits(
        max_popped=args.max_popped if args.max_popped is not None else defaults.max_popped,
        max_seconds=args.max_seconds if args.max_seconds is not None else defaults.max_seconds,
    )
    result = enumerate_dags(merged, budget=args.budget, limits=limits,
                            policy=args.order, repair=args.repair)
    if args.output == "-":
        documents.write_result(sys.stdout, result)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            documents.write_result(fh, result)
    if not result.complete:
        print(f"warning: search interrupted by {result.limit_hit} limit; "
              f"partial result written", file=sys.stderr)
        return 3
    return 0


def _cmd_oracle(args) -> int:
    merged = documents.parse_input(
        documents.read_document(args.input, "camuv-input", args.strict), args.strict)
    result = brute_force_enumerate(merged, budget=args.budget, cap=args.cap)
    payload = documents.oracle_payload(result, merged.table.names)
    _emit(args, documents.dump_document("oracle-result", payload))
    return 0


def _cmd_evaluate(args) -> int:
    result = documents.read_result(args.result, args.strict)
    instance = documents.parse_instance(
        documents.read_document(args.instance, "instance", args.strict), args.strict)
    merged = project_all(instance)
    base = overlap(merged)
    dags = [s.graph for s in result.solutions]
    truth = instance.truth
    d = instance.d
    all_pairs = {(i, j) for i in range(d) for j in range(i + 1, d)}
    never = base.never_coobserved_pairs
    reports = {
        "overall": evaluate_metrics(dags, truth),
        "never_coobserved": evaluate_metrics(dags, truth, restrict=never),
        "co_observed": evaluate_metrics(dags, truth, restrict=all_pairs - never),
    }
    payload = documents.metrics_payload(reports, result.table.names)
    _emit(args, documents.dump_document("metrics", payload))
    return 0


def _cmd_filter(args) -> int:
    result = documents.read_result(args.result, args.strict)
    constraints = documents.parse_constraints(
        documents.read_document(args.constraints, "constraints", args.strict), args.strict)
    filtered = filter_solutions(result, constraints)
    if args.output == "-":
        documents.write_result(sys.stdout, filtered)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            documents.write_result(fh, filtered)
    return 0


def _cmd_sample(args) -> int:
    result = documents.read_result(args.result, args.strict)
    sampled = sample_result(result, args.n, args.seed)
    if args.output == "-":
        documents.write_result(sys.stdout, sampled)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            documents.write_result(fh, sampled)
    return 0


def _cmd_serve(args) -> int:
    serve_http(args.result, port=args.port, host=args.host)
    return 0


def run_cli(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
