"""File formats.

Every document is an envelope ``{"format_version", "kind", "payload"}``
serialized as canonical JSON (sorted keys, compact separators) so identical
content is byte-identical on disk.  Strict parsing rejects unknown fields;
instances double as test fixtures, and silent drift would break oracle
comparisons.

Enumeration results use JSON Lines: the envelope header on the first line,
then one solution per line.  That allows streamed writing and indexed reads;
:class:`ResultReader` serves individual solutions without holding the whole
set in memory.
"""
from __future__ import annotations

import json
import os
from fractions import Fraction
from typing import Any, Iterable, Iterator, Mapping

import numpy as np

from .graphs import Dag, MixedGraph, VariableTable
from .instances import GroundTruthInstance
from .integrate import IntegrationInput
from .metrics import MetricsReport
from .oracle import OracleResult, OracleSolution
from .refine import ConstraintSet
from .search import EnumerationResult, SearchStats, Solution

FORMAT_VERSION = "1"
KINDS = (
    "instance",
    "camuv-input",
    "enumeration-result",
    "metrics",
    "constraints",
    "oracle-result",
)


class DocumentError(ValueError):
    """Malformed or mismatched document."""


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


def _take(obj: Any, required: dict[str, type], optional: dict[str, type] | None = None,
          strict: bool = True, where: str = "document") -> dict[str, Any]:
    if not isinstance(obj, dict):
        raise DocumentError(f"{where}: expected an object, got {type(obj).__name__}")
    optional = optional or {}
    missing = [k for k in required if k not in obj]
    if missing:
        raise DocumentError(f"{where}: missing fields {missing}")
    if strict:
        unknown = [k for k in obj if k not in required and k not in optional]
        if unknown:
            raise DocumentError(f"{where}: unknown fields {unknown}")
    out = {}
    for k, typ in {**required, **optional}.items():
        if k not in obj:
            continue
        v = obj[k]
        if typ is not None and v is not None and not isinstance(v, typ):
            raise DocumentError(f"{where}: field {k!r} has wrong type {type(v).__name__}")
        out[k] = v
    return out


def envelope(kind: str, payload: Any) -> dict[str, Any]:
    if kind not in KINDS:
        raise DocumentError(f"unknown document kind {kind!r}")
    return {"format_version": FORMAT_VERSION, "kind": kind, "payload": payload}


def open_envelope(doc: Any, expected_kind: str | None = None, strict: bool = True) -> tuple[str, Any]:
    fields = _take(doc, {"format_version": str, "kind": str, "payload": None},
                   strict=strict, where="envelope")
    if fields["format_version"] != FORMAT_VERSION:
        raise DocumentError(f"unsupported format_version {fields['format_version']!r}")
    kind = fields["kind"]
    if kind not in KINDS:
        raise DocumentError(f"unknown document kind {kind!r}")
    if expected_kind is not None and kind != expected_kind:
        raise DocumentError(f"expected kind {expected_kind!r}, found {kind!r}")
    return kind, fields["payload"]


def _edge_list(edges: Iterable[tuple[int, int]]) -> list[list[int]]:
    return [[int(u), int(w)] for u, w in sorted(edges)]


def _parse_edges(raw: Any, where: str) -> list[tuple[int, int]]:
    if not isinstance(raw, list):
        raise DocumentError(f"{where}: expected a list of edges")
    out = []
    for e in raw:
        if not (isinstance(e, list) and len(e) == 2 and all(isinstance(x, int) for x in e)):
            raise DocumentError(f"{where}: bad edge entry {e!r}")
        out.append((e[0], e[1]))
    return out


def _parse_ids(raw: Any, where: str) -> list[int]:
    if not isinstance(raw, list) or not all(isinstance(x, int) for x in raw):
        raise DocumentError(f"{where}: expected a list of ids")
    return list(raw)


# ---------------------------------------------------------------- instance

def instance_payload(instance: GroundTruthInstance) -> dict[str, Any]:
    return {
        "d": instance.d,
        "p": instance.p,
        "m": instance.m,
        "u": instance.u,
        "seed": instance.seed,
        "truth_edges": _edge_list(instance.truth.edges),
        "views": [sorted(v) for v in instance.views],
    }


def parse_instance(payload: Any, strict: bool = True) -> GroundTruthInstance:
    f = _take(payload, {"d": int, "p": None, "m": int, "u": int, "seed": None,
                        "truth_edges": list, "views": list},
              strict=strict, where="instance")
    truth = Dag(f["d"], _parse_edges(f["truth_edges"], "instance.truth_edges"))
    views = tuple(frozenset(_parse_ids(v, "instance.views")) for v in f["views"])
    p = f["p"]
    if p is not None and not isinstance(p, (int, float)):
        raise DocumentError("instance: p must be a number or null")
    seed = f["seed"]
    if seed is not None and not isinstance(seed, int):
        raise DocumentError("instance: seed must be an integer or null")
    return GroundTruthInstance(
        truth=truth, views=views, seed=seed, d=f["d"],
        p=None if p is None else float(p), m=f["m"], u=f["u"],
    )


# ------------------------------------------------------------- camuv-input

def input_payload(input: IntegrationInput) -> dict[str, Any]:
    return {
        "names": list(input.table.names),
        "datasets": [
            {
                "observed": sorted(g.observed),
                "directed": _edge_list(g.directed),
                "unidentified": _edge_list(g.unidentified),
            }
            for g in input.results
        ],
    }


def parse_input(payload: Any, strict: bool = True) -> IntegrationInput:
    f = _take(payload, {"names": list, "datasets": list}, strict=strict, where="camuv-input")
    table = VariableTable(tuple(str(n) for n in f["names"]))
    results = []
    for k, raw in enumerate(f["datasets"]):
        g = _take(raw, {"observed": list, "directed": list, "unidentified": list},
                  strict=strict, where=f"camuv-input.datasets[{k}]")
        results.append(
            MixedGraph(
                _parse_ids(g["observed"], f"datasets[{k}].observed"),
                _parse_edges(g["directed"], f"datasets[{k}].directed"),
                _parse_edges(g["unidentified"], f"datasets[{k}].unidentified"),
            )
        )
    return IntegrationInput(table, results)


# ------------------------------------------------------------- constraints

def constraints_payload(c: ConstraintSet) -> dict[str, Any]:
    return {
        "sinks": sorted(c.sinks),
        "required_edges": _edge_list(c.required_edges),
        "forbidden_edges": _edge_list(c.forbidden_edges),
        "required_absent_pairs": _edge_list(c.required_absent_pairs),
    }


def parse_constraints(payload: Any, strict: bool = True) -> ConstraintSet:
    f = _take(payload, {}, optional={"sinks": list, "required_edges": list,
                                     "forbidden_edges": list, "required_absent_pairs": list},
              strict=strict, where="constraints")
    return ConstraintSet(
        _parse_ids(f.get("sinks", []), "constraints.sinks"),
        _parse_edges(f.get("required_edges", []), "constraints.required_edges"),
        _parse_edges(f.get("forbidden_edges", []), "constraints.forbidden_edges"),
        _parse_edges(f.get("required_absent_pairs", []), "constraints.required_absent_pairs"),
    )


# ------------------------------------------------------------------ metrics

def _fraction_str(x: Fraction | None) -> str | None:
    return None if x is None else f"{x.numerator}/{x.denominator}"


def _parse_fraction(raw: Any, where: str) -> Fraction | None:
    if raw is None:
        return None
    if not isinstance(raw, str):
        raise DocumentError(f"{where}: expected a 'p/q' string or null")
    try:
        num, den = raw.split("/")
        return Fraction(int(num), int(den))
    except Exception:
        raise DocumentError(f"{where}: bad rational {raw!r}") from None


def metrics_report_payload(report: MetricsReport) -> dict[str, Any]:
    return {
        "solution_count": report.solution_count,
        "mtp": _fraction_str(report.mtp),
        "mfp": _fraction_str(report.mfp),
        "mfn": _fraction_str(report.mfn),
        "recall": _fraction_str(report.recall),
        "precision": _fraction_str(report.precision),
        "f1": _fraction_str(report.f1),
        "mtp_value": float(report.mtp),
        "mfp_value": float(report.mfp),
        "mfn_value": float(report.mfn),
        "recall_value": None if report.recall is None else float(report.recall),
        "precision_value": None if report.precision is None else float(report.precision),
        "f1_value": None if report.f1 is None else float(report.f1),
        "frequencies": [[float(x) for x in row] for row in report.frequencies],
        "restricted_to": None if report.restricted_to is None else _edge_list(report.restricted_to),
    }


def parse_metrics_report(payload: Any, strict: bool = True) -> MetricsReport:
    f = _take(payload,
              {"solution_count": int, "mtp": str, "mfp": str, "mfn": str,
               "recall": None, "precision": None, "f1": None,
               "mtp_value": None, "mfp_value": None, "mfn_value": None,
               "recall_value": None, "precision_value": None, "f1_value": None,
               "frequencies": list, "restricted_to": None},
              strict=strict, where="metrics")
    freq = np.array(f["frequencies"], dtype=np.float64)
    freq.setflags(write=False)
    restricted = f["restricted_to"]
    return MetricsReport(
        frequencies=freq,
        mtp=_parse_fraction(f["mtp"], "metrics.mtp"),
        mfp=_parse_fraction(f["mfp"], "metrics.mfp"),
        mfn=_parse_fraction(f["mfn"], "metrics.mfn"),
        recall=_parse_fraction(f["recall"], "metrics.recall"),
        precision=_parse_fraction(f["precision"], "metrics.precision"),
        f1=_parse_fraction(f["f1"], "metrics.f1"),
        solution_count=f["solution_count"],
        restricted_to=None if restricted is None else
        frozenset((e[0], e[1]) for e in _parse_edges(restricted, "metrics.restricted_to")),
    )


def metrics_payload(reports: Mapping[str, MetricsReport], names: Iterable[str]) -> dict[str, Any]:
    return {
        "names": list(names),
        "reports": {key: metrics_report_payload(r) for key, r in sorted(reports.items())},
    }


def parse_metrics(payload: Any, strict: bool = True) -> dict[str, MetricsReport]:
    f = _take(payload, {"names": list, "reports": dict}, strict=strict, where="metrics")
    return {key: parse_metrics_report(raw, strict) for key, raw in f["reports"].items()}


# ------------------------------------------------------------ oracle-result

def oracle_payload(result: OracleResult, names: Iterable[str]) -> dict[str, Any]:
    return {
        "names": list(names),
        "budget": result.budget,
        "assignments_examined": result.assignments_examined,
        "dag_count": result.dag_count,
        "c_star": result.c_star,
        "cost_histogram": {str(k): v for k, v in sorted(result.cost_histogram.items())},
        "solutions": [
            {"cost": s.cost, "edges": _edge_list(s.graph.edges)} for s in result.solutions
        ],
    }


def parse_oracle(payload: Any, strict: bool = True) -> tuple[OracleResult, VariableTable]:
    f = _take(payload, {"names": list, "budget": int, "assignments_examined": int,
                        "dag_count": int, "c_star": int, "cost_histogram": dict,
                        "solutions": list},
              strict=strict, where="oracle-result")
    table = VariableTable(tuple(str(n) for n in f["names"]))
    d = len(table)
    sols = []
    for k, raw in enumerate(f["solutions"]):
        s = _take(raw, {"cost": int, "edges": list}, strict=strict,
                  where=f"oracle-result.solutions[{k}]")
        sols.append(OracleSolution(Dag(d, _parse_edges(s["edges"], "edges")), s["cost"]))
    histogram = {}
    for k, v in f["cost_histogram"].items():
        try:
            key = int(k)
        except ValueError:
            raise DocumentError(f"oracle-result: bad histogram key {k!r}") from None
        if not isinstance(v, int):
            raise DocumentError("oracle-result: histogram values must be integers")
        histogram[key] = v
    result = OracleResult(
        assignments_examined=f["assignments_examined"],
        dag_count=f["dag_count"],
        cost_histogram=dict(sorted(histogram.items())),
        c_star=f["c_star"],
        budget=f["budget"],
        solutions=tuple(sols),
    )
    return result, table


# ------------------------------------------------- single-document file I/O

def write_document(path: str, kind: str, payload: Any) -> None:
    text = canonical_json(envelope(kind, payload)) + "\n"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def dump_document(kind: str, payload: Any) -> str:
    return canonical_json(envelope(kind, payload)) + "\n"


def read_document(path: str, expected_kind: str | None = None, strict: bool = True) -> Any:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"{path}: invalid JSON ({exc})") from None
    _, payload = open_envelope(doc, expected_kind, strict)
    return payload


# -------------------------------------------- enumeration results (JSONL)

def _result_header(result: EnumerationResult) -> dict[str, Any]:
    return {
        "names": list(result.table.names),
        "budget": result.budget,
        "c_star": result.c_star,
        "complete": result.complete,
        "limit_hit": result.limit_hit,
        "solution_count": len(result.solutions),
        # wall time is intentionally absent: output files must be
        # byte-identical across reruns
        "stats": {"popped": result.stats.popped, "pushed": result.stats.pushed},
    }


def solution_line(cost: int, edges: Iterable[tuple[int, int]]) -> str:
    return canonical_json({"cost": cost, "edges": _edge_list(edges)})


def write_result(path_or_fh, result: EnumerationResult) -> None:
    """Stream an enumeration result: header line, then one solution per line."""
    own = isinstance(path_or_fh, (str, os.PathLike))
    fh = open(path_or_fh, "w", encoding="utf-8") if own else path_or_fh
    try:
        fh.write(canonical_json(envelope("enumeration-result", _result_header(result))) + "\n")
        for s in result.solutions:
            fh.write(solution_line(s.cost, s.graph.edges) + "\n")
    finally:
        if own:
            fh.close()


def _parse_header(line: str, strict: bool) -> dict[str, Any]:
    try:
        doc = json.loads(line)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"result header: invalid JSON ({exc})") from None
    _, payload = open_envelope(doc, "enumeration-result", strict)
    f = _take(payload, {"names": list, "budget": int, "c_star": None, "complete": bool,
                        "limit_hit": None, "solution_count": int, "stats": dict},
              strict=strict, where="result header")
    stats = _take(f["stats"], {"popped": int, "pushed": int}, strict=strict,
                  where="result header.stats")
    f["stats"] = stats
    return f


def _parse_solution_line(line: str, d: int, strict: bool) -> Solution:
    try:
        raw = json.loads(line)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"result line: invalid JSON ({exc})") from None
    s = _take(raw, {"cost": int, "edges": list}, strict=strict, where="result line")
    return Solution(Dag(d, _parse_edges(s["edges"], "result line.edges")), s["cost"])


class ResultReader:
    """Indexed, lazy access to a result file; solutions are read on demand."""

    def __init__(self, path: str, strict: bool = True):
        self.path = str(path)
        self.strict = strict
        self._fh = open(self.path, "r", encoding="utf-8")
        header_line = self._fh.readline()
        if not header_line:
            raise DocumentError(f"{path}: empty result file")
        self.header = _parse_header(header_line, strict)
        self.table = VariableTable(tuple(str(n) for n in self.header["names"]))
        self._offsets: list[int] = []
        pos = self._fh.tell()
        while True:
            line = self._fh.readline()
            if not line:
                break
            if line.strip():
                self._offsets.append(pos)
            pos = self._fh.tell()
        if len(self._offsets) != self.header["solution_count"]:
            raise DocumentError(
                f"{path}: header promises {self.header['solution_count']} solutions, "
                f"file holds {len(self._offsets)}"
            )

    @property
    def count(self) -> int:
        return len(self._offsets)

    @property
    def dimension(self) -> int:
        return len(self.table)

    def solution(self, index: int) -> Solution:
        if not (0 <= index < len(self._offsets)):
            raise IndexError(f"solution index {index} out of range 0..{len(self._offsets) - 1}")
        self._fh.seek(self._offsets[index])
        return _parse_solution_line(self._fh.readline(), self.dimension, self.strict)

    def __iter__(self) -> Iterator[Solution]:
        for k in range(len(self._offsets)):
            yield self.solution(k)

    def close(self) -> None:
        self._fh.close()

    def __enter__(self) -> "ResultReader":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def read_result(path: str, strict: bool = True) -> EnumerationResult:
    """Load a result file fully into an EnumerationResult (wall time is not
    stored on disk and comes back as 0)."""
    with ResultReader(path, strict) as reader:
        solutions = list(reader)
        h = reader.header
        return EnumerationResult(
            table=reader.table,
            budget=h["budget"],
            c_star=h["c_star"],
            solutions=solutions,
            stats=SearchStats(h["stats"]["popped"], h["stats"]["pushed"], 0.0),
            complete=h["complete"],
            limit_hit=h["limit_hit"],
        )
