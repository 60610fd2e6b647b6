"""JSON and text rendering of analysis reports.

JSON shape, shared by all reports::

    {query, params, outcome, witness_structure?, cover?, cores?, elapsed_ms, search_complete}

``elapsed_ms`` is ``null`` unless timing is requested, so that identical
searches render to identical bytes.
"""
from __future__ import annotations

import json

from .analysis import EXHAUSTED, FOUND, NONE_UP_TO, CoreReport, CounterexampleReport, CoverReport
from .syntax import print_structure


def report_to_dict(report, timing: bool = False) -> dict:
    if isinstance(report, CoreReport):
        d = {
            "query": "cores",
            "params": {"structure": report.structure, "theory": list(report.theory), "k": report.k},
            "outcome": "no_core" if report.is_psc_witness_failure else "cores_found",
            "cores": [list(c) for c in report.cores],
            "minimal_cores": [list(c) for c in report.minimal_cores],
            "is_psc_witness_failure": report.is_psc_witness_failure,
        }
        complete = True
    elif isinstance(report, CoverReport):
        d = {
            "query": "covers",
            "params": {"structure": report.structure, "sentence": report.sentence, "k": report.k},
            "outcome": FOUND if report.found else "none",
            "models_sentence": report.models_sentence,
            "cover": [list(x) for x in report.cover] if report.cover is not None else None,
        }
        complete = report.complete
    elif isinstance(report, CounterexampleReport):
        d = {"query": report.query, "params": report.params, "outcome": report.outcome, "bound": report.bound}
        if report.structure is not None:
            d["witness_structure"] = print_structure(report.structure)
            d["index"] = report.index
        if "cover" in report.details:
            d["cover"] = report.details["cover"]
        if "cores" in report.details:
            d["cores"] = report.details["cores"]
        extra = {k: v for k, v in report.details.items() if k not in ("cover", "cores")}
        if extra:
            d["details"] = extra
        if report.checked is not None:
            d["structures_checked"] = report.checked
        complete = report.search_complete
    else:
        raise TypeError(f"not a report: {type(report).__name__}")
    d["elapsed_ms"] = round(report.elapsed_ms, 3) if timing else None
    d["search_complete"] = complete
    return d


def _text(report) -> str:
    if isinstance(report, CoreReport):
        lines = [f"cores of {report.structure} (size <= {report.k}):"]
        lines += [f"  {{{', '.join(c)}}}" for c in report.cores] or ["  none"]
        lines.append("minimal cores: " + ("; ".join("{" + ", ".join(c) + "}" for c in report.minimal_cores) or "none"))
        if report.is_psc_witness_failure:
            lines.append(f"no core of size <= {report.k}")
        return "\n".join(lines)
    if isinstance(report, CoverReport):
        if report.models_sentence:
            return f"{report.structure} models the sentence; no counterexample"
        if report.cover is None:
            return f"no {report.k}-ary cover of {report.structure} by models of the sentence"
        lines = [f"{report.k}-ary cover of {report.structure} by models of the sentence:"]
        lines += [f"  {{{', '.join(x)}}}" for x in report.cover]
        return "\n".join(lines)
    if isinstance(report, CounterexampleReport):
        if report.outcome == NONE_UP_TO:
            return f"no counterexample up to size {report.bound} (search complete)"
        if report.outcome == EXHAUSTED:
            return f"search budget exhausted before size {report.bound} was covered (search incomplete)"
        lines = [f"counterexample found ({report.query}, index {report.index}):", print_structure(report.structure)]
        for key, val in report.details.items():
            lines.append(f"{key}: {json.dumps(val)}")
        return "\n".join(lines)
    raise TypeError(f"not a report: {type(report).__name__}")


def render_report(report, fmt: str = "json", timing: bool = False) -> str:
    if fmt == "json":
        return json.dumps(report_to_dict(report, timing), indent=2) + "\n"
    if fmt == "text":
        return _text(report) + "\n"
    raise ValueError(f"unknown format {fmt!r}")
