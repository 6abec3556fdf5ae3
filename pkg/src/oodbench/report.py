"""Report containers and their serializations.

One evaluation produces either a RobustnessReport (corruption or
variation mode) or an ApiGridReport (api mode).  JSON is the canonical
on-disk form (fractions as numbers, sorted keys); csv and markdown
render the per-kind table with a clean row and an Average row;
radar/line JSON carry chart series.
"""

import json
from dataclasses import dataclass, field

from .errors import FormatError
from .metrics import VARIATION_KINDS, ApiReport
from .params import CATEGORIES, CATEGORY_OF

REPORT_FORMATS = ("csv", "json", "markdown", "radar_json", "line_json")


@dataclass
class RobustnessReport:
    mode: str
    policy: str
    threshold: float | None
    acc_clean: float
    acc_mean: float
    relative_error: float
    cells: dict[str, dict[int, float]]
    rce_cells: dict[str, dict[int, float]]
    kind_means: dict[str, float]
    category_means: dict[str, float] = field(default_factory=dict)


@dataclass
class ApiGridReport:
    mode: str
    policy: str
    threshold: float | None
    clean: ApiReport
    cells: dict[str, dict[int, ApiReport]]
    kind_means: dict[str, dict[str, float]]
    averages: dict[str, float]


def _kind_order(mode: str, kinds) -> list[str]:
    known: list[str] = []
    if mode == "variation":
        known = [k for k in VARIATION_KINDS if k in kinds]
    else:
        for members in CATEGORIES.values():
            known += [k for k in members if k in kinds]
    return known + sorted(k for k in kinds if k not in known)


def _category_label(mode: str, kind: str) -> str:
    if mode == "variation":
        return "variation"
    return CATEGORY_OF.get(kind, "other")


def _pct(x: float) -> str:
    return f"{x * 100.0:.2f}"


def to_json_dict(report) -> dict:
    if isinstance(report, RobustnessReport):
        return {
            "mode": report.mode,
            "policy": report.policy,
            "threshold": report.threshold,
            "acc_clean": report.acc_clean,
            "acc_mean": report.acc_mean,
            "relative_error": report.relative_error,
            "cells": {k: {str(l): v for l, v in row.items()} for k, row in report.cells.items()},
            "rce_cells": {
                k: {str(l): v for l, v in row.items()} for k, row in report.rce_cells.items()
            },
            "kind_means": dict(report.kind_means),
            "category_means": dict(report.category_means),
        }
    if isinstance(report, ApiGridReport):
        return {
            "mode": report.mode,
            "policy": report.policy,
            "threshold": report.threshold,
            "clean": {"rr": report.clean.rr, "asa": report.clean.asa, "aa": report.clean.aa},
            "cells": {
                k: {
                    str(l): {"rr": c.rr, "asa": c.asa, "aa": c.aa}
                    for l, c in row.items()
                }
                for k, row in report.cells.items()
            },
            "kind_means": {k: dict(v) for k, v in report.kind_means.items()},
            "averages": dict(report.averages),
        }
    raise FormatError(f"unknown report object {type(report)!r}")


def from_json_dict(data: dict):
    mode = data.get("mode")
    if mode in ("corruption", "variation"):
        return RobustnessReport(
            mode=mode,
            policy=data["policy"],
            threshold=data["threshold"],
            acc_clean=data["acc_clean"],
            acc_mean=data["acc_mean"],
            relative_error=data["relative_error"],
            cells={k: {int(l): v for l, v in row.items()} for k, row in data["cells"].items()},
            rce_cells={
                k: {int(l): v for l, v in row.items()} for k, row in data["rce_cells"].items()
            },
            kind_means=data["kind_means"],
            category_means=data.get("category_means", {}),
        )
    if mode == "api":
        return ApiGridReport(
            mode=mode,
            policy=data["policy"],
            threshold=data["threshold"],
            clean=ApiReport(**data["clean"]),
            cells={
                k: {int(l): ApiReport(**c) for l, c in row.items()}
                for k, row in data["cells"].items()
            },
            kind_means={k: dict(v) for k, v in data["kind_means"].items()},
            averages=dict(data["averages"]),
        )
    raise FormatError(f"report JSON has unknown mode {mode!r}")


def _robustness_rows(report: RobustnessReport) -> list[list[str]]:
    rows = [["category", "kind", "level_1", "level_2", "level_3", "level_4", "level_5", "mean"]]
    rows.append(["clean", "clean", "", "", "", "", "", _pct(report.acc_clean)])
    for kind in _kind_order(report.mode, report.cells):
        cells = report.cells[kind]
        rows.append(
            [_category_label(report.mode, kind), kind]
            + [_pct(cells[l]) for l in (1, 2, 3, 4, 5)]
            + [_pct(report.kind_means[kind])]
        )
    rows.append(["average", "average", "", "", "", "", "", _pct(report.acc_mean)])
    return rows


def _api_rows(report: ApiGridReport) -> list[list[str]]:
    rows = [["category", "kind", "rr", "asa", "aa"]]
    c = report.clean
    rows.append(["clean", "clean", _pct(c.rr), _pct(c.asa), _pct(c.aa)])
    for kind in _kind_order("corruption", report.cells):
        m = report.kind_means[kind]
        rows.append(
            [_category_label("corruption", kind), kind, _pct(m["rr"]), _pct(m["asa"]), _pct(m["aa"])]
        )
    a = report.averages
    rows.append(["average", "average", _pct(a["rr"]), _pct(a["asa"]), _pct(a["aa"])])
    return rows


def emit_report(report, format: str) -> bytes:
    """Serialize a report; byte-stable for identical inputs."""
    if format == "json":
        return (json.dumps(to_json_dict(report), sort_keys=True, indent=2) + "\n").encode()
    rows = _api_rows(report) if isinstance(report, ApiGridReport) else _robustness_rows(report)
    if format == "csv":
        return ("\n".join(",".join(r) for r in rows) + "\n").encode()
    if format == "markdown":
        header, *body = rows
        lines = ["| " + " | ".join(header) + " |"]
        lines.append("|" + "|".join(" --- " for _ in header) + "|")
        lines += ["| " + " | ".join(r) + " |" for r in body]
        return ("\n".join(lines) + "\n").encode()
    if isinstance(report, ApiGridReport):
        raise FormatError(f"format {format!r} is not defined for api reports")
    if format == "radar_json":
        axes = _kind_order(report.mode, report.cells)
        data = {
            "mode": report.mode,
            "axes": axes,
            "values": [report.kind_means[k] for k in axes],
        }
        return (json.dumps(data, sort_keys=True, indent=2) + "\n").encode()
    if format == "line_json":
        series = [
            {
                "kind": kind,
                "levels": [1, 2, 3, 4, 5],
                "values": [report.cells[kind][l] for l in (1, 2, 3, 4, 5)],
            }
            for kind in _kind_order(report.mode, report.cells)
        ]
        data = {"mode": report.mode, "series": series}
        return (json.dumps(data, sort_keys=True, indent=2) + "\n").encode()
    raise FormatError(f"unknown report format {format!r}")
