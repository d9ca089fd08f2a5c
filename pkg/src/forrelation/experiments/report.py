"""Experiment report records and their JSON / CSV encodings.

A report row carries everything needed to recompute its verdict: the
estimate, the target, a tolerance and the relation between them.

    ">="  pass iff estimate >= target - tolerance
    ">"   pass iff estimate >  target - tolerance
    "<="  pass iff estimate <= target + tolerance
    "=="  pass iff |estimate - target| <= tolerance

A negative tolerance on ">=" demands a margin (e.g. a 3-SE separation).
Rows with ``gating = False`` are informational and never fail a report.
"""
from __future__ import annotations

import csv
import enum
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Optional

RELATIONS = (">=", ">", "<=", "==")


class Verdict(str, enum.Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    INFORMATIONAL = "INFORMATIONAL"


def _clean(x):
    if x is None:
        return None
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        return None
    return x


def compare(estimate: float, relation: str, target: float, tolerance: float) -> bool:
    if relation == ">=":
        return estimate >= target - tolerance
    if relation == ">":
        return estimate > target - tolerance
    if relation == "<=":
        return estimate <= target + tolerance
    if relation == "==":
        return abs(estimate - target) <= tolerance
    raise ValueError(f"unknown relation {relation!r}")


@dataclass
class Row:
    metric: str
    estimate: float
    se: Optional[float] = None
    target: Optional[float] = None
    tolerance: float = 0.0
    relation: str = "=="
    gating: bool = True

    def __post_init__(self):
        if self.relation not in RELATIONS:
            raise ValueError(f"unknown relation {self.relation!r}")
        self.estimate = _clean(self.estimate)
        self.se = _clean(self.se)
        self.target = _clean(self.target)
        self.tolerance = _clean(self.tolerance) or 0.0

    @property
    def verdict(self) -> Verdict:
        if not self.gating or self.target is None:
            return Verdict.INFORMATIONAL
        if self.estimate is None:
            return Verdict.FAIL
        ok = compare(self.estimate, self.relation, self.target, self.tolerance)
        return Verdict.PASS if ok else Verdict.FAIL

    def to_dict(self) -> dict:
        return {
            "metric": self.metric,
            "estimate": self.estimate,
            "se": self.se,
            "target": self.target,
            "tolerance": self.tolerance,
            "relation": self.relation,
            "gating": self.gating,
            "verdict": self.verdict.value,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Row":
        row = cls(d["metric"], d["estimate"], d.get("se"), d.get("target"),
                  d.get("tolerance", 0.0), d.get("relation", "=="), d.get("gating", True))
        if "verdict" in d and d["verdict"] != row.verdict.value:
            raise ValueError(f"stored verdict for {row.metric!r} does not match its data")
        return row


def aggregate(verdicts: Iterable[Verdict]) -> Verdict:
    verdicts = list(verdicts)
    if Verdict.FAIL in verdicts:
        return Verdict.FAIL
    if Verdict.PASS in verdicts:
        return Verdict.PASS
    return Verdict.INFORMATIONAL


@dataclass
class ExperimentReport:
    experiment: str
    params: dict[str, Any]
    seed: int
    rows: list[Row] = field(default_factory=list)
    duration_ms: Optional[float] = None

    @property
    def verdict(self) -> Verdict:
        return aggregate(r.verdict for r in self.rows)

    def row(self, metric: str) -> Row:
        for r in self.rows:
            if r.metric == metric:
                return r
        raise KeyError(metric)

    def add(self, *args, **kwargs) -> Row:
        r = Row(*args, **kwargs)
        self.rows.append(r)
        return r

    def to_dict(self, include_timing: bool = False) -> dict:
        return {
            "experiment": self.experiment,
            "params": self.params,
            "seed": self.seed,
            "verdict": self.verdict.value,
            "rows": [r.to_dict() for r in self.rows],
            "duration_ms": round(self.duration_ms, 3) if include_timing and self.duration_ms is not None else None,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentReport":
        rep = cls(d["experiment"], d["params"], d["seed"],
                  [Row.from_dict(r) for r in d["rows"]], d.get("duration_ms"))
        if "verdict" in d and d["verdict"] != rep.verdict.value:
            raise ValueError(f"stored verdict for {rep.experiment!r} does not match its rows")
        return rep


def dumps_json(reports: list[ExperimentReport], include_timing: bool = False) -> str:
    payload = [r.to_dict(include_timing) for r in reports]
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def loads_json(text: str) -> list[ExperimentReport]:
    return [ExperimentReport.from_dict(d) for d in json.loads(text)]


CSV_FIELDS = ["experiment", "seed", "params", "metric", "estimate", "se", "target",
              "tolerance", "relation", "gating", "verdict"]


def dumps_csv(reports: list[ExperimentReport]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for rep in reports:
        params = json.dumps(rep.params, sort_keys=True, separators=(",", ":"))
        for r in rep.rows:
            d = r.to_dict()
            writer.writerow({
                "experiment": rep.experiment, "seed": rep.seed, "params": params,
                **{k: ("" if d[k] is None else repr(d[k]) if isinstance(d[k], float) else d[k])
                   for k in CSV_FIELDS[3:]},
            })
    return buf.getvalue()
