"""Check reports: per-identity pass/fail records and their text/JSON renderings."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Iterable, Mapping

import sympy as sp

from . import __version__, scalar

PASS = "pass"
FAIL = "fail"
NUMERIC_PASS = "numeric-pass"
NOT_APPLICABLE = "not-applicable"
STATUSES = (PASS, FAIL, NUMERIC_PASS, NOT_APPLICABLE)

SCHEMA_VERSION = 1


@dataclass
class CheckItem:
    identity_id: str
    paper_ref: str
    status: str
    residual_components: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    conflicts_with_paper: bool = False
    values: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"bad status {self.status!r}")
        if not self.paper_ref:
            raise ValueError(f"item {self.identity_id} needs a paper_ref")

    @property
    def ok(self) -> bool:
        return self.status != FAIL


@dataclass
class CheckReport:
    suite: str
    items: list = field(default_factory=list)
    engine_version: str = __version__

    def add(self, item: CheckItem) -> CheckItem:
        self.items.append(item)
        return item

    def extend(self, items: Iterable[CheckItem]):
        self.items.extend(items)

    @property
    def summary(self) -> dict:
        counts = {s: 0 for s in STATUSES}
        for it in self.items:
            counts[it.status] += 1
        counts["conflicts_with_paper"] = sum(it.conflicts_with_paper for it in self.items)
        return counts

    @property
    def passed(self) -> bool:
        return all(it.ok for it in self.items)

    def item(self, identity_id: str) -> CheckItem:
        for it in self.items:
            if it.identity_id == identity_id:
                return it
        raise KeyError(identity_id)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "engine_version": self.engine_version,
            "items": [asdict(it) for it in self.items],
            "summary": self.summary,
        }


def label(idx: tuple[int, ...], prefix: str = "") -> str:
    return prefix + "".join(str(i + 1) for i in idx)


def residual_item(identity_id: str, paper_ref: str, residuals: Mapping[str, object],
                  notes: Iterable[str] = (), values: dict | None = None) -> CheckItem:
    """Build an item from named residual expressions that should all vanish."""
    bad = []
    numeric = False
    for name, expr in residuals.items():
        test = scalar.is_zero(expr)
        if not test:
            bad.append([name, scalar.to_text(expr)])
        numeric = numeric or test.numeric
    if bad:
        status = FAIL
    else:
        status = NUMERIC_PASS if numeric else PASS
    return CheckItem(identity_id, paper_ref, status, bad, list(notes), values=values or {})


def not_applicable(identity_id: str, paper_ref: str, reason: str, **values) -> CheckItem:
    return CheckItem(identity_id, paper_ref, NOT_APPLICABLE, notes=[reason], values=_texts(values))


def _texts(values: dict) -> dict:
    out = {}
    for k, v in values.items():
        if isinstance(v, sp.Basic):
            out[k] = scalar.to_text(v)
        elif isinstance(v, (list, tuple)):
            out[k] = [scalar.to_text(x) if isinstance(x, sp.Basic) else x for x in v]
        elif isinstance(v, dict):
            out[k] = _texts(v)
        else:
            out[k] = v
    return out


texts = _texts


# --------------------------------------------------------------------------
# rendering


def exit_code(reports: Iterable[CheckReport]) -> int:
    return 0 if all(r.passed for r in reports) else 2


def render_json(reports: list[CheckReport], manifest_name: str = "") -> str:
    payload = {
        "schema_version": SCHEMA_VERSION,
        "engine_version": __version__,
        "manifest": manifest_name,
        "suites": [r.to_dict() for r in reports],
        "summary": _total(reports),
        "exit_code": exit_code(reports),
    }
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _total(reports: list[CheckReport]) -> dict:
    total: dict = {}
    for r in reports:
        for k, v in r.summary.items():
            total[k] = total.get(k, 0) + v
    return total


def render_text(reports: list[CheckReport], manifest_name: str = "") -> str:
    lines = []
    if manifest_name:
        lines.append(f"manifest: {manifest_name}")
    for rep in reports:
        lines.append(f"== {rep.suite} ==")
        for it in rep.items:
            flag = "  [conflicts with published value]" if it.conflicts_with_paper else ""
            lines.append(f"  {it.status.upper():<15} {it.identity_id}{flag}")
            for name, text in it.residual_components:
                lines.append(f"      residual {name}: {text}")
            for k, v in it.values.items():
                lines.append(f"      {k}: {v}")
            for note in it.notes:
                lines.append(f"      note: {note}")
    total = _total(reports)
    lines.append(
        "summary: " + ", ".join(f"{k}={total.get(k, 0)}" for k in (*STATUSES, "conflicts_with_paper"))
    )
    return "\n".join(lines) + "\n"
