"""Reader and writer for ``.tsm`` manifests.

A manifest is line-oriented ``key = value`` text.  ``#`` starts a comment,
list values are comma separated, and every expression uses the scalar
coefficient grammar.  Example::

    format_version = 1
    mode = chart
    frame.1 = exp(2*z), 0, 0
    frame.2 = 0, exp(2*z), 0
    frame.3 = 0, 0, 1
    phi.1 = 0, 1, 0
    phi.2 = -1, 0, 0
    phi.3 = 0, 0, 0
    xi = 0, 0, 1

``phi.i`` lists the frame components of ``phi(e_i)``; ``bracket.ij`` (lie
mode) lists those of ``[e_i, e_j]``.  ``reference.*`` keys carry published
values that the run audits against the computed ones.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import sympy as sp

from . import scalar
from .scalar import ExprSyntaxError, GrammarError

FORMAT_VERSION = 1
SUITES = ("almost-contact", "connection", "curvature", "trans-sasakian", "identities",
          "soliton", "theorem-3-1", "theorem-3-2")
KINDS = ("ricci", "conformal_ricci", "star_ricci", "star_conformal_ricci")
BRACKET_PAIRS = ("12", "13", "23")

# reference key pattern -> number of values
_REFERENCE_KEYS = {
    r"reference\.bracket\.(12|13|23)": 3,
    r"reference\.connection\.[1-3][1-3]": 3,
    r"reference\.riemann\.[1-3][1-3][1-3]": 3,
    r"reference\.ricci\.diag": 3,
    r"reference\.scalar": 1,
    r"reference\.lie_g\.diag": 3,
    r"reference\.lambda": 1,
    r"reference\.type": 2,
}


class ManifestError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)
        self.message = message
        self.line = line
        self.column = column


@dataclass
class Manifest:
    format_version: int
    mode: str
    phi: tuple
    xi: tuple
    coords: tuple = ("x", "y", "z")
    frame: tuple | None = None
    brackets: dict | None = None
    metric: tuple | None = None
    eta: tuple | None = None
    V: tuple | None = None
    soliton: str = "ricci"
    p: Fraction | None = None
    lam: Fraction | str = "solve"
    base_point: tuple = (Fraction(0), Fraction(0), Fraction(0))
    suites: tuple = ("all",)
    reference: dict = field(default_factory=dict)

    def equivalent(self, other: "Manifest") -> bool:
        return _normal(self) == _normal(other)


def _normal(m: Manifest):
    def ex(v):
        if v is None:
            return None
        if isinstance(v, dict):
            return {k: ex(x) for k, x in sorted(v.items())}
        if isinstance(v, (tuple, list)):
            return tuple(ex(x) for x in v)
        if isinstance(v, sp.Basic):
            return scalar.to_text(v)
        return v
    return {k: ex(v) for k, v in vars(m).items()}


# --------------------------------------------------------------------------
# parsing


@dataclass
class _Entry:
    key: str
    value: str
    line: int
    column: int  # 1-based column where value starts


def _split_values(entry: _Entry) -> list[tuple[str, int]]:
    parts = []
    start = 0
    text = entry.value
    depth = 0
    for pos, ch in enumerate(text + ","):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            raw = text[start:pos]
            lead = len(raw) - len(raw.lstrip())
            parts.append((raw.strip(), entry.column + start + lead))
            start = pos + 1
    if depth != 0:
        raise ManifestError(f"{entry.key}: unbalanced parentheses", entry.line, entry.column + start)
    return parts


def _expr(entry: _Entry, text: str, column: int):
    try:
        return scalar.parse(text)
    except ExprSyntaxError as exc:
        raise ManifestError(f"{entry.key}: {exc.message}", entry.line, column + exc.column - 1) from None
    except GrammarError as exc:
        raise ManifestError(f"{entry.key}: {exc}", entry.line, column) from None


def _exprs(entry: _Entry, count: int) -> tuple:
    parts = _split_values(entry)
    if len(parts) != count:
        raise ManifestError(f"{entry.key} expects {count} values, got {len(parts)}", entry.line, entry.column)
    return tuple(_expr(entry, t, c) for t, c in parts)


def _rationals(entry: _Entry, count: int) -> tuple:
    values = _exprs(entry, count)
    out = []
    for v, (_, col) in zip(values, _split_values(entry)):
        if not v.is_Rational:
            raise ManifestError(f"{entry.key}: expected a rational constant", entry.line, col)
        out.append(Fraction(int(v.p), int(v.q)))
    return tuple(out)


def _lines(text: str) -> list[_Entry]:
    entries = []
    seen: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        if "=" not in line:
            col = len(line) - len(line.lstrip()) + 1
            raise ManifestError("expected 'key = value'", lineno, col)
        key_part, value_part = line.split("=", 1)
        key = key_part.strip()
        if not re.fullmatch(r"[A-Za-z_][\w.]*", key):
            raise ManifestError(f"malformed key {key!r}", lineno, len(key_part) - len(key_part.lstrip()) + 1)
        if key in seen:
            raise ManifestError(f"duplicate key {key!r} (first on line {seen[key]})", lineno, 1)
        seen[key] = lineno
        value_col = len(key_part) + 2 + (len(value_part) - len(value_part.lstrip()))
        entries.append(_Entry(key, value_part.strip(), lineno, value_col))
    return entries


def parse_manifest(text: str) -> Manifest:
    """Parse and validate manifest text; raises :class:`ManifestError`."""
    entries = {e.key: e for e in _lines(text)}
    known = {"format_version", "mode", "coords", "xi", "eta", "V", "soliton", "p", "lambda",
             "base_point", "suites"}
    known |= {f"{k}.{i}" for k in ("frame", "metric", "phi") for i in "123"}
    known |= {f"bracket.{pq}" for pq in BRACKET_PAIRS}
    for key, e in entries.items():
        if key in known:
            continue
        if key.startswith("reference.") and any(re.fullmatch(p, key) for p in _REFERENCE_KEYS):
            continue
        raise ManifestError(f"unknown key {key!r}", e.line, 1)

    def need(key):
        if key not in entries:
            raise ManifestError(f"missing {key}")
        return entries[key]

    e = need("mode")
    mode = e.value
    if mode not in ("chart", "lie"):
        raise ManifestError(f"mode must be 'chart' or 'lie', got {mode!r}", e.line, e.column)

    e = need("format_version")
    if not re.fullmatch(r"\d+", e.value) or int(e.value) != FORMAT_VERSION:
        raise ManifestError(f"unsupported format_version {e.value!r}", e.line, e.column)

    coords = ("x", "y", "z")
    if "coords" in entries:
        e = entries["coords"]
        names = tuple(t for t, _ in _split_values(e))
        if names != coords:
            raise ManifestError("coords must be x, y, z", e.line, e.column)

    frame = brackets = None
    if mode == "chart":
        frame = tuple(_exprs(need(f"frame.{i}"), 3) for i in "123")
        for key in entries:
            if key.startswith("bracket."):
                raise ManifestError("bracket.* keys are only valid in lie mode", entries[key].line, 1)
    else:
        brackets = {pq: _rationals(need(f"bracket.{pq}"), 3) for pq in BRACKET_PAIRS}
        for key in entries:
            if key.startswith("frame."):
                raise ManifestError("frame.* keys are only valid in chart mode", entries[key].line, 1)

    metric = None
    if any(f"metric.{i}" in entries for i in "123"):
        metric = tuple(_exprs(need(f"metric.{i}"), 3) for i in "123")

    phi = tuple(_rationals(need(f"phi.{i}"), 3) for i in "123")
    xi = _exprs(need("xi"), 3)
    eta = _exprs(entries["eta"], 3) if "eta" in entries else None
    V = _exprs(entries["V"], 3) if "V" in entries else None

    if mode == "lie":
        for key, vals in (("xi", xi), ("eta", eta), ("V", V)):
            if vals is not None and not all(scalar.is_constant(v) for v in vals):
                raise ManifestError(f"{key} must be constant in lie mode", entries[key].line, entries[key].column)
        if metric is not None and not all(scalar.is_constant(v) for row in metric for v in row):
            raise ManifestError("metric must be constant in lie mode", entries["metric.1"].line, 1)

    soliton = "ricci"
    if "soliton" in entries:
        e = entries["soliton"]
        if e.value not in KINDS:
            raise ManifestError(f"unknown soliton kind {e.value!r}", e.line, e.column)
        soliton = e.value
    p = None
    if "p" in entries:
        p = _rationals(entries["p"], 1)[0]
    if soliton in ("conformal_ricci", "star_conformal_ricci") and p is None:
        raise ManifestError(f"missing p (required for soliton = {soliton})")
    if p is not None and soliton not in ("conformal_ricci", "star_conformal_ricci"):
        e = entries["p"]
        raise ManifestError("p only applies to conformal soliton kinds", e.line, e.column)

    lam: Fraction | str = "solve"
    if "lambda" in entries:
        e = entries["lambda"]
        lam = "solve" if e.value == "solve" else _rationals(e, 1)[0]

    base_point = (Fraction(0),) * 3
    if "base_point" in entries:
        base_point = _rationals(entries["base_point"], 3)

    suites: tuple = ("all",)
    if "suites" in entries:
        e = entries["suites"]
        suites = tuple(t for t, _ in _split_values(e))
        for name, col in _split_values(e):
            if name != "all" and name not in SUITES:
                raise ManifestError(f"unknown suite {name!r}", e.line, col)

    reference = {}
    for key, e in entries.items():
        if key.startswith("reference."):
            count = next(n for pat, n in _REFERENCE_KEYS.items() if re.fullmatch(pat, key))
            reference[key[len("reference."):]] = _exprs(e, count)

    return Manifest(FORMAT_VERSION, mode, phi, xi, coords, frame, brackets, metric, eta, V,
                    soliton, p, lam, base_point, suites, reference)


def load_manifest(path: str | Path) -> Manifest:
    return parse_manifest(Path(path).read_text(encoding="utf-8"))


# --------------------------------------------------------------------------
# emitting


def _fmt(values) -> str:
    out = []
    for v in values:
        if isinstance(v, Fraction):
            out.append(str(v))
        else:
            out.append(scalar.to_text(v))
    return ", ".join(out)


def emit_manifest(m: Manifest) -> str:
    lines = [f"format_version = {m.format_version}", f"mode = {m.mode}",
             f"coords = {', '.join(m.coords)}"]
    if m.frame is not None:
        lines += [f"frame.{i + 1} = {_fmt(row)}" for i, row in enumerate(m.frame)]
    if m.brackets is not None:
        lines += [f"bracket.{pq} = {_fmt(m.brackets[pq])}" for pq in BRACKET_PAIRS]
    if m.metric is not None:
        lines += [f"metric.{i + 1} = {_fmt(row)}" for i, row in enumerate(m.metric)]
    lines += [f"phi.{i + 1} = {_fmt(row)}" for i, row in enumerate(m.phi)]
    lines.append(f"xi = {_fmt(m.xi)}")
    if m.eta is not None:
        lines.append(f"eta = {_fmt(m.eta)}")
    if m.V is not None:
        lines.append(f"V = {_fmt(m.V)}")
    lines.append(f"soliton = {m.soliton}")
    if m.p is not None:
        lines.append(f"p = {m.p}")
    lines.append(f"lambda = {m.lam}")
    lines.append(f"base_point = {_fmt(m.base_point)}")
    lines.append(f"suites = {', '.join(m.suites)}")
    for key in sorted(m.reference):
        lines.append(f"reference.{key} = {_fmt(m.reference[key])}")
    return "\n".join(lines) + "\n"
