"""JSON manifests describing four-map systems, plus the map mini-language.

Numeric maps are named builtins with parameters:  "affine:a,b" is
x -> a*x + b,  "constant:c" is x -> c,  and "identity" is a shorthand for
"affine:1,0".  Finite maps are index arrays.  Validation errors carry the
offending field path.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Callable

from .common import FiniteDomain, FourMapSystem, MAP_NAMES
from .core import (
    DistanceTable,
    Interval,
    exp_abs_metric,
    parse_flavor,
    read_table_csv,
)


class ManifestError(ValueError):
    """Schema violation; `path` names the offending field."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


def parse_numeric_map(spec: str, where: str = "map") -> Callable[[float], float]:
    spec = spec.strip()
    if spec == "identity":
        return lambda x: x
    kind, _, params = spec.partition(":")
    if kind == "affine":
        try:
            a_str, b_str = params.split(",")
            a, b = float(a_str), float(b_str)
        except ValueError:
            raise ManifestError(where, f"affine map needs two numbers, got {params!r}") from None
        return lambda x: a * x + b
    if kind == "constant":
        try:
            c = float(params)
        except ValueError:
            raise ManifestError(where, f"constant map needs one number, got {params!r}") from None
        return lambda x: c
    raise ManifestError(where, f"unknown map spec {spec!r}; use affine:a,b | constant:c | identity")


def _require(cond: bool, path: str, message: str):
    if not cond:
        raise ManifestError(path, message)


def _finite_map(raw, n: int, path: str) -> tuple[int, ...]:
    _require(isinstance(raw, list), path, "finite map must be an index array")
    _require(len(raw) == n, path, f"expected {n} entries, got {len(raw)}")
    out = []
    for i, v in enumerate(raw):
        _require(isinstance(v, int) and not isinstance(v, bool), f"{path}[{i}]",
                 f"{v!r} is not an integer index")
        _require(0 <= v < n, f"{path}[{i}]", f"index {v} out of range [0,{n})")
        out.append(v)
    return tuple(out)


def load_system_manifest(path) -> FourMapSystem:
    """Parse and validate a system manifest; referenced files must exist and
    parse before any computation starts."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except FileNotFoundError:
        raise ManifestError("<file>", f"manifest {path} does not exist") from None
    except json.JSONDecodeError as e:
        raise ManifestError("<file>", f"manifest is not valid JSON: {e}") from None
    _require(isinstance(raw, dict), "<root>", "manifest must be a JSON object")

    allowed = {"domain", "maps", "metric", "sections", "continuity"}
    for key in raw:
        _require(key in allowed, key, f"unexpected field (allowed: {sorted(allowed)})")
    for key in ("domain", "maps", "metric"):
        _require(key in raw, key, "required field is missing")

    dom_raw = raw["domain"]
    _require(isinstance(dom_raw, dict), "domain", "must be an object")
    kind = dom_raw.get("kind")
    if kind == "finite":
        labels = dom_raw.get("labels")
        _require(isinstance(labels, list) and labels, "domain.labels", "need a nonempty label list")
        _require(all(isinstance(l, str) for l in labels), "domain.labels", "labels must be strings")
        _require(len(set(labels)) == len(labels), "domain.labels", "labels must be unique")
        domain = FiniteDomain(tuple(labels))
    elif kind == "interval":
        lo, hi = dom_raw.get("lo"), dom_raw.get("hi")
        _require(isinstance(lo, (int, float)) and isinstance(hi, (int, float)),
                 "domain", "interval needs numeric lo and hi")
        _require(math.isfinite(lo) and math.isfinite(hi) and lo < hi,
                 "domain", f"need finite lo < hi, got [{lo}, {hi}]")
        domain = Interval(float(lo), float(hi))
    else:
        raise ManifestError("domain.kind", f"expected 'finite' or 'interval', got {kind!r}")

    maps_raw = raw["maps"]
    _require(isinstance(maps_raw, dict), "maps", "must be an object")
    _require(set(maps_raw) == set(MAP_NAMES), "maps",
             f"need exactly the maps {list(MAP_NAMES)}, got {sorted(maps_raw)}")
    maps = {}
    for name in MAP_NAMES:
        spec = maps_raw[name]
        if isinstance(domain, FiniteDomain):
            maps[name] = _finite_map(spec, domain.n, f"maps.{name}")
        else:
            _require(isinstance(spec, str), f"maps.{name}", "numeric maps are string specs")
            maps[name] = parse_numeric_map(spec, where=f"maps.{name}")

    metric_raw = raw["metric"]
    _require(isinstance(metric_raw, dict), "metric", "must be an object")
    if "builtin" in metric_raw:
        _require(metric_raw["builtin"] == "exp-abs", "metric.builtin",
                 f"unknown builtin {metric_raw['builtin']!r}; only 'exp-abs' is defined")
        _require(isinstance(domain, Interval), "metric.builtin",
                 "builtin metrics need an interval domain")
        metric = exp_abs_metric(domain)
    else:
        _require({"file", "flavor"} <= set(metric_raw), "metric",
                 "need either {builtin} or {file, flavor}")
        _require(isinstance(domain, FiniteDomain), "metric.file",
                 "table metrics need a finite domain")
        table_path = Path(metric_raw["file"])
        if not table_path.is_absolute():
            table_path = path.parent / table_path
        _require(table_path.exists(), "metric.file", f"{table_path} does not exist")
        try:
            flavor = parse_flavor(str(metric_raw["flavor"]))
            table = read_table_csv(table_path, flavor)
        except ValueError as e:
            raise ManifestError("metric.file", str(e)) from None
        _require(table.n == domain.n, "metric.file",
                 f"table has {table.n} points, domain has {domain.n}")
        default_labels = tuple(str(i) for i in range(table.n))
        if table.labels == default_labels:
            table = DistanceTable(domain.labels, table.entries, table.flavor)
        else:
            _require(table.labels == domain.labels, "metric.file",
                     "table labels disagree with domain labels")
        metric = table

    sections = None
    if "sections" in raw:
        sec_raw = raw["sections"]
        _require(isinstance(sec_raw, dict), "sections", "must be an object")
        _require(isinstance(domain, Interval), "sections", "sections only apply to interval domains")
        _require(set(sec_raw) <= {"A", "B"}, "sections",
                 "sections are right inverses of A and B only")
        sections = {
            name: parse_numeric_map(spec, where=f"sections.{name}")
            for name, spec in sec_raw.items()
        }

    continuity = None
    if "continuity" in raw:
        continuity = raw["continuity"]
        _require(continuity in MAP_NAMES, "continuity",
                 f"must name one of {list(MAP_NAMES)}, got {continuity!r}")

    try:
        return FourMapSystem(
            domain=domain,
            A=maps["A"], B=maps["B"], S=maps["S"], T=maps["T"],
            metric=metric,
            sections=sections,
            continuity_declaration=continuity,
        )
    except ValueError as e:
        raise ManifestError("<system>", str(e)) from None
