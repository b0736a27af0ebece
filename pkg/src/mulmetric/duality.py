"""Bidirectional transforms between multiplicative and additive structures.

A multiplicative distance p >= 1 and the ordinary distance d = ln p carry
the same information; these transforms move tables and function-backed
metrics between the two forms and expose the Cauchy-tail equivalence as an
executable predicate.

Completeness transfers along the transforms as well, but no finite sample
can verify it: for function-backed metrics it is a declared property of
the domain, never something these operations claim to check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import (
    DistanceTable,
    DomainError,
    Flavor,
    Interval,
    MetricFn,
    StructureError,
)

CLAMP_TOL = 1e-12  # ln values this close below 0 are rounding artifacts


def ln_clamped(value: float, where=None) -> float:
    """Natural log of a multiplicative distance, clamped up to 0 when the
    raw result is a tiny negative from rounding.  Values below 1 beyond the
    clamp band are domain errors, not repairs."""
    if value <= 0.0:
        raise DomainError(f"multiplicative distance must be >= 1, got {value!r}"
                          + (f" at {where}" if where else ""), witness=where)
    raw = math.log(value)
    if raw < 0.0:
        if raw > -CLAMP_TOL:
            return 0.0
        raise DomainError(f"multiplicative distance must be >= 1, got {value!r}"
                          + (f" at {where}" if where else ""), witness=where)
    return raw


def _exp_checked(value: float, where=None) -> float:
    if value < 0.0:
        raise DomainError(f"additive distance must be >= 0, got {value!r}"
                          + (f" at {where}" if where else ""), witness=where)
    # e^d >= 1 for d >= 0; max() pins the declared codomain against any
    # rounding surprise
    return max(1.0, math.exp(value))


def log_transform(p: DistanceTable | MetricFn) -> DistanceTable | MetricFn:
    """d(x, y) = ln p(x, y): multiplicative in, additive out.

    For tables the transform is eager and validates every entry; for
    function-backed metrics validation happens at call time, raising a
    DomainError that carries the offending point pair.
    """
    if isinstance(p, DistanceTable):
        if p.flavor is not Flavor.MULTIPLICATIVE:
            raise StructureError(f"log_transform expects a multiplicative table, got {p.flavor.value}")
        entries = tuple(
            tuple(ln_clamped(e, where=(i, j)) for j, e in enumerate(row))
            for i, row in enumerate(p.entries)
        )
        return DistanceTable(p.labels, entries, Flavor.ADDITIVE)
    if p.flavor is not Flavor.MULTIPLICATIVE:
        raise StructureError(f"log_transform expects a multiplicative metric, got {p.flavor.value}")
    inner = p.distance
    return MetricFn(lambda x, y: ln_clamped(inner(x, y), where=(x, y)), Flavor.ADDITIVE, p.domain)


def exp_transform(d: DistanceTable | MetricFn) -> DistanceTable | MetricFn:
    """p(x, y) = e^{d(x, y)}: additive in, multiplicative out (codomain
    pinned at [1, inf))."""
    if isinstance(d, DistanceTable):
        if d.flavor is not Flavor.ADDITIVE:
            raise StructureError(f"exp_transform expects an additive table, got {d.flavor.value}")
        entries = tuple(
            tuple(_exp_checked(e, where=(i, j)) for j, e in enumerate(row))
            for i, row in enumerate(d.entries)
        )
        return DistanceTable(d.labels, entries, Flavor.MULTIPLICATIVE)
    if d.flavor is not Flavor.ADDITIVE:
        raise StructureError(f"exp_transform expects an additive metric, got {d.flavor.value}")
    inner = d.distance
    return MetricFn(lambda x, y: _exp_checked(inner(x, y), where=(x, y)), Flavor.MULTIPLICATIVE, d.domain)


@dataclass(frozen=True)
class SequenceSample:
    """A finite sequence of points paired with the metric they live in.

    Points are labels or indices for table-backed metrics, coordinates for
    function-backed ones.
    """

    points: tuple
    metric: DistanceTable | MetricFn

    def __post_init__(self):
        if not self.points:
            raise StructureError("sequence must be nonempty")
        if isinstance(self.metric, DistanceTable):
            object.__setattr__(self, "_indices", tuple(self._resolve(p) for p in self.points))
        elif isinstance(self.metric.domain, Interval):
            for p in self.points:
                if not self.metric.domain.contains(p, slack=1e-12):
                    raise StructureError(f"point {p!r} outside the metric's interval domain")

    def _resolve(self, point) -> int:
        table = self.metric
        if isinstance(point, str):
            return table.index_of(point)
        idx = int(point)
        if not 0 <= idx < table.n:
            raise StructureError(f"point index {point!r} outside table of size {table.n}")
        return idx

    def __len__(self) -> int:
        return len(self.points)

    def distance(self, a: int, b: int) -> float:
        """Metric distance between sequence positions a and b."""
        if isinstance(self.metric, DistanceTable):
            return self.metric.entries[self._indices[a]][self._indices[b]]
        return self.metric.distance(self.points[a], self.points[b])

    def with_metric(self, metric) -> "SequenceSample":
        return SequenceSample(self.points, metric)


def is_eps_cauchy_tail(seq: SequenceSample, eps: float, start: int = 0) -> bool:
    """True iff every pair of points at positions >= start sits strictly
    closer than eps.  The threshold must exceed the flavor's neutral
    element (1 for multiplicative metrics, 0 otherwise)."""
    neutral = seq.metric.flavor.neutral
    if not eps > neutral:
        raise ValueError(
            f"eps must exceed the neutral element {neutral} for a "
            f"{seq.metric.flavor.value} metric, got {eps}"
        )
    if not 0 <= start < len(seq):
        raise ValueError(f"start {start} outside sequence of length {len(seq)}")
    m = len(seq)
    for a in range(start, m):
        for b in range(a + 1, m):
            if not seq.distance(a, b) < eps:
                return False
    return True


def cauchy_equivalence_check(seq: SequenceSample, eps_mult: float, start: int = 0) -> bool:
    """Evaluate the eps-Cauchy-tail predicate under p with threshold
    eps_mult and under ln p with threshold ln(eps_mult) and report whether
    they agree.  Strict monotonicity of ln forces agreement; evaluating
    both sides makes that an executable check at finite scale."""
    if seq.metric.flavor is not Flavor.MULTIPLICATIVE:
        raise StructureError("cauchy_equivalence_check needs a multiplicative metric")
    under_p = is_eps_cauchy_tail(seq, eps_mult, start)
    logged = seq.with_metric(log_transform(seq.metric))
    under_d = is_eps_cauchy_tail(logged, math.log(eps_mult), start)
    return under_p == under_d
