"""Distance tables, function-backed metrics, and metric-axiom certification.

Three axiom families share one table representation: additive (ordinary
metric), multiplicative (distances in [1, inf) with a product triangle law),
and metric-like (self-distance may be positive, but zero distance still
forces equality).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable, Iterable, Sequence

TOL_ADD = 1e-9   # absolute slack for additive triangle comparisons
TOL_MULT = 1e-9  # relative slack for multiplicative triangle comparisons


class Flavor(str, Enum):
    ADDITIVE = "additive"
    MULTIPLICATIVE = "multiplicative"
    METRIC_LIKE = "metric-like"

    @property
    def neutral(self) -> float:
        """Self-distance of a point under a valid structure of this flavor."""
        return 1.0 if self is Flavor.MULTIPLICATIVE else 0.0


_FLAVOR_TOKENS = {
    "metric": Flavor.ADDITIVE,
    "additive": Flavor.ADDITIVE,
    "mult": Flavor.MULTIPLICATIVE,
    "multiplicative": Flavor.MULTIPLICATIVE,
    "metric-like": Flavor.METRIC_LIKE,
}


def parse_flavor(token: str) -> Flavor:
    try:
        return _FLAVOR_TOKENS[token.strip().lower()]
    except KeyError:
        raise StructureError(
            f"unknown flavor {token!r}; expected one of {sorted(_FLAVOR_TOKENS)}"
        ) from None


class StructureError(ValueError):
    """Malformed input detected before any axiom is evaluated."""


class DomainError(ValueError):
    """A value sits outside the operation's domain; carries the witness."""

    def __init__(self, message: str, witness: tuple | None = None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class DistanceTable:
    """Finite symmetric matrix of pairwise distances with a flavor tag.

    The constructor enforces structure only (square, exactly symmetric,
    finite nonnegative entries); whether the entries satisfy the flavor's
    axioms is the job of the check_* functions below.  Asymmetric input is
    rejected, never silently symmetrized.
    """

    labels: tuple[str, ...]
    entries: tuple[tuple[float, ...], ...]
    flavor: Flavor

    def __post_init__(self):
        n = len(self.labels)
        if n == 0:
            raise StructureError("table must have at least one point")
        if len(self.entries) != n:
            raise StructureError(
                f"{len(self.entries)} rows for {n} labels; table must be square"
            )
        for i, row in enumerate(self.entries):
            if len(row) != n:
                raise StructureError(f"row {i} has {len(row)} entries, expected {n}")
            for j, e in enumerate(row):
                if not math.isfinite(e):
                    raise StructureError(f"entry ({i},{j}) is not finite: {e!r}")
                if e < 0.0:
                    raise StructureError(f"entry ({i},{j}) is negative: {e!r}")
        for i in range(n):
            for j in range(i + 1, n):
                if self.entries[i][j] != self.entries[j][i]:
                    raise StructureError(
                        f"asymmetric input at ({i},{j}): "
                        f"{self.entries[i][j]!r} != {self.entries[j][i]!r}"
                    )

    @classmethod
    def from_rows(
        cls,
        rows: Iterable[Iterable[float]],
        flavor: Flavor,
        labels: Sequence[str] | None = None,
    ) -> "DistanceTable":
        entries = tuple(tuple(float(e) for e in row) for row in rows)
        if labels is None:
            labels = tuple(str(i) for i in range(len(entries)))
        return cls(tuple(labels), entries, flavor)

    @property
    def n(self) -> int:
        return len(self.labels)

    def dist(self, i: int, j: int) -> float:
        return self.entries[i][j]

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise StructureError(f"unknown label {label!r}") from None

    def with_flavor(self, flavor: Flavor) -> "DistanceTable":
        return DistanceTable(self.labels, self.entries, flavor)

    def to_dict(self) -> dict:
        return {
            "labels": list(self.labels),
            "entries": [list(row) for row in self.entries],
            "flavor": self.flavor.value,
        }


@dataclass(frozen=True)
class Interval:
    """Closed real interval used as a scalar point domain."""

    lo: float
    hi: float

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi) and self.lo < self.hi):
            raise StructureError(f"invalid interval [{self.lo}, {self.hi}]")

    def contains(self, x: float, slack: float = 0.0) -> bool:
        return self.lo - slack <= x <= self.hi + slack

    def grid(self, k: int = 21) -> tuple[float, ...]:
        step = (self.hi - self.lo) / (k - 1)
        return tuple(self.lo + i * step for i in range(k))


@dataclass(frozen=True)
class VectorSpace:
    """Fixed-dimension real vector domain."""

    dim: int


@dataclass(frozen=True)
class MetricFn:
    """Function-backed distance on a point domain.

    Unlike a DistanceTable, nothing about a MetricFn can be certified
    exhaustively; check_sampled_axioms spot-checks it on caller-supplied
    points and marks the report "sampled", never "proven".
    """

    distance: Callable[[Any, Any], float]
    flavor: Flavor
    domain: Interval | VectorSpace | None = None

    def __call__(self, x, y) -> float:
        return self.distance(x, y)


def _diff_norm(x, y) -> float:
    if isinstance(x, (int, float)):
        return abs(x - y)
    return math.dist(x, y)


def exp_abs_metric(domain: Interval | VectorSpace | None = None) -> MetricFn:
    """The multiplicative metric p(x, y) = e^{|x - y|} on reals or vectors."""
    return MetricFn(lambda x, y: math.exp(_diff_norm(x, y)), Flavor.MULTIPLICATIVE, domain)


def abs_metric(domain: Interval | VectorSpace | None = None) -> MetricFn:
    """The ordinary metric d(x, y) = |x - y| on reals or vectors."""
    return MetricFn(_diff_norm, Flavor.ADDITIVE, domain)


@dataclass(frozen=True)
class Verdict:
    axiom: str
    passed: bool
    witness: tuple[int, ...] = ()

    def to_dict(self) -> dict:
        return {"axiom": self.axiom, "pass": self.passed, "witness": list(self.witness)}


@dataclass(frozen=True)
class AxiomReport:
    """Per-axiom verdicts; every failure carries the lexicographically first
    witnessing pair or triple, every pass carries an empty witness."""

    flavor: Flavor
    verdicts: tuple[Verdict, ...]
    mode: str = "exhaustive"  # "sampled" for spot checks of a MetricFn

    @property
    def overall(self) -> bool:
        return all(v.passed for v in self.verdicts)

    def verdict(self, axiom: str) -> Verdict:
        for v in self.verdicts:
            if v.axiom == axiom:
                return v
        raise KeyError(axiom)

    def to_dict(self) -> dict:
        return {
            "flavor": self.flavor.value,
            "overall": self.overall,
            "mode": self.mode,
            "verdicts": [v.to_dict() for v in self.verdicts],
        }


def _first_pair(n: int, violates) -> tuple[int, ...]:
    for i in range(n):
        for j in range(n):
            if violates(i, j):
                return (i, j)
    return ()


def _first_triple(n: int, violates) -> tuple[int, ...]:
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if violates(i, j, k):
                    return (i, j, k)
    return ()


def _verdict(axiom: str, witness: tuple[int, ...]) -> Verdict:
    return Verdict(axiom, passed=(witness == ()), witness=witness)


def _scan_multiplicative(e) -> tuple[Verdict, ...]:
    n = len(e)
    return (
        _verdict("lower-bound", _first_pair(n, lambda i, j: e[i][j] < 1.0)),
        _verdict(
            "identity-of-indiscernibles",
            _first_pair(n, lambda i, j: (i == j) != (e[i][j] == 1.0)),
        ),
        _verdict("symmetry", _first_pair(n, lambda i, j: i < j and e[i][j] != e[j][i])),
        _verdict(
            "multiplicative-triangle",
            _first_triple(n, lambda i, j, k: e[i][k] > e[i][j] * e[j][k] * (1.0 + TOL_MULT)),
        ),
    )


def _scan_additive(e) -> tuple[Verdict, ...]:
    n = len(e)
    return (
        _verdict("nonnegativity", _first_pair(n, lambda i, j: e[i][j] < 0.0)),
        _verdict(
            "identity-of-indiscernibles",
            _first_pair(n, lambda i, j: (i == j) != (e[i][j] == 0.0)),
        ),
        _verdict("symmetry", _first_pair(n, lambda i, j: i < j and e[i][j] != e[j][i])),
        _verdict(
            "triangle",
            _first_triple(n, lambda i, j, k: e[i][k] > e[i][j] + e[j][k] + TOL_ADD),
        ),
    )


def _scan_metric_like(e) -> tuple[Verdict, ...]:
    # Positive self-distance is permitted: only the forward direction
    # d(i,j) = 0  =>  i = j is required.
    n = len(e)
    return (
        _verdict("symmetry", _first_pair(n, lambda i, j: i < j and e[i][j] != e[j][i])),
        _verdict("forward-implication", _first_pair(n, lambda i, j: i != j and e[i][j] == 0.0)),
        _verdict(
            "triangle",
            _first_triple(n, lambda i, j, k: e[i][k] > e[i][j] + e[j][k] + TOL_ADD),
        ),
    )


_SCANNERS = {
    Flavor.MULTIPLICATIVE: _scan_multiplicative,
    Flavor.ADDITIVE: _scan_additive,
    Flavor.METRIC_LIKE: _scan_metric_like,
}


def _require_flavor(table: DistanceTable, flavor: Flavor, op: str):
    if table.flavor is not flavor:
        raise StructureError(f"{op} requires a {flavor.value} table, got {table.flavor.value}")


def check_multiplicative_axioms(table: DistanceTable) -> AxiomReport:
    """Certify p >= 1, p(i,j) = 1 iff i = j, symmetry, and the product
    triangle law p(i,k) <= p(i,j) p(j,k) with relative slack TOL_MULT.

    Identity comparisons are exact: diagonal entries are authored, while
    triangle products are computed and get the tolerance band.
    """
    _require_flavor(table, Flavor.MULTIPLICATIVE, "check_multiplicative_axioms")
    return AxiomReport(table.flavor, _scan_multiplicative(table.entries))


def check_metric_axioms(table: DistanceTable) -> AxiomReport:
    """Certify the classical metric axioms with additive slack TOL_ADD on
    the triangle comparison."""
    _require_flavor(table, Flavor.ADDITIVE, "check_metric_axioms")
    return AxiomReport(table.flavor, _scan_additive(table.entries))


def check_metric_like_axioms(table: DistanceTable) -> AxiomReport:
    """Certify the metric-like axioms: symmetry, d(i,j) = 0 => i = j, and
    the additive triangle law.  d(i,i) = 0 is deliberately not required."""
    _require_flavor(table, Flavor.METRIC_LIKE, "check_metric_like_axioms")
    return AxiomReport(table.flavor, _scan_metric_like(table.entries))


def check_table_axioms(table: DistanceTable) -> AxiomReport:
    """Dispatch to the axiom family named by the table's flavor tag."""
    return AxiomReport(table.flavor, _SCANNERS[table.flavor](table.entries))


def check_sampled_axioms(fn: MetricFn, points: Sequence) -> AxiomReport:
    """Spot-check a function-backed metric on the given sample points.

    Verdicts refer to indices into `points`.  The report is marked
    "sampled": a pass is evidence, not proof.
    """
    if not points:
        raise StructureError("sampled axiom check needs at least one point")
    entries = [[float(fn.distance(x, y)) for y in points] for x in points]
    return AxiomReport(fn.flavor, _SCANNERS[fn.flavor](entries), mode="sampled")


def replay_witness(table: DistanceTable, verdict: Verdict) -> bool:
    """Re-evaluate a failed verdict's axiom formula at its witness.

    Returns True iff the violation reproduces, which is the soundness
    contract for every witness the checkers emit.
    """
    e = table.entries
    w = verdict.witness
    axiom = verdict.axiom
    if axiom == "lower-bound":
        i, j = w
        return e[i][j] < 1.0
    if axiom == "nonnegativity":
        i, j = w
        return e[i][j] < 0.0
    if axiom == "identity-of-indiscernibles":
        i, j = w
        neutral = table.flavor.neutral
        return (i == j) != (e[i][j] == neutral)
    if axiom == "symmetry":
        i, j = w
        return e[i][j] != e[j][i]
    if axiom == "forward-implication":
        i, j = w
        return i != j and e[i][j] == 0.0
    if axiom == "multiplicative-triangle":
        i, j, k = w
        return e[i][k] > e[i][j] * e[j][k] * (1.0 + TOL_MULT)
    if axiom == "triangle":
        i, j, k = w
        return e[i][k] > e[i][j] + e[j][k] + TOL_ADD
    raise KeyError(f"unknown axiom {axiom!r}")


def shortest_path_closure(entries: Sequence[Sequence[float]]) -> tuple[tuple[float, ...], ...]:
    """Repair a symmetric nonnegative matrix into a triangle-satisfying one
    by shortest-path (Floyd-Warshall) closure, iterated to a fixed point so
    the result also satisfies the floating-point form of the triangle test.
    """
    d = [list(row) for row in entries]
    n = len(d)
    changed = True
    while changed:
        changed = False
        for k in range(n):
            dk = d[k]
            for i in range(n):
                di = d[i]
                dik = di[k]
                for j in range(n):
                    alt = dik + dk[j]
                    if alt < di[j]:
                        di[j] = alt
                        changed = True
    return tuple(tuple(row) for row in d)


def read_table_csv(source, flavor: Flavor) -> DistanceTable:
    """Parse the CSV distance-table format: an optional header row of labels
    followed by n rows of n numeric fields.  Flavor comes out-of-band.
    """
    if hasattr(source, "read"):
        rows = [r for r in csv.reader(source) if any(c.strip() for c in r)]
    else:
        with open(source, newline="") as fh:
            rows = [r for r in csv.reader(fh) if any(c.strip() for c in r)]
    if not rows:
        raise StructureError("empty table file")

    def is_numeric_row(row):
        try:
            for c in row:
                float(c)
        except ValueError:
            return False
        return True

    labels = None
    if not is_numeric_row(rows[0]):
        labels = tuple(c.strip() for c in rows[0])
        rows = rows[1:]
        if not rows:
            raise StructureError("header row present but no data rows")

    entries = []
    for i, row in enumerate(rows):
        parsed = []
        for j, cell in enumerate(row):
            try:
                parsed.append(float(cell))
            except ValueError:
                # 1-based coordinates counted from the top of the file
                file_row = i + (2 if labels is not None else 1)
                raise StructureError(
                    f"row {file_row}, column {j + 1}: {cell!r} is not numeric"
                ) from None
        entries.append(parsed)
    if labels is None:
        labels = tuple(str(i) for i in range(len(entries)))
    return DistanceTable(labels, tuple(tuple(r) for r in entries), flavor)


def write_table_csv(table: DistanceTable, dest, header: bool = True) -> None:
    """Inverse of read_table_csv.  Purely numeric labels (the from_rows
    default) are never written as a header: the reader could not tell them
    from a data row."""
    default_labels = tuple(str(i) for i in range(table.n))

    def emit(fh):
        w = csv.writer(fh, lineterminator="\n")
        if header and table.labels != default_labels:
            w.writerow(table.labels)
        for row in table.entries:
            w.writerow([repr(e) for e in row])

    if hasattr(dest, "write"):
        emit(dest)
    else:
        with open(dest, "w", newline="") as fh:
            emit(fh)
