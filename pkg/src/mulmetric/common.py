"""Common fixed points of four self-mappings A, B, S, T.

Hypothesis predicates (range inclusion, weak commutativity, weak
compatibility, the five-term contractive condition), the contractive
modulus, a Jungck-type alternating solver, and a brute-force oracle for
finite domains.  Multiplicative metrics are log-transformed on ingestion,
so every check and the solver itself run in additive units; the explicit
factor-2 bridge between the unhalved multiplicative condition and the
halved additive one is reduce_multiplicative_system.

All probe scans are sequential and lexicographic, so reports are
deterministic; independent solver calls share no state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable

from .core import (
    DistanceTable,
    Flavor,
    Interval,
    MetricFn,
    StructureError,
    check_multiplicative_axioms,
)
from .banach import IterationTrace, StopReason, _banach_bounds, _point_json
from .duality import log_transform

POINT_TOL = 1e-9  # numeric-domain equality tolerance for points

MAP_NAMES = ("A", "B", "S", "T")


class UnsupportedDomainError(ValueError):
    """The operation needs a finite domain (or sections) and got neither."""


class SolverError(RuntimeError):
    """Iteration could not continue; carries the orphaned value."""

    def __init__(self, message: str, orphan=None):
        super().__init__(message)
        self.orphan = orphan


@dataclass(frozen=True)
class FiniteDomain:
    labels: tuple[str, ...]

    @property
    def n(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class CheckOutcome:
    name: str
    passed: bool
    witness: Any = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.passed

    def to_dict(self) -> dict:
        w = self.witness
        if isinstance(w, tuple):
            w = [_point_json(c) for c in w]
        elif w is not None:
            w = _point_json(w)
        return {"name": self.name, "pass": self.passed, "witness": w, "detail": self.detail}


@dataclass(frozen=True)
class ContractiveModulus:
    """phi with phi(t) < t for t > 0.  Only the linear family is
    machine-checkable; arbitrary callables are accepted but flagged
    unchecked."""

    fn: Callable[[float], float]
    lam: float | None
    checked: bool
    label: str

    @classmethod
    def linear(cls, lam: float) -> "ContractiveModulus":
        if not 0.0 <= lam < 1.0:
            raise ValueError(f"linear modulus needs lambda in [0, 1), got {lam}")
        return cls(fn=lambda t: lam * t, lam=lam, checked=True, label=f"linear({lam})")

    @classmethod
    def unchecked(cls, fn: Callable[[float], float], label: str = "custom") -> "ContractiveModulus":
        return cls(fn=fn, lam=None, checked=False, label=label)

    def __call__(self, t: float) -> float:
        return self.fn(t)

    def to_dict(self) -> dict:
        return {"label": self.label, "lambda": self.lam, "checked": self.checked}


@dataclass(frozen=True)
class MixedMax:
    """The five-term maximum max{d(Ax,By), d(Ax,Sx), d(By,Ty), d(Ax,Ty),
    d(By,Sx)}, with the two mixed terms halved on request."""

    value: float
    terms: tuple[float, float, float, float, float]
    halved: bool


@dataclass(frozen=True)
class FourMapSystem:
    """Four self-maps over a common domain plus the metric.

    Finite domains use index arrays as maps and exhaustive checks; interval
    domains use callables, caller-visible probe grids, and need sections
    (right inverses of A and B) for anything that inverts a map.
    Multiplicative metrics are log-transformed on ingestion, so internal
    distances are always additive; the original flavor is kept for
    dual-flavor reporting.
    """

    domain: FiniteDomain | Interval
    A: Any
    B: Any
    S: Any
    T: Any
    metric: DistanceTable | MetricFn
    sections: dict[str, Callable] | None = None
    continuity_declaration: str | None = None  # recorded, never checked

    def __post_init__(self):
        if isinstance(self.domain, FiniteDomain):
            n = self.domain.n
            for name in MAP_NAMES:
                m = getattr(self, name)
                if len(m) != n:
                    raise StructureError(f"map {name} has {len(m)} entries for {n} points")
                for i, v in enumerate(m):
                    if not isinstance(v, int) or not 0 <= v < n:
                        raise StructureError(f"map {name}[{i}] = {v!r} is not a point index")
            if not (isinstance(self.metric, DistanceTable) and self.metric.n == n):
                raise StructureError("finite system needs a distance table over its labels")
        else:
            for name in MAP_NAMES:
                if not callable(getattr(self, name)):
                    raise StructureError(f"map {name} must be callable on an interval domain")
            for x in self.domain.grid(9):
                for name in MAP_NAMES:
                    y = getattr(self, name)(x)
                    if not self.domain.contains(y, slack=POINT_TOL):
                        raise StructureError(
                            f"map {name} leaves the domain: {name}({x!r}) = {y!r}"
                        )
            if self.sections:
                for name, sec in self.sections.items():
                    fwd = getattr(self, name)
                    for x in self.domain.grid(9):
                        y = fwd(x)
                        if not points_equal(self, fwd(sec(y)), y):
                            raise StructureError(
                                f"section for {name} is not a right inverse at {y!r}"
                            )
        dadd = _additive_access(self.metric)
        object.__setattr__(self, "_dadd", dadd)

    @property
    def finite(self) -> bool:
        return isinstance(self.domain, FiniteDomain)

    @property
    def was_multiplicative(self) -> bool:
        return self.metric.flavor is Flavor.MULTIPLICATIVE

    def apply(self, name: str, x):
        m = getattr(self, name)
        return m[x] if self.finite else m(x)

    def dist(self, x, y) -> float:
        """Distance in additive units (ln p for multiplicative metrics)."""
        return self._dadd(x, y)

    def points(self) -> tuple:
        if self.finite:
            return tuple(range(self.domain.n))
        return self.domain.grid(21)

    def resolve_point(self, p):
        if self.finite and isinstance(p, str):
            return self.metric.index_of(p)
        return p

    def label_of(self, p):
        return self.domain.labels[p] if self.finite else None


def _additive_access(metric: DistanceTable | MetricFn) -> Callable[[Any, Any], float]:
    if isinstance(metric, DistanceTable):
        entries = (
            log_transform(metric).entries
            if metric.flavor is Flavor.MULTIPLICATIVE
            else metric.entries
        )
        return lambda i, j: entries[i][j]
    if metric.flavor is Flavor.MULTIPLICATIVE:
        return log_transform(metric).distance
    return metric.distance


def points_equal(sys: FourMapSystem, u, v) -> bool:
    """Exact on finite label domains, within POINT_TOL coordinatewise on
    numeric ones."""
    if sys.finite:
        return u == v
    if isinstance(u, (int, float)):
        return abs(u - v) <= POINT_TOL
    return all(abs(a - b) <= POINT_TOL for a, b in zip(u, v))


# ------------------------------------------------------------------ checks


def check_range_inclusion(sys: FourMapSystem, probes=None) -> CheckOutcome:
    """T(X) subseteq A(X) and S(X) subseteq B(X).

    Finite domains are scanned exhaustively; interval domains certify the
    inclusion through the sections on probed points only.
    """
    name = "range-inclusion"
    if sys.finite:
        a_img, b_img = set(sys.A), set(sys.B)
        for x in range(sys.domain.n):
            if sys.T[x] not in a_img:
                return CheckOutcome(name, False, witness=sys.T[x],
                                    detail=f"T({x}) = {sys.T[x]} has no A-preimage")
            if sys.S[x] not in b_img:
                return CheckOutcome(name, False, witness=sys.S[x],
                                    detail=f"S({x}) = {sys.S[x]} has no B-preimage")
        return CheckOutcome(name, True)
    if not sys.sections or not {"A", "B"} <= set(sys.sections):
        raise UnsupportedDomainError(
            "range inclusion on an interval domain needs sections for A and B"
        )
    for x in probes if probes is not None else sys.points():
        for img, inv in (("T", "A"), ("S", "B")):
            y = sys.apply(img, x)
            pre = sys.sections[inv](y)
            if not points_equal(sys, sys.apply(inv, pre), y):
                return CheckOutcome(name, False, witness=y,
                                    detail=f"{img}({x!r}) = {y!r} not reproduced by the {inv} section")
    return CheckOutcome(name, True, detail="certified on probed points via sections")


def check_weak_commutative(sys: FourMapSystem, pair=("S", "A"), probes=None) -> CheckOutcome:
    """d(fgx, gfx) <= d(fx, gx) for every probed x, in additive units."""
    f_name, g_name = pair
    name = f"weak-commutative-{f_name}{g_name}"
    f = lambda x: sys.apply(f_name, x)
    g = lambda x: sys.apply(g_name, x)
    for x in probes if probes is not None else sys.points():
        lhs = sys.dist(f(g(x)), g(f(x)))
        rhs = sys.dist(f(x), g(x))
        if lhs > rhs + POINT_TOL:
            return CheckOutcome(name, False, witness=x,
                                detail=f"d({f_name}{g_name}x, {g_name}{f_name}x) = {lhs!r} > {rhs!r}")
    return CheckOutcome(name, True)


def check_weakly_compatible(sys: FourMapSystem, pair=("S", "A"), candidates=None) -> CheckOutcome:
    """The pair commutes at every coincidence point; vacuously true when
    there is none.  Finite domains scan for coincidences exhaustively,
    numeric ones filter the probe grid (or caller candidates)."""
    f_name, g_name = pair
    name = f"weakly-compatible-{f_name}{g_name}"
    f = lambda x: sys.apply(f_name, x)
    g = lambda x: sys.apply(g_name, x)
    pool = candidates if candidates is not None else sys.points()
    found = False
    for x in pool:
        if not points_equal(sys, f(x), g(x)):
            continue
        found = True
        if not points_equal(sys, f(g(x)), g(f(x))):
            return CheckOutcome(name, False, witness=x,
                                detail=f"coincidence point where {f_name}{g_name}x != {g_name}{f_name}x")
    detail = "" if found else "vacuous: no coincidence point"
    return CheckOutcome(name, True, detail=detail)


def mixed_max(sys: FourMapSystem, x, y, halved: bool) -> MixedMax:
    """Five-term maximum of the contractive condition at (x, y)."""
    ax, by = sys.apply("A", x), sys.apply("B", y)
    sx, ty = sys.apply("S", x), sys.apply("T", y)
    terms = (
        sys.dist(ax, by),
        sys.dist(ax, sx),
        sys.dist(by, ty),
        sys.dist(ax, ty),
        sys.dist(by, sx),
    )
    h = 0.5 if halved else 1.0
    value = max(terms[0], terms[1], terms[2], h * terms[3], h * terms[4])
    return MixedMax(value=value, terms=terms, halved=halved)


def check_contractive_condition(
    sys: FourMapSystem,
    modulus: ContractiveModulus,
    halved: bool = True,
    probes=None,
) -> CheckOutcome:
    """d(Sx, Ty) <= phi(mixed_max(x, y)) for every probed ordered pair;
    finite domains default to all pairs, first violation in lexicographic
    order wins."""
    name = "contractive-condition"
    if probes is None:
        pts = sys.points()
        probes = [(x, y) for x in pts for y in pts]
    if not probes:
        raise ValueError("contractive check needs a nonempty probe set")
    for x, y in probes:
        lhs = sys.dist(sys.apply("S", x), sys.apply("T", y))
        bound = modulus(mixed_max(sys, x, y, halved).value)
        if lhs > bound + POINT_TOL:
            return CheckOutcome(name, False, witness=(x, y),
                                detail=f"d(Sx,Ty) = {lhs!r} > phi(m) = {bound!r}")
    return CheckOutcome(name, True)


# ------------------------------------------------------------------ solver


@dataclass(frozen=True)
class CommonFixedPointResult:
    point: Any
    point_label: str | None
    success: bool
    residuals: dict[str, float]
    residuals_multiplicative: dict[str, float] | None
    trace: IterationTrace | None
    hypothesis_report: dict[str, CheckOutcome]

    def to_dict(self) -> dict:
        return {
            "point": _point_json(self.point) if self.point is not None else None,
            "point_label": self.point_label,
            "success": self.success,
            "residuals": self.residuals,
            "residuals_multiplicative": self.residuals_multiplicative,
            "iterations": len(self.trace.step_distances) if self.trace else 0,
            "stop_reason": self.trace.stop_reason.value if self.trace else "hypothesis-failed",
            "hypothesis_report": {k: v.to_dict() for k, v in self.hypothesis_report.items()},
        }


def run_hypothesis_checks(
    sys: FourMapSystem,
    modulus: ContractiveModulus,
    probes=None,
    pair_probes=None,
) -> dict[str, CheckOutcome]:
    report = {
        "range_inclusion": check_range_inclusion(sys, probes),
        "weakly_compatible_SA": check_weakly_compatible(sys, ("S", "A"), probes),
        "weakly_compatible_TB": check_weakly_compatible(sys, ("T", "B"), probes),
        "contractive": check_contractive_condition(sys, modulus, halved=True, probes=pair_probes),
    }
    if sys.finite:
        detail = "vacuous on a finite discrete domain"
    elif sys.continuity_declaration:
        detail = f"caller declares {sys.continuity_declaration} continuous"
    else:
        detail = "not declared by caller"
    report["continuity"] = CheckOutcome("continuity", True, detail=detail)
    return report


def _preimage_fn(sys: FourMapSystem, name: str) -> Callable:
    if sys.finite:
        table: dict[int, int] = {}
        for i, v in enumerate(getattr(sys, name)):
            table.setdefault(v, i)  # smallest-index tie-break

        def pre(y):
            try:
                return table[y]
            except KeyError:
                raise SolverError(
                    f"no {name}-preimage for value {y!r}", orphan=y
                ) from None

        return pre
    if not sys.sections or name not in sys.sections:
        raise UnsupportedDomainError(f"interval domain needs a section for {name}")
    sec = sys.sections[name]
    fwd = getattr(sys, name)

    def pre(y):
        x = sec(y)
        if not points_equal(sys, fwd(x), y):
            raise SolverError(f"section for {name} failed to invert {y!r}", orphan=y)
        return x

    return pre


def solve_common_fixed_point(
    sys: FourMapSystem,
    modulus: ContractiveModulus,
    x0=None,
    tol: float = 1e-9,
    max_iter: int = 500,
    probes=None,
) -> CommonFixedPointResult:
    """Jungck-type alternating iteration y_{2n} = S x_{2n} = B x_{2n+1},
    y_{2n+1} = T x_{2n+1} = A x_{2n+2}.

    All hypothesis checks run first; on any failure the result carries the
    report and no iteration happens.  Preimages are chosen by exhaustive
    scan with smallest-index tie-break on finite domains, via sections
    otherwise.  The candidate limit is verified against all four maps;
    multiplicative systems are solved in log form and residuals are
    reported in both flavors.
    """
    if not tol > 0.0:
        raise ValueError("tol must be positive")
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")

    pair_probes = None
    if probes is not None:
        pair_probes = [(x, y) for x in probes for y in probes]
    report = run_hypothesis_checks(sys, modulus, probes, pair_probes)
    if not all(report.values()):
        return CommonFixedPointResult(
            point=None, point_label=None, success=False,
            residuals={}, residuals_multiplicative=None,
            trace=None, hypothesis_report=report,
        )

    if x0 is None:
        x0 = 0 if sys.finite else (sys.domain.lo + sys.domain.hi) / 2.0
    x0 = sys.resolve_point(x0)

    pre_a = _preimage_fn(sys, "A")
    pre_b = _preimage_fn(sys, "B")

    ys = [sys.apply("S", x0)]
    steps: list[float] = []
    stop = StopReason.MAX_ITERATIONS
    odd = True  # next y comes from T after a B-preimage
    for _ in range(max_iter):
        if odd:
            x_next = pre_b(ys[-1])
            y_next = sys.apply("T", x_next)
        else:
            x_next = pre_a(ys[-1])
            y_next = sys.apply("S", x_next)
        d = sys.dist(ys[-1], y_next)
        if not math.isfinite(d):
            raise SolverError(f"non-finite distance at step {len(steps) + 1}", orphan=y_next)
        ys.append(y_next)
        steps.append(d)
        odd = not odd
        # exact point equality also stops: metric-like tables may assign a
        # positive self-distance to the limit
        if d <= tol or points_equal(sys, ys[-2], y_next):
            stop = StopReason.CONVERGED
            break

    z = ys[-1]
    apriori, aposteriori = _banach_bounds(modulus.lam, steps) if modulus.lam is not None else ((), ())
    trace = IterationTrace(tuple(ys), tuple(steps), apriori, aposteriori, stop)

    residuals = {}
    fixed = {}
    for name in MAP_NAMES:
        mz = sys.apply(name, z)
        residuals[name] = sys.dist(mz, z)
        fixed[name] = points_equal(sys, mz, z)
    residuals_mult = None
    if sys.was_multiplicative:
        residuals_mult = {k: math.exp(v) for k, v in residuals.items()}
    success = stop is StopReason.CONVERGED and all(
        residuals[n] <= tol or fixed[n] for n in MAP_NAMES
    )
    return CommonFixedPointResult(
        point=z,
        point_label=sys.label_of(z),
        success=success,
        residuals=residuals,
        residuals_multiplicative=residuals_mult,
        trace=trace,
        hypothesis_report=report,
    )


def brute_force_common_fixed_points(sys: FourMapSystem) -> tuple:
    """Exhaustive oracle: every z with Az = Bz = Sz = Tz = z.  Finite
    domains only."""
    if not sys.finite:
        raise UnsupportedDomainError("brute force needs a finite domain")
    return tuple(
        z
        for z in range(sys.domain.n)
        if sys.A[z] == sys.B[z] == sys.S[z] == sys.T[z] == z
    )


# --------------------------------------------------------------- reduction


@dataclass(frozen=True)
class MultiplicativeReduction:
    """An additive restatement of a multiplicative four-map problem.

    The unhalved multiplicative condition at exponent lambda < 1/2 implies
    the halved additive condition at 2*lambda < 1, because each mixed term
    obeys lambda * t <= (2 lambda) * (t / 2); the factor-2 bridge is
    recorded here explicitly.
    """

    system: FourMapSystem
    modulus: ContractiveModulus
    lambda_multiplicative: float
    bridge_factor: float = 2.0

    def to_dict(self) -> dict:
        return {
            "lambda_multiplicative": self.lambda_multiplicative,
            "bridge_factor": self.bridge_factor,
            "modulus": self.modulus.to_dict(),
        }


def reduce_multiplicative_system(sys: FourMapSystem, lam: float) -> MultiplicativeReduction:
    """Log-transform a multiplicative system and return it with the bridged
    linear modulus 2*lambda against the halved mixed maximum.

    lambda must lie strictly inside (0, 1/2); table metrics must certify
    the multiplicative axioms, function-backed ones are taken on
    declaration.
    """
    if not 0.0 < lam < 0.5:
        raise ValueError(f"reduction needs lambda in (0, 1/2), got {lam}")
    if not sys.was_multiplicative:
        raise StructureError("reduce_multiplicative_system expects a multiplicative metric")
    if isinstance(sys.metric, DistanceTable):
        cert = check_multiplicative_axioms(sys.metric)
        if not cert.overall:
            failed = [v.axiom for v in cert.verdicts if not v.passed]
            raise StructureError(f"metric fails multiplicative axioms: {', '.join(failed)}")
    reduced = FourMapSystem(
        domain=sys.domain,
        A=sys.A, B=sys.B, S=sys.S, T=sys.T,
        metric=log_transform(sys.metric),
        sections=sys.sections,
        continuity_declaration=sys.continuity_declaration,
    )
    return MultiplicativeReduction(
        system=reduced,
        modulus=ContractiveModulus.linear(2.0 * lam),
        lambda_multiplicative=lam,
    )
