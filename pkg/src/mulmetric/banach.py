"""Picard iteration for multiplicative contractions via the log reduction.

A multiplicative contraction p(fx, fy) <= p(x, y)^lambda is an ordinary
lambda-contraction for d = ln p, so the solver iterates in additive units
and certifies convergence with the standard a-priori and a-posteriori
envelopes

    d(x_k, x*) <= lambda^k / (1 - lambda) * d(x_0, x_1)
    d(x_k, x*) <= lambda / (1 - lambda) * d(x_{k-1}, x_k)

recording both at every step.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable

from .core import Flavor, MetricFn
from .duality import ln_clamped


class NumericError(RuntimeError):
    """A non-finite distance appeared during iteration."""

    def __init__(self, message: str, iteration: int):
        super().__init__(message)
        self.iteration = iteration


class StopReason(str, Enum):
    CONVERGED = "converged"
    MAX_ITERATIONS = "max-iterations"


@dataclass(frozen=True)
class ContractionCertificate:
    """A contraction factor plus how it was obtained.

    declared=True means the caller asserted lambda_hat (trusted);
    declared=False means it was estimated from finitely many sample pairs
    and therefore under-estimates the true supremum.
    """

    lambda_hat: float
    sample_pairs: int = 0
    declared: bool = True

    def __post_init__(self):
        if not 0.0 <= self.lambda_hat < 1.0:
            raise ValueError(f"lambda must lie in [0, 1), got {self.lambda_hat}")
        if not self.declared and self.sample_pairs < 1:
            raise ValueError("an estimated certificate needs at least one sample pair")

    def to_dict(self) -> dict:
        return {
            "lambda_hat": self.lambda_hat,
            "sample_pairs": self.sample_pairs,
            "declared": self.declared,
        }


@dataclass(frozen=True)
class NotAContraction:
    """Estimation outcome when some sample pair expands: the worst observed
    exponent ratio reached 1, with the witnessing pair."""

    ratio: float
    witness: tuple

    def to_dict(self) -> dict:
        return {"not_a_contraction": True, "ratio": self.ratio, "witness": list(self.witness)}


@dataclass(frozen=True)
class IterationTrace:
    """Ordered record of an iteration run, indexed by k = 0..n.

    step_distances[k] = d(x_k, x_{k+1}); the bound lists have one entry per
    iterate and both bound d(x_k, x*).  The k = 0 a-posteriori entry
    predates any step, so it falls back to the same d0/(1-lambda) envelope
    as the k = 0 a-priori bound.
    """

    iterates: tuple
    step_distances: tuple[float, ...]
    apriori_bounds: tuple[float, ...]
    aposteriori_bounds: tuple[float, ...]
    stop_reason: StopReason

    def __post_init__(self):
        n = len(self.iterates)
        if self.apriori_bounds and not (
            len(self.apriori_bounds) == len(self.aposteriori_bounds) == n
            and len(self.step_distances) == n - 1
        ):
            raise ValueError("trace lists are not length-consistent")

    def to_dict(self) -> dict:
        return {
            "iterates": [_point_json(x) for x in self.iterates],
            "step_distances": list(self.step_distances),
            "apriori_bounds": list(self.apriori_bounds),
            "aposteriori_bounds": list(self.aposteriori_bounds),
            "stop_reason": self.stop_reason.value,
        }

    def write_csv(self, dest) -> None:
        def emit(fh):
            w = csv.writer(fh, lineterminator="\n")
            dim = _point_width(self.iterates[0])
            head = ["k"] + (["iterate"] if dim == 1 else [f"x{i}" for i in range(dim)])
            w.writerow(head + ["step_distance", "apriori", "aposteriori"])
            for k, x in enumerate(self.iterates):
                cells = [str(k)] + _point_cells(x)
                step = repr(self.step_distances[k]) if k < len(self.step_distances) else ""
                apri = repr(self.apriori_bounds[k]) if self.apriori_bounds else ""
                apost = repr(self.aposteriori_bounds[k]) if self.aposteriori_bounds else ""
                w.writerow(cells + [step, apri, apost])

        if hasattr(dest, "write"):
            emit(dest)
        else:
            with open(dest, "w", newline="") as fh:
                emit(fh)


def _point_width(x) -> int:
    return 1 if isinstance(x, (int, float, str)) else len(x)


def _point_cells(x) -> list[str]:
    if isinstance(x, str):
        return [x]
    if isinstance(x, (int, float)):
        return [repr(float(x))]
    return [repr(float(c)) for c in x]


def _point_json(x):
    if isinstance(x, (int, float, str)):
        return x
    return [float(c) for c in x]


@dataclass(frozen=True)
class FixedPointResult:
    point: Any
    iterations: int
    residual_additive: float
    residual_multiplicative: float
    trace: IterationTrace
    certificate: ContractionCertificate

    def to_dict(self) -> dict:
        return {
            "point": _point_json(self.point),
            "iterations": self.iterations,
            "residual_additive": self.residual_additive,
            "residual_multiplicative": self.residual_multiplicative,
            "stop_reason": self.trace.stop_reason.value,
            "certificate": self.certificate.to_dict(),
        }


def _additive_distance(metric: MetricFn) -> Callable[[Any, Any], float]:
    """Distance in additive units: ln p for multiplicative metrics, d as-is
    otherwise.  This is exactly the log-reduction path, bit for bit."""
    if metric.flavor is Flavor.MULTIPLICATIVE:
        inner = metric.distance
        return lambda x, y: ln_clamped(inner(x, y), where=(x, y))
    return metric.distance


def estimate_multiplicative_lambda(
    f: Callable,
    metric: MetricFn,
    samples,
) -> ContractionCertificate | NotAContraction:
    """Estimate the contraction exponent from sample pairs as the worst
    ratio ln p(fx, fy) / ln p(x, y).

    Pairs at multiplicative distance 1 (coincident points) make the ratio
    undefined and are argument errors.  A worst ratio >= 1 yields a
    NotAContraction outcome instead of a certificate.
    """
    samples = list(samples)
    if not samples:
        raise ValueError("need at least one sample pair")
    dist = _additive_distance(metric)
    worst = -math.inf
    worst_pair = None
    for x, y in samples:
        base = dist(x, y)
        if base <= 0.0:
            raise ValueError(f"sample pair {(x, y)!r} has zero additive distance; ratio undefined")
        ratio = dist(f(x), f(y)) / base
        if ratio > worst:
            worst, worst_pair = ratio, (x, y)
    if worst >= 1.0:
        return NotAContraction(ratio=worst, witness=worst_pair)
    return ContractionCertificate(max(worst, 0.0), sample_pairs=len(samples), declared=False)


def _banach_bounds(lam: float, steps: list[float]) -> tuple[tuple[float, ...], tuple[float, ...]]:
    if not steps:
        return (), ()
    d0 = steps[0]
    envelope0 = d0 / (1.0 - lam)
    apriori = [envelope0]
    aposteriori = [envelope0]
    factor = lam / (1.0 - lam)
    for k, dk in enumerate(steps, start=1):
        apriori.append(lam**k / (1.0 - lam) * d0)
        aposteriori.append(factor * dk)
    return tuple(apriori), tuple(aposteriori)


def solve_fixed_point(
    f: Callable,
    metric: MetricFn,
    x0,
    certificate: ContractionCertificate,
    tol_additive: float = 1e-9,
    max_iter: int = 1000,
) -> FixedPointResult:
    """Picard iteration x_{k+1} = f(x_k), stopping when the a-posteriori
    bound lambda/(1-lambda) * d(x_{k-1}, x_k) drops to tol_additive.

    On convergence the returned point's additive residual is at most
    tol_additive / (1 - lambda).  The tolerance is expressed in additive
    (ln p) units because the error envelopes are linear there.
    """
    lam = certificate.lambda_hat
    if not 0.0 <= lam < 1.0:
        raise ValueError(f"certificate lambda {lam} is not a contraction factor")
    if not tol_additive > 0.0:
        raise ValueError("tol_additive must be positive")
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")

    dist = _additive_distance(metric)
    iterates = [x0]
    steps: list[float] = []
    stop = StopReason.MAX_ITERATIONS
    x = x0
    factor = lam / (1.0 - lam)
    for k in range(1, max_iter + 1):
        x_next = f(x)
        d_step = dist(x, x_next)
        if not math.isfinite(d_step):
            raise NumericError(f"non-finite distance {d_step!r} at iteration {k}", iteration=k)
        iterates.append(x_next)
        steps.append(d_step)
        x = x_next
        if factor * d_step <= tol_additive:
            stop = StopReason.CONVERGED
            break

    apriori, aposteriori = _banach_bounds(lam, steps)
    trace = IterationTrace(tuple(iterates), tuple(steps), apriori, aposteriori, stop)
    residual_add = dist(f(x), x)
    if metric.flavor is Flavor.MULTIPLICATIVE:
        residual_mult = metric.distance(f(x), x)
    else:
        residual_mult = math.exp(residual_add)
    return FixedPointResult(
        point=x,
        iterations=len(steps),
        residual_additive=residual_add,
        residual_multiplicative=residual_mult,
        trace=trace,
        certificate=certificate,
    )


def verify_fixed_point(f: Callable, metric: MetricFn, x, tol: float) -> bool:
    """Independent residual check of a claimed fixed point: additive
    flavors compare d(fx, x) to tol, multiplicative compares p(fx, x) to
    1 + tol."""
    if not tol > 0.0:
        raise ValueError("tol must be positive")
    r = metric.distance(f(x), x)
    if metric.flavor is Flavor.MULTIPLICATIVE:
        return r <= 1.0 + tol
    return r <= tol
