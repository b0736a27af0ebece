"""Exhaustive survey of four-map systems over a small finite metric space.

Over an n-point table there are (n^n)^4 systems (531,441 for n = 3); this
module screens all of them at once with vectorized precomputation:

  * range inclusion and weak compatibility become boolean matrices over
    map pairs,
  * the contractive condition collapses to one number per system, the
    smallest linear-modulus slope that satisfies every probe pair, stored
    for both the halved and unhalved mixed maximum.

The screen is an optimization, not a new definition: agreement with the
per-system predicates in `common` is part of the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .core import DistanceTable, Flavor, TOL_ADD
from .common import FiniteDomain, FourMapSystem
from .duality import log_transform


def all_self_maps(n: int) -> tuple[tuple[int, ...], ...]:
    """All n^n self-maps of {0..n-1} in lexicographic order."""
    return tuple(product(range(n), repeat=n))


@dataclass(frozen=True)
class SystemSurvey:
    """Per-system screening data, indexed by (iA, iB, iS, iT) into `maps`."""

    table: DistanceTable          # additive form used for all conditions
    source_table: DistanceTable   # as given (possibly multiplicative)
    maps: tuple[tuple[int, ...], ...]
    hypotheses_ok: np.ndarray     # bool: range inclusion + both weak compatibilities
    lambda_needed_halved: np.ndarray    # smallest workable linear slope
    lambda_needed_unhalved: np.ndarray

    def passing_halved(self, lam: float) -> np.ndarray:
        """Index array of systems passing all hypotheses with Linear(lam)
        against the halved mixed maximum."""
        mask = self.hypotheses_ok & (self.lambda_needed_halved <= lam)
        return np.argwhere(mask)

    def passing_unhalved(self, lam: float) -> np.ndarray:
        """Index array of systems passing the unhalved contractive
        condition alone (hypotheses not applied)."""
        return np.argwhere(self.lambda_needed_unhalved <= lam)

    def system(self, idx) -> FourMapSystem:
        ia, ib, is_, it = (int(v) for v in idx)
        return FourMapSystem(
            domain=FiniteDomain(self.source_table.labels),
            A=self.maps[ia], B=self.maps[ib], S=self.maps[is_], T=self.maps[it],
            metric=self.source_table,
        )


def _image_masks(maps) -> np.ndarray:
    return np.array([sum(1 << v for v in set(m)) for m in maps], dtype=np.int64)


def _weakly_compatible_matrix(maps, n: int) -> np.ndarray:
    """wc[f, g] = maps f and g commute at every coincidence point."""
    m = len(maps)
    wc = np.ones((m, m), dtype=bool)
    for i, f in enumerate(maps):
        for j, g in enumerate(maps):
            for x in range(n):
                if f[x] == g[x] and f[g[x]] != g[f[x]]:
                    wc[i, j] = False
                    break
    return wc


def survey_systems(table: DistanceTable) -> SystemSurvey:
    """Screen every four-map system over `table` (n <= 3: the full grid is
    materialized in memory)."""
    n = table.n
    if n > 3:
        raise ValueError(f"exhaustive survey materializes (n^n)^4 systems; n = {n} is too large")
    add = log_transform(table) if table.flavor is Flavor.MULTIPLICATIVE else table
    dist = np.array(add.entries, dtype=float)
    maps = all_self_maps(n)
    m = len(maps)
    arr = np.array(maps, dtype=np.intp)  # (m, n)

    masks = _image_masks(maps)
    # subset[sub, sup] = image(maps[sub]) within image(maps[sup])
    subset = (masks[:, None] & masks[None, :]) == masks[:, None]
    wc = _weakly_compatible_matrix(maps, n)

    # system axes: (A, B, S, T)
    ok = (
        subset.T[:, None, None, :]   # subset[T, A] on axes [A, T]
        & subset.T[None, :, :, None]  # subset[S, B] on axes [B, S]
        & wc.T[:, None, :, None]     # wc[S, A] on axes [A, S]
        & wc.T[None, :, None, :]     # wc[T, B] on axes [B, T]
    )

    needed_h = np.zeros((m, m, m, m), dtype=float)
    needed_u = np.zeros((m, m, m, m), dtype=float)
    for x in range(n):
        for y in range(n):
            ax = arr[:, x].reshape(m, 1, 1, 1)
            by = arr[:, y].reshape(1, m, 1, 1)
            sx = arr[:, x].reshape(1, 1, m, 1)
            ty = arr[:, y].reshape(1, 1, 1, m)
            lhs = dist[sx, ty]
            core = np.maximum(np.maximum(dist[ax, by], dist[ax, sx]), dist[by, ty])
            mixed = np.maximum(dist[ax, ty], dist[by, sx])
            excess = np.maximum(lhs - TOL_ADD, 0.0)
            for mm, needed in (
                (np.maximum(core, 0.5 * mixed), needed_h),
                (np.maximum(core, mixed), needed_u),
            ):
                req = np.where(mm > 0.0, excess / np.where(mm > 0.0, mm, 1.0),
                               np.where(excess > 0.0, np.inf, 0.0))
                np.maximum(needed, req, out=needed)

    return SystemSurvey(
        table=add,
        source_table=table,
        maps=maps,
        hypotheses_ok=ok,
        lambda_needed_halved=needed_h,
        lambda_needed_unhalved=needed_u,
    )
