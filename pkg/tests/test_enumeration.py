import random

import numpy as np
import pytest

from mulmetric.common import (
    ContractiveModulus,
    brute_force_common_fixed_points,
    check_contractive_condition,
    check_range_inclusion,
    check_weakly_compatible,
    solve_common_fixed_point,
)
from mulmetric.core import DistanceTable, Flavor
from mulmetric.duality import exp_transform
from mulmetric.enumeration import all_self_maps, survey_systems

SCALENE = DistanceTable.from_rows([[0, 1, 2], [1, 0, 2.5], [2, 2.5, 0]], Flavor.ADDITIVE)


@pytest.fixture(scope="module")
def survey():
    return survey_systems(SCALENE)


def library_verdict(sysm, lam):
    return (
        check_range_inclusion(sysm).passed
        and check_weakly_compatible(sysm, ("S", "A")).passed
        and check_weakly_compatible(sysm, ("T", "B")).passed
        and check_contractive_condition(sysm, ContractiveModulus.linear(lam), halved=True).passed
    )


def test_all_self_maps_order_and_count():
    maps = all_self_maps(3)
    assert len(maps) == 27
    assert maps[0] == (0, 0, 0)
    assert maps[-1] == (2, 2, 2)
    assert len(all_self_maps(2)) == 4


def test_screen_agrees_with_predicates_on_random_sample(survey):
    rng = random.Random(99)
    for _ in range(200):
        idx = tuple(rng.randrange(27) for _ in range(4))
        sysm = survey.system(idx)
        for lam in (0.25, 0.75):
            fast = bool(
                survey.hypotheses_ok[idx] and survey.lambda_needed_halved[idx] <= lam
            )
            assert fast == library_verdict(sysm, lam), (idx, lam)


def test_screen_agrees_on_every_survivor(survey):
    for idx in survey.passing_halved(0.75):
        assert library_verdict(survey.system(idx), 0.75)


def test_survivors_have_unique_common_fixed_point(survey):
    survivors = survey.passing_halved(0.75)
    assert len(survivors) > 0
    for idx in survivors:
        sysm = survey.system(idx)
        oracle = brute_force_common_fixed_points(sysm)
        assert len(oracle) == 1
        res = solve_common_fixed_point(sysm, ContractiveModulus.linear(0.75))
        assert res.success and res.point == oracle[0]


def test_multiplicative_survey_matches_additive(survey):
    mult = survey_systems(exp_transform(SCALENE))
    assert np.allclose(
        mult.lambda_needed_halved, survey.lambda_needed_halved, atol=1e-12, equal_nan=True
    )
    assert np.array_equal(mult.hypotheses_ok, survey.hypotheses_ok)


def test_survey_rejects_large_domains():
    big = DistanceTable.from_rows(
        [[0, 1, 1, 1], [1, 0, 1, 1], [1, 1, 0, 1], [1, 1, 1, 0]], Flavor.ADDITIVE
    )
    with pytest.raises(ValueError):
        survey_systems(big)
