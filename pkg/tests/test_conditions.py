import random

import pytest

from capcolor.circuits import D3_F_ORDERINGS, D5_F_ORDERINGS, OrderingError, capped_orderings, schedule_for
from capcolor.codes import build_ccc
from capcolor.conditions import (SearchExhausted, check_condition_6, check_conditions_2d, conditions_hold,
                                 random_plaquette_orderings, rotations, search_orderings)
from capcolor.faults import enumerate_fault_set, is_distinguishable, sampled_zero_flag_logicals

from support import code


def test_builtin_orderings_pass_everything():
    assert conditions_hold(check_conditions_2d(3, D3_F_ORDERINGS, range(1, 8)))
    v = check_conditions_2d(5, D5_F_ORDERINGS, range(1, 20))
    assert sorted(v) == [0, 1, 2, 3, 4, 5]
    assert conditions_hold(v)


def test_search_reproduces_builtin_d5_orderings():
    assert search_orderings(5) == D5_F_ORDERINGS


def test_search_budget():
    with pytest.raises(SearchExhausted):
        search_orderings(5, max_nodes=3)


def test_random_d5_orderings_fail():
    rng = random.Random(5)
    failing = [not conditions_hold(check_conditions_2d(5, random_plaquette_orderings(5, rng))) for _ in range(10)]
    assert all(failing)
    v = check_conditions_2d(5, random_plaquette_orderings(5, random.Random(0)))
    bad = [k for k, x in v.items() if not x]
    assert bad and all(v[k].witness for k in bad)


@pytest.mark.parametrize("seed", range(4))
def test_passing_conditions_imply_distinguishable_d3(seed):
    rng = random.Random(seed)
    tours = random_plaquette_orderings(3, rng)
    cap = list(range(1, 8))
    rng.shuffle(cap)
    ok = conditions_hold(check_conditions_2d(3, tours, cap))
    sched = schedule_for(code("ccc", 3), "nonflag", capped_orderings(build_ccc(3), tours, cap))
    if ok:
        assert is_distinguishable(enumerate_fault_set(sched, t=1))


def test_passing_conditions_imply_no_sampled_logicals_d5():
    sched = schedule_for(code("ccc", 5), "nonflag")
    fs = enumerate_fault_set(sched, t=2)
    assert sampled_zero_flag_logicals(fs, 4, 100_000, seed=3) == 0


@pytest.mark.parametrize("d", [3, 5])
def test_condition_6_with_flags(d):
    rng = random.Random(d)
    assert check_condition_6(d)
    for _ in range(3):
        assert check_condition_6(d, "flag", random_plaquette_orderings(d, rng))


def test_condition_6_without_flags_fails_with_witness():
    v = check_condition_6(3, "nonflag")
    assert not v
    (faults,) = v.witness
    assert faults == ("Y5", "g3z@2:IY")


def test_rotations():
    assert rotations((1, 2, 3)) == [(1, 2, 3), (2, 3, 1), (3, 1, 2)]


def test_bad_orderings_rejected():
    with pytest.raises((OrderingError, ValueError)):
        check_conditions_2d(3, [(1, 2, 3, 4)] * 3)
