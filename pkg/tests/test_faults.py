import random

import pytest
from hypothesis import given, settings, strategies as st

from capcolor.circuits import capped_orderings, schedule_for
from capcolor.codes import build_ccc
from capcolor.conditions import check_conditions_2d, conditions_hold
from capcolor.faults import (Fault, ResourceError, TaxonomyError, build_sector, check_reduction_completeness,
                             classify_fault_type, elementary_faults, enumerate_fault_set,
                             enumerate_reduced_single_faults, fault_syndrome_signature, is_distinguishable,
                             is_distinguishable_via_2t, main_equation_terms, outcome_in_schedule, propagate,
                             random_combination, sampled_zero_flag_logicals)
from capcolor.pauli import Pauli
from capcolor.tables import table2_audit

from support import code, schedule


@pytest.mark.parametrize("template", ["nonflag", "flag"])
def test_reduction_completeness_ccc3(template):
    assert check_reduction_completeness(schedule("ccc", 3, template)) == []


def test_reduction_completeness_steane_flag():
    assert check_reduction_completeness(schedule("steane", 3, "flag")) == []


def test_data_fault_outcome():
    # a data fault only changes the frame; the syndrome is read off the frame later
    sched = schedule("ccc", 3)
    o = outcome_in_schedule(sched, Fault(None, None, "Y", 4))
    assert o.data_error == Pauli(15, 1 << 4, 1 << 4)
    assert o.flag_vector == 0 and o.syndrome_flip == 0


def test_propagate_matches_circuit_effects():
    sched = schedule("ccc", 3, "flag")
    for i, c in enumerate(sched):
        for loc, lab, e in c.raw_faults():
            o = propagate(c, Fault(i, loc, lab), sched.flag_offsets[i], i)
            assert (o.data_error.x, o.data_error.z) == (e.x, e.z)
            assert o.syndrome_flip == e.flip << i
            assert o.flag_vector == e.flags << sched.flag_offsets[i]


def test_ancilla_error_halfway_gives_half_generator():
    sched = schedule("ccc", 3)
    c = sched[sched.index("f4z")]
    # IZ on the target after the second data CNOT feeds back onto the last two qubits
    o = propagate(c, Fault(sched.index("f4z"), c.data_cnots[1], "IZ"))
    assert sorted(o.data_error.support) == [1, 3]


CASES = [("steane", 3, "nonflag", False), ("steane", 3, "flag", True), ("2d", 3, "nonflag", False),
         ("2d", 3, "flag", True), ("ccc", 3, "nonflag", True), ("ccc", 3, "flag", True)]


@pytest.mark.parametrize("family,d,template,expected", CASES)
def test_direct_and_scan_checks_agree(family, d, template, expected):
    fs = enumerate_fault_set(schedule(family, d, template), t=1)
    direct = is_distinguishable(fs)
    scan = is_distinguishable_via_2t(fs)
    assert bool(direct) == bool(scan) == expected
    if not expected:
        a, b = direct.witness
        assert a.combined_error.sparse() != b.combined_error.sparse()
        assert a.cumulative_flag == b.cumulative_flag


def test_steane_nonflag_witness_is_readable():
    sched = schedule("steane", 3, "nonflag")
    v = is_distinguishable(enumerate_fault_set(sched, t=1))
    text = [w.describe(sched, base=1) for w in v.witness]
    assert v.sector == "Z"
    assert text == ["Y1 -> Z1", "g1z@2:IY -> Z6Z7"]


def test_undivided_sector_on_steane_flag():
    sched = schedule("steane", 3, "flag")
    fs = enumerate_fault_set(sched, t=1, sectors=("full",))
    assert is_distinguishable(fs)
    assert is_distinguishable_via_2t(fs)


@settings(max_examples=8, deadline=None)
@given(st.integers(0, 10**6))
def test_scan_equivalence_on_random_d3_orderings(seed):
    rng = random.Random(seed)
    ccc = build_ccc(3)
    tours = []
    for p in ccc.top.lattice.plaquettes:
        o = list(p.cycle)
        rng.shuffle(o)
        tours.append(o)
    cap = list(range(1, 8))
    rng.shuffle(cap)
    c = code("ccc", 3)
    sched = schedule_for(c, rng.choice(["nonflag", "flag"]), capped_orderings(ccc, tours, cap))
    fs = enumerate_fault_set(sched, t=1)
    direct, scan = bool(is_distinguishable(fs)), bool(is_distinguishable_via_2t(fs))
    assert direct == scan
    if sched[0].template == "nonflag" and conditions_hold(check_conditions_2d(3, tours, cap)):
        assert direct


def test_sectors_split_by_pauli_type():
    sched = schedule("ccc", 3)
    z = build_sector(sched, "Z")
    x = build_sector(sched, "X")
    full = build_sector(sched, "full")
    assert all(f.err_x == 0 for f in z.faults)
    assert all(f.err_z == 0 for f in x.faults)
    assert len(full.faults) >= max(len(z.faults), len(x.faults))


def test_budget_raises_resource_error():
    fs = enumerate_fault_set(schedule("ccc", 3), t=2, budget=100)
    with pytest.raises(ResourceError):
        is_distinguishable(fs)
    with pytest.raises(ValueError):
        enumerate_fault_set(schedule("ccc", 3), t=-1)


def test_sampled_logical_counts():
    good = enumerate_fault_set(schedule("ccc", 5), t=2)
    assert sampled_zero_flag_logicals(good, 4, 50_000, seed=1) == 0
    bad = enumerate_fault_set(schedule("steane", 3, "nonflag"), t=1)
    assert sampled_zero_flag_logicals(bad, 2, 50_000, seed=1) > 0


def _z_reps(sched):
    out = []
    for f, o in enumerate_reduced_single_faults(sched):
        E = o.data_error
        if E.x or not E.z:
            continue
        if f.circuit is not None and sched[f.circuit].ptype != "Z":
            continue
        out.append((classify_fault_type(f, sched, outcome=o), o))
    return out


@pytest.mark.parametrize("d,counts", [
    (3, {"q0": 1, "q_on": 7, "q_off": 7, "f": 9, "v": 9, "v_star": 12, "cap": 7}),
    (5, {"q0": 1, "q_on": 19, "q_off": 19, "f": 33, "v": 33, "v_star": 42, "cap": 19}),
])
def test_every_single_fault_matches_its_signature_row(d, counts):
    assert table2_audit(d) == counts


@pytest.mark.parametrize("d", [3, 5])
@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), size=st.integers(1, 6))
def test_main_equations_on_random_combinations(d, seed, size):
    sched = schedule("ccc", d)
    reps = _z_reps(sched)
    items = random_combination(reps, size, random.Random(seed))
    for name, (got, acc) in main_equation_terms(items, sched).items():
        assert got == acc, name


@pytest.mark.parametrize("d", [3, 5])
def test_vertical_circuit_faults_are_same_form_or_one_off(d):
    # each v-circuit fault gives a center/bottom pair of the same shape, or one extra bottom qubit
    sched = schedule("ccc", d)
    seen = set()
    for f, o in enumerate_reduced_single_faults(sched):
        if f.circuit is None or sched[f.circuit].category != "v" or sched[f.circuit].ptype != "Z":
            continue
        ft = classify_fault_type(f, sched, outcome=o)
        fault_syndrome_signature(ft, o, sched)
        seen.add(ft)
    assert seen == {"v", "v_star"}


def test_taxonomy_needs_capped_code():
    sched = schedule("steane", 3)
    with pytest.raises(TaxonomyError):
        classify_fault_type(Fault(None, None, "Z", 0), sched)


def test_elementary_fault_count():
    sched = schedule("ccc", 3)
    n_cnot = sum(len(c.data_cnots) for c in sched)
    assert len(elementary_faults(sched)) == 3 * 15 + 15 * n_cnot + 2 * len(sched)
