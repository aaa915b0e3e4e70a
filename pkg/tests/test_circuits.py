import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from capcolor.circuits import (CoverageError, Kind, OrderingError, TemplateError, build_nonflag, build_one_flag,
                               build_schedule, capped_orderings, full_schedule, sawtooth, schedule_for)
from capcolor.codes import build_ccc
from capcolor.pauli import Pauli
from capcolor.tableau import Tableau, run_round

from support import code, schedule

SMALL = [("steane", 3, "nonflag"), ("steane", 3, "flag"), ("2d", 3, "flag"), ("ccc", 3, "nonflag"),
         ("ccc", 3, "flag")]


@given(st.lists(st.integers(1, 50), unique=True, min_size=1, max_size=12), st.integers(51, 200))
def test_sawtooth_roundtrip(order, offset):
    s = sawtooth(order, offset)
    assert len(s) == 2 * len(order)
    assert [q for q in s if q < offset] == order
    assert [q - offset for q in s if q >= offset] == order


@pytest.mark.parametrize("family,d,template", SMALL + [("ccc", 5, "nonflag"), ("rccc", 3, "flag")])
def test_pauli_frame_measurement_is_commutation(family, d, template):
    sched = schedule(family, d, template)
    rng = np.random.default_rng(0)
    n = sched.code.n
    for _ in range(50):
        E = Pauli(n, int(rng.integers(1 << min(n, 62))), int(rng.integers(1 << min(n, 62))))
        for c in sched:
            assert c.measure(E) == (not E.commutes(c.generator_pauli))
            assert c.propagate(-1, E.x, E.z).flags == 0


@pytest.mark.parametrize("family,d,template", SMALL)
def test_fault_free_run_on_codeword_repeats_eigenvalues(family, d, template):
    sched = schedule(family, d, template)
    width = sched.code.n + 1 + max(c.n_flags for c in sched)
    tab = Tableau(width, np.random.default_rng(3))
    first, f1 = run_round(tab, sched.circuits)
    # the register is now a codeword with eigenvalue bits `first`
    for _ in range(2):
        again, fl = run_round(tab, sched.circuits)
        assert again == first
        assert f1 == fl == 0
    # a Pauli frame on top shifts every bit by its commutation with the generator
    E = Pauli(sched.code.n, 0b101, 0b110)
    for q in range(sched.code.n):
        for bit, letter in ((E.x, "X"), (E.z, "Z")):
            if bit >> q & 1:
                tab.pauli(q, letter)
    got, _ = run_round(tab, sched.circuits)
    want = sum((not E.commutes(c.generator_pauli)) << i for i, c in enumerate(sched))
    assert got ^ first == want


def _bottom_weight(lv, E):
    return sum(E >> q & 1 for q in lv.bottom)


@pytest.mark.parametrize("d", [3, 5])
def test_flagged_v_circuits_bound_the_bottom_plane(d):
    sched = schedule("ccc", d, "flag")
    lv = sched.code.meta["capped"].top
    checked = 0
    for c in sched:
        if c.category != "v":
            continue
        assert c.template == "one_flag_v"
        gen = c.generator_pauli
        for _loc, _lab, eff in c.raw_faults():
            if eff.flags:
                continue
            E = eff.z if c.ptype == "Z" else eff.x
            G = gen.z if c.ptype == "Z" else gen.x
            assert min(_bottom_weight(lv, E), _bottom_weight(lv, E ^ G)) <= 1
            checked += 1
    assert checked > 0


@pytest.mark.parametrize("family,d", [("2d", 3), ("2d", 5), ("ccc", 3), ("ccc", 5)])
def test_one_flag_circuits_leave_light_errors_when_silent(family, d):
    sched = schedule(family, d, "flag")
    for c in sched:
        if c.category == "v":
            continue
        G = c.generator_pauli
        for _loc, _lab, eff in c.raw_faults():
            if eff.flags:
                continue
            E = eff.data(c.n)
            assert min(E.weight, (E * G).weight) <= 1, (c.generator, _loc, _lab)


def test_raw_fault_counts():
    c = build_nonflag(("g", Pauli.Z(5, [0, 1, 2, 3])), [3, 1, 0, 2])
    kinds = [loc.kind for loc in c.locations]
    assert kinds.count(Kind.DATA_CNOT) == 4
    assert len(c.raw_faults()) == 4 * 15 + 1 + 1
    f = build_one_flag(("g", Pauli.X(5, [0, 1, 2, 3])), [0, 1, 2, 3])
    assert f.n_flags == 1
    assert len(f.raw_faults()) == 6 * 15 + 2 + 2


def test_template_and_ordering_errors():
    Z3 = ("g", Pauli.Z(4, [0, 1, 2]))
    with pytest.raises(OrderingError):
        build_nonflag(Z3, [0, 1, 3])
    with pytest.raises(OrderingError):
        build_nonflag(Z3, [0, 1])
    with pytest.raises(TemplateError):
        build_one_flag(("g", Pauli.Z(4, [0, 1])), [0, 1])
    with pytest.raises(TemplateError):
        build_one_flag(Z3, [0, 1, 2], paired=True)
    ccc = build_ccc(3)
    with pytest.raises(OrderingError):
        capped_orderings(ccc, [(1, 2, 3, 5)] * 3)
    with pytest.raises(OrderingError):
        capped_orderings(ccc, None, [1, 1, 2, 3, 4, 5, 6])


def test_schedule_coverage_errors():
    c = code("ccc", 3)
    with pytest.raises(CoverageError):
        build_schedule(c, {})
    with pytest.raises(TemplateError):
        schedule_for(c, "two_flag")
    with pytest.raises(CoverageError):
        full_schedule(c, {})


def test_partners_share_circuits():
    sched = schedule("ccc", 3)
    by = {}
    for c in sched:
        by.setdefault(c.support, set()).add((c.ordering, c.template))
    assert all(len(v) == 1 for v in by.values())


def test_builtin_d3_orderings():
    sched = schedule("ccc", 3)
    orders = {c.generator: [q for q in c.ordering] for c in sched if c.ptype == "Z"}
    assert orders["f4z"] == [2, 5, 3, 1]
    assert orders["v1z"] == [2, 9, 5, 12, 3, 10, 1, 8]
    assert orders["v0z"] == list(range(8))


def test_serialisation():
    sched = schedule("ccc", 3, "flag")
    doc = json.loads(sched.dumps())
    assert len(doc["circuits"]) == 14
    first = doc["circuits"][0]
    assert {"generator", "type", "template", "ancillas", "locations"} <= set(first)
    assert sched[0].diagram().startswith(sched[0].generator + ":")
    assert sched.n_flags == sum(c.n_flags for c in sched)
    assert sched.flag_mask("X") | sched.flag_mask("Z") == (1 << sched.n_flags) - 1
