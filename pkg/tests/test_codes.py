import itertools
import random

import pytest

from capcolor.codes import (DomainError, InconsistentOutcomeError, bipartition, build_2d_color_code,
                            build_ccc, build_code, build_rccc, check_Rp_transversality, code_switch_fix_operator,
                            code_to_json, fix_gauge, rccc_n, table3)
from capcolor.pauli import Classification, Pauli, PreconditionError, distance_brute_force
from capcolor.protocols import apply_transversal, logical_action

import oracles
from support import code, gens_of_type


def n_2d(d):
    return 3 * (d * d - 1) // 4 + 1


def n_ccc(d):
    return 3 * (d * d - 1) // 2 + 3


def n_rccc(d):
    return (d**3 + 3 * d * d + 3 * d - 3) // 4


@pytest.mark.parametrize("d", [3, 5, 7])
def test_qubit_and_generator_counts(d):
    lat, c2 = build_2d_color_code(d)
    assert c2.n == lat.n == n_2d(d)
    assert len(c2.stab_gens) == 2 * lat.r == c2.n - 1
    for form in "HT":
        c = code("ccc", d, form)
        assert c.n == n_ccc(d)
        assert c.independent_rank() == c.n - 1
        r = build_rccc(d, form)
        assert r.n == n_rccc(d) == rccc_n(d)
        assert r.independent_rank() == r.n - 1
    assert table3(d)["2d"][0] == n_2d(d)
    assert table3(d)["ccc"][0] == n_ccc(d)
    assert table3(d)["rccc"][0] == n_rccc(d)


def test_steane_uses_one_based_labels():
    s = code("steane")
    assert s.n == 7 and s.label_base == 1
    assert [sorted(q + 1 for q in g.support) for g in gens_of_type(s, "X")] == [[4, 5, 6, 7], [2, 3, 6, 7], [1, 3, 5, 7]]


@pytest.mark.parametrize("family,d", [("ccc", 3), ("ccc", 5), ("rccc", 3), ("rccc", 5)])
def test_both_forms_sit_between_stabilizer_and_gauge_groups(family, d):
    sub = build_ccc(d) if family == "ccc" else build_rccc(d, "subsystem")
    S = [oracles.dense(g.pauli(sub.n)) for g in sub.stabilizer_gens()]
    G = [oracles.dense(g.pauli(sub.n)) for g in sub.gauge_gens()]
    for form in "HT":
        c = fix_gauge(sub, form)
        F = [oracles.dense(g) for g in c.stab_gens]
        assert all(oracles.in_span(F, s) for s in S)
        assert all(oracles.in_span(G, f) for f in F)


@pytest.mark.parametrize("family,d", [("ccc", 3), ("ccc", 5), ("rccc", 3), ("2d", 3), ("steane", 3)])
def test_transversal_paulis_are_nontrivial_logicals(family, d):
    c = code(family, d)
    full = (1 << c.n) - 1
    for P in (Pauli(c.n, full, 0), Pauli(c.n, 0, full)):
        assert c.classify(P) is Classification.LOGICAL


def test_fix_gauge_needs_subsystem_form():
    from dataclasses import replace

    with pytest.raises(PreconditionError):
        fix_gauge(replace(build_ccc(3), form="H"), "H")


@pytest.mark.parametrize("bad", [2, 4, 1, "x", 3.0])
def test_domain_errors(bad):
    with pytest.raises(DomainError):
        build_ccc(bad)


def test_unknown_family_and_form():
    with pytest.raises(DomainError):
        build_code("toric", 3)
    with pytest.raises(DomainError):
        build_code("ccc", 3, "Q")


def _conjugate_h(P):
    return Pauli(P.n, P.z, P.x)


def _conjugate_s(P):
    return Pauli(P.n, P.x, P.z ^ P.x)


@pytest.mark.parametrize("d", [3, 5])
def test_transversal_cliffords_preserve_h_form(d):
    c = code("ccc", d, "H")
    for g in c.stab_gens:
        assert c.in_stabilizer_group(_conjugate_h(g))
        assert c.in_stabilizer_group(_conjugate_s(g))
        assert apply_transversal(g, "H", c) == _conjugate_h(g)
        assert apply_transversal(g, "S", c) == _conjugate_s(g)
        one = Pauli(c.n)
        for A, B in ((g, one), (one, g)):
            A2, B2 = apply_transversal((A, B), "CNOT", c)
            assert c.in_stabilizer_group(A2) and c.in_stabilizer_group(B2)


@pytest.mark.parametrize("d", [3, 5])
def test_transversal_logical_action(d):
    c = code("ccc", d, "H")
    X, Z = c.logical_x[0], c.logical_z[0]
    one = Pauli(c.n)
    assert apply_transversal(X, "H", c) == Z
    assert apply_transversal(Z, "H", c) == X
    assert apply_transversal(X, "S", c) == X * Z
    assert apply_transversal(Z, "S", c) == Z
    assert apply_transversal((X, one), "CNOT", c) == (X, X)
    assert apply_transversal((one, Z), "CNOT", c) == (Z, Z)
    assert apply_transversal((Z, one), "CNOT", c) == (Z, one)
    assert apply_transversal((one, X), "CNOT", c) == (one, X)
    # the bit-level table agrees with conjugation for every logical Pauli
    ops = {0: one, 1: X, 2: Z, 3: X * Z}
    for b in range(4):
        for gate in "HS":
            assert c.logical_bits(apply_transversal(ops[b], gate, c)) == logical_action(gate, c.logical_bits(ops[b]))
    for a, b in itertools.product(range(4), repeat=2):
        A2, B2 = apply_transversal((ops[a], ops[b]), "CNOT", c)
        bits = (c.logical_bits(A2), c.logical_bits(B2))
        assert bits == logical_action("CNOT", (c.logical_bits(ops[a]), c.logical_bits(ops[b])))


@pytest.mark.parametrize("family,d,form,want", [
    ("ccc", 3, "H", 3), ("ccc", 3, "T", 3), ("ccc", 5, "H", 5), ("ccc", 5, "T", 3),
    ("rccc", 3, "H", 3), ("rccc", 3, "T", 3), ("rccc", 5, "H", 5), ("rccc", 5, "T", 5),
])
def test_distances(family, d, form, want):
    assert distance_brute_force(code(family, d, form)) == want


@pytest.mark.parametrize("d", [3, 5, 7])
def test_rp_transversality_on_bipartition(d):
    ccc = build_ccc(d)
    V, Vc = bipartition(ccc)
    assert V | Vc == frozenset(range(ccc.n)) and not V & Vc
    assert check_Rp_transversality(ccc, V, 3)
    assert check_Rp_transversality(fix_gauge(ccc, "T"), V, 3)


def test_rp_transversality_rejects_unbalanced_sets():
    c3, c5 = build_ccc(3), build_ccc(5)
    assert not check_Rp_transversality(c3, frozenset(c3.top.center), 3)
    assert not check_Rp_transversality(c5, frozenset(range(c5.n)), 3)
    # every intersection of the distance-3 code is even, so V = everything also passes
    assert check_Rp_transversality(c3, frozenset(range(c3.n)), 3)
    with pytest.raises(ValueError):
        check_Rp_transversality(c3, frozenset(), 0)


@pytest.mark.parametrize("d", [3, 5, 7, 9])
def test_lattice_bipartition_halves_every_plaquette(d):
    lat, _ = build_2d_color_code(d)
    V, Vc = bipartition(lat)
    assert all(2 * len(p.support & V) == len(p) for p in lat.plaquettes)


def test_transversal_s_dagger_rule():
    for d in (3, 5, 7):
        assert build_ccc(d).transversal_s_dagger
    assert build_rccc(3, "subsystem").transversal_s_dagger
    assert not build_rccc(5, "subsystem").transversal_s_dagger


def test_rccc5_cap_weight():
    r = build_rccc(5, "subsystem")
    assert sorted({len(g.support) for g in r.cap_gens}) == [8, 26]


@pytest.mark.parametrize("family,d", [("ccc", 3), ("ccc", 5), ("rccc", 3), ("rccc", 5)])
def test_code_switch_fix_operator(family, d):
    cH = code(family, d, "H")
    cT = code(family, d, "T")
    sub = cH.meta["capped"]
    n = cH.n
    e_z = [z.pauli(n) for lv in sub.levels for z, _ in lv.e]
    f_x = [x.pauli(n) for lv in sub.levels for x, _ in lv.f_center]
    rng = random.Random(d)
    for _ in range(20):
        out = [rng.getrandbits(1) for _ in e_z]
        P = code_switch_fix_operator(cH, out, "H->T")
        assert [int(not P.commutes(M)) for M in e_z] == out
        assert all(P.commutes(g) for g in cT.stab_gens if g not in e_z)
        assert cT.logical_bits(P) == 0
        out = [rng.getrandbits(1) for _ in f_x]
        P = code_switch_fix_operator(cT, out, "T->H")
        assert [int(not P.commutes(M)) for M in f_x] == out
        assert all(P.commutes(g) for g in cH.stab_gens if g not in f_x)
    with pytest.raises(InconsistentOutcomeError):
        code_switch_fix_operator(cH, [0], "H->T")
    with pytest.raises(DomainError):
        code_switch_fix_operator(cH, [], "sideways")


def test_code_to_json_shape():
    j = code_to_json(code("ccc", 3))
    assert j["n"] == 15 and j["k"] == 1 and j["form"] == "H"
    assert len(j["generators"]) == 14
    assert sorted(j["bipartition"]["V"] + j["bipartition"]["Vc"]) == list(range(15))
    assert j["transversal_s"] == "S_dagger"

