"""Sufficient conditions on the 2D plane, and the ordering search built on them.

Faults are projected onto the plane of a CCC(d): every reduced fault of
the Z-type f, v and cap circuits contributes its Z error restricted to
the center plane (and, for v circuits, also the bottom plane).  Any other
single fault equals a representative times a single-qubit error, which
the plane treats as a qubit fault.  Items are
(2D syndrome, weight parity, flag bits).  A v-circuit fault whose two
restrictions agree behaves like an f fault; otherwise it is a v* fault
carrying both restrictions.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .circuits import _Bare, build_nonflag, build_one_flag, build_schedule, capped_orderings, sawtooth
from .codes import CappedCode, build_2d_color_code, build_ccc
from .faults import Verdict, enumerate_fault_set
from .gf2 import mask_of


class SearchExhausted(RuntimeError):
    pass


Item = tuple[int, int, int]  # (syndrome, weight parity, flags)


@dataclass
class PlaneUniverse:
    d: int
    qubits: list[int]  # 2D syndrome per qubit label 1..n
    f: dict[Item, str] = field(default_factory=dict)  # item -> provenance
    vstar: dict[tuple[tuple[int, int], tuple[int, int], int], str] = field(default_factory=dict)
    cap: dict[Item, str] = field(default_factory=dict)

    def q_table(self, m_max: int) -> list[dict[tuple[int, int], tuple[int, ...]]]:
        """Q[m]: (syndrome, parity) reachable with exactly m qubit faults -> labels."""
        Q: list[dict[tuple[int, int], tuple[int, ...]]] = [{(0, 0): ()}]
        for _ in range(m_max):
            nxt: dict[tuple[int, int], tuple[int, ...]] = {}
            for (s, p), labs in Q[-1].items():
                for q, sq in enumerate(self.qubits, 1):
                    nxt.setdefault((s ^ sq, p ^ 1), labs + (q,))
            Q.append(nxt)
        return Q


def _plane_syn(lat, labels: set[int]) -> int:
    return mask_of(k for k, p in enumerate(lat.plaquettes) if len(labels & p.support) & 1)


def _project(lv, E: int) -> tuple[set[int], set[int]]:
    cen = {k + 1 for k, q in enumerate(lv.center) if E >> q & 1}
    bot = {k + 1 for k, q in enumerate(lv.bottom) if E >> q & 1}
    return cen, bot


def _circuit_items(circuit, lv, universe: PlaneUniverse, tag: str, flag_offset: int) -> None:
    lat = lv.lattice
    cap_mask = mask_of(lv.cap[1].support)
    for li, lab, e in circuit.reduced_faults():
        E = e.z
        fl = e.flags << flag_offset
        if circuit.category == "cap" and E & ~mask_of(lv.center):
            E ^= cap_mask
        cen, bot = _project(lv, E)
        prov = f"{circuit.generator}@{li}:{lab}"
        if circuit.category == "v" and cen != bot:
            key = ((_plane_syn(lat, cen), len(cen) & 1), (_plane_syn(lat, bot), len(bot) & 1), fl)
            universe.vstar.setdefault(key, prov)
            continue
        if not cen and not fl:
            continue
        item = (_plane_syn(lat, cen), len(cen) & 1, fl)
        (universe.cap if circuit.category == "cap" else universe.f).setdefault(item, prov)


def _gen_circuit(gen, order, n, template):
    b = _Bare(gen.name, gen.category, gen.ptype, gen.support)
    return build_nonflag(b, order, n) if template == "nonflag" else build_one_flag(b, order, n)


def plane_universe(d: int, f_orderings: Sequence[Sequence[int]], cap_ordering: Sequence[int] | None = None,
                   template: str = "nonflag", ccc: CappedCode | None = None) -> PlaneUniverse:
    ccc = ccc or build_ccc(d)
    lv = ccc.top
    lat = lv.lattice
    orders = capped_orderings(ccc, f_orderings, cap_ordering)
    u = PlaneUniverse(d, [_plane_syn(lat, {q}) for q in range(1, lat.n + 1)])
    off = 0
    gens = [lv.cap[1]] + [z for _, z in lv.f_center] + [z for _, z in lv.v]
    for g in gens:
        c = _gen_circuit(g, orders[g.name], ccc.n, template)
        _circuit_items(c, lv, u, g.name, off)
        off += c.n_flags
    return u


# ---------------------------------------------------------------------------
# conditions


def _sum(items) -> tuple[int, int, int]:
    s = w = f = 0
    for a, b, c in items:
        s ^= a
        w ^= b
        f ^= c
    return s, w, f


def _cond0(u: PlaneUniverse, Q) -> Verdict:
    for m in range(1, u.d):
        labs = Q[m].get((0, 1))
        if labs is not None:
            return Verdict(False, "q", (("q", labs),))
    return Verdict(True)


def _cond1(u: PlaneUniverse) -> Verdict:
    F = sorted(u.f)
    for k in range(1, u.d - 1):
        for c in itertools.combinations_with_replacement(F, k):
            s, w, fl = _sum(c)
            if s == 0 and w == 1 and fl == 0:
                return Verdict(False, "f", tuple(("f", u.f[i]) for i in c))
    return Verdict(True)


def _cond23(u: PlaneUniverse, Q, exact_one: bool) -> Verdict:
    F = sorted(u.f)
    d = u.d
    nfs = [1] if exact_one else range(0, d - 2)
    for nf in nfs:
        for c in itertools.combinations_with_replacement(F, nf):
            s, w, fl = _sum(c)
            if fl:
                continue
            top = d - 2 - nf if exact_one else d - 3 - nf
            for nq in range(0, top + 1):
                if nq == 0 and nf == 0:
                    continue
                labs = Q[nq].get((s, 1 ^ w))
                if labs is not None:
                    return Verdict(False, "f+q", tuple(("f", u.f[i]) for i in c) + (("q", labs),))
    return Verdict(True)


def _cond4(u: PlaneUniverse, Q) -> Verdict:
    d = u.d
    F = sorted(u.f)
    V = sorted(u.vstar)
    for nv in range(2, d - 2):
        nq = d - 2 - nv
        if nq < 1:
            continue
        for f in F:
            for c in itertools.combinations_with_replacement(V, nv):
                sc, wc, fl = f
                sb = wb = 0
                for (a, b, g) in c:
                    sc ^= a[0]
                    wc ^= a[1]
                    sb ^= b[0]
                    wb ^= b[1]
                    fl ^= g
                if sc == 0 and wc == 0 and fl == 0:
                    labs = Q[nq].get((sb, 1 ^ wb))
                    if labs is not None:
                        return Verdict(False, "f+v*+q", (("f", u.f[f]),) + tuple(("v*", u.vstar[i]) for i in c)
                                       + (("q", labs),))
    return Verdict(True)


def _cond5(u: PlaneUniverse, Q) -> Verdict:
    d = u.d
    F = sorted(u.f)
    V = sorted(u.vstar)
    caps = sorted(u.cap)
    for nfv in range(2, d - 1):
        nq = d - 2 - nfv
        if nq < 1:
            continue
        for nf in range(0, nfv + 1):
            for cf in itertools.combinations_with_replacement(F, nf):
                s1, w1, f1 = _sum(cf)
                for cv in itertools.combinations_with_replacement(V, nfv - nf):
                    sc, wc, sb, wb, fl = s1, w1, s1, w1, f1
                    for (a, b, g) in cv:
                        sc ^= a[0]
                        wc ^= a[1]
                        sb ^= b[0]
                        wb ^= b[1]
                        fl ^= g
                    for cap in caps:
                        if sc ^ cap[0] or wc ^ cap[1] or fl ^ cap[2]:
                            continue
                        labs = Q[nq].get((sb, 1 ^ wb))
                        if labs is not None:
                            wit = tuple(("f", u.f[i]) for i in cf) + tuple(("v*", u.vstar[i]) for i in cv)
                            return Verdict(False, "cap+f+v*+q", wit + (("cap", u.cap[cap]), ("q", labs)))
    return Verdict(True)


def evaluate_conditions(u: PlaneUniverse, which: Sequence[int] = (0, 1, 2, 3, 4, 5)) -> dict[int, Verdict]:
    Q = u.q_table(max(u.d - 1, 1))
    out = {}
    for k in which:
        if k == 0:
            out[0] = _cond0(u, Q)
        elif k == 1:
            out[1] = _cond1(u)
        elif k == 2:
            out[2] = _cond23(u, Q, exact_one=False)
        elif k == 3:
            out[3] = _cond23(u, Q, exact_one=True)
        elif k == 4:
            out[4] = _cond4(u, Q)
        elif k == 5:
            out[5] = _cond5(u, Q)
    return out


def check_conditions_2d(d: int, f_orderings: Sequence[Sequence[int]], cap_ordering: Sequence[int] | None = None,
                        flag_templates: str = "nonflag") -> dict[int, Verdict]:
    return evaluate_conditions(plane_universe(d, f_orderings, cap_ordering, flag_templates))


def conditions_hold(verdicts: Mapping[int, Verdict]) -> bool:
    return all(v.ok for v in verdicts.values())


# ---------------------------------------------------------------------------
# ordering search


def rotations(cycle: Sequence[int]) -> list[tuple[int, ...]]:
    c = tuple(cycle)
    return [c[k:] + c[:k] for k in range(len(c))]


def search_orderings(d: int, template: str = "nonflag", max_nodes: int | None = None) -> tuple[tuple[int, ...], ...]:
    """Backtrack over counterclockwise tours (one per plaquette) with the
    numerical cap order, accepting the first assignment whose partial
    fault universe passes Conditions 1-5 at every step."""
    ccc = build_ccc(d)
    lv = ccc.top
    lat = lv.lattice
    n = ccc.n
    cap_c = _gen_circuit(lv.cap[1], [0] + [lv.c(q) for q in range(1, lat.n + 1)], n, template)
    base = PlaneUniverse(d, [_plane_syn(lat, {q}) for q in range(1, lat.n + 1)])
    _circuit_items(cap_c, lv, base, lv.cap[1].name, 0)
    offsets = [cap_c.n_flags]
    nodes = [0]

    def contribution(k: int, tour, off):
        part = PlaneUniverse(d, base.qubits)
        c_ord = [lv.c(q) for q in tour]
        fz = lv.f_center[k][1]
        vz = lv.v[k][1]
        cf = _gen_circuit(fz, c_ord, n, template)
        _circuit_items(cf, lv, part, fz.name, off)
        cv = _gen_circuit(vz, sawtooth(c_ord, lat.n), n, template)
        _circuit_items(cv, lv, part, vz.name, off + cf.n_flags)
        return part, cf.n_flags + cv.n_flags

    def bt(k: int, u: PlaneUniverse, off: int, chosen: list):
        if k == lat.r:
            return chosen
        for tour in rotations(lat.plaquettes[k].cycle):
            nodes[0] += 1
            if max_nodes is not None and nodes[0] > max_nodes:
                raise SearchExhausted(f"search budget of {max_nodes} nodes exhausted")
            part, used = contribution(k, tour, off)
            nu = PlaneUniverse(d, u.qubits, {**u.f, **part.f}, {**u.vstar, **part.vstar}, dict(u.cap))
            if conditions_hold(evaluate_conditions(nu, (1, 2, 3, 4, 5))):
                res = bt(k + 1, nu, off + used, chosen + [tour])
                if res is not None:
                    return res
        return None

    res = bt(0, base, offsets[0], [])
    if res is None:
        raise SearchExhausted(f"no counterclockwise assignment passes the conditions for d={d}")
    return tuple(res)


# ---------------------------------------------------------------------------
# Condition 6 on the 2D color code


def random_plaquette_orderings(d: int, rng: random.Random) -> list[list[int]]:
    lat, _ = build_2d_color_code(d)
    out = []
    for p in lat.plaquettes:
        o = list(p.cycle)
        rng.shuffle(o)
        out.append(o)
    return out


def check_condition_6(d: int, flag_template: str = "flag", orderings: Sequence[Sequence[int]] | None = None):
    """No combination of <= d-1 faults (data qubits and Z-generator circuits
    of the 2D color code) yields a zero-flag nontrivial logical.

    Exact meet-in-the-middle over signature sums; orderings are 2D labels.
    Returns a Verdict whose witness lists fault descriptions.
    """
    lat, code = build_2d_color_code(d)
    if orderings is None:
        orderings = [p.cycle for p in lat.plaquettes]
    omap = {}
    for k, o in enumerate(orderings, 1):
        qs = [q - 1 for q in o]
        omap[f"g{k}x"] = omap[f"g{k}z"] = qs
    sched = build_schedule(code, omap, flag_template)
    fs = enumerate_fault_set(sched, code, t=d // 2, sectors=("Z",))
    sec = fs.sectors["Z"]
    lo = (d - 1) // 2
    small = {}
    for s, idx in fs.signatures("Z", lo):
        small.setdefault(s, idx)
    target = 1 << sec.log_shift
    for s, idx in fs.signatures("Z"):
        other = small.get(s ^ target)
        if other is not None:
            faults = [sec.faults[i].fault.describe(sched, code.label_base) for i in idx + other]
            return Verdict(False, "Z", (tuple(faults),))
    return Verdict(True)

