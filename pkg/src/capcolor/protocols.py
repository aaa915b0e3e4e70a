"""Pauli-frame protocol simulation.

Every protocol here decides on classical bits only, so tracking the data
error (the frame) through Clifford circuits is exact.  A round runs each
circuit of a schedule once; faults enter as :class:`Effect` items, either
inside a circuit (applied after its fault-free outcome is read) or as data
Paulis in front of a circuit.
"""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Mapping, Sequence

from .circuits import (CircuitSchedule, Effect, Kind, MeasurementCircuit, _Bare, build_nonflag,
                       build_one_flag, e_orderings, schedule_for)
from .codes import code_switch_fix_operator, fix_gauge
from .faults import (Fault, FaultOutcome, FaultSet, Verdict, elementary_faults, enumerate_fault_set,
                     build_sector, is_distinguishable, propagate)
from .gf2 import GF2Basis
from .pauli import Pauli, StabilizerCode


class IndistinguishableError(ValueError):
    def __init__(self, verdict: Verdict):
        self.verdict = verdict
        super().__init__(f"fault set is not distinguishable (sector {verdict.sector})")


class UnsupportedGateError(ValueError):
    pass


Item = tuple[int, Effect, bool]  # (slot, effect, applied in front of the circuit)
Source = Callable[[int], Sequence[Item]]

_LETTERS = {"X": (1, 0), "Y": (1, 1), "Z": (0, 1)}


def _no_faults(_r: int) -> Sequence[Item]:
    return ()


# ---------------------------------------------------------------------------
# round simulation


class RoundSimulator:
    """Runs circuits in order on a frame given as (x mask, z mask)."""

    def __init__(self, circuits: Sequence[MeasurementCircuit], n: int):
        self.circuits = tuple(circuits)
        self.n = n
        offs, acc = [], 0
        for c in self.circuits:
            offs.append(acc)
            acc += c.n_flags
        self.offsets = tuple(offs)
        self.n_flags = acc
        self._g = [(c.generator_pauli.x, c.generator_pauli.z, o) for c, o in zip(self.circuits, offs)]
        self._cache: dict[tuple, Item] = {}

    def __len__(self) -> int:
        return len(self.circuits)

    def item(self, fault: Fault, shift: int = 0) -> Item:
        key = (fault.circuit, fault.location, fault.pauli, fault.qubit, shift)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if fault.circuit is None:
            x, z = _LETTERS[fault.pauli]
            slot = 0 if fault.location is None else fault.location + shift
            it = (slot, Effect(x << fault.qubit, z << fault.qubit), True)
        else:
            slot = fault.circuit + shift
            o = propagate(self.circuits[slot], fault)
            it = (slot, Effect(o.data_error.x, o.data_error.z, o.syndrome_flip, o.flag_vector), False)
        self._cache[key] = it
        return it

    def run(self, ex: int, ez: int, items: Sequence[Item] = ()) -> tuple[int, int, int, int]:
        """One round.  Returns (x, z, outcome bits, flag bits)."""
        syn = fl = 0
        if not items:
            for i, (gx, gz, _) in enumerate(self._g):
                if ((ex & gz) ^ (ez & gx)).bit_count() & 1:
                    syn |= 1 << i
            return ex, ez, syn, fl
        by: dict[int, list] = defaultdict(list)
        for slot, eff, pre in items:
            by[slot].append((eff, pre))
        for i, (gx, gz, off) in enumerate(self._g):
            here = by.get(i)
            if here:
                for eff, pre in here:
                    if pre:
                        ex ^= eff.x
                        ez ^= eff.z
            b = ((ex & gz) ^ (ez & gx)).bit_count() & 1
            if here:
                for eff, pre in here:
                    if not pre:
                        b ^= eff.flip
                        ex ^= eff.x
                        ez ^= eff.z
                        fl ^= eff.flags << off
            syn |= b << i
        for eff, _ in by.get(len(self._g), ()):
            ex ^= eff.x
            ez ^= eff.z
        return ex, ez, syn, fl

    def locations(self) -> list[tuple[int, tuple[Effect, ...]]]:
        """Every noisy location with the effects of its nontrivial Paulis."""
        out = []
        for slot, c in enumerate(self.circuits):
            for i, loc in enumerate(c.locations):
                k = loc.kind
                if k is Kind.DATA_CNOT or k is Kind.FLAG_CNOT:
                    ctl, tgt = loc.wires
                    opts = []
                    for a in "IXYZ":
                        for b in "IXYZ":
                            if a == b == "I":
                                continue
                            ax, az = _LETTERS.get(a, (0, 0))
                            bx, bz = _LETTERS.get(b, (0, 0))
                            opts.append(c.propagate(i, (ax << ctl) | (bx << tgt), (az << ctl) | (bz << tgt)))
                    out.append((slot, tuple(opts)))
                elif k is Kind.PREP_SYNDROME or k is Kind.PREP_FLAG:
                    w = loc.wires[0]
                    out.append((slot, tuple(c.propagate(i, x << w, z << w) for x, z in _LETTERS.values())))
                elif k is Kind.MEASURE_SYNDROME:
                    out.append((slot, (Effect(flip=1),)))
                elif k is Kind.MEASURE_FLAG:
                    out.append((slot, (Effect(flags=1 << loc.flag),)))
        return out


def _source_from(sim: RoundSimulator, faults: Iterable[Fault] | Source | None, shift: int = 0) -> Source:
    if faults is None:
        return _no_faults
    if callable(faults):
        return faults
    by: dict[int, list[Item]] = defaultdict(list)
    for f in faults:
        by[max(f.round, 1)].append(sim.item(f, shift))
    return lambda r: by.get(r, ())


def _bits_at(value: int, positions: Sequence[int]) -> int:
    out = 0
    for k, p in enumerate(positions):
        if value >> p & 1:
            out |= 1 << k
    return out


def _spread(value: int, positions: Sequence[int]) -> int:
    out = 0
    for k, p in enumerate(positions):
        if value >> k & 1:
            out |= 1 << p
    return out


def _bitstr(v: int, width: int) -> str:
    return "".join(str(v >> i & 1) for i in range(width))


# ---------------------------------------------------------------------------
# decoder tables


@dataclass
class SectorTable:
    name: str
    rows: tuple[int, ...]  # generator indices read by this sector, in key order
    flag_bits: tuple[int, ...]
    entries: dict[int, tuple[int, int]]  # key -> (x, z) correction
    ptype: str | None  # Pauli type of fallback corrections

    def key(self, syn: int, flags: int) -> int:
        return _bits_at(syn, self.rows) | _bits_at(flags, self.flag_bits) << len(self.rows)


@dataclass
class DecoderTable:
    """(syndrome, cumulative flags) -> correction, one table per sector.

    Keys missing from a table fall back to a deterministic Pauli with the
    observed sector syndrome (earliest independent qubit columns).
    """

    code: StabilizerCode
    tables: dict[str, SectorTable]
    _fallback: dict = field(default_factory=dict, repr=False)

    def _sector_correction(self, tab: SectorTable, syn: int, flags: int) -> tuple[int, int]:
        hit = tab.entries.get(tab.key(syn, flags))
        if hit is not None:
            return hit
        s = _spread(_bits_at(syn, tab.rows), tab.rows)
        fk = (tab.name, s)
        fb = self._fallback.get(fk)
        if fb is None:
            P = self.code.solve_syndrome(s, tab.ptype)
            fb = self._fallback[fk] = (P.x, P.z)
        return fb

    def correction_masks(self, syn: int, flags: int = 0) -> tuple[int, int]:
        x = z = 0
        for tab in self.tables.values():
            cx, cz = self._sector_correction(tab, syn, flags)
            x ^= cx
            z ^= cz
        return x, z

    def correction(self, syn: int, flags: int = 0) -> Pauli:
        return Pauli(self.code.n, *self.correction_masks(syn, flags))

    def is_listed(self, syn: int, flags: int = 0) -> bool:
        return all(tab.key(syn, flags) in tab.entries for tab in self.tables.values())

    def ideal_correction(self, E: Pauli) -> Pauli:
        """Zero-flag decoding of E (the analysis decoder)."""
        return self.correction(self.code.syndrome_int(E), 0)

    def ideal_logical(self, E: Pauli) -> int:
        """Logical bits left after ideal decoding (see StabilizerCode.logical_bits)."""
        return self.code.logical_bits(E * self.ideal_correction(E))


def build_decoder_table(fault_set: FaultSet, code: StabilizerCode | None = None, check: bool = True) -> DecoderTable:
    """Tables from the fault set: the first combination (by size, then
    index order) of each key supplies the correction."""
    code = code or fault_set.code
    if check:
        v = is_distinguishable(fault_set)
        if not v:
            raise IndistinguishableError(v)
    tables = {}
    for name, sec in fault_set.sectors.items():
        rows = {"Z": code.x_indices, "X": code.z_indices}.get(name, tuple(range(code.num_gens)))
        ptype = {"Z": "Z", "X": "X"}.get(name)
        entries: dict[int, tuple[int, int]] = {}
        for s, idx in fault_set.signatures(name):
            k = sec.key(s)
            if k in entries:
                continue
            x = z = 0
            for i in idx:
                x ^= sec.faults[i].err_x
                z ^= sec.faults[i].err_z
            entries[k] = (x, z)
        tables[name] = SectorTable(name, tuple(rows), tuple(sec.flag_bits), entries, ptype)
    return DecoderTable(code, tables)


def decoder_for(schedule: CircuitSchedule, t: int, sectors: Sequence[str] | None = None,
                check: bool = True) -> DecoderTable:
    return build_decoder_table(enumerate_fault_set(schedule, t=t, sectors=sectors), check=check)


# ---------------------------------------------------------------------------
# filters


class ErrorSet:
    """Errors producible by at most s zero-flag faults, modulo the normalizer.

    Membership modulo logical operators as well as stabilizers matches the
    filter semantics: a filter projects onto the whole code space.
    """

    def __init__(self, fault_set: FaultSet, s: int):
        code = fault_set.code
        self.code = code
        self.s = s
        basis = GF2Basis(g.vec for g in code.stab_gens)
        for L in code.logical_x + code.logical_z:
            basis.add(L.vec)
        self._basis = basis
        self.members: dict[str, set[int]] = {}
        for name, sec in fault_set.sectors.items():
            got = set()
            for sig, idx in fault_set.signatures(name, max_size=s):
                if sig & sec.flag_mask:
                    continue
                x = z = 0
                for i in idx:
                    x ^= sec.faults[i].err_x
                    z ^= sec.faults[i].err_z
                got.add(basis.reduce(Pauli(code.n, x, z).vec))
            self.members[name] = got

    def __contains__(self, E: Pauli) -> bool:
        n = self.code.n
        for name, got in self.members.items():
            P = {"Z": Pauli(n, 0, E.z), "X": Pauli(n, E.x, 0)}.get(name, E)
            if self._basis.reduce(P.vec) not in got:
                return False
        return True


# ---------------------------------------------------------------------------
# repetition core


@dataclass
class ProtocolResult:
    frame: Pauli
    trace: list[dict]
    converged: bool
    rounds: int
    bundle: tuple[int, int] | None
    m: int | None = None
    extra: dict = field(default_factory=dict)


def _stabilize(sim: RoundSimulator, ex: int, ez: int, t: int, source: Source, max_rounds: int,
               trace: list | None, stage: str):
    """Repeat rounds until (outcomes, cumulative flags) is seen t+1 times in a row."""
    prev = None
    count = 0
    F = 0
    width = len(sim)
    for r in range(1, max_rounds + 1):
        ex, ez, syn, fl = sim.run(ex, ez, source(r))
        F ^= fl
        b = (syn, F)
        count = count + 1 if b == prev else 1
        prev = b
        if trace is not None:
            trace.append({"stage": stage, "round": r, "syndromes": _bitstr(syn, width),
                          "flags": _bitstr(F, sim.n_flags), "repeat": count, "correction": None})
        if count == t + 1:
            return ex, ez, b, True, r
    return ex, ez, prev, False, max_rounds


def round_cap(t: int, overflow: int = 0) -> int:
    return (t + 1) ** 2 + overflow


def run_ftec(frame: Pauli, schedule: CircuitSchedule, decoder: DecoderTable, t: int,
             faults: Iterable[Fault] | Source | None = None, overflow: int = 0, trace: bool = True,
             extra_flags: int = 0, sim: RoundSimulator | None = None, stage: str = "ec") -> ProtocolResult:
    """Flag error correction.

    ``faults`` are Faults whose ``round`` field (1-based) selects the round,
    or a callable round -> items.  ``extra_flags`` are appended above the
    schedule's flag bits when decoding (flags carried in from an earlier
    gadget).  A run that does not settle within (t+1)^2 + overflow rounds
    returns its frame uncorrected with ``converged=False``.
    """
    sim = sim or RoundSimulator(schedule.circuits, schedule.code.n)
    src = _source_from(sim, faults)
    rec: list | None = [] if trace else None
    ex, ez, b, ok, r = _stabilize(sim, frame.x, frame.z, t, src, round_cap(t, overflow), rec, stage)
    if ok:
        syn, F = b
        cx, cz = decoder.correction_masks(syn, F | extra_flags << sim.n_flags)
        ex ^= cx
        ez ^= cz
        if rec:
            rec[-1]["correction"] = Pauli(frame.n, cx, cz).sparse(schedule.code.label_base)
    return ProtocolResult(Pauli(frame.n, ex, ez), rec or [], ok, r, b)


def run_ftec_general(frame: Pauli, schedule: CircuitSchedule, t: int, decoder: DecoderTable | None = None,
                     faults=None, overflow: int = 0, trace: bool = True) -> ProtocolResult:
    """Error correction for any stabilizer code: one undivided table."""
    if decoder is None:
        decoder = decoder_for(schedule, t, sectors=("full",))
    return run_ftec(frame, schedule, decoder, t, faults, overflow, trace)


# ---------------------------------------------------------------------------
# logical measurement and preparation


def logical_circuit(code: StabilizerCode, L: Pauli, name: str = "L") -> MeasurementCircuit:
    if not (L.is_x_type or L.is_z_type):
        raise ValueError("logical measurement needs an X-type or Z-type operator")
    ptype = "Z" if L.is_z_type else "X"
    gen = _Bare(name, "logical", ptype, frozenset(L.support))
    return build_nonflag(gen, sorted(L.support), code.n)


def run_ftm(frame: Pauli, L: Pauli, schedule: CircuitSchedule, decoder: DecoderTable, t: int,
            faults=None, m_in: int = 0, overflow: int = 0, trace: bool = True) -> ProtocolResult:
    """Measure L non-destructively, each round L first and then the schedule.

    Faults in the L circuit use ``circuit=-1``; schedule circuits keep
    their schedule indices.  ``m_in`` is the ideal eigenvalue bit of L on
    the encoded state.
    """
    code = schedule.code
    sim = RoundSimulator((logical_circuit(code, L),) + schedule.circuits, code.n)
    src = _source_from(sim, faults, shift=1)
    rec: list | None = [] if trace else None
    ex, ez, b, ok, r = _stabilize(sim, frame.x, frame.z, t, src, round_cap(t, overflow), rec, "ftm")
    m = None
    if b is not None:
        m = (b[0] & 1) ^ m_in
    if ok:
        syn, F = b
        cx, cz = decoder.correction_masks(syn >> 1, F)
        ex ^= cx
        ez ^= cz
        C = Pauli(code.n, cx, cz)
        if not C.commutes(L):
            m ^= 1
        if rec:
            rec[-1]["correction"] = C.sparse(code.label_base)
            rec[-1]["m"] = m
    return ProtocolResult(Pauli(frame.n, ex, ez), rec or [], ok, r, b, m=m)


def run_ftp(frame: Pauli, basis: str, schedule: CircuitSchedule, decoder: DecoderTable, t: int,
            faults=None, m_in: int = 0, overflow: int = 0, trace: bool = True) -> ProtocolResult:
    """Prepare |0> (basis 'zero') or |+> ('plus'): measure, then flip if m = 1.

    The applied logical flip changes the encoded state, not the error
    frame; ``extra['eigenvalue']`` is the resulting ideal eigenvalue bit of
    the measured logical.
    """
    code = schedule.code
    if basis == "zero":
        L = code.logical_z[0]
    elif basis == "plus":
        L = code.logical_x[0]
    else:
        raise ValueError(f"unknown basis {basis!r}")
    res = run_ftm(frame, L, schedule, decoder, t, faults, m_in, overflow, trace)
    res.extra["flip_applied"] = bool(res.m)
    res.extra["eigenvalue"] = m_in ^ (res.m or 0)
    res.extra["L"] = L
    return res


# ---------------------------------------------------------------------------
# transversal Cliffords


def _pauli_masks(label: str, q: int) -> tuple[int, int]:
    x, z = _LETTERS[label]
    return x << q, z << q


def apply_transversal(frames, gate: str, code: StabilizerCode | None = None, faults: Iterable[Fault] = ()):
    """Conjugate the frame(s) through a transversal gate, then add gate faults.

    Single-block faults are Fault(None, None, letter, qubit); CNOT faults
    carry a two-letter label for (block 1, block 2) on that qubit.
    """
    if code is not None and code.meta.get("form") == "T" and gate in ("H", "S"):
        raise UnsupportedGateError(f"transversal {gate} is not a logical gate of the T form")
    if gate in ("H", "S"):
        E = frames
        x, z = (E.z, E.x) if gate == "H" else (E.x, E.z ^ E.x)
        for f in faults:
            fx, fz = _pauli_masks(f.pauli, f.qubit)
            x ^= fx
            z ^= fz
        return Pauli(E.n, x, z)
    if gate == "CNOT":
        A, B = frames
        ax, az, bx, bz = A.x, A.z ^ B.z, B.x ^ A.x, B.z
        for f in faults:
            a, b = f.pauli[0], f.pauli[1]
            if a != "I":
                fx, fz = _pauli_masks(a, f.qubit)
                ax ^= fx
                az ^= fz
            if b != "I":
                fx, fz = _pauli_masks(b, f.qubit)
                bx ^= fx
                bz ^= fz
        return Pauli(A.n, ax, az), Pauli(B.n, bx, bz)
    raise UnsupportedGateError(f"unknown transversal gate {gate!r}")


def gate_faults(n: int, gate: str) -> list[Fault]:
    if gate == "CNOT":
        labels = [a + b for a in "IXYZ" for b in "IXYZ"][1:]
    else:
        labels = list("XYZ")
    return [Fault(None, None, lab, q) for q in range(n) for lab in labels]


def logical_action(gate: str, bits):
    """Map logical_bits values (bit0: X-bar part, bit1: Z-bar part) through the gate."""
    if gate == "H":
        b = bits
        return (b >> 1 & 1) | (b & 1) << 1
    if gate == "S":
        return bits ^ ((bits & 1) << 1)
    if gate == "CNOT":
        a, b = bits
        a2 = a ^ (b & 2)
        b2 = b ^ (a & 1)
        return a2, b2
    raise UnsupportedGateError(gate)


# ---------------------------------------------------------------------------
# code switching and the T gate


def e_circuits(code_H: StabilizerCode, template: str = "flag") -> list[MeasurementCircuit]:
    """Z-type vertical-face circuits in the order the fix solver expects."""
    ccc = code_H.meta["capped"]
    orders = e_orderings(ccc)
    build = build_one_flag if template == "flag" else build_nonflag
    out = []
    for lv in ccc.levels:
        for g, _ in lv.e:
            out.append(build(_Bare(g.name, "e", "Z", g.support), orders[g.name], code_H.n))
    return out


def f_circuits(schedule: CircuitSchedule) -> list[MeasurementCircuit]:
    """The schedule's X-type center-face circuits, in generator order."""
    return [c for c in schedule if c.ptype == "X" and c.category == "f"]


def _random_product(pool: Sequence[Pauli], rng: random.Random | None, n: int) -> tuple[int, int]:
    x = z = 0
    if rng is None:
        return x, z
    for P in pool:
        if rng.getrandbits(1):
            x ^= P.x
            z ^= P.z
    return x, z


def run_code_switch(frame: Pauli, direction: str, code_H: StabilizerCode, circuits: Sequence[MeasurementCircuit],
                    t: int, faults=None, rng: random.Random | None = None, trace: bool = True,
                    overflow: int = 0, sim: RoundSimulator | None = None) -> ProtocolResult:
    """Switch gauge by measuring the target form's new generators.

    The measured operators anticommute with part of the source form, so
    their outcomes are random; this is modelled by multiplying the frame
    by a random product of those source operators (none when ``rng`` is
    None).  After t+1 equal bundles the GF(2)-solved fixing operator is
    applied.  ``extra['flags']`` keeps the cumulative flag bits.
    """
    ccc = code_H.meta["capped"]
    n = code_H.n
    if direction in ("H->T", "HT"):
        pool = [x.pauli(n) for lv in ccc.levels for x, _ in lv.f_center]
        code_from = code_H
        stage = "H->T"
    elif direction in ("T->H", "TH"):
        pool = [z.pauli(n) for lv in ccc.levels for z, _ in lv.e]
        code_from = fix_gauge(ccc, "T")
        stage = "T->H"
    else:
        raise ValueError(f"unknown direction {direction!r}")
    sim = sim or RoundSimulator(circuits, n)
    src = _source_from(sim, faults)
    rx, rz = _random_product(pool, rng, n)
    rec: list | None = [] if trace else None
    ex, ez, b, ok, r = _stabilize(sim, frame.x ^ rx, frame.z ^ rz, t, src, round_cap(t, overflow), rec, stage)
    flags = 0
    if ok:
        outcomes, flags = b
        P = code_switch_fix_operator(code_from, [outcomes >> k & 1 for k in range(len(sim))], direction)
        ex ^= P.x
        ez ^= P.z
        if rec:
            rec[-1]["correction"] = P.sparse(code_H.label_base)
    res = ProtocolResult(Pauli(n, ex, ez), rec or [], ok, r, b)
    res.extra["flags"] = flags
    return res


STAGES = ("t1", "t2", "t3", "t4")


@dataclass
class TGateSetup:
    code_H: StabilizerCode
    schedule: CircuitSchedule  # H-form error correction
    e_circuits: list[MeasurementCircuit]
    f_circuits: list[MeasurementCircuit]
    t: int

    @cached_property
    def sims(self) -> dict[str, RoundSimulator]:
        n = self.code_H.n
        return {"t1": RoundSimulator(self.e_circuits, n), "t3": RoundSimulator(self.f_circuits, n),
                "t4": RoundSimulator(self.schedule.circuits, n)}

    @cached_property
    def standard_decoder(self) -> DecoderTable:
        return decoder_for(self.schedule, self.t)

    @cached_property
    def pushed_faults(self) -> list[tuple[Fault, FaultOutcome, str]]:
        """Single faults of steps 1-3 pushed to the start of step 4.

        The e-circuit flags collected in step 1 sit above the schedule's
        own flag bits.
        """
        n = self.code_H.n
        shift = self.schedule.n_flags
        out = []
        for stage, f in t_gate_locations(self, stages=("t1", "t2", "t3")):
            E, eflags, ok = _t_steps_1_to_3(self, Pauli(n), {stage: [f]}, None)
            if not ok:
                continue
            out.append((f, FaultOutcome(E, 0, eflags << shift), stage))
        return out

    @cached_property
    def fault_set(self) -> FaultSet:
        """Error-correction faults plus the pushed step 1-3 faults."""
        sched = self.schedule
        code = self.code_H
        singles = elementary_faults(sched) + [(f, o) for f, o, _ in self.pushed_faults]
        e_mask = ((1 << sum(c.n_flags for c in self.e_circuits)) - 1) << sched.n_flags
        secs = {
            "Z": build_sector(sched, "Z", singles, code, fmask=sched.flag_mask("Z") | e_mask),
            "X": build_sector(sched, "X", singles, code, fmask=sched.flag_mask("X")),
        }
        return FaultSet(sched, code, self.t, secs)

    @cached_property
    def decoder(self) -> DecoderTable:
        return build_decoder_table(self.fault_set)


def t_gate_setup(code_H: StabilizerCode, t: int = 1, schedule: CircuitSchedule | None = None) -> TGateSetup:
    schedule = schedule or schedule_for(code_H, "nonflag")
    return TGateSetup(code_H, schedule, e_circuits(code_H), f_circuits(schedule), t)


def t_gate_locations(setup: TGateSetup, stages: Sequence[str] = STAGES, rounds: int | None = None):
    """(stage, Fault) for every single fault location of the T-gate sequence.

    Repeated stages list rounds 1..t+1, the rounds that always run.
    """
    rounds = rounds or setup.t + 1
    n = setup.code_H.n
    for stage in stages:
        if stage == "t2":
            for q in range(n):
                for p in "XYZ":
                    yield stage, Fault(None, None, p, q)
            continue
        circuits = {"t1": setup.e_circuits, "t3": setup.f_circuits, "t4": setup.schedule.circuits}[stage]
        for r in range(1, rounds + 1):
            for i, c in enumerate(circuits):
                for loc, lab, _ in c.raw_faults():
                    yield stage, Fault(i, loc, lab, round=r)


def _t_steps_1_to_3(setup: TGateSetup, frame: Pauli, faults: Mapping[str, Sequence[Fault]],
                    rng: random.Random | None, trace: list | None = None, overflow: int = 0):
    code = setup.code_H
    a = run_code_switch(frame, "H->T", code, setup.e_circuits, setup.t, faults.get("t1"), rng,
                        trace is not None, overflow, setup.sims["t1"])
    if trace is not None:
        trace += a.trace
    if not a.converged:
        return a.frame, a.extra["flags"], False
    E = a.frame
    # step 2: transversal T/T^dagger, a source of single-qubit Pauli faults only
    x, z = E.x, E.z
    for f in faults.get("t2", ()):
        fx, fz = _pauli_masks(f.pauli, f.qubit)
        x ^= fx
        z ^= fz
    if trace is not None:
        trace.append({"stage": "T", "round": 1, "faults": len(faults.get("t2", ()))})
    b = run_code_switch(Pauli(code.n, x, z), "T->H", code, setup.f_circuits, setup.t, faults.get("t3"), rng,
                        trace is not None, overflow, setup.sims["t3"])
    if trace is not None:
        trace += b.trace
    return b.frame, a.extra["flags"], b.converged


def run_t_gate(frame: Pauli, setup: TGateSetup, faults: Mapping[str, Sequence[Fault]] | None = None,
               rng: random.Random | None = None, trace: bool = True, overflow: int = 0) -> ProtocolResult:
    """Switch to the T form, apply the (Pauli-tracked) transversal T, switch
    back, then correct with the extended decoder."""
    faults = faults or {}
    rec: list | None = [] if trace else None
    E, eflags, ok = _t_steps_1_to_3(setup, frame, faults, rng, rec, overflow)
    if not ok:
        return ProtocolResult(E, rec or [], False, 0, None)
    res = run_ftec(E, setup.schedule, setup.decoder, setup.t, faults.get("t4"), overflow, trace,
                   extra_flags=eflags, sim=setup.sims["t4"], stage="t4")
    res.trace = (rec or []) + res.trace
    res.extra["e_flags"] = eflags
    return res


def fact3_violations(code_H: StabilizerCode, circuits: Sequence[MeasurementCircuit] | None = None) -> list[Fault]:
    """Single e-circuit faults leaving an unflagged error of weight >= 2
    (weight minimized over multiplication by the measured face)."""
    circuits = circuits if circuits is not None else e_circuits(code_H)
    n = code_H.n
    bad = []
    for i, c in enumerate(circuits):
        g = c.generator_pauli
        for loc, lab, eff in c.raw_faults():
            E = eff.data(n)
            w = min(E.weight, (E * g).weight)
            if w >= 2 and not eff.flags:
                bad.append(Fault(i, loc, lab))
    return bad


__all__ = [
    "IndistinguishableError", "UnsupportedGateError", "RoundSimulator", "SectorTable", "DecoderTable",
    "build_decoder_table", "decoder_for", "ErrorSet", "ProtocolResult", "round_cap", "run_ftec",
    "run_ftec_general", "logical_circuit", "run_ftm", "run_ftp", "apply_transversal", "gate_faults",
    "logical_action", "e_circuits", "f_circuits", "run_code_switch", "STAGES", "TGateSetup", "t_gate_setup",
    "t_gate_locations", "run_t_gate", "fact3_violations",
]
