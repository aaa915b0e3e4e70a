"""Fault enumeration, propagation and distinguishability.

The engine works on *sectors*.  A CSS code's Z-type data errors are read
by X-type generators and matter together with the flags of Z-type
circuits (and vice versa), so fault combinations are enumerated per
sector on (error mask, sector flags).  Equal full (syndrome, flag) keys
imply equal sector keys, and with per-sector logical equivalence the full
combined errors are equivalent, so the sector checks are sufficient for
the undivided definition; ``sector="full"`` runs the undivided check.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .circuits import CircuitSchedule, Effect, Kind, MeasurementCircuit
from .codes import CappedCode
from .gf2 import mask_of
from .pauli import Pauli, StabilizerCode


class LocationError(ValueError):
    pass


class ResourceError(RuntimeError):
    def __init__(self, msg: str, progress: int = 0):
        super().__init__(msg)
        self.progress = progress


class TaxonomyError(AssertionError):
    pass


@dataclass(frozen=True)
class Fault:
    circuit: int | None  # schedule index; None for a data-qubit fault
    location: int | None  # location index inside the circuit
    pauli: str  # 'IZ', 'XY', 'M', or a single letter for data/prep faults
    qubit: int | None = None  # data qubit of a data fault
    round: int = 0
    rep: bool = False  # reduced representative

    def describe(self, schedule: CircuitSchedule | None = None, base: int = 0) -> str:
        if self.circuit is None:
            return f"{self.pauli}{self.qubit + base}"
        name = schedule[self.circuit].generator if schedule is not None else f"c{self.circuit}"
        return f"{name}@{self.location}:{self.pauli}"


@dataclass(frozen=True)
class FaultOutcome:
    data_error: Pauli
    syndrome_flip: int  # bit i = outcome of circuit i flipped
    flag_vector: int  # over all flags of the round


@dataclass(frozen=True)
class FaultCombination:
    faults: tuple[Fault, ...]
    combined_error: Pauli
    cumulative_flag: int

    def describe(self, schedule: CircuitSchedule | None = None, base: int = 0) -> str:
        return " + ".join(f.describe(schedule, base) for f in self.faults) + f" -> {self.combined_error.sparse(base)}"


# ---------------------------------------------------------------------------
# propagation


def _label_bits(label: str) -> tuple[int, int]:
    return (label in "XY", label in "ZY")


def propagate(circuit: MeasurementCircuit, fault: Fault, offset: int = 0, index: int = 0) -> FaultOutcome:
    """Outcome of one fault in ``circuit``; flags shifted by ``offset``, flip put at bit ``index``."""
    n = circuit.n
    if fault.circuit is None:
        x, z = _label_bits(fault.pauli)
        e = circuit.propagate(-1, x << fault.qubit, z << fault.qubit)
        return FaultOutcome(Pauli(n, x << fault.qubit, z << fault.qubit), e.flip << index, e.flags << offset)
    if fault.location is None or not 0 <= fault.location < len(circuit.locations):
        raise LocationError("fault location is not inside this circuit")
    loc = circuit.locations[fault.location]
    lab = fault.pauli
    if lab == "M":
        if loc.kind is Kind.MEASURE_SYNDROME:
            e = Effect(flip=1)
        elif loc.kind is Kind.MEASURE_FLAG:
            e = Effect(flags=1 << loc.flag)
        else:
            raise LocationError("measurement fault on a non-measurement location")
    elif loc.kind in (Kind.DATA_CNOT, Kind.FLAG_CNOT):
        if len(lab) != 2:
            raise LocationError("CNOT faults are two-qubit Paulis")
        c, t = loc.wires
        (cx, cz), (tx, tz) = _label_bits(lab[0]), _label_bits(lab[1])
        e = circuit.propagate(fault.location, (cx << c) | (tx << t), (cz << c) | (tz << t))
    elif loc.kind in (Kind.PREP_SYNDROME, Kind.PREP_FLAG, Kind.IDLE):
        if len(lab) != 1:
            raise LocationError("single-qubit location needs a one-letter Pauli")
        w = loc.wires[0]
        x, z = _label_bits(lab)
        e = circuit.propagate(fault.location, x << w, z << w)
    else:
        raise LocationError(f"cannot place {lab!r} on {loc.kind.value}")
    return FaultOutcome(e.data(n), e.flip << index, e.flags << offset)


def outcome_in_schedule(schedule: CircuitSchedule, fault: Fault) -> FaultOutcome:
    if fault.circuit is None:
        n = schedule.code.n
        x, z = _label_bits(fault.pauli)
        return FaultOutcome(Pauli(n, x << fault.qubit, z << fault.qubit), 0, 0)
    i = fault.circuit
    return propagate(schedule[i], fault, schedule.flag_offsets[i], i)


# ---------------------------------------------------------------------------
# single-fault universes


def data_faults(n: int) -> list[Fault]:
    return [Fault(None, None, p, q) for q in range(n) for p in "XYZ"]


def elementary_faults(schedule: CircuitSchedule, with_data: bool = True) -> list[tuple[Fault, FaultOutcome]]:
    """Every raw single fault of one round, data-qubit faults first."""
    out = []
    n = schedule.code.n
    if with_data:
        for f in data_faults(n):
            out.append((f, outcome_in_schedule(schedule, f)))
    for i, c in enumerate(schedule):
        off = schedule.flag_offsets[i]
        for loc, lab, e in c.raw_faults():
            out.append((Fault(i, loc, lab), FaultOutcome(e.data(n), e.flip << i, e.flags << off)))
    return out


def enumerate_reduced_single_faults(schedule: CircuitSchedule) -> list[tuple[Fault, FaultOutcome]]:
    """One representative per class: data X/Y/Z, then per circuit the
    ancilla Pauli after each CNOT and the prep/measurement flips."""
    n = schedule.code.n
    out = [(f, outcome_in_schedule(schedule, f)) for f in data_faults(n)]
    for i, c in enumerate(schedule):
        off = schedule.flag_offsets[i]
        for li, lab, e in c.reduced_faults():
            out.append((Fault(i, li, lab, rep=True), FaultOutcome(e.data(n), e.flip << i, e.flags << off)))
    return out


def _triple(o: FaultOutcome) -> tuple[int, int, int, int]:
    return (o.data_error.x, o.data_error.z, o.syndrome_flip, o.flag_vector)


def check_reduction_completeness(schedule: CircuitSchedule) -> list[Fault]:
    """Raw faults not realized as representative x (single data Pauli) x (own outcome flip).

    Returns the offending faults (empty when the reduction is complete).
    """
    reps = {_triple(o) for _, o in enumerate_reduced_single_faults(schedule)}
    reps.add((0, 0, 0, 0))
    n = schedule.code.n
    singles = [(0, 0)] + [(x << q, z << q) for q in range(n) for x, z in ((1, 0), (1, 1), (0, 1))]
    bad = []
    for f, o in elementary_faults(schedule, with_data=False):
        x, z, s, fl = _triple(o)
        own = 1 << f.circuit
        ok = any((x ^ sx, z ^ sz, s ^ b, fl) in reps for sx, sz in singles for b in (0, own))
        if not ok:
            bad.append(f)
    return bad


# ---------------------------------------------------------------------------
# sectors and signatures


@dataclass(frozen=True)
class SectorFault:
    err_x: int
    err_z: int
    flags: int
    sig: int
    fault: Fault


@dataclass
class Sector:
    """Deduplicated single faults of one sector with linear signatures.

    sig = syndrome bits | flags << n_syn | logical bits << (n_syn + n_flag_bits)
    """

    name: str
    code: StabilizerCode
    faults: list[SectorFault]
    n_syn: int
    flag_bits: list[int]  # global flag indices in signature order
    n_log: int
    gen_rows: list[int] = field(default_factory=list)

    @property
    def syn_mask(self) -> int:
        return (1 << self.n_syn) - 1

    @property
    def flag_mask(self) -> int:
        return ((1 << len(self.flag_bits)) - 1) << self.n_syn

    @property
    def log_shift(self) -> int:
        return self.n_syn + len(self.flag_bits)

    @property
    def log_mask(self) -> int:
        return ((1 << self.n_log) - 1) << self.log_shift

    def key(self, sig: int) -> int:
        return sig & (self.syn_mask | self.flag_mask)


def _compress(flags: int, bits: list[int]) -> int:
    out = 0
    for k, b in enumerate(bits):
        if flags >> b & 1:
            out |= 1 << k
    return out


def _logical_sig(code: StabilizerCode, ex: int, ez: int, which: str) -> int:
    """Logical bits: Z sector reads X-bar, X sector reads Z-bar, full reads both."""
    out = 0
    k = 0
    if which in ("Z", "full"):
        for L in code.logical_x:
            out |= ((ez & L.x).bit_count() + (ex & L.z).bit_count()) % 2 << k
            k += 1
    if which in ("X", "full"):
        for L in code.logical_z:
            out |= ((ex & L.z).bit_count() + (ez & L.x).bit_count()) % 2 << k
            k += 1
    return out


def build_sector(schedule: CircuitSchedule, which: str,
                 singles: Sequence[tuple[Fault, FaultOutcome]] | None = None,
                 code: StabilizerCode | None = None, fmask: int | None = None) -> Sector:
    """``which`` in {'Z', 'X', 'full'}: Z-sector faults carry Z-type errors.

    ``fmask`` overrides the flag bits read by the sector (used when extra
    flags from other gadgets are appended above the schedule's own).
    """
    code = code or schedule.code
    override = fmask
    if singles is None:
        singles = elementary_faults(schedule)
    if which == "Z":
        rows = [code.stab_gens[i] for i in code.x_indices]
        fmask = schedule.flag_mask("Z")
    elif which == "X":
        rows = [code.stab_gens[i] for i in code.z_indices]
        fmask = schedule.flag_mask("X")
    elif which == "full":
        rows = list(code.stab_gens)
        fmask = (1 << schedule.n_flags) - 1
    else:
        raise ValueError(f"unknown sector {which!r}")
    if override is not None:
        fmask = override
    bits = [b for b in range(fmask.bit_length()) if fmask >> b & 1]
    n_log = code.k * (2 if which == "full" else 1)
    m = len(rows)
    seen = set()
    out = []
    for f, o in singles:
        ex, ez = o.data_error.x, o.data_error.z
        if which == "Z":
            ex = 0
        elif which == "X":
            ez = 0
        fl = o.flag_vector & fmask
        key = (ex, ez, fl)
        if key == (0, 0, 0) or key in seen:
            continue
        seen.add(key)
        syn = 0
        for j, g in enumerate(rows):
            if ((ex & g.z).bit_count() + (ez & g.x).bit_count()) & 1:
                syn |= 1 << j
        sig = syn | _compress(fl, bits) << m | _logical_sig(code, ex, ez, which) << (m + len(bits))
        out.append(SectorFault(ex, ez, fl, sig, f))
    return Sector(which, code, out, m, bits, n_log)


# ---------------------------------------------------------------------------
# fault sets


def _combo(sector: Sector, idx: Sequence[int]) -> FaultCombination:
    n = sector.code.n
    x = z = fl = 0
    faults = []
    for i in idx:
        sf = sector.faults[i]
        x ^= sf.err_x
        z ^= sf.err_z
        fl ^= sf.flags
        faults.append(sf.fault)
    return FaultCombination(tuple(faults), Pauli(n, x, z), fl)


@dataclass
class FaultSet:
    """All combinations of up to t faults, streamed per sector."""

    schedule: CircuitSchedule
    code: StabilizerCode
    t: int
    sectors: dict[str, Sector]
    budget: int | None = None

    def index_tuples(self, sector: str, max_size: int | None = None) -> Iterator[tuple[int, ...]]:
        m = len(self.sectors[sector].faults)
        top = self.t if max_size is None else max_size
        count = 0
        for size in range(top + 1):
            for idx in itertools.combinations(range(m), size):
                count += 1
                if self.budget is not None and count > self.budget:
                    raise ResourceError("fault-set enumeration budget exceeded", count)
                yield idx

    def combinations(self, sector: str = "Z") -> Iterator[FaultCombination]:
        sec = self.sectors[sector]
        for idx in self.index_tuples(sector):
            yield _combo(sec, idx)

    def signatures(self, sector: str, max_size: int | None = None) -> Iterator[tuple[int, tuple[int, ...]]]:
        sec = self.sectors[sector]
        sigs = [f.sig for f in sec.faults]
        for idx in self.index_tuples(sector, max_size):
            s = 0
            for i in idx:
                s ^= sigs[i]
            yield s, idx

    def classes(self, sector: str = "Z") -> dict[int, tuple[int, tuple[int, ...]]]:
        """(syndrome|flag) key -> (logical bits, least index tuple)."""
        sec = self.sectors[sector]
        out: dict[int, tuple[int, tuple[int, ...]]] = {}
        for s, idx in self.signatures(sector):
            out.setdefault(sec.key(s), (s & sec.log_mask, idx))
        return out


def enumerate_fault_set(schedule: CircuitSchedule, code: StabilizerCode | None = None, t: int = 1,
                        sectors: Sequence[str] | None = None, budget: int | None = None,
                        singles=None) -> FaultSet:
    code = code or schedule.code
    if t < 0:
        raise ValueError("t must be non-negative")
    if sectors is None:
        sectors = ("Z", "X") if code.is_css else ("full",)
    if singles is None:
        singles = elementary_faults(schedule)
    secs = {s: build_sector(schedule, s, singles, code) for s in sectors}
    return FaultSet(schedule, code, t, secs, budget)


@dataclass(frozen=True)
class Verdict:
    ok: bool
    sector: str | None = None
    witness: tuple[FaultCombination, ...] | None = None

    def __bool__(self) -> bool:
        return self.ok


def is_distinguishable(fault_set: FaultSet, code: StabilizerCode | None = None) -> Verdict:
    """Direct check: combinations sharing a (syndrome, flag) key must be
    logically equivalent.  The witness is the first violating pair in
    (size, lexicographic) enumeration order."""
    for name, sec in fault_set.sectors.items():
        seen: dict[int, tuple[int, tuple[int, ...]]] = {}
        for s, idx in fault_set.signatures(name):
            k = sec.key(s)
            lg = s & sec.log_mask
            prev = seen.get(k)
            if prev is None:
                seen[k] = (lg, idx)
            elif prev[0] != lg:
                return Verdict(False, name, (_combo(sec, prev[1]), _combo(sec, idx)))
    return Verdict(True)


def is_distinguishable_via_2t(schedule_or_set, code: StabilizerCode | None = None, t: int | None = None) -> Verdict:
    """Scan F_2t for a zero-flag, zero-syndrome nontrivial logical.

    Meet in the middle: F_2t's combination A+B hits the target iff
    sig(A) ^ sig(B) is a pure logical pattern.
    """
    fs = schedule_or_set if isinstance(schedule_or_set, FaultSet) else enumerate_fault_set(schedule_or_set, code, t)
    for name, sec in fs.sectors.items():
        table: dict[int, tuple[int, ...]] = {}
        for s, idx in fs.signatures(name):
            table.setdefault(s, idx)
        targets = [lg << sec.log_shift for lg in range(1, 1 << sec.n_log)]
        for s, idx in table.items():
            for tg in targets:
                other = table.get(s ^ tg)
                if other is not None:
                    merged = tuple(sorted(set(idx) ^ set(other)))
                    return Verdict(False, name, (_combo(sec, merged),))
    return Verdict(True)


def sampled_zero_flag_logicals(fault_set: FaultSet, size: int, samples: int, seed: int = 0) -> int:
    """Count sampled size-``size`` multisets whose signature is a pure logical."""
    import numpy as np

    rng = np.random.default_rng(seed)
    bad = 0
    for name, sec in fault_set.sectors.items():
        sigs = np.array([f.sig for f in sec.faults], dtype=object)
        if sec.log_shift + sec.n_log <= 63:
            sigs = sigs.astype(np.int64)
        keymask = sec.syn_mask | sec.flag_mask
        left = samples
        while left > 0:
            chunk = min(left, 200_000)
            idx = rng.integers(0, len(sigs), size=(chunk, size))
            acc = sigs[idx[:, 0]]
            for j in range(1, size):
                acc = acc ^ sigs[idx[:, j]]
            hit = ((acc & keymask) == 0) & ((acc & sec.log_mask) != 0)
            bad += int(np.count_nonzero(hit))
            left -= chunk
    return bad


# ---------------------------------------------------------------------------
# fault taxonomy on capped codes


FAULT_TYPES = ("q0", "q_on", "q_off", "f", "v", "v_star", "cap")


def _ccc_of(code: StabilizerCode) -> CappedCode:
    ccc = code.meta.get("capped")
    if ccc is None:
        raise TaxonomyError("fault taxonomy needs a capped code")
    return ccc


def classify_fault_type(fault: Fault, schedule: CircuitSchedule, code: StabilizerCode | None = None,
                        outcome: FaultOutcome | None = None) -> str:
    code = code or schedule.code
    ccc = _ccc_of(code)
    lv = ccc.top
    if fault.circuit is None:
        q = fault.qubit
        if q == ccc.q0 or q in lv.cap_extra:
            return "q0"
        return "q_on" if q in lv.center else "q_off"
    c = schedule[fault.circuit]
    cat = c.category
    if cat in ("f", "cap"):
        return cat
    if cat == "v":
        o = outcome or outcome_in_schedule(schedule, fault)
        E = o.data_error.z if c.ptype == "Z" else o.data_error.x
        cen = {k for k, q in enumerate(lv.center) if E >> q & 1}
        bot = {k for k, q in enumerate(lv.bottom) if E >> q & 1}
        return "v" if cen == bot else "v_star"
    raise TaxonomyError(f"circuit category {cat!r} outside the taxonomy")


@dataclass(frozen=True)
class SignatureRow:
    s_a: int
    s_b: int
    s_c: int
    wp: int
    f_a: int
    f_b: int
    f_c: int


def _plane_syndrome(lv, E: int, plane: Sequence[int]) -> int:
    out = 0
    for k, p in enumerate(lv.lattice.plaquettes):
        if sum(E >> plane[q - 1] & 1 for q in p.cycle) & 1:
            out |= 1 << k
    return out


def fault_syndrome_signature(fault_type: str, outcome: FaultOutcome, schedule: CircuitSchedule,
                             ptype: str = "Z") -> SignatureRow:
    """Tabulated syndrome / parity / flag row of a single fault, checked
    against the symbolic row of its type."""
    code = schedule.code
    ccc = _ccc_of(code)
    lv = ccc.top
    E = outcome.data_error.z if ptype == "Z" else outcome.data_error.x
    cap_sup = mask_of(lv.cap[0].support)
    E_c = E & mask_of(lv.center)
    E_b = E & mask_of(lv.bottom)
    if fault_type == "cap" and E & ~(E_c | E_b):
        E ^= cap_sup  # representative on the center plane
        E_c = E & mask_of(lv.center)
    s_a = (E & cap_sup).bit_count() & 1
    s_b = _plane_syndrome(lv, E, lv.center)
    s_c = s_b ^ _plane_syndrome(lv, E, lv.bottom)
    wp = E.bit_count() & 1
    fl = outcome.flag_vector
    fa, fb, fc = _split_flags(schedule, fl, ptype)
    row = SignatureRow(s_a, s_b, s_c, wp, fa, fb, fc)
    p_c = _plane_syndrome(lv, E_c, lv.center)
    p_b = _plane_syndrome(lv, E_b, lv.bottom)
    wp_c = E_c.bit_count() & 1
    expect = {
        "q0": (1, 0, 0, 1),
        "q_on": (1, p_c, p_c, 1),
        "q_off": (0, 0, p_b, 1),
        "f": (wp_c, p_c, p_c, wp_c),
        "v": (wp_c, p_c, 0, 0),
        "v_star": (wp_c, p_c, p_c ^ p_b, 1),
        "cap": (wp_c, p_c, p_c, wp_c),
    }[fault_type]
    flags_ok = {
        "q0": not fl, "q_on": not fl, "q_off": not fl,
        "f": not (fa | fc), "v": not (fa | fb), "v_star": not (fa | fb), "cap": not (fb | fc),
    }[fault_type]
    shape_ok = True
    if fault_type in ("f", "cap"):
        shape_ok = E_b == 0
    elif fault_type == "v":
        shape_ok = _same_form(lv, E_c, E_b)
    elif fault_type == "v_star":
        shape_ok = _lift(lv, E_c) ^ E_b != 0 and (_lift(lv, E_c) ^ E_b).bit_count() == 1
    if (s_a, s_b, s_c, wp) != expect or not flags_ok or not shape_ok:
        raise TaxonomyError(f"{fault_type} fault does not match its tabulated row: {row}")
    return row


def _lift(lv, E_c: int) -> int:
    out = 0
    for k, q in enumerate(lv.center):
        if E_c >> q & 1:
            out |= 1 << lv.bottom[k]
    return out


def _same_form(lv, E_c: int, E_b: int) -> bool:
    return _lift(lv, E_c) == E_b


# ---------------------------------------------------------------------------
# main-equation audit


def _split_flags(schedule: CircuitSchedule, fl: int, ptype: str) -> tuple[int, int, int]:
    fa = fb = fc = 0
    for i, c in enumerate(schedule):
        if c.ptype != ptype or not c.n_flags:
            continue
        bit = fl & (((1 << c.n_flags) - 1) << schedule.flag_offsets[i])
        if c.category == "cap":
            fa |= bit
        elif c.category == "f":
            fb |= bit
        else:
            fc |= bit
    return fa, fb, fc


def main_equation_terms(items: Sequence[tuple[str, FaultOutcome]], schedule: CircuitSchedule,
                        ptype: str = "Z") -> dict[str, tuple[int, int]]:
    """The nine modular identities for one fault combination.

    Returns name -> (value read off the combined error, value summed from
    the per-fault rows).  Cap weights are even, so re-expressing a cap
    fault on the center plane changes neither side.
    """
    lv = _ccc_of(schedule.code).top
    bot = mask_of(lv.bottom)
    E = fl = 0
    acc = dict.fromkeys(("s_cap", "s_f", "s_v", "wp_tot", "f_cap", "f_f", "f_v", "wp_bot", "s_bot"), 0)
    for ft, o in items:
        r = fault_syndrome_signature(ft, o, schedule, ptype)
        e = o.data_error.z if ptype == "Z" else o.data_error.x
        E ^= e
        fl ^= o.flag_vector
        acc["s_cap"] ^= r.s_a
        acc["s_f"] ^= r.s_b
        acc["s_v"] ^= r.s_c
        acc["wp_tot"] ^= r.wp
        acc["f_cap"] ^= r.f_a
        acc["f_f"] ^= r.f_b
        acc["f_v"] ^= r.f_c
        if ft in ("q_off", "v", "v_star"):
            acc["wp_bot"] ^= (e & bot).bit_count() & 1
            acc["s_bot"] ^= _plane_syndrome(lv, e & bot, lv.bottom)
    cap_sup = mask_of(lv.cap[0].support)
    s_f = _plane_syndrome(lv, E, lv.center)
    s_v = s_f ^ _plane_syndrome(lv, E, lv.bottom)
    fa, fb, fc = _split_flags(schedule, fl, ptype)
    got = {
        "s_cap": (E & cap_sup).bit_count() & 1,
        "s_f": s_f,
        "s_v": s_v,
        "wp_tot": E.bit_count() & 1,
        "f_cap": fa,
        "f_f": fb,
        "f_v": fc,
        "wp_bot": (E & bot).bit_count() & 1,
        "s_bot": _plane_syndrome(lv, E & bot, lv.bottom),
    }
    # the derived pair: wp_bot = s_cap + wp_tot, s_bot = s_f + s_v
    if got["wp_bot"] != got["s_cap"] ^ got["wp_tot"] or got["s_bot"] != got["s_f"] ^ got["s_v"]:
        raise TaxonomyError("bottom-plane identities fail on the combined error")
    return {k: (got[k], acc[k]) for k in got}


def random_combination(reps: Sequence[tuple[Fault, FaultOutcome]], size: int, rng: random.Random):
    return [reps[rng.randrange(len(reps))] for _ in range(size)]
