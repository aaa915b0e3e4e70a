"""Exhaustive and sampled fault-injection audits of the protocols."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache

from .circuits import CircuitSchedule, schedule_for
from .codes import build_code
from .faults import Fault, elementary_faults, enumerate_fault_set
from .pauli import Pauli, StabilizerCode
from .protocols import (ErrorSet, apply_transversal, build_decoder_table, fact3_violations, gate_faults,
                        logical_action, logical_circuit, run_ftec, run_ftm, run_ftp, run_t_gate,
                        t_gate_locations, t_gate_setup)


@dataclass
class AuditReport:
    name: str
    runs: int = 0
    violations: int = 0
    nonconverged: int = 0
    examples: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def fail(self, what: str) -> None:
        self.violations += 1
        if len(self.examples) < 5:
            self.examples.append(what)

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"{status} {self.name}: {self.runs} runs, {self.violations} violations"

    def to_json(self) -> dict:
        return {"name": self.name, "runs": self.runs, "violations": self.violations,
                "nonconverged": self.nonconverged, "examples": self.examples}


@dataclass
class Harness:
    """Schedule with its decoder and filter sets.  ``check=False`` skips the
    distinguishability check when building the decoder."""

    schedule: CircuitSchedule
    t: int
    sectors: tuple[str, ...] | None = None
    check: bool = True

    def __post_init__(self):
        self.code: StabilizerCode = self.schedule.code
        self.fault_set = enumerate_fault_set(self.schedule, t=self.t, sectors=self.sectors)
        self.decoder = build_decoder_table(self.fault_set, check=self.check)
        self._esets: dict[int, ErrorSet] = {}

    def E(self, s: int) -> ErrorSet:
        if s not in self._esets:
            self._esets[s] = ErrorSet(self.fault_set, s)
        return self._esets[s]

    def round_faults(self, rounds: int | None = None) -> list[Fault]:
        rounds = rounds or self.t + 1
        base = elementary_faults(self.schedule, with_data=False)
        return [Fault(f.circuit, f.location, f.pauli, round=r) for r in range(1, rounds + 1) for f, _ in base]

    def input_errors(self, r: int) -> list[Pauli]:
        """Representatives of E_r (both sectors combined pairwise for r >= 1)."""
        n = self.code.n
        out = []
        for name, sec in self.fault_set.sectors.items():
            for sig, idx in self.fault_set.signatures(name, max_size=r):
                if sig & sec.flag_mask or not idx:
                    continue
                x = z = 0
                for i in idx:
                    x ^= sec.faults[i].err_x
                    z ^= sec.faults[i].err_z
                out.append(Pauli(n, x, z))
        return out


@lru_cache(maxsize=None)
def harness(family: str, d: int, template: str, t: int, sectors: tuple[str, ...] | None = None) -> Harness:
    code = build_code(family, d, "H")
    return Harness(schedule_for(code, template), t, sectors)


# ---------------------------------------------------------------------------
# error correction


def audit_ftec_single(h: Harness, name: str = "ftec single faults") -> AuditReport:
    """Every fault in every round that always runs, clean input; plus every
    E_1 input error with no faults."""
    rep = AuditReport(name)
    n = h.code.n
    dec = h.decoder
    E1 = h.E(1)
    for f in h.round_faults():
        res = run_ftec(Pauli(n), h.schedule, dec, h.t, [f], trace=False)
        rep.runs += 1
        if not res.converged:
            rep.nonconverged += 1
            rep.fail(f"{f.describe(h.schedule)} r{f.round}: no convergence")
        elif res.frame not in E1:
            rep.fail(f"{f.describe(h.schedule)} r{f.round}: output {res.frame} outside E_1")
        elif h.t >= 1 and dec.ideal_logical(res.frame):
            rep.fail(f"{f.describe(h.schedule)} r{f.round}: logical error")
    for E in h.input_errors(1):
        res = run_ftec(E, h.schedule, dec, h.t, trace=False)
        rep.runs += 1
        if not res.converged or h.code.syndrome_int(res.frame) or dec.ideal_logical(res.frame):
            rep.fail(f"input {E}: output {res.frame}")
    return rep


def audit_ftec_arbitrary_inputs(h: Harness, samples: int = 200, seed: int = 0) -> AuditReport:
    """Random input errors, no faults: the output is some codeword."""
    rep = AuditReport("ftec arbitrary inputs")
    rng = random.Random(seed)
    n = h.code.n
    for _ in range(samples):
        E = Pauli(n, rng.getrandbits(n), rng.getrandbits(n))
        res = run_ftec(E, h.schedule, h.decoder, h.t, trace=False)
        rep.runs += 1
        if not res.converged or h.code.syndrome_int(res.frame):
            rep.fail(f"input {E}: output {res.frame}")
    return rep


def audit_ftec_sampled(h: Harness, samples: int, n_faults: int | None = None, seed: int = 0) -> AuditReport:
    """Random placements of up to t faults (with an E_r input when fewer)."""
    s_max = h.t if n_faults is None else n_faults
    rep = AuditReport(f"ftec sampled {s_max}-fault injections")
    rng = random.Random(seed)
    n = h.code.n
    pool = h.round_faults()
    inputs = {r: h.input_errors(r) for r in range(1, h.t + 1)}
    dec = h.decoder
    for k in range(samples):
        s = s_max if k % 4 else max(0, s_max - 1)
        r = min(h.t - s, 1)
        E_in = rng.choice(inputs[r]) if r else Pauli(n)
        faults = rng.sample(pool, s)
        res = run_ftec(E_in, h.schedule, dec, h.t, faults, trace=False)
        rep.runs += 1
        desc = " + ".join(f"{f.describe(h.schedule)}@r{f.round}" for f in faults)
        if not res.converged:
            rep.nonconverged += 1
            rep.fail(f"{desc}: no convergence")
        elif res.frame not in h.E(s):
            rep.fail(f"{desc} (input {E_in}): output outside E_{s}")
        elif dec.ideal_logical(res.frame) != dec.ideal_logical(E_in):
            rep.fail(f"{desc} (input {E_in}): logical error")
    return rep


def audit_cross_general(h: Harness, g: Harness) -> AuditReport:
    """The undivided decoder and the sector decoders agree up to stabilizers."""
    rep = AuditReport("general vs sector decoders")
    n = h.code.n
    for f in h.round_faults():
        a = run_ftec(Pauli(n), h.schedule, h.decoder, h.t, [f], trace=False)
        b = run_ftec(Pauli(n), g.schedule, g.decoder, g.t, [f], trace=False)
        rep.runs += 1
        if a.converged != b.converged or not h.code.in_stabilizer_group(a.frame * b.frame):
            rep.fail(f"{f.describe(h.schedule)} r{f.round}: {a.frame} vs {b.frame}")
    return rep


# ---------------------------------------------------------------------------
# measurement and preparation


def _desc(f: Fault, sched: CircuitSchedule) -> str:
    if f.circuit == -1:
        return f"L@{f.location}:{f.pauli} r{f.round}"
    return f"{f.describe(sched)} r{f.round}"


def _l_faults(h: Harness, L: Pauli) -> list[Fault]:
    c = logical_circuit(h.code, L)
    return [Fault(-1, loc, lab, round=r) for r in range(1, h.t + 2) for loc, lab, _ in c.raw_faults()]


def audit_ftm(h: Harness) -> AuditReport:
    """Single faults (and E_1 inputs without faults) for L in {Z-bar, X-bar}, m_in in {0, 1}."""
    rep = AuditReport("ftm single faults")
    code = h.code
    n = code.n
    dec = h.decoder
    E1 = h.E(1)
    for L in (code.logical_z[0], code.logical_x[0]):
        cases = [(Pauli(n), [f]) for f in _l_faults(h, L) + h.round_faults()]
        cases += [(E, []) for E in h.input_errors(1)]
        for k, (E_in, faults) in enumerate(cases):
            m_in = k & 1
            res = run_ftm(E_in, L, h.schedule, dec, h.t, faults, m_in=m_in, trace=False)
            rep.runs += 1
            tag = f"L={'Z' if L.is_z_type else 'X'} " + (_desc(faults[0], h.schedule) if faults else f"input {E_in}")
            if not res.converged:
                rep.nonconverged += 1
                rep.fail(tag + ": no convergence")
                continue
            out = res.frame
            state = m_in ^ (not (out * dec.ideal_correction(out)).commutes(L))
            if res.m != m_in:
                rep.fail(tag + f": m={res.m}, encoded {m_in}")
            elif res.m != state:
                rep.fail(tag + ": m disagrees with the output state")
            elif out not in E1:
                rep.fail(tag + f": output {out} outside E_1")
    return rep


def audit_ftp(h: Harness) -> AuditReport:
    rep = AuditReport("ftp single faults")
    code = h.code
    n = code.n
    dec = h.decoder
    E1 = h.E(1)
    for basis, L in (("zero", code.logical_z[0]), ("plus", code.logical_x[0])):
        faults = _l_faults(h, L) + h.round_faults()
        for k, f in enumerate(faults):
            for m_in in (0, 1):
                res = run_ftp(Pauli(n), basis, h.schedule, dec, h.t, [f], m_in=m_in, trace=False)
                rep.runs += 1
                out = res.frame
                if not res.converged:
                    rep.nonconverged += 1
                    rep.fail(f"{basis} {_desc(f, h.schedule)}: no convergence")
                    continue
                value = res.extra["eigenvalue"] ^ (not (out * dec.ideal_correction(out)).commutes(L))
                if value:
                    rep.fail(f"{basis} {_desc(f, h.schedule)} m_in={m_in}: wrong basis state")
                elif out not in E1:
                    rep.fail(f"{basis} {_desc(f, h.schedule)}: output {out} outside E_1")
    return rep


# ---------------------------------------------------------------------------
# transversal gates


def _logical_op(code: StabilizerCode, bits: int) -> Pauli:
    P = Pauli(code.n)
    if bits & 1:
        P = P * code.logical_x[0]
    if bits & 2:
        P = P * code.logical_z[0]
    return P


def audit_exrec(h: Harness, gate: str) -> AuditReport:
    """Leading EC, transversal gate, trailing EC with at most one fault."""
    rep = AuditReport(f"exRec {gate}")
    code = h.code
    n = code.n
    dec = h.decoder
    blocks = 2 if gate == "CNOT" else 1
    ec = h.round_faults()
    placements: list[tuple[str, int, Fault | None]] = [("none", 0, None)]
    for b in range(blocks):
        placements += [("lead", b, f) for f in ec]
        placements += [("trail", b, f) for f in ec]
    placements += [("gate", 0, f) for f in gate_faults(n, gate)]
    for k, (where, blk, f) in enumerate(placements):
        lin = [(k >> (2 * b)) & 3 for b in range(blocks)]
        frames = [_logical_op(code, v) for v in lin]
        ok = True
        for b in range(blocks):
            res = run_ftec(frames[b], h.schedule, dec, h.t, [f] if where == "lead" and blk == b else None, trace=False)
            ok &= res.converged
            frames[b] = res.frame
        gf = [f] if where == "gate" else ()
        if gate == "CNOT":
            frames = list(apply_transversal(tuple(frames), gate, code, gf))
            want = logical_action(gate, tuple(lin))
        else:
            frames = [apply_transversal(frames[0], gate, code, gf)]
            want = (logical_action(gate, lin[0]),)
        for b in range(blocks):
            res = run_ftec(frames[b], h.schedule, dec, h.t, [f] if where == "trail" and blk == b else None, trace=False)
            ok &= res.converged
            frames[b] = res.frame
        rep.runs += 1
        got = tuple(dec.ideal_logical(F) for F in frames)
        if not ok:
            rep.nonconverged += 1
            rep.fail(f"{where} {f and f.describe(h.schedule)}: no convergence")
        elif got != tuple(want):
            rep.fail(f"{where} block {blk} {f and f.describe(h.schedule)}: logical {got}, expected {want}")
    return rep


# ---------------------------------------------------------------------------
# T gate


def audit_t_gate(d: int = 3, t: int = 1, seed: int = 0) -> tuple[AuditReport, AuditReport]:
    """Single faults at every T-gate location on RCCC(d)'s H form, and the
    flag-catch property of the vertical-face circuits."""
    code = build_code("rccc", d, "H")
    setup = t_gate_setup(code, t)
    E1 = ErrorSet(setup.fault_set, 1)
    std = setup.standard_decoder
    rng = random.Random(seed)
    rep = AuditReport(f"T gate on rccc({d})")
    n = code.n
    res = run_t_gate(Pauli(n), setup, rng=rng, trace=False)
    rep.runs += 1
    if not res.converged or not code.in_stabilizer_group(res.frame):
        rep.fail("fault-free run does not return to the code space")
    for stage, f in t_gate_locations(setup):
        res = run_t_gate(Pauli(n), setup, {stage: [f]}, rng=rng, trace=False)
        rep.runs += 1
        if not res.converged:
            rep.nonconverged += 1
            rep.fail(f"{stage} {f}: no convergence")
        elif std.ideal_logical(res.frame):
            rep.fail(f"{stage} {f}: logical error")
        elif res.frame not in E1:
            rep.fail(f"{stage} {f}: output {res.frame} outside E_1")
    f3 = AuditReport("flag catch on vertical faces")
    bad = fact3_violations(code, setup.e_circuits)
    f3.runs = sum(len(c.raw_faults()) for c in setup.e_circuits)
    for f in bad:
        f3.fail(f"{setup.e_circuits[f.circuit].generator}@{f.location}:{f.pauli}")
    return rep, f3


__all__ = ["AuditReport", "Harness", "harness", "audit_ftec_single", "audit_ftec_arbitrary_inputs",
           "audit_ftec_sampled", "audit_cross_general", "audit_ftm", "audit_ftp", "audit_exrec", "audit_t_gate"]
