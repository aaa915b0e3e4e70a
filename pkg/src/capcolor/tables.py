"""Reproducible tables: single-fault Z errors of CCC(3), fault-type
signatures, and qubit counts per family."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

from .circuits import CircuitSchedule, Kind, schedule_for
from .codes import TABLE3_FAMILIES, build_ccc, fix_gauge, table3
from .faults import (FAULT_TYPES, classify_fault_type, enumerate_reduced_single_faults,
                     fault_syndrome_signature)


@dataclass(frozen=True)
class ErrorRow:
    origin: str
    error: str  # qubit labels in CNOT order
    u: int
    v: tuple[int, ...]
    w: tuple[int, ...]


def _error_string(qubits) -> str:
    return "".join(f"Z{q}" for q in qubits)


def single_fault_rows(schedule: CircuitSchedule) -> list[ErrorRow]:
    """Z-type errors from one fault on a CCC H-form schedule.

    Data qubits first, then the Z-type f circuits, then the cap and v
    circuits.  An ancilla fault after data CNOT k of w is written as the
    prefix (first k qubits) when k <= w/2 and as the suffix otherwise;
    the two differ by the measured generator.
    """
    code = schedule.code
    ccc = code.meta["capped"]
    lv = ccc.top

    def syndrome(qs):
        E = 0
        for q in qs:
            E ^= 1 << q
        u = (E & sum(1 << q for q in lv.cap[0].support)).bit_count() & 1
        v = tuple(len(set(qs) & g.support) & 1 for g, _ in lv.f_center)
        w = tuple(len(set(qs) & g.support) & 1 for g, _ in lv.v)
        return u, v, w

    rows = []
    for q in range(code.n):
        rows.append(ErrorRow(f"q{q}", _error_string([q]), *syndrome([q])))
    by_circuit: dict[int, list] = {}
    for f, o in enumerate_reduced_single_faults(schedule):
        if f.circuit is None or f.pauli not in ("IZ",):
            continue
        c = schedule[f.circuit]
        if c.locations[f.location].kind is Kind.DATA_CNOT:
            by_circuit.setdefault(f.circuit, []).append(o.data_error.z)
    zc = [i for i, c in enumerate(schedule) if c.ptype == "Z"]
    order = [i for i in zc if schedule[i].category == "f"] + \
            [i for i in zc if schedule[i].category in ("cap", "v")]
    for i in order:
        c = schedule[i]
        o = list(c.ordering)
        w = len(o)
        gen = c.generator_pauli.z
        for k, E in enumerate(by_circuit[i][:-1], 1):  # the last one is trivial
            if k <= w / 2:
                E ^= gen
            rows.append(ErrorRow(c.generator, _error_string([q for q in o if E >> q & 1]),
                                 *syndrome([q for q in o if E >> q & 1])))
    return rows


def table1(d: int = 3) -> list[ErrorRow]:
    code = fix_gauge(build_ccc(d), "H")
    return single_fault_rows(schedule_for(code, "nonflag"))


def _tuple_str(t) -> str:
    return "(" + ",".join(map(str, t)) + ")"


def table1_csv(rows: list[ErrorRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["origin", "error", "u", "v", "w"])
    for r in rows:
        w.writerow([r.origin, r.error, r.u, _tuple_str(r.v), _tuple_str(r.w)])
    return buf.getvalue()


def table1_json(rows: list[ErrorRow]) -> str:
    return json.dumps([{"origin": r.origin, "error": r.error, "u": r.u, "v": list(r.v), "w": list(r.w)}
                       for r in rows], indent=1)


# ---------------------------------------------------------------------------
# fault-type signature audit


def table2_audit(d: int = 3, template: str = "nonflag") -> dict[str, int]:
    """Classify every reduced single fault giving a Z-type error and check
    its signature row; returns the count per fault type."""
    code = fix_gauge(build_ccc(d), "H")
    sched = schedule_for(code, template)
    counts = dict.fromkeys(FAULT_TYPES, 0)
    for f, o in enumerate_reduced_single_faults(sched):
        E = o.data_error
        if E.x or not E.z:
            continue
        if f.circuit is not None and sched[f.circuit].ptype != "Z":
            continue
        ft = classify_fault_type(f, sched, code, o)
        fault_syndrome_signature(ft, o, sched, "Z")
        counts[ft] += 1
    return counts


def table2_csv(counts: dict[str, int]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["fault_type", "faults_checked", "status"])
    for k, v in counts.items():
        w.writerow([k, v, "ok"])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# qubit counts


def table3_rows(d_max: int = 11) -> list[dict]:
    out = []
    for d in range(3, d_max + 1, 2):
        row = {"d": d}
        for fam, (n, shared, dedicated) in table3(d).items():
            row[f"{fam}_data"] = n
            row[f"{fam}_shared"] = shared
            row[f"{fam}_dedicated"] = dedicated
        out.append(row)
    return out


def table3_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if not rows:
        return ""
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


__all__ = ["ErrorRow", "single_fault_rows", "table1", "table1_csv", "table1_json", "table2_audit",
           "table3_rows", "table3_csv", "TABLE3_FAMILIES", "Kind"]
