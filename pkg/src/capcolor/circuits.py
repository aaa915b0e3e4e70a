"""Syndrome-measurement circuits, CNOT orderings and round schedules.

A circuit acts on a local register: data qubits keep their code indices
``0..n-1``, the syndrome ancilla is wire ``n`` and flag ``j`` is wire
``n + 1 + j``.  Z-type generators couple data into a |0> ancilla; X-type
generators use the basis-conjugated coupling (|+> ancilla as CNOT
control), with identical location indices.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .codes import CappedCode, DomainError
from .pauli import Pauli, StabilizerCode


class OrderingError(ValueError):
    pass


class TemplateError(ValueError):
    pass


class CoverageError(ValueError):
    pass


class Kind(str, enum.Enum):
    PREP_SYNDROME = "prep_syndrome"
    PREP_FLAG = "prep_flag"
    DATA_CNOT = "data_cnot"
    FLAG_CNOT = "flag_cnot"
    MEASURE_SYNDROME = "measure_syndrome"
    MEASURE_FLAG = "measure_flag"
    IDLE = "idle"


@dataclass(frozen=True)
class Location:
    kind: Kind
    step: int
    qubit: int | None = None  # data qubit of a data CNOT
    flag: int | None = None  # flag index for flag preps, CNOTs, measurements
    wires: tuple[int, ...] = ()  # local wires; CNOTs list (control, target)
    basis: str | None = None  # prep/measure basis

    def to_json(self) -> dict:
        args: dict = {}
        if self.qubit is not None:
            args["qubit"] = self.qubit
        if self.flag is not None:
            args["flag"] = self.flag
        if self.basis is not None:
            args["basis"] = self.basis
        return {"step": self.step, "kind": self.kind.value, "args": args}


@dataclass(frozen=True, slots=True)
class Effect:
    """Net consequence of one Pauli fault: data error, own-outcome flip, local flags."""

    x: int = 0
    z: int = 0
    flip: int = 0
    flags: int = 0

    def data(self, n: int) -> Pauli:
        return Pauli(n, self.x, self.z)


_PAULIS_1 = ("X", "Y", "Z")
_PAULIS_2 = tuple(a + b for a in "IXYZ" for b in "IXYZ")[1:]


def _bits(letter: str) -> tuple[int, int]:
    return (letter in "XY", letter in "ZY")


@dataclass(frozen=True, eq=False)
class MeasurementCircuit:
    generator: str
    ptype: str
    n: int  # data register size
    support: frozenset[int]
    ordering: tuple[int, ...]  # data CNOT order (doubled sequence for v templates)
    n_flags: int
    locations: tuple[Location, ...]
    template: str = "nonflag"
    category: str = "other"

    @property
    def weight(self) -> int:
        return len(self.support)

    @property
    def anc(self) -> int:
        return self.n

    def flag_wire(self, j: int) -> int:
        return self.n + 1 + j

    @property
    def data_cnots(self) -> list[int]:
        return [i for i, loc in enumerate(self.locations) if loc.kind is Kind.DATA_CNOT]

    @property
    def generator_pauli(self) -> Pauli:
        return Pauli.X(self.n, self.support) if self.ptype == "X" else Pauli.Z(self.n, self.support)

    # -- propagation -------------------------------------------------------

    def propagate(self, after: int, x: int, z: int) -> Effect:
        """Push a local-register Pauli inserted after location ``after``.

        ``after = -1`` inserts before the first gate (used for incoming
        data errors).  Measurement flips are read off at the measurement
        locations; everything surviving on data wires is the data error.
        """
        flip = flags = 0
        for loc in self.locations[after + 1:]:
            k = loc.kind
            if k is Kind.DATA_CNOT or k is Kind.FLAG_CNOT:
                c, t = loc.wires
                if x >> c & 1:
                    x ^= 1 << t
                if z >> t & 1:
                    z ^= 1 << c
            elif k is Kind.MEASURE_SYNDROME or k is Kind.MEASURE_FLAG:
                w = loc.wires[0]
                hit = (z if loc.basis == "X" else x) >> w & 1
                if k is Kind.MEASURE_SYNDROME:
                    flip ^= hit
                else:
                    flags ^= hit << loc.flag
                x &= ~(1 << w)
                z &= ~(1 << w)
            elif k is Kind.PREP_SYNDROME or k is Kind.PREP_FLAG:
                w = loc.wires[0]
                x &= ~(1 << w)
                z &= ~(1 << w)
        full = (1 << self.n) - 1
        return Effect(x & full, z & full, flip, flags)

    def measure(self, E: Pauli) -> int:
        """Fault-free outcome bit for incoming data error E."""
        return self.propagate(-1, E.x, E.z).flip

    def raw_faults(self) -> list[tuple[int, str, Effect]]:
        """Every elementary fault: (location index, Pauli label, effect).

        CNOTs get all 15 two-qubit Paulis on (control, target); preps
        produce the orthogonal state; measurements flip their outcome.
        """
        return self._raw_faults

    @cached_property
    def _raw_faults(self) -> list[tuple[int, str, Effect]]:
        out = []
        for i, loc in enumerate(self.locations):
            k = loc.kind
            if k is Kind.DATA_CNOT or k is Kind.FLAG_CNOT:
                c, t = loc.wires
                for lab in _PAULIS_2:
                    (cx, cz), (tx, tz) = _bits(lab[0]), _bits(lab[1])
                    x = (cx << c) | (tx << t)
                    z = (cz << c) | (tz << t)
                    out.append((i, lab, self.propagate(i, x, z)))
            elif k is Kind.PREP_SYNDROME or k is Kind.PREP_FLAG:
                w = loc.wires[0]
                if loc.basis == "Z":
                    out.append((i, "X", self.propagate(i, 1 << w, 0)))
                else:
                    out.append((i, "Z", self.propagate(i, 0, 1 << w)))
            elif k is Kind.MEASURE_SYNDROME:
                out.append((i, "M", Effect(flip=1)))
            elif k is Kind.MEASURE_FLAG:
                out.append((i, "M", Effect(flags=1 << loc.flag)))
        return out

    def reduced_faults(self) -> list[tuple[int, str, Effect]]:
        """Representatives: ancilla Pauli after every CNOT, prep and measurement flips."""
        out = []
        for i, loc in enumerate(self.locations):
            k = loc.kind
            if k is Kind.DATA_CNOT or k is Kind.FLAG_CNOT:
                letter = "X" if self.ptype == "X" else "Z"
                lab = letter + "I" if loc.wires[0] == self.anc else "I" + letter
                out.append((i, lab, self.ancilla_fault(i)))
            elif k is Kind.PREP_SYNDROME or k is Kind.PREP_FLAG:
                w = loc.wires[0]
                if loc.basis == "Z":
                    out.append((i, "X", self.propagate(i, 1 << w, 0)))
                else:
                    out.append((i, "Z", self.propagate(i, 0, 1 << w)))
            elif k is Kind.MEASURE_SYNDROME:
                out.append((i, "M", Effect(flip=1)))
            elif k is Kind.MEASURE_FLAG:
                out.append((i, "M", Effect(flags=1 << loc.flag)))
        return out

    def ancilla_fault(self, after: int) -> Effect:
        """The representative fault: IZ on the syndrome ancilla (X for X-type circuits)."""
        a = self.anc
        return self.propagate(after, 1 << a, 0) if self.ptype == "X" else self.propagate(after, 0, 1 << a)

    # -- serialisation -----------------------------------------------------

    def to_json(self) -> dict:
        anc = {"syndrome": {"prep": "Z" if self.ptype == "Z" else "X"}}
        anc["flags"] = self.n_flags
        return {
            "generator": self.generator,
            "type": self.ptype,
            "template": self.template,
            "ancillas": anc,
            "locations": [loc.to_json() for loc in self.locations],
        }

    def diagram(self) -> str:
        parts = []
        for loc in self.locations:
            if loc.kind is Kind.DATA_CNOT:
                parts.append(f"q{loc.qubit}")
            elif loc.kind is Kind.FLAG_CNOT:
                parts.append(f"F{loc.flag}")
        return f"{self.generator}: " + " ".join(parts)


def _assemble(gen_name, ptype, n, support, seq, category, template, ordering) -> MeasurementCircuit:
    """seq: items ('d', qubit) or ('F', flag index)."""
    anc = n
    n_flags = len({j for kind, j in seq if kind == "F"})
    locs: list[Location] = []

    def add(kind, **kw):
        locs.append(Location(kind, len(locs), **kw))

    zt = ptype == "Z"
    add(Kind.PREP_SYNDROME, wires=(anc,), basis="Z" if zt else "X")
    for j in range(n_flags):
        add(Kind.PREP_FLAG, flag=j, wires=(n + 1 + j,), basis="X" if zt else "Z")
    for kind, q in seq:
        if kind == "d":
            add(Kind.DATA_CNOT, qubit=q, wires=(q, anc) if zt else (anc, q))
        else:
            fw = n + 1 + q
            add(Kind.FLAG_CNOT, flag=q, wires=(fw, anc) if zt else (anc, fw))
    add(Kind.MEASURE_SYNDROME, wires=(anc,), basis="Z" if zt else "X")
    for j in range(n_flags):
        add(Kind.MEASURE_FLAG, flag=j, wires=(n + 1 + j,), basis="X" if zt else "Z")
    return MeasurementCircuit(gen_name, ptype, n, frozenset(support), tuple(ordering), n_flags,
                              tuple(locs), template, category)


def _gen_fields(generator, n: int | None):
    """Accept a codes.Gen, or a (name, Pauli) pair."""
    if hasattr(generator, "support") and hasattr(generator, "ptype"):
        if n is None:
            raise ValueError("register size required for a bare generator")
        return generator.name, generator.ptype, n, frozenset(generator.support), generator.category
    name, P = generator
    if P.is_z_type:
        return name, "Z", P.n, frozenset(P.support), "other"
    if P.is_x_type:
        return name, "X", P.n, frozenset(P.support), "other"
    raise DomainError("measurement circuits need a CSS generator")


def _check_perm(ordering: Sequence[int], support: frozenset[int]) -> None:
    if len(ordering) != len(support) or set(ordering) != support:
        raise OrderingError(f"ordering {tuple(ordering)} is not a permutation of {sorted(support)}")


def build_nonflag(generator, ordering: Sequence[int], n: int | None = None) -> MeasurementCircuit:
    name, ptype, n, support, cat = _gen_fields(generator, n)
    _check_perm(ordering, support)
    seq = [("d", q) for q in ordering]
    return _assemble(name, ptype, n, support, seq, cat, "nonflag", ordering)


def build_one_flag(generator, ordering: Sequence[int], n: int | None = None,
                   paired: bool | None = None) -> MeasurementCircuit:
    """One-flag circuit.

    Plain template: a1, F, a2 ... a_{w-1}, F, a_w.  For v generators the
    ordering is the doubled (sawtooth) sequence and the flag pair encloses
    everything but the first and last partner pair: a1 a1', F, ..., F, a_w a_w'.
    ``paired`` defaults to True for v-category generators.
    """
    name, ptype, n, support, cat = _gen_fields(generator, n)
    _check_perm(ordering, support)
    w = len(ordering)
    if w < 3:
        raise TemplateError(f"one-flag template needs weight >= 3, got {w}")
    if paired is None:
        paired = cat == "v"
    head = 2 if paired else 1
    if paired and (w % 2 or w < 6):
        raise TemplateError("paired template needs an even doubled sequence of length >= 6")
    o = list(ordering)
    seq = ([("d", q) for q in o[:head]] + [("F", 0)] + [("d", q) for q in o[head:w - head]]
           + [("F", 0)] + [("d", q) for q in o[w - head:]])
    return _assemble(name, ptype, n, support, seq, cat, "one_flag_v" if paired else "one_flag", ordering)


def sawtooth(f_ordering: Sequence[int], plane_offset: int) -> list[int]:
    out = []
    for q in f_ordering:
        out += [q, q + plane_offset]
    return out


# ---------------------------------------------------------------------------
# orderings

D3_F_ORDERINGS = ((2, 5, 3, 1), (3, 6, 4, 1), (4, 7, 2, 1))

# Counterclockwise plaquette tours accepted by the Conditions 1-5 search
# for the distance-5 lattice (2D labels, plaquettes in lattice order).
D5_F_ORDERINGS = (
    (6, 3, 1, 2, 5, 11),
    (7, 12, 8, 4, 1, 3),
    (1, 4, 9, 13, 10, 2),
    (5, 2, 10, 14),
    (3, 6, 15, 7),
    (16, 9, 4, 8),
    (6, 11, 17, 15),
    (8, 12, 18, 16),
    (10, 13, 19, 14),
)


def capped_orderings(ccc: CappedCode, f_orders: Sequence[Sequence[int]] | None = None,
                     cap_order: Sequence[int] | None = None) -> dict[str, list[int]]:
    """Register orderings for every H-form generator of a (recursive) capped code.

    ``f_orders`` and ``cap_order`` are 2D labels for the top level; other
    levels (and missing arguments) use counterclockwise tours from the
    first plaquette vertex and numerical cap order.  The cap starts with
    its off-plane qubits, v orderings are sawtooth images.
    """
    out: dict[str, list[int]] = {}
    for idx, lv in enumerate(ccc.levels):
        top = idx == len(ccc.levels) - 1
        lat = lv.lattice
        tours = f_orders if (top and f_orders is not None) else [p.cycle for p in lat.plaquettes]
        if len(tours) != lat.r:
            raise OrderingError(f"need {lat.r} plaquette orderings, got {len(tours)}")
        m = lat.n
        for k, (tour, p) in enumerate(zip(tours, lat.plaquettes)):
            if set(tour) != set(p.cycle) or len(tour) != len(p.cycle):
                raise OrderingError(f"ordering {tuple(tour)} does not tour plaquette {k + 1}")
            c = [lv.c(q) for q in tour]
            fx, fz = lv.f_center[k]
            out[fx.name] = out[fz.name] = c
            vx, vz = lv.v[k]
            out[vx.name] = out[vz.name] = sawtooth(c, m)
        co = cap_order if (top and cap_order is not None) else list(range(1, m + 1))
        if sorted(co) != list(range(1, m + 1)):
            raise OrderingError("cap ordering must be a permutation of the plane labels")
        cap = sorted(lv.cap_extra) + [lv.c(q) for q in co]
        out[lv.cap[0].name] = out[lv.cap[1].name] = cap
    return out


def orderings_d3() -> dict[str, list[int]]:
    from .codes import build_ccc

    return capped_orderings(build_ccc(3), D3_F_ORDERINGS, range(1, 8))


def orderings_d5_nonflag(search: bool = False) -> dict[str, list[int]]:
    from .codes import build_ccc

    f = D5_F_ORDERINGS
    if search:
        from .conditions import search_orderings

        f = search_orderings(5)
    return capped_orderings(build_ccc(5), f, range(1, 20))


def e_orderings(ccc: CappedCode) -> dict[str, list[int]]:
    """Vertical-face orderings: center, bottom, center, bottom."""
    out = {}
    for lv in ccc.levels:
        for (ez, ex), (a, b) in zip(lv.e, lv.edges):
            o = [lv.c(a), lv.b(a), lv.c(b), lv.b(b)]
            out[ez.name] = out[ex.name] = o
    return out


def steane_orderings() -> dict[str, list[int]]:
    """Ascending label order (4,5,6,7), (2,3,6,7), (1,3,5,7) as 0-based indices."""
    from .codes import _STEANE_SUPPORTS

    out = {}
    for k, sup in enumerate(_STEANE_SUPPORTS, 1):
        out[f"g{k}x"] = out[f"g{k}z"] = [q - 1 for q in sup]
    return out


# ---------------------------------------------------------------------------
# schedules


@dataclass(frozen=True, eq=False)
class CircuitSchedule:
    code: StabilizerCode
    circuits: tuple[MeasurementCircuit, ...]
    flag_offsets: tuple[int, ...] = field(default=())

    def __post_init__(self):
        offs, acc = [], 0
        for c in self.circuits:
            offs.append(acc)
            acc += c.n_flags
        object.__setattr__(self, "flag_offsets", tuple(offs))

    def __len__(self) -> int:
        return len(self.circuits)

    def __iter__(self):
        return iter(self.circuits)

    def __getitem__(self, i: int) -> MeasurementCircuit:
        return self.circuits[i]

    @property
    def n_flags(self) -> int:
        return sum(c.n_flags for c in self.circuits)

    def flag_mask(self, ptype: str) -> int:
        m = 0
        for c, off in zip(self.circuits, self.flag_offsets):
            if c.ptype == ptype:
                m |= ((1 << c.n_flags) - 1) << off
        return m

    def index(self, name: str) -> int:
        for i, c in enumerate(self.circuits):
            if c.generator == name:
                return i
        raise KeyError(name)

    def to_json(self) -> dict:
        return {"code": self.code.name, "circuits": [c.to_json() for c in self.circuits]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)


def full_schedule(code: StabilizerCode, circuit_map: Mapping[str, MeasurementCircuit],
                  allow_mismatch: bool = False) -> CircuitSchedule:
    """One circuit per stabilizer generator, in the code's generator order
    (for H forms: v^x's, f^x's, v^z's, f^z's)."""
    circuits = []
    for tag, g in zip(code.gen_tags, code.stab_gens):
        c = circuit_map.get(tag.name)
        if c is None:
            raise CoverageError(f"no circuit for generator {tag.name}")
        if c.generator_pauli != g:
            raise CoverageError(f"circuit for {tag.name} measures a different operator")
        circuits.append(c)
    if not allow_mismatch:
        by_support: dict[frozenset[int], dict[str, tuple]] = {}
        for c in circuits:
            by_support.setdefault(c.support, {})[c.ptype] = (c.ordering, c.template)
        for sup, d in by_support.items():
            if len(d) == 2 and d["X"] != d["Z"]:
                raise OrderingError(f"X/Z partners on {sorted(sup)} use different circuits")
    return CircuitSchedule(code, tuple(circuits))


def build_schedule(code: StabilizerCode, orderings: Mapping[str, Sequence[int]],
                   template: str = "nonflag") -> CircuitSchedule:
    """Circuits for every generator of ``code``; template 'nonflag' or 'flag'."""
    cmap = {}
    for tag, g in zip(code.gen_tags, code.stab_gens):
        if tag.name not in orderings:
            raise CoverageError(f"no ordering for generator {tag.name}")
        o = orderings[tag.name]
        gen = _Bare(tag.name, tag.category, tag.ptype, frozenset(g.support))
        if template == "nonflag":
            cmap[tag.name] = build_nonflag(gen, o, code.n)
        elif template == "flag":
            cmap[tag.name] = build_one_flag(gen, o, code.n)
        else:
            raise TemplateError(f"unknown template {template!r}")
    return full_schedule(code, cmap)


@dataclass(frozen=True)
class _Bare:
    name: str
    category: str
    ptype: str
    support: frozenset[int]


def schedule_for(code: StabilizerCode, template: str = "nonflag",
                 orderings: Mapping[str, Sequence[int]] | None = None) -> CircuitSchedule:
    """Default schedule: built-in orderings for Steane and CCC(3)/CCC(5) H
    forms, counterclockwise tours otherwise."""
    if orderings is None:
        meta = code.meta
        ccc = meta.get("capped")
        if ccc is not None:
            if ccc.family == "ccc" and ccc.d == 3:
                orderings = orderings_d3()
            elif ccc.family == "ccc" and ccc.d == 5:
                orderings = orderings_d5_nonflag()
            else:
                orderings = capped_orderings(ccc)
            orderings = {**e_orderings(ccc), **orderings}
        elif code.name == "steane":
            orderings = steane_orderings()
        else:
            orderings = {t.name: sorted(g.support) for t, g in zip(code.gen_tags, code.stab_gens)}
    return build_schedule(code, orderings, template)


def circuits_for(code: StabilizerCode, names: Iterable[str], orderings: Mapping[str, Sequence[int]],
                 template: str, gens: Mapping[str, Pauli]) -> list[MeasurementCircuit]:
    """Circuits for named operators outside the stabilizer list (gauge, logical)."""
    out = []
    for nm in names:
        P = gens[nm]
        gen = _Bare(nm, "e" if nm.startswith("e") else "other", "Z" if P.is_z_type else "X",
                    frozenset(P.support))
        build = build_nonflag if template == "nonflag" else build_one_flag
        out.append(build(gen, orderings[nm], code.n))
    return out
