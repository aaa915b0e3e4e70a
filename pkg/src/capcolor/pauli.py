"""Phase-free Pauli algebra and stabilizer codes in the binary symplectic picture.

A Pauli on n qubits is a pair of bitmasks (x, z); bit i of x set means an X
component on qubit i.  Products are XORs, so phases are discarded throughout.
"""
from __future__ import annotations

import enum
import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .gf2 import GF2Basis, bits_of, mask_of, parity, solve_combination


class DimensionError(ValueError):
    pass


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True, slots=True)
class Pauli:
    n: int
    x: int = 0
    z: int = 0

    @classmethod
    def identity(cls, n: int) -> "Pauli":
        return cls(n)

    @classmethod
    def from_support(cls, n: int, xs: Iterable[int] = (), zs: Iterable[int] = ()) -> "Pauli":
        return cls(n, mask_of(xs), mask_of(zs))

    @classmethod
    def X(cls, n: int, support: Iterable[int]) -> "Pauli":
        return cls(n, mask_of(support), 0)

    @classmethod
    def Z(cls, n: int, support: Iterable[int]) -> "Pauli":
        return cls(n, 0, mask_of(support))

    @classmethod
    def from_string(cls, s: str) -> "Pauli":
        """Dense form such as 'XIZY' (qubit 0 first)."""
        x = z = 0
        for i, ch in enumerate(s.strip().upper()):
            if ch in "XY":
                x |= 1 << i
            if ch in "ZY":
                z |= 1 << i
            if ch not in "IXYZ":
                raise ValueError(f"bad Pauli letter {ch!r}")
        return cls(len(s.strip()), x, z)

    @classmethod
    def parse(cls, s: str, n: int, base: int = 0) -> "Pauli":
        """Sparse form such as 'Z1Z6Z7' or 'X0 Y3'; labels shifted by base."""
        x = z = 0
        s = s.replace(" ", "").replace("_", "")
        if s in ("", "I"):
            return cls(n)
        pos = 0
        for m in re.finditer(r"([XYZ])(\d+)", s):
            if m.start() != pos:
                raise ValueError(f"cannot parse Pauli {s!r}")
            pos = m.end()
            q = int(m.group(2)) - base
            if not 0 <= q < n:
                raise DimensionError(f"qubit label {m.group(2)} outside register")
            if m.group(1) in "XY":
                x ^= 1 << q
            if m.group(1) in "ZY":
                z ^= 1 << q
        if pos != len(s):
            raise ValueError(f"cannot parse Pauli {s!r}")
        return cls(n, x, z)

    @property
    def vec(self) -> int:
        """Symplectic vector x | z << n."""
        return self.x | (self.z << self.n)

    @classmethod
    def from_vec(cls, n: int, v: int) -> "Pauli":
        full = (1 << n) - 1
        return cls(n, v & full, v >> n)

    @property
    def x_bits(self) -> tuple[int, ...]:
        return tuple((self.x >> i) & 1 for i in range(self.n))

    @property
    def z_bits(self) -> tuple[int, ...]:
        return tuple((self.z >> i) & 1 for i in range(self.n))

    @property
    def support_mask(self) -> int:
        return self.x | self.z

    @property
    def support(self) -> list[int]:
        return bits_of(self.x | self.z)

    @property
    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    def is_identity(self) -> bool:
        return not (self.x or self.z)

    @property
    def is_x_type(self) -> bool:
        return self.z == 0

    @property
    def is_z_type(self) -> bool:
        return self.x == 0

    def x_part(self) -> "Pauli":
        return Pauli(self.n, self.x, 0)

    def z_part(self) -> "Pauli":
        return Pauli(self.n, 0, self.z)

    def _check(self, other: "Pauli") -> None:
        if self.n != other.n:
            raise DimensionError(f"{self.n}-qubit vs {other.n}-qubit operator")

    def __mul__(self, other: "Pauli") -> "Pauli":
        self._check(other)
        return Pauli(self.n, self.x ^ other.x, self.z ^ other.z)

    def commutes(self, other: "Pauli") -> bool:
        self._check(other)
        return not parity((self.x & other.z) ^ (self.z & other.x))

    def restrict(self, qubits: Iterable[int]) -> "Pauli":
        m = mask_of(qubits)
        return Pauli(self.n, self.x & m, self.z & m)

    def letter(self, q: int) -> str:
        return "IXZY"[((self.x >> q) & 1) | (((self.z >> q) & 1) << 1)]

    def dense(self) -> str:
        return "".join(self.letter(q) for q in range(self.n))

    def sparse(self, base: int = 0, order: Sequence[int] | None = None) -> str:
        qs = order if order is not None else self.support
        out = "".join(f"{self.letter(q)}{q + base}" for q in qs if self.letter(q) != "I")
        return out or "I"

    def __str__(self) -> str:
        return self.sparse()


def multiply(P: Pauli, Q: Pauli) -> Pauli:
    return P * Q


def commutes(P: Pauli, Q: Pauli) -> bool:
    return P.commutes(Q)


def weight_parity(E: Pauli) -> int:
    return E.weight & 1


class Classification(str, enum.Enum):
    STABILIZER = "trivial_syndrome_stabilizer"
    LOGICAL = "trivial_syndrome_logical"
    DETECTABLE = "detectable"


@dataclass(frozen=True)
class GenTag:
    name: str
    category: str  # cap, v, f, e, other
    ptype: str  # X or Z

    def __post_init__(self):
        if self.category not in {"cap", "v", "f", "e", "other"}:
            raise ValueError(f"unknown category {self.category}")
        if self.ptype not in {"X", "Z"}:
            raise ValueError(f"unknown generator type {self.ptype}")


@dataclass(frozen=True)
class Syndrome:
    bits: tuple[int, ...]

    @property
    def value(self) -> int:
        return sum(b << i for i, b in enumerate(self.bits))

    @classmethod
    def from_int(cls, v: int, length: int) -> "Syndrome":
        return cls(tuple((v >> i) & 1 for i in range(length)))

    def __len__(self) -> int:
        return len(self.bits)

    def __str__(self) -> str:
        return "".join(map(str, self.bits))


@dataclass(eq=False)
class StabilizerCode:
    """Stabilizer code with declared generator order.

    Qubit i of the register is shown to humans as label i + label_base.
    """

    n: int
    stab_gens: tuple[Pauli, ...]
    logical_x: tuple[Pauli, ...]
    logical_z: tuple[Pauli, ...]
    gen_tags: tuple[GenTag, ...]
    gauge_gens: tuple[Pauli, ...] = ()
    name: str = "code"
    label_base: int = 0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.stab_gens = tuple(self.stab_gens)
        self.logical_x = tuple(self.logical_x)
        self.logical_z = tuple(self.logical_z)
        self.gen_tags = tuple(self.gen_tags)
        self.gauge_gens = tuple(self.gauge_gens)
        for g in self.stab_gens + self.logical_x + self.logical_z + self.gauge_gens:
            if g.n != self.n:
                raise DimensionError("operator size does not match code")
        if len(self.gen_tags) != len(self.stab_gens):
            raise ValueError("one tag per generator required")
        if len(self.logical_x) != len(self.logical_z):
            raise ValueError("logical X and Z lists differ in length")

    # -- structure -------------------------------------------------------
    @property
    def k(self) -> int:
        return len(self.logical_x)

    @property
    def num_gens(self) -> int:
        return len(self.stab_gens)

    @cached_property
    def is_css(self) -> bool:
        return all(g.is_x_type or g.is_z_type for g in self.stab_gens)

    def gen_index(self, name: str) -> int:
        for i, t in enumerate(self.gen_tags):
            if t.name == name:
                return i
        raise KeyError(name)

    def generator(self, name: str) -> Pauli:
        return self.stab_gens[self.gen_index(name)]

    @cached_property
    def _gen_masks(self) -> tuple[tuple[int, int], ...]:
        return tuple((g.x, g.z) for g in self.stab_gens)

    @cached_property
    def stabilizer_basis(self) -> GF2Basis:
        return GF2Basis(g.vec for g in self.stab_gens)

    @cached_property
    def x_indices(self) -> tuple[int, ...]:
        return tuple(i for i, t in enumerate(self.gen_tags) if t.ptype == "X")

    @cached_property
    def z_indices(self) -> tuple[int, ...]:
        return tuple(i for i, t in enumerate(self.gen_tags) if t.ptype == "Z")

    def check_dim(self, E: Pauli) -> None:
        if E.n != self.n:
            raise DimensionError(f"{E.n}-qubit error on {self.n}-qubit code")

    # -- syndromes -------------------------------------------------------
    def syndrome_int(self, E: Pauli) -> int:
        s = 0
        ex, ez = E.x, E.z
        for i, (gx, gz) in enumerate(self._gen_masks):
            if ((ex & gz) ^ (ez & gx)).bit_count() & 1:
                s |= 1 << i
        return s

    def syndrome_of_masks(self, ex: int, ez: int) -> int:
        s = 0
        for i, (gx, gz) in enumerate(self._gen_masks):
            if ((ex & gz) ^ (ez & gx)).bit_count() & 1:
                s |= 1 << i
        return s

    def syndrome(self, E: Pauli) -> Syndrome:
        self.check_dim(E)
        return Syndrome.from_int(self.syndrome_int(E), self.num_gens)

    def logical_bits(self, E: Pauli) -> int:
        """Bit 2j: anticommutes with logical_z[j]; bit 2j+1: with logical_x[j]."""
        out = 0
        for j, (lx, lz) in enumerate(zip(self.logical_x, self.logical_z)):
            if not E.commutes(lz):
                out |= 1 << (2 * j)
            if not E.commutes(lx):
                out |= 1 << (2 * j + 1)
        return out

    def canonical_vec(self, E: Pauli) -> int:
        """Coset representative of E modulo the stabilizer group (linear)."""
        return self.stabilizer_basis.reduce(E.vec)

    def in_stabilizer_group(self, E: Pauli) -> bool:
        self.check_dim(E)
        return self.stabilizer_basis.contains(E.vec)

    def classify(self, E: Pauli) -> Classification:
        self.check_dim(E)
        if self.syndrome_int(E):
            return Classification.DETECTABLE
        if self.in_stabilizer_group(E):
            return Classification.STABILIZER
        return Classification.LOGICAL

    # -- validation ------------------------------------------------------
    def validate(self) -> None:
        gens = self.stab_gens
        for a, b in itertools.combinations(gens, 2):
            if not a.commutes(b):
                raise ValueError("stabilizer generators do not commute")
        for lo in self.logical_x + self.logical_z:
            if self.syndrome_int(lo):
                raise ValueError("logical operator has nonzero syndrome")
        for i, lx in enumerate(self.logical_x):
            for j, lz in enumerate(self.logical_z):
                if lx.commutes(lz) == (i == j):
                    raise ValueError("logical operators are not a symplectic pair set")
        for g, t in zip(gens, self.gen_tags):
            if t.ptype == "X" and not g.is_x_type or t.ptype == "Z" and not g.is_z_type:
                raise ValueError(f"generator {t.name} does not match its declared type")

    def independent_rank(self) -> int:
        return self.stabilizer_basis.rank

    # -- decoding helpers -----------------------------------------------
    def solve_syndrome(self, s: int, ptype: str | None = None) -> Pauli:
        """Deterministic Pauli with syndrome s.

        Single-qubit candidates are scanned in qubit order (X before Z when
        ptype is None), so the solution uses the earliest independent columns.
        """
        cands: list[Pauli] = []
        if ptype in (None, "X"):
            cands += [Pauli(self.n, 1 << q, 0) for q in range(self.n)]
        if ptype in (None, "Z"):
            cands += [Pauli(self.n, 0, 1 << q) for q in range(self.n)]
        if ptype is None:
            cands.sort(key=lambda p: (p.support[0], p.z != 0))
        cols = [self.syndrome_int(p) for p in cands]
        combo = solve_combination(cols, s)
        if combo is None:
            raise PreconditionError("syndrome not realizable by the requested Pauli type")
        out = Pauli(self.n)
        for i in bits_of(combo):
            out = out * cands[i]
        return out


def syndrome(code: StabilizerCode, E: Pauli) -> Syndrome:
    return code.syndrome(E)


def classify(code: StabilizerCode, E: Pauli) -> Classification:
    return code.classify(E)


def check_weight_parity_hypotheses(code: StabilizerCode) -> None:
    if code.n % 2 == 0 or code.k != 1 or not code.is_css:
        raise PreconditionError("weight-parity equivalence needs an odd-n CSS code with k=1")
    if any(g.weight % 2 for g in code.stab_gens):
        raise PreconditionError("weight-parity equivalence needs even-weight generators")
    full = (1 << code.n) - 1
    for op in (Pauli(code.n, full, 0), Pauli(code.n, 0, full)):
        if code.classify(op) is not Classification.LOGICAL:
            raise PreconditionError("transversal X or Z is not a logical operator")


def equivalent_by_weight_parity(code: StabilizerCode, E1: Pauli, E2: Pauli) -> bool:
    """Same-type, same-syndrome errors are stabilizer-equivalent iff parities agree."""
    code.check_dim(E1)
    code.check_dim(E2)
    if not ((E1.is_x_type and E2.is_x_type) or (E1.is_z_type and E2.is_z_type)):
        raise TypeError("errors must both be X-type or both be Z-type")
    check_weight_parity_hypotheses(code)
    if code.syndrome_int(E1) != code.syndrome_int(E2):
        raise PreconditionError("errors must share a syndrome")
    return weight_parity(E1) == weight_parity(E2)


class AtLeast(int):
    """Lower bound returned when no logical operator was found up to w_max."""

    def __repr__(self) -> str:
        return f"AtLeast({int(self)})"

    def __str__(self) -> str:
        return f">={int(self)}"


def _signatures(code: StabilizerCode, pauli_type: str) -> tuple[list[list[int]], list[int]]:
    """Per qubit, the signature of each allowed single-qubit Pauli.

    A signature packs the syndrome with logical anticommutation bits above,
    so a product is a nontrivial logical iff its syndrome part vanishes and
    its logical part does not.
    """
    letters = {"X": [(1, 0)], "Z": [(0, 1)], "any": [(1, 0), (0, 1), (1, 1)]}[pauli_type]
    shift = code.num_gens
    per_qubit = []
    for q in range(code.n):
        sigs = []
        for ax, az in letters:
            p = Pauli(code.n, ax << q, az << q)
            sigs.append(code.syndrome_int(p) | (code.logical_bits(p) << shift))
        per_qubit.append(sigs)
    targets = [lb << shift for lb in range(1, 1 << (2 * code.k))]
    return per_qubit, targets


def _subset_sums(per_qubit: list[list[int]], size: int):
    n = len(per_qubit)
    for qs in itertools.combinations(range(n), size):
        for choice in itertools.product(*(per_qubit[q] for q in qs)):
            s = 0
            for v in choice:
                s ^= v
            yield s


def distance_brute_force(code: StabilizerCode, pauli_type: str = "any", w_max: int | None = None) -> int:
    """Minimum weight of a nontrivial logical of the given type.

    Meet in the middle: a weight-w logical exists (given none lighter) iff
    the signature sets of ceil(w/2)- and floor(w/2)-subsets intersect after
    shifting by a logical target.  Overlapping halves only yield lighter
    logicals, which were ruled out at an earlier weight.
    """
    if pauli_type not in ("X", "Z", "any"):
        raise ValueError("pauli_type must be X, Z or any")
    if w_max is None:
        w_max = code.n
    per_qubit, targets = _signatures(code, pauli_type)
    cache: dict[int, set[int]] = {0: {0}}

    def sums(size: int) -> set[int]:
        if size not in cache:
            cache[size] = set(_subset_sums(per_qubit, size))
        return cache[size]

    for w in range(1, w_max + 1):
        big, small = (w + 1) // 2, w // 2
        left = sums(big)
        for s in sums(small):
            for t in targets:
                if s ^ t in left:
                    return w
    return AtLeast(w_max + 1)
