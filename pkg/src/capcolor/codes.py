"""Color-code families: 2D triangular patches, capped and recursive capped codes.

Lattice convention
------------------
Points of a triangular grid are axial pairs (i, j) with i, j >= 0 and
i + j <= 3(d-1)/2, drawn at Cartesian (i + j/2, j*sqrt(3)/2).  A point is a
qubit unless (i - j + 1) % 3 == 0, in which case it is a plaquette center
whose plaquette is the set of its in-patch grid neighbours (boundary centers
with fewer than four neighbours are discarded).  Qubits are labelled 1..n
by distance from the patch centroid, ties broken by the counterclockwise
angle measured from just past straight up.  The same key orders plaquettes.

Capped codes index the top qubit as 0, the center plane as labels 1..n2D
and the bottom partner of label i as i + n2D.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property

from .gf2 import GF2Basis, bits_of, invert_matrix, mask_of, solve_combination
from .pauli import GenTag, Pauli, PreconditionError, StabilizerCode

_REF_ANGLE = math.pi / 2 + 0.01
_NEIGHBOURS = ((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1))
COLORS = ("R", "G", "B")


class DomainError(ValueError):
    pass


class ConstructionError(RuntimeError):
    pass


class InconsistentOutcomeError(ValueError):
    pass


def _check_d(d: int) -> None:
    if not isinstance(d, int) or d < 3 or d % 2 == 0:
        raise DomainError(f"distance must be an odd integer >= 3, got {d!r}")


@dataclass(frozen=True)
class Plaquette:
    cycle: tuple[int, ...]  # labels in counterclockwise order
    color: str

    @property
    def support(self) -> frozenset[int]:
        return frozenset(self.cycle)

    def __len__(self) -> int:
        return len(self.cycle)


@dataclass(frozen=True)
class ColorLattice:
    d: int
    qubit_coords: dict[int, tuple[int, int]]
    plaquettes: tuple[Plaquette, ...]

    @property
    def n(self) -> int:
        return len(self.qubit_coords)

    @property
    def r(self) -> int:
        return len(self.plaquettes)

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        """Lattice edges: cyclically consecutive labels on some plaquette."""
        es = set()
        for p in self.plaquettes:
            c = p.cycle
            for a, b in zip(c, c[1:] + c[:1]):
                es.add((min(a, b), max(a, b)))
        return tuple(sorted(es))

    def plaquettes_of(self, q: int) -> list[int]:
        return [k for k, p in enumerate(self.plaquettes) if q in p.support]

    @cached_property
    def two_coloring(self) -> dict[int, int]:
        """Proper 2-coloring of the edge graph; label 1 gets color 0."""
        adj: dict[int, list[int]] = {q: [] for q in self.qubit_coords}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        color: dict[int, int] = {}
        for start in sorted(adj):
            if start in color:
                continue
            color[start] = 0
            stack = [start]
            while stack:
                u = stack.pop()
                for w in adj[u]:
                    if w not in color:
                        color[w] = color[u] ^ 1
                        stack.append(w)
                    elif color[w] == color[u]:
                        raise ConstructionError("lattice edge graph is not bipartite")
        return color


def build_lattice(d: int) -> ColorLattice:
    _check_d(d)
    m = 3 * (d - 1) // 2
    pts = [(i, j) for i in range(m + 1) for j in range(m + 1 - i)]
    inside = set(pts)
    c = ((d - 1) // 2, (d - 1) // 2)

    def cart(p):
        return (p[0] + p[1] / 2, p[1] * math.sqrt(3) / 2)

    cx, cy = cart(c)

    def key(p):
        a, b = p[0] - c[0], p[1] - c[1]
        x, y = cart(p)
        ang = (math.atan2(y - cy, x - cx) - _REF_ANGLE) % (2 * math.pi)
        return (a * a + a * b + b * b, round(ang, 9))

    def is_qubit(p):
        return (p[0] - p[1] + 1) % 3 != 0

    qubits = sorted((p for p in pts if is_qubit(p)), key=key)
    label = {p: k + 1 for k, p in enumerate(qubits)}
    plaqs = []
    for p in sorted((p for p in pts if not is_qubit(p)), key=key):
        mem = [(p[0] + a, p[1] + b) for a, b in _NEIGHBOURS if (p[0] + a, p[1] + b) in inside]
        if len(mem) < 4:
            continue
        px, py = cart(p)
        mem.sort(key=lambda q: math.atan2(cart(q)[1] - py, cart(q)[0] - px))
        plaqs.append(Plaquette(tuple(label[q] for q in mem), COLORS[p[0] % 3]))
    lat = ColorLattice(d, {label[p]: p for p in qubits}, tuple(plaqs))
    if lat.n != (3 * d * d + 1) // 4 or lat.r != (lat.n - 1) // 2:
        raise ConstructionError("lattice counts disagree with the closed forms")
    return lat


def _css_code(n, x_sets, z_sets, tags, name, label_base=0, meta=None) -> StabilizerCode:
    gens = [Pauli.X(n, s) for s in x_sets] + [Pauli.Z(n, s) for s in z_sets]
    full = (1 << n) - 1
    code = StabilizerCode(
        n=n,
        stab_gens=gens,
        logical_x=[Pauli(n, full, 0)],
        logical_z=[Pauli(n, 0, full)],
        gen_tags=tags,
        name=name,
        label_base=label_base,
        meta=meta or {},
    )
    code.validate()
    if code.independent_rank() != n - 1:
        raise ConstructionError(f"{name}: generator rank {code.independent_rank()} != {n - 1}")
    return code


def build_2d_color_code(d: int) -> tuple[ColorLattice, StabilizerCode]:
    """Qubit index = label - 1; X generators first, one pair per plaquette."""
    lat = build_lattice(d)
    sets = [[q - 1 for q in p.cycle] for p in lat.plaquettes]
    tags = [GenTag(f"g{k + 1}x", "f", "X") for k in range(lat.r)]
    tags += [GenTag(f"g{k + 1}z", "f", "Z") for k in range(lat.r)]
    code = _css_code(lat.n, sets, sets, tags, f"2d({d})", label_base=1,
                     meta={"family": "2d", "d": d, "form": "stabilizer", "lattice": lat})
    return lat, code


_STEANE_SUPPORTS = ((4, 5, 6, 7), (2, 3, 6, 7), (1, 3, 5, 7))


def steane_code() -> StabilizerCode:
    """The [[7,1,3]] code in its textbook labelling (qubits 1..7)."""
    sets = [[q - 1 for q in s] for s in _STEANE_SUPPORTS]
    tags = [GenTag(f"g{k + 1}x", "f", "X") for k in range(3)]
    tags += [GenTag(f"g{k + 1}z", "f", "Z") for k in range(3)]
    return _css_code(7, sets, sets, tags, "steane", label_base=1,
                     meta={"family": "steane", "d": 3, "form": "stabilizer"})


# ---------------------------------------------------------------------------
# capped codes


@dataclass(frozen=True)
class Gen:
    name: str
    category: str
    ptype: str
    support: frozenset[int]

    def pauli(self, n: int) -> Pauli:
        return Pauli.X(n, self.support) if self.ptype == "X" else Pauli.Z(n, self.support)

    @property
    def tag(self) -> GenTag:
        return GenTag(self.name, self.category, self.ptype)


def _choose_edges(lat: ColorLattice) -> tuple[list[tuple[int, int]], list[list[int]]]:
    """Pick r lattice edges whose face-incidence matrix is invertible.

    Edges are taken greedily in lexicographic order, then matched to faces
    (face k gets the least unused edge it meets oddly, with backtracking).
    Returns the ordered edges and the inverse incidence matrix as rows.
    """
    faces = [p.support for p in lat.plaquettes]
    r = len(faces)

    def column(e):
        return mask_of(k for k, f in enumerate(faces) if len(f & set(e)) % 2)

    basis = GF2Basis()
    chosen = [e for e in lat.edges if basis.add(column(e))]
    if len(chosen) != r:
        raise ConstructionError("no invertible vertical-face set")
    cols = {e: column(e) for e in chosen}

    def match(k, used):
        if k == r:
            return []
        for e in chosen:
            if e not in used and cols[e] >> k & 1:
                rest = match(k + 1, used | {e})
                if rest is not None:
                    return [e] + rest
        return None

    order = match(0, frozenset())
    if order is None:
        raise ConstructionError("vertical faces admit no face matching")
    # M[face][edge]
    rows = [mask_of(j for j, e in enumerate(order) if cols[e] >> k & 1) for k in range(r)]
    inv = invert_matrix(rows, r)
    if inv is None:
        raise ConstructionError("incidence matrix singular")
    return order, inv


@dataclass(frozen=True)
class Level:
    """One capped layer pair of a (recursive) capped code."""

    j: int
    lattice: ColorLattice
    center: tuple[int, ...]  # register index of label i is center[i-1]
    bottom: tuple[int, ...]
    cap_extra: frozenset[int]  # support of the cap outside the center plane
    edges: tuple[tuple[int, int], ...]
    dual: tuple[int, ...]  # rows of the inverse incidence matrix
    suffix: str

    def c(self, label: int) -> int:
        return self.center[label - 1]

    def b(self, label: int) -> int:
        return self.bottom[label - 1]

    @property
    def r(self) -> int:
        return self.lattice.r

    def _nm(self, base: str) -> str:
        return base + self.suffix

    @cached_property
    def cap(self) -> tuple[Gen, Gen]:
        sup = frozenset(self.center) | self.cap_extra
        return (Gen(self._nm("v0x"), "cap", "X", sup), Gen(self._nm("v0z"), "cap", "Z", sup))

    @cached_property
    def v(self) -> tuple[tuple[Gen, Gen], ...]:
        out = []
        for k, p in enumerate(self.lattice.plaquettes, 1):
            sup = frozenset(self.c(q) for q in p.cycle) | frozenset(self.b(q) for q in p.cycle)
            out.append((Gen(self._nm(f"v{k}x"), "v", "X", sup), Gen(self._nm(f"v{k}z"), "v", "Z", sup)))
        return tuple(out)

    @cached_property
    def f_center(self) -> tuple[tuple[Gen, Gen], ...]:
        """(f_k^x, f_{r+k}^z) pairs on the center plane."""
        r = self.r
        out = []
        for k, p in enumerate(self.lattice.plaquettes, 1):
            sup = frozenset(self.c(q) for q in p.cycle)
            out.append((Gen(self._nm(f"f{k}x"), "f", "X", sup), Gen(self._nm(f"f{r + k}z"), "f", "Z", sup)))
        return tuple(out)

    @cached_property
    def e(self) -> tuple[tuple[Gen, Gen], ...]:
        """(e_k^z, e_{r+k}^x) vertical faces."""
        r = self.r
        out = []
        for k, (a, b) in enumerate(self.edges, 1):
            sup = frozenset((self.c(a), self.c(b), self.b(a), self.b(b)))
            out.append((Gen(self._nm(f"e{k}z"), "e", "Z", sup), Gen(self._nm(f"e{r + k}x"), "e", "X", sup)))
        return tuple(out)

    @cached_property
    def f_dual(self) -> tuple[tuple[Gen, Gen], ...]:
        """(f_k^z, f_{r+k}^x) for k <= r: products of vertical faces."""
        r = self.r
        out = []
        for k in range(r):
            sup: frozenset[int] = frozenset()
            for col in range(r):
                if self.dual[col] >> k & 1:
                    sup = sup ^ self.e[col][0].support
            out.append((Gen(self._nm(f"f{k + 1}z"), "f", "Z", sup), Gen(self._nm(f"f{r + k + 1}x"), "f", "X", sup)))
        return tuple(out)

    def v_x(self) -> list[Gen]:
        return [self.cap[0]] + [g for g, _ in self.v]

    def v_z(self) -> list[Gen]:
        return [self.cap[1]] + [g for _, g in self.v]


@dataclass(eq=False)
class CappedCode:
    """Subsystem capped code built from one or more levels."""

    d: int
    n: int
    levels: tuple[Level, ...]
    family: str = "ccc"
    form: str = "subsystem"

    @property
    def top(self) -> Level:
        return self.levels[-1]

    @property
    def lattice(self) -> ColorLattice:
        return self.top.lattice

    @property
    def n2d(self) -> int:
        return self.top.lattice.n

    @property
    def r(self) -> int:
        return self.top.lattice.r

    @property
    def q0(self) -> int:
        return 0

    @property
    def center(self) -> tuple[int, ...]:
        return self.top.center

    @property
    def bottom(self) -> tuple[int, ...]:
        return self.top.bottom

    @property
    def cap_gens(self) -> list[Gen]:
        return [g for lv in self.levels for g in lv.cap]

    @property
    def v_gens(self) -> list[Gen]:
        return [g for lv in self.levels for pair in lv.v for g in pair]

    @property
    def f_gens(self) -> list[Gen]:
        return [g for lv in self.levels for pair in lv.f_center + lv.f_dual for g in pair]

    @property
    def e_gens(self) -> list[Gen]:
        return [g for lv in self.levels for pair in lv.e for g in pair]

    def stabilizer_gens(self) -> list[Gen]:
        return [g for lv in self.levels for g in lv.v_x()] + [g for lv in self.levels for g in lv.v_z()]

    def gauge_gens(self) -> list[Gen]:
        out = self.stabilizer_gens()
        for lv in self.levels:
            out += [x for x, _ in lv.f_center] + [z for _, z in lv.f_center]
            out += [g for pair in lv.e for g in pair]
        return out

    def all_gens(self) -> dict[str, Gen]:
        gens = self.cap_gens + self.v_gens + self.f_gens + self.e_gens
        return {g.name: g for g in gens}

    def gen(self, name: str) -> Gen:
        return self.all_gens()[name]

    @cached_property
    def layers(self) -> list[tuple[int, ...]]:
        out: list[tuple[int, ...]] = [(0,)]
        for lv in self.levels:
            out += [lv.center, lv.bottom]
        return out

    def layer_of(self, q: int) -> int:
        for k, layer in enumerate(self.layers, 1):
            if q in layer:
                return k
        raise KeyError(q)

    @property
    def transversal_s_dagger(self) -> bool:
        """Logical S is (S^dagger)^n when n = 3 mod 4, S^n when n = 1 mod 4."""
        return self.n % 4 == 3

    def form_layout(self, form: str) -> list[Gen]:
        if form == "H":
            xs = [g for lv in self.levels for g in lv.v_x()] + [x for lv in self.levels for x, _ in lv.f_center]
            zs = [g for lv in self.levels for g in lv.v_z()] + [z for lv in self.levels for _, z in lv.f_center]
        elif form == "T":
            xs = [g for lv in self.levels for g in lv.v_x()]
            zs = [g for lv in self.levels for g in lv.v_z()]
            zs += [z for lv in self.levels for z, _ in lv.e]
            zs += [z for lv in self.levels for _, z in lv.f_center]
        else:
            raise DomainError(f"unknown form {form!r}")
        return xs + zs


def _make_level(j: int, start: int, cap_extra: frozenset[int], suffix: str) -> Level:
    lat = build_lattice(j)
    m = lat.n
    center = tuple(range(start, start + m))
    bottom = tuple(range(start + m, start + 2 * m))
    edges, dual = _choose_edges(lat)
    return Level(j, lat, center, bottom, cap_extra, tuple(edges), tuple(dual), suffix)


def build_ccc(d: int) -> CappedCode:
    _check_d(d)
    lv = _make_level(d, 1, frozenset({0}), "")
    n = 2 * lv.lattice.n + 1
    if n != 3 * (d * d + 1) // 2:
        raise ConstructionError("CCC qubit count mismatch")
    return CappedCode(d, n, (lv,), family="ccc")


def rccc_n(d: int) -> int:
    return (d ** 3 + 3 * d * d + 3 * d - 3) // 4


class RecursiveCappedCode(CappedCode):
    @property
    def inner_codes(self) -> list[CappedCode]:
        return [CappedCode(lv.j, rccc_n(lv.j), self.levels[: k + 1], family="rccc")
                for k, lv in enumerate(self.levels)]

    @property
    def layer_index(self) -> dict[int, int]:
        return {q: k for k, layer in enumerate(self.layers, 1) for q in layer}


def _rccc_levels(d: int) -> tuple[Level, ...]:
    levels: list[Level] = []
    start = 1
    multi = d > 3
    for j in range(3, d + 1, 2):
        # the cap absorbs the inner code's logical operator, carried by
        # the inner bottom layer (just the top qubit at the base level)
        extra = frozenset({0}) if not levels else frozenset(levels[-1].bottom)
        lv = _make_level(j, start, extra, f"@{j}" if multi else "")
        levels.append(lv)
        start += 2 * lv.lattice.n
    return tuple(levels)


def build_rccc(d: int, form: str = "subsystem"):
    """Subsystem code, or its gauge fixing when form is H or T."""
    _check_d(d)
    code = RecursiveCappedCode(d, rccc_n(d), _rccc_levels(d), family="rccc")
    if code.layers[-1][-1] + 1 != code.n:
        raise ConstructionError("RCCC qubit count mismatch")
    if form == "subsystem":
        return code
    return fix_gauge(code, form)


def fix_gauge(ccc: CappedCode, form: str) -> StabilizerCode:
    if ccc.form != "subsystem":
        raise PreconditionError("gauge fixing needs the subsystem form")
    gens = ccc.form_layout(form)
    n = ccc.n
    tags = [g.tag for g in gens]
    code = StabilizerCode(
        n=n,
        stab_gens=[g.pauli(n) for g in gens],
        logical_x=[Pauli(n, (1 << n) - 1, 0)],
        logical_z=[Pauli(n, 0, (1 << n) - 1)],
        gen_tags=tags,
        gauge_gens=[g.pauli(n) for g in ccc.gauge_gens()],
        name=f"{ccc.family}({ccc.d})-{form}",
        meta={"family": ccc.family, "d": ccc.d, "form": form, "capped": ccc},
    )
    code.validate()
    rk = code.independent_rank()
    if rk != n - 1:
        raise ConstructionError(f"{code.name}: rank {rk}, expected {n - 1}")
    return code


# ---------------------------------------------------------------------------
# bipartition and transversality


def bipartition(obj) -> tuple[frozenset[int], frozenset[int]]:
    """Split qubits so every generator support is halved.

    For a lattice the classes are the edge-graph 2-coloring (label 1 in V).
    For a capped code, V holds the center class containing label 1 and the
    bottom partners of the other class, so each v generator splits evenly;
    the top qubit (and each inner level) is placed to balance the caps.
    """
    if isinstance(obj, ColorLattice):
        col = obj.two_coloring
        V = frozenset(q for q, c in col.items() if c == 0)
        Vc = frozenset(col) - V
        for p in obj.plaquettes:
            if len(p.support & V) * 2 != len(p):
                raise ConstructionError("plaquette does not split evenly")
        return V, Vc
    if isinstance(obj, StabilizerCode):
        obj = obj.meta["capped"]
    code: CappedCode = obj
    V: set[int] = set()
    for lv in code.levels:
        col = lv.lattice.two_coloring
        for q, c in col.items():
            V.add(lv.c(q) if c == 0 else lv.b(q))
    # remaining freedom: each level's assignment may be flipped wholesale,
    # and q0 is free.  Choose outer-to-inner so caps split evenly.
    everything = frozenset(range(code.n))
    for flip_mask in range(1 << len(code.levels)):
        for q0_in in (False, True):
            W = set(V)
            for k, lv in enumerate(code.levels):
                if flip_mask >> k & 1:
                    lvq = set(lv.center) | set(lv.bottom)
                    W ^= lvq
            if q0_in:
                W.add(0)
            if all(len(g.support & W) * 2 == len(g.support) for g in code.gauge_gens() if g.category in ("cap", "v")):
                # keep label 1 of the outer center plane in V
                if code.top.c(1) not in W:
                    W = set(everything - W)
                return frozenset(W), everything - frozenset(W)
    raise ConstructionError("no balanced bipartition found")


def check_Rp_transversality(code, V, p: int) -> bool:
    """Sufficient divisibility condition for a transversal R_p = diag(1, e^{2 pi i/2^p}).

    Every m-subset (m = 1..p) of the X-type generators must meet V and its
    complement in sizes congruent modulo 2^(p-m+1).
    """
    if isinstance(code, CappedCode):
        code = fix_gauge(code, "T")
    if p < 1:
        raise ValueError("p must be >= 1")
    Vm = mask_of(V)
    full = (1 << code.n) - 1
    Vc = full & ~Vm
    xs = [g.x for g, t in zip(code.stab_gens, code.gen_tags) if t.ptype == "X"]
    for m in range(1, p + 1):
        mod = 1 << (p - m + 1)
        for combo in itertools.combinations(xs, m):
            inter = full
            for s in combo:
                inter &= s
            if ((inter & Vm).bit_count() - (inter & Vc).bit_count()) % mod:
                return False
    return True


def code_switch_fix_operator(code_from: StabilizerCode, measured_outcomes, direction: str) -> Pauli:
    """Gauge-fixing Pauli after measuring the target form's new generators.

    H->T: outcomes of the e^z faces; the fix is a product of center f^x
    operators, so it commutes with everything the target form keeps.
    T->H: outcomes of the center f^x; the fix is a product of e^z faces.
    """
    ccc: CappedCode = code_from.meta["capped"]
    n = code_from.n
    if direction in ("H->T", "HT"):
        measured = [z for lv in ccc.levels for z, _ in lv.e]
        pool = [x for lv in ccc.levels for x, _ in lv.f_center]
    elif direction in ("T->H", "TH"):
        measured = [x for lv in ccc.levels for x, _ in lv.f_center]
        pool = [z for lv in ccc.levels for z, _ in lv.e]
    else:
        raise DomainError(f"unknown direction {direction!r}")
    outcomes = list(measured_outcomes)
    if len(outcomes) != len(measured):
        raise InconsistentOutcomeError(f"expected {len(measured)} outcomes, got {len(outcomes)}")
    mp = [g.pauli(n) for g in measured]
    cols = []
    for g in pool:
        P = g.pauli(n)
        cols.append(mask_of(k for k, M in enumerate(mp) if not P.commutes(M)))
    target = mask_of(k for k, b in enumerate(outcomes) if b)
    combo = solve_combination(cols, target)
    if combo is None:
        raise InconsistentOutcomeError("outcomes admit no fixing operator")
    out = Pauli(n)
    for k in bits_of(combo):
        out = out * pool[k].pauli(n)
    return out


# ---------------------------------------------------------------------------
# qubit-count table

TABLE3_FAMILIES = ("2d", "ccc", "rccc", "3d", "stacked")


def table3(d: int) -> dict[str, tuple[int, int, int]]:
    """Data-only, shared-ancilla and dedicated-ancilla qubit counts."""
    _check_d(d)
    a = d * d - 1
    return {
        "2d": (3 * a // 4 + 1, 3 * a // 4 + 3, 3 * a // 2 + 1),
        "ccc": (3 * a // 2 + 3, 3 * a // 2 + 5, 9 * a // 4 + 5),
        "rccc": ((d**3 + 3 * d * d + 3 * d - 3) // 4, (d**3 + 3 * d * d + 3 * d + 5) // 4,
                 (3 * d**3 + 9 * d * d + 13 * d - 17) // 8),
        "3d": ((d**3 + d) // 2, (d**3 + d + 2) // 2, (7 * d**3 + 3 * d * d + 5 * d - 3) // 12),
        "stacked": ((3 * d**3 - 3 * d * d + d + 3) // 4, (3 * d**3 - 3 * d * d + d + 7) // 4,
                    (15 * d**3 - 15 * d * d + 9 * d + 7) // 16),
    }


def build_code(family: str, d: int, form: str = "H") -> StabilizerCode:
    if family == "2d":
        return build_2d_color_code(d)[1]
    if family == "steane":
        return steane_code()
    if family == "ccc":
        return fix_gauge(build_ccc(d), form)
    if family == "rccc":
        return build_rccc(d, form)
    raise DomainError(f"unknown family {family!r}")


def code_to_json(code: StabilizerCode) -> dict:
    out = {
        "name": code.name,
        "n": code.n,
        "k": code.k,
        "d": code.meta.get("d"),
        "family": code.meta.get("family"),
        "form": code.meta.get("form"),
        "label_base": code.label_base,
        "generators": [
            {"tag": t.name, "category": t.category, "type": t.ptype,
             "support": [q + code.label_base for q in (g.x | g.z and bits_of(g.x | g.z))]}
            for g, t in zip(code.stab_gens, code.gen_tags)
        ],
        "logicals": {
            "x": [[q + code.label_base for q in p.support] for p in code.logical_x],
            "z": [[q + code.label_base for q in p.support] for p in code.logical_z],
        },
    }
    ccc = code.meta.get("capped")
    if ccc is not None:
        out["layers"] = [list(layer) for layer in ccc.layers]
        V, Vc = bipartition(ccc)
        out["bipartition"] = {"V": sorted(V), "Vc": sorted(Vc)}
        out["transversal_s"] = "S_dagger" if ccc.transversal_s_dagger else "S"
    return out
