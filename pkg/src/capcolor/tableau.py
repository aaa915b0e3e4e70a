"""Dense stabilizer tableau (Aaronson-Gottesman), used as an independent
oracle for the Pauli-frame engine on small registers."""

from __future__ import annotations

import numpy as np

from .circuits import Kind, MeasurementCircuit


class Tableau:
    def __init__(self, n: int, rng: np.random.Generator | None = None):
        self.n = n
        self.x = np.zeros((2 * n + 1, n), dtype=np.uint8)
        self.z = np.zeros((2 * n + 1, n), dtype=np.uint8)
        self.r = np.zeros(2 * n + 1, dtype=np.uint8)
        idx = np.arange(n)
        self.x[idx, idx] = 1
        self.z[n + idx, idx] = 1
        self.rng = rng or np.random.default_rng(0)

    def copy(self) -> "Tableau":
        t = Tableau.__new__(Tableau)
        t.n = self.n
        t.x, t.z, t.r = self.x.copy(), self.z.copy(), self.r.copy()
        t.rng = self.rng
        return t

    # gates -----------------------------------------------------------------
    def h(self, a: int) -> None:
        self.r ^= self.x[:, a] & self.z[:, a]
        self.x[:, a], self.z[:, a] = self.z[:, a].copy(), self.x[:, a].copy()

    def cnot(self, a: int, b: int) -> None:
        self.r ^= self.x[:, a] & self.z[:, b] & (self.x[:, b] ^ self.z[:, a] ^ 1)
        self.x[:, b] ^= self.x[:, a]
        self.z[:, a] ^= self.z[:, b]

    def pauli(self, a: int, letter: str) -> None:
        """Apply X, Y or Z on qubit a: flips the sign of anticommuting rows."""
        px, pz = letter in "XY", letter in "ZY"
        hit = np.zeros(2 * self.n + 1, dtype=np.uint8)
        if px:
            hit ^= self.z[:, a]
        if pz:
            hit ^= self.x[:, a]
        self.r ^= hit

    # measurement -----------------------------------------------------------
    def _rowsum(self, h: int, i: int) -> None:
        x1, z1 = self.x[i].astype(np.int64), self.z[i].astype(np.int64)
        x2, z2 = self.x[h].astype(np.int64), self.z[h].astype(np.int64)
        g = np.where((x1 == 1) & (z1 == 1), z2 - x2,
                     np.where(x1 == 1, z2 * (2 * x2 - 1), np.where(z1 == 1, x2 * (1 - 2 * z2), 0)))
        total = 2 * int(self.r[h]) + 2 * int(self.r[i]) + int(g.sum())
        self.r[h] = (total % 4) // 2
        self.x[h] ^= self.x[i]
        self.z[h] ^= self.z[i]

    def measure(self, a: int) -> int:
        n = self.n
        rows = np.nonzero(self.x[n:2 * n, a])[0]
        if rows.size:
            p = int(rows[0]) + n
            for i in range(2 * n):
                if i != p and self.x[i, a]:
                    self._rowsum(i, p)
            self.x[p - n], self.z[p - n], self.r[p - n] = self.x[p], self.z[p], self.r[p]
            self.x[p] = 0
            self.z[p] = 0
            self.z[p, a] = 1
            self.r[p] = self.rng.integers(2)
            return int(self.r[p])
        s = 2 * n
        self.x[s] = 0
        self.z[s] = 0
        self.r[s] = 0
        for i in range(n):
            if self.x[i, a]:
                self._rowsum(s, i + n)
        return int(self.r[s])

    def reset(self, a: int) -> None:
        if self.measure(a):
            self.pauli(a, "X")


def run_circuit(tab: Tableau, c: MeasurementCircuit, fault: tuple[int, str] | None = None) -> tuple[int, int]:
    """Execute one measurement circuit; ``fault`` = (location, Pauli label).

    Returns (syndrome outcome, flag outcomes).
    """
    out = flags = 0
    for i, loc in enumerate(c.locations):
        k = loc.kind
        flip = False
        if k is Kind.PREP_SYNDROME or k is Kind.PREP_FLAG:
            w = loc.wires[0]
            tab.reset(w)
            if loc.basis == "X":
                tab.h(w)
        elif k is Kind.DATA_CNOT or k is Kind.FLAG_CNOT:
            tab.cnot(*loc.wires)
        elif k is Kind.MEASURE_SYNDROME or k is Kind.MEASURE_FLAG:
            w = loc.wires[0]
            if fault is not None and fault[0] == i:
                flip = True
            if loc.basis == "X":
                tab.h(w)
            bit = tab.measure(w) ^ flip
            if k is Kind.MEASURE_SYNDROME:
                out = bit
            else:
                flags |= bit << loc.flag
        if fault is not None and fault[0] == i and not flip:
            lab = fault[1]
            wires = loc.wires if len(lab) == 2 else loc.wires[:1]
            for w, letter in zip(wires, lab):
                if letter != "I":
                    tab.pauli(w, letter)
    return out, flags


def run_round(tab: Tableau, circuits, fault: tuple[int, int, str] | None = None) -> tuple[int, int]:
    """All circuits once; ``fault`` = (circuit index, location, label).  Flags are concatenated."""
    syn = fl = off = 0
    for i, c in enumerate(circuits):
        f = (fault[1], fault[2]) if fault is not None and fault[0] == i else None
        s, f_bits = run_circuit(tab, c, f)
        syn |= s << i
        fl |= f_bits << off
        off += c.n_flags
    return syn, fl


__all__ = ["Tableau", "run_circuit", "run_round"]
