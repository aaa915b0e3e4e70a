"""Linear algebra over GF(2) with vectors packed into Python ints."""
from __future__ import annotations

from typing import Iterable, Sequence


def parity(v: int) -> int:
    return v.bit_count() & 1


def bits_of(v: int) -> list[int]:
    """Indices of set bits, ascending."""
    out = []
    while v:
        low = v & -v
        out.append(low.bit_length() - 1)
        v ^= low
    return out


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


class GF2Basis:
    """Incrementally built, fully reduced row-echelon basis.

    Each stored row has a distinct pivot (its lowest set bit) and no other
    row has that pivot set, so reduction is a single pass.  Optionally
    tracks, for every row, which inserted vectors it is a combination of.
    """

    __slots__ = ("_rows", "_combo", "_count")

    def __init__(self, vectors: Iterable[int] = ()):
        self._rows: dict[int, int] = {}
        self._combo: dict[int, int] = {}
        self._count = 0
        for v in vectors:
            self.add(v)

    @property
    def rank(self) -> int:
        return len(self._rows)

    def __len__(self) -> int:
        return len(self._rows)

    def add(self, v: int) -> bool:
        """Insert v; returns False when v was already in the span."""
        combo = 1 << self._count
        self._count += 1
        v, c = self._reduce_tracked(v, combo)
        if not v:
            return False
        piv = v & -v
        for p, row in list(self._rows.items()):
            if row & piv:
                self._rows[p] = row ^ v
                self._combo[p] ^= c
        self._rows[piv] = v
        self._combo[piv] = c
        return True

    def _reduce_tracked(self, v: int, combo: int) -> tuple[int, int]:
        for p, row in self._rows.items():
            if v & p:
                v ^= row
                combo ^= self._combo[p]
        return v, combo

    def reduce(self, v: int) -> int:
        """Canonical representative of v modulo the span (linear in v)."""
        for p, row in self._rows.items():
            if v & p:
                v ^= row
        return v

    def contains(self, v: int) -> bool:
        return self.reduce(v) == 0

    def express(self, v: int) -> int | None:
        """Mask over insertion order of vectors summing to v, or None."""
        r, c = self._reduce_tracked(v, 0)
        return c if r == 0 else None

    def rows(self) -> list[int]:
        return list(self._rows.values())


def rank(vectors: Iterable[int]) -> int:
    return GF2Basis(vectors).rank


def solve_combination(columns: Sequence[int], target: int) -> int | None:
    """Find a subset of columns whose XOR is target.

    Columns are inserted in index order, so lower-index columns become
    pivots first and free columns are left at zero.  The returned mask is
    over column indices.  None when target is outside the span.
    """
    basis = GF2Basis()
    kept: list[int] = []
    for i, col in enumerate(columns):
        if basis.add(col):
            kept.append(i)
        else:
            kept.append(-1)
    combo = basis.express(target)
    if combo is None:
        return None
    out = 0
    for slot in bits_of(combo):
        idx = kept[slot]
        if idx < 0:
            # dependent column never became a row, so it cannot appear
            raise AssertionError("dependent column in combination")
        out |= 1 << idx
    return out


def invert_matrix(rows: Sequence[int], size: int) -> list[int] | None:
    """Invert a size x size matrix given as row bitmasks; None if singular."""
    aug = [rows[i] | (1 << (size + i)) for i in range(size)]
    for col in range(size):
        bit = 1 << col
        pivot = next((r for r in range(col, size) if aug[r] & bit), None)
        if pivot is None:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        for r in range(size):
            if r != col and aug[r] & bit:
                aug[r] ^= aug[col]
    return [row >> size for row in aug]
