"""Reference implementations that share no code with the package.

Paulis here are plain strings over IXYZ; linear algebra is numpy row
reduction over GF(2).
"""

from __future__ import annotations

import itertools

import numpy as np

# letters anticommute iff both are non-identity and differ
_ANTI = {(a, b): a != "I" and b != "I" and a != b for a in "IXYZ" for b in "IXYZ"}
_PRODUCT = {
    ("I", "I"): "I", ("I", "X"): "X", ("I", "Y"): "Y", ("I", "Z"): "Z",
    ("X", "I"): "X", ("X", "X"): "I", ("X", "Y"): "Z", ("X", "Z"): "Y",
    ("Y", "I"): "Y", ("Y", "X"): "Z", ("Y", "Y"): "I", ("Y", "Z"): "X",
    ("Z", "I"): "Z", ("Z", "X"): "Y", ("Z", "Y"): "X", ("Z", "Z"): "I",
}


def dense(P) -> str:
    return "".join("IXZY"[(P.x >> q & 1) | (P.z >> q & 1) << 1] for q in range(P.n))


def anticommute(a: str, b: str) -> bool:
    return sum(_ANTI[p] for p in zip(a, b)) % 2 == 1


def product(a: str, b: str) -> str:
    return "".join(_PRODUCT[p] for p in zip(a, b))


def weight(a: str) -> int:
    return sum(c != "I" for c in a)


def syndrome_bits(gens: list[str], e: str) -> tuple[int, ...]:
    return tuple(int(anticommute(g, e)) for g in gens)


def symplectic(a: str) -> np.ndarray:
    n = len(a)
    v = np.zeros(2 * n, dtype=np.uint8)
    for i, c in enumerate(a):
        v[i] = c in "XY"
        v[n + i] = c in "ZY"
    return v


def gf2_rank(rows: np.ndarray) -> int:
    m = rows.copy() % 2
    r = 0
    for c in range(m.shape[1]):
        piv = next((i for i in range(r, m.shape[0]) if m[i, c]), None)
        if piv is None:
            continue
        m[[r, piv]] = m[[piv, r]]
        for i in range(m.shape[0]):
            if i != r and m[i, c]:
                m[i] ^= m[r]
        r += 1
        if r == m.shape[0]:
            break
    return r


def in_span(gens: list[str], e: str) -> bool:
    A = np.array([symplectic(g) for g in gens])
    return gf2_rank(A) == gf2_rank(np.vstack([A, symplectic(e)]))


def distance(gens: list[str], w_max: int, letters: str = "XYZ") -> int | None:
    """Smallest weight of an operator commuting with every generator but
    outside their span; None if none up to w_max."""
    n = len(gens[0])
    for w in range(1, w_max + 1):
        for qs in itertools.combinations(range(n), w):
            for ls in itertools.product(letters, repeat=w):
                e = ["I"] * n
                for q, lt in zip(qs, ls):
                    e[q] = lt
                e = "".join(e)
                if any(anticommute(g, e) for g in gens):
                    continue
                if not in_span(gens, e):
                    return w
    return None


def qubit_count_closed_forms(d: int) -> dict[str, tuple[int, int, int]]:
    """Qubit counts (data, shared ancilla, dedicated ancillas) as fractions
    that must come out integral."""
    from fractions import Fraction as F

    raw = {
        "2d": (F(3 * (d * d - 1), 4) + 1, F(3 * (d * d - 1), 4) + 3, F(3 * (d * d - 1), 2) + 1),
        "ccc": (F(3 * (d * d - 1), 2) + 3, F(3 * (d * d - 1), 2) + 5, F(9 * (d * d - 1), 4) + 5),
        "rccc": (F(d**3 + 3 * d**2 + 3 * d - 3, 4), F(d**3 + 3 * d**2 + 3 * d + 5, 4),
                 F(3 * d**3 + 9 * d**2 + 13 * d - 17, 8)),
        "3d": (F(d**3 + d, 2), F(d**3 + d + 2, 2), F(7 * d**3 + 3 * d**2 + 5 * d - 3, 12)),
        "stacked": (F(3 * d**3 - 3 * d**2 + d + 3, 4), F(3 * d**3 - 3 * d**2 + d + 7, 4),
                    F(15 * d**3 - 15 * d**2 + 9 * d + 7, 16)),
    }
    out = {}
    for k, vals in raw.items():
        assert all(v.denominator == 1 for v in vals), (k, d, vals)
        out[k] = tuple(int(v) for v in vals)
    return out
