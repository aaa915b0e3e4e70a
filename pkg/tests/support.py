"""Cached fixtures-as-functions shared by the test modules (usable inside
hypothesis tests, which reject function-scoped fixtures)."""

from __future__ import annotations

import random
from functools import lru_cache

from capcolor.circuits import schedule_for
from capcolor.codes import build_code
from capcolor.pauli import Pauli, StabilizerCode


@lru_cache(maxsize=None)
def code(family: str, d: int = 3, form: str = "H") -> StabilizerCode:
    return build_code(family, d, form)


@lru_cache(maxsize=None)
def schedule(family: str, d: int = 3, template: str = "nonflag", form: str = "H"):
    return schedule_for(code(family, d, form), template)


def gens_of_type(c: StabilizerCode, ptype: str) -> list[Pauli]:
    return [g for g, t in zip(c.stab_gens, c.gen_tags) if t.ptype == ptype]


def random_same_syndrome_pair(c: StabilizerCode, ptype: str, rng: random.Random) -> tuple[Pauli, Pauli]:
    """E1 random of the given type; E2 = E1 times a random stabilizer of that
    type, times the transversal logical half of the time."""
    n = c.n
    full = (1 << n) - 1
    bits = rng.getrandbits(n)
    E1 = Pauli(n, bits, 0) if ptype == "X" else Pauli(n, 0, bits)
    S = Pauli(n)
    for g in gens_of_type(c, ptype):
        if rng.getrandbits(1):
            S = S * g
    if rng.getrandbits(1):
        S = S * (Pauli(n, full, 0) if ptype == "X" else Pauli(n, 0, full))
    return E1, E1 * S


ALL_CODES = (("steane", 3), ("2d", 3), ("2d", 5), ("ccc", 3), ("ccc", 5), ("rccc", 3), ("rccc", 5))
