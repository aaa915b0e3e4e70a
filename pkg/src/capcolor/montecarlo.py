"""Monte Carlo logical failure rates under circuit-level depolarizing noise."""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from statistics import NormalDist

import numpy as np

from .circuits import CircuitSchedule
from .protocols import DecoderTable, RoundSimulator, decoder_for, round_cap, run_ftec
from .pauli import Pauli

CHUNK = 10_000
KINDS = ("cnot", "prep", "measure")


@dataclass(frozen=True)
class NoiseModel:
    p: float
    kinds: tuple[str, ...] = KINDS
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")
        bad = set(self.kinds) - set(KINDS)
        if bad:
            raise ValueError(f"unknown location kinds {sorted(bad)}")


@dataclass
class MCResult:
    p: float
    shots: int
    failures: int
    seed: int
    nonconverged: int = 0
    ci: tuple[float, float] = field(default=(0.0, 1.0))

    @property
    def rate(self) -> float:
        return self.failures / self.shots

    def row(self) -> dict:
        return {"p": self.p, "shots": self.shots, "failures": self.failures, "rate": self.rate,
                "ci_low": self.ci[0], "ci_high": self.ci[1], "seed": self.seed}


def wilson_interval(k: int, n: int, level: float = 0.95) -> tuple[float, float]:
    if n <= 0:
        raise ValueError("need at least one shot")
    z = NormalDist().inv_cdf(0.5 + level / 2)
    ph = k / n
    den = 1 + z * z / n
    mid = (ph + z * z / (2 * n)) / den
    half = z * math.sqrt(ph * (1 - ph) / n + z * z / (4 * n * n)) / den
    # rounding can push a bound past the estimate at k = 0 or k = n
    return min(ph, max(0.0, mid - half)), max(ph, min(1.0, mid + half))


def _kind_of(effects) -> str:
    return {15: "cnot", 3: "prep", 1: "measure"}[len(effects)]


class FTECExperiment:
    """Error correction on a clean input; failure = non-convergence or a
    logical error after ideal decoding.

    ``overflow`` extra rounds beyond (t+1)^2 are allowed before a shot is
    declared stuck; the default allows another (t+1)^2.
    """

    def __init__(self, schedule: CircuitSchedule, t: int, decoder: DecoderTable | None = None,
                 kinds: tuple[str, ...] = KINDS, overflow: int | None = None):
        self.schedule = schedule
        self.t = t
        self.decoder = decoder or decoder_for(schedule, t)
        self.sim = RoundSimulator(schedule.circuits, schedule.code.n)
        self.locs = [(slot, effs) for slot, effs in self.sim.locations() if _kind_of(effs) in kinds]
        self.overflow = (t + 1) ** 2 if overflow is None else overflow

    def shot(self, rng: np.random.Generator, counts) -> tuple[bool, bool]:
        """(failed, converged) for one shot given per-round fault counts."""
        by_round = {}
        for r, c in enumerate(counts, 1):
            if not c:
                continue
            items = []
            for j in rng.choice(len(self.locs), size=int(c), replace=False):
                slot, effs = self.locs[int(j)]
                eff = effs[int(rng.integers(len(effs)))]
                if eff.x or eff.z or eff.flip or eff.flags:
                    items.append((slot, eff, False))
            by_round[r] = items
        n = self.schedule.code.n
        res = run_ftec(Pauli(n), self.schedule, self.decoder, self.t, lambda r: by_round.get(r, ()),
                       overflow=self.overflow, trace=False, sim=self.sim)
        if not res.converged:
            return True, False
        return bool(self.decoder.ideal_logical(res.frame)), True

    def chunk(self, p: float, seed: int, index: int, shots: int) -> tuple[int, int]:
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))
        R = round_cap(self.t, self.overflow)
        counts = rng.binomial(len(self.locs), p, size=(shots, R))
        fails = stuck = 0
        # the first t+1 rounds always run; without faults there the run ends clean
        active = np.nonzero(counts[:, : self.t + 1].any(axis=1))[0]
        for s in active:
            failed, ok = self.shot(rng, counts[s])
            fails += failed
            stuck += not ok
        return fails, stuck


def _worker_count(workers: int | None) -> int:
    if workers is None:
        workers = int(os.environ.get("CAPCOLOR_WORKERS", "1"))
    return max(1, workers)


_EXP: FTECExperiment | None = None


def _init(exp: FTECExperiment) -> None:
    global _EXP
    _EXP = exp


def _run_chunk(args) -> tuple[int, int]:
    return _EXP.chunk(*args)


def monte_carlo_logical_rate(experiment: FTECExperiment, p: float, shots: int, seed: int = 0,
                             workers: int | None = None) -> MCResult:
    """Failure rate with a Wilson interval.  Chunk k draws from
    SeedSequence(seed, spawn_key=(k,)), so results do not depend on the
    worker count."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    NoiseModel(p, seed=seed)
    jobs = []
    left, k = shots, 0
    while left > 0:
        size = min(CHUNK, left)
        jobs.append((p, seed, k, size))
        left -= size
        k += 1
    w = _worker_count(workers)
    if w == 1 or len(jobs) == 1:
        out = [experiment.chunk(*j) for j in jobs]
    else:
        with ProcessPoolExecutor(w, initializer=_init, initargs=(experiment,)) as ex:
            out = list(ex.map(_run_chunk, jobs))
    fails = sum(f for f, _ in out)
    stuck = sum(s for _, s in out)
    return MCResult(p, shots, fails, seed, stuck, wilson_interval(fails, shots))


def loglog_slope(a: MCResult, b: MCResult) -> float:
    """Slope of log(rate) against log(p) through two points."""
    if a.failures == 0 or b.failures == 0:
        raise ValueError("slope needs nonzero failure counts at both points")
    return math.log(b.rate / a.rate) / math.log(b.p / a.p)


__all__ = ["NoiseModel", "MCResult", "wilson_interval", "FTECExperiment", "monte_carlo_logical_rate",
           "loglog_slope", "CHUNK"]
