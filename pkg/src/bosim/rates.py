"""Count rates of lossy boson sampling under a binomial photon-survival model.

Each of the ``n + k`` injected photons independently reaches a detector with
probability ``eta = eta_source * eta_interf * eta_det``. Post-selecting
exactly ``n`` clicks therefore happens with probability
``C(n+k, k) eta^n (1 - eta)^k`` per attempt, and attempts arrive at
``rep_rate * demux_duty``. The combinatorial part of the gain over standard
sampling, :func:`speedup_factor`, is exact integer arithmetic.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from os import PathLike
from typing import Iterable


@dataclass(frozen=True)
class RateParams:
    rep_rate: float = 76e6
    eta_source: float = 0.8
    eta_interf: float = 0.9
    eta_det: float = 0.9
    demux_duty: float = 1.0

    def __post_init__(self):
        if not self.rep_rate > 0:
            raise ValueError(f"rep_rate must be positive, got {self.rep_rate}")
        for name in ("eta_source", "eta_interf", "eta_det", "demux_duty"):
            v = getattr(self, name)
            if not 0 < v <= 1:
                raise ValueError(f"{name} must lie in (0, 1], got {v}")

    @property
    def eta(self) -> float:
        return self.eta_source * self.eta_interf * self.eta_det

    @property
    def attempt_rate(self) -> float:
        return self.rep_rate * self.demux_duty


def speedup_factor(n: int, k: int) -> int:
    """Number of surviving-photon subsets, ``C(n+k, n)``."""
    if n < 1 or k < 0:
        raise ValueError(f"need n >= 1 and k >= 0, got n={n}, k={k}")
    return math.comb(n + k, n)


def projected_rate(params: RateParams, n: int, k: int) -> float:
    """Rate in Hz of n-fold coincidences when ``n + k`` photons are injected."""
    eta = params.eta
    return params.attempt_rate * speedup_factor(n, k) * eta**n * (1.0 - eta) ** k


def rate_table(params: RateParams, ns: Iterable[int], ks: Iterable[int]) -> list[tuple[int, int, int, float]]:
    ks = list(ks)
    return [(n, k, speedup_factor(n, k), projected_rate(params, n, k)) for n in ns for k in ks]


def write_rate_table(rows, path: str | PathLike) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["n", "k", "factor", "rate_hz"])
        for n, k, factor, rate in rows:
            w.writerow([n, k, factor, repr(float(rate))])
