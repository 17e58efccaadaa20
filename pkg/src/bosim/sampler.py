"""Synthetic event logs drawn from an exact distribution."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from os import PathLike

import numpy as np

from .distributions import NORM_TOL, Distribution
from .patterns import OutputPattern, PatternIndex

SOURCES = ("boson", "distinguishable", "uniform", "external")
RNG_NAME = "numpy.PCG64"


@dataclass
class EventLog:
    m: int
    photon_count: int
    events: list[OutputPattern]
    seed: int | None = None
    source: str = "external"
    rng: str = RNG_NAME
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.source not in SOURCES:
            raise ValueError(f"source must be one of {SOURCES}, got {self.source!r}")
        self.events = [OutputPattern(e) for e in self.events]
        for e in self.events:
            if len(e) != self.photon_count or not e.is_collision_free():
                raise ValueError(f"event {e} is not a collision-free {self.photon_count}-photon pattern")
            e.check_modes(self.m)

    def __len__(self) -> int:
        return len(self.events)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return EventLog(self.m, self.photon_count, self.events[i], self.seed, self.source, self.rng, dict(self.meta))
        return self.events[i]

    def header(self) -> dict:
        return {"m": self.m, "n": self.photon_count, "seed": self.seed, "source": self.source, "rng": self.rng, **self.meta}

    def to_jsonl(self, path: str | PathLike) -> None:
        with open(path, "w") as fh:
            fh.write(json.dumps(self.header()) + "\n")
            for e in self.events:
                fh.write(json.dumps(list(e.ports)) + "\n")

    @classmethod
    def from_jsonl(cls, path: str | PathLike) -> EventLog:
        with open(path) as fh:
            lines = [ln for ln in fh if ln.strip()]
        if not lines:
            raise ValueError(f"{path}: empty event log")
        head = json.loads(lines[0])
        if not isinstance(head, dict):
            raise ValueError(f"{path}: first line must be the metadata object")
        events = [sorted(json.loads(ln)) for ln in lines[1:]]
        known = {"m", "n", "seed", "source", "rng"}
        meta = {k: v for k, v in head.items() if k not in known}
        return cls(
            int(head["m"]),
            int(head["n"]),
            events,
            head.get("seed"),
            head.get("source", "external"),
            head.get("rng", RNG_NAME),
            meta,
        )


def _source_label(dist: Distribution) -> str:
    model = dist.meta.get("model")
    if model == "boson":
        return "boson"
    if model in ("distinguishable", "uniform"):
        return model
    return "external"


def sample(dist: Distribution, count: int, seed: int, source: str | None = None) -> EventLog:
    """Draw ``count`` independent events by inverting the cumulative table.

    The support is searched in its lexicographic order, so a given
    ``(dist, count, seed)`` always yields the same log.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    if not dist.normalized or abs(dist.probs.sum() - 1.0) > NORM_TOL:
        raise ValueError("sampling requires a normalized distribution")
    if any(not p.is_collision_free() for p in dist.support):
        raise ValueError("event logs hold collision-free patterns only")
    cdf = np.cumsum(dist.probs)
    cdf[-1] = 1.0
    rng = np.random.Generator(np.random.PCG64(seed))
    u = rng.random(count)
    idx = np.searchsorted(cdf, u, side="right")
    # zero-probability patterns share their cdf value with a predecessor and are never selected
    events = [dist.support[i] for i in idx]
    return EventLog(dist.m, dist.photon_count, events, seed, source or _source_label(dist))


def counts(log: EventLog, support_of: Distribution) -> np.ndarray:
    index = PatternIndex(support_of.support)
    out = np.zeros(len(index), dtype=np.int64)
    for e in log.events:
        if e not in index:
            raise ValueError(f"event {e} lies outside the reference support")
        out[index.index(e)] += 1
    return out


def empirical_distribution(log: EventLog, support_of: Distribution) -> Distribution:
    """Observed frequencies over the support of ``support_of``."""
    if len(log) == 0:
        raise ValueError("empty event log")
    if log.m != support_of.m:
        raise ValueError(f"log has m={log.m}, reference has m={support_of.m}")
    c = counts(log, support_of)
    meta = {"model": "empirical", "events": len(log), "seed": log.seed, "source": log.source}
    return Distribution(support_of.m, support_of.photon_count, list(support_of.support), c / c.sum(), True, meta)
