"""Counter-based tests that a log came from a genuine lossy boson sampler.

:func:`lr_test` compares each event's likelihood under indistinguishable and
distinguishable photons. :func:`rne_test` compares a row-norm estimator with
its value under uniform sampling. Both use the same surviving-input sums as
:func:`bosim.distributions.lossy_source_distribution`.
"""

from __future__ import annotations

import csv
import itertools
import json
import math
from dataclasses import dataclass, field
from os import PathLike

import numpy as np

from .distributions import pattern_weights, source_efficiencies
from .interferometer import check_unitary
from .loss import LossProfile
from .patterns import InputPattern, OutputPattern, enumerate_no_collision
from .sampler import EventLog

LOG_SPACE_ABOVE = 6


@dataclass
class CounterTrace:
    test: str
    values: np.ndarray
    params: dict = field(default_factory=dict)

    @property
    def final(self) -> int:
        return int(self.values[-1]) if len(self.values) else 0

    @property
    def verdict(self) -> str:
        # a non-negative final counter accepts the boson-sampler hypothesis
        if self.final >= 0:
            return "boson"
        return "distinguishable" if self.test == "lr" else "uniform"

    def steps(self) -> np.ndarray:
        return np.diff(np.concatenate([[0], self.values]))

    def summary(self) -> dict:
        return {"test": self.test, "final": self.final, "verdict": self.verdict, "params": self.params}

    def to_csv(self, path: str | PathLike) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["event_index", "counter"])
            for i, v in enumerate(self.values):
                w.writerow([i, int(v)])

    def write_summary(self, path: str | PathLike) -> None:
        with open(path, "w") as fh:
            json.dump(self.summary(), fh, indent=2, sort_keys=True)


def _unique_events(log: EventLog, m: int, n: int) -> tuple[list[OutputPattern], np.ndarray]:
    if log.m != m:
        raise ValueError(f"log was recorded on {log.m} modes, unitary has {m}")
    if log.photon_count != n:
        raise ValueError(f"log holds {log.photon_count}-photon events, test expects {n}")
    uniq = sorted(set(log.events))
    pos = {p: i for i, p in enumerate(uniq)}
    return uniq, np.array([pos[e] for e in log.events], dtype=np.int64)


def lr_step(L: float, a1: float, a2: float) -> int:
    """Counter increment for one likelihood ratio.

    Cases are checked in the printed order. ``L == a1`` matches none of them
    as printed and is counted with the -1 band.
    """
    if a1 < L < 1 / a1:
        return 0
    if 1 / a1 <= L < a2:
        return 1
    if L >= a2:
        return 2
    if 1 / a2 <= L <= a1:
        return -1
    return -2


def _lr_step_log(logL: float, a1: float, a2: float) -> int:
    la1, la2 = math.log(a1), math.log(a2)
    if la1 < logL < -la1:
        return 0
    if -la1 <= logL < la2:
        return 1
    if logL >= la2:
        return 2
    if -la2 <= logL <= la1:
        return -1
    return -2


def _check_geometry(U, inputs, detect):
    U = check_unitary(U)
    inputs = InputPattern(inputs)
    inputs.check_modes(U.shape[0])
    if not 1 <= detect <= len(inputs):
        raise ValueError(f"cannot detect {detect} photons from {len(inputs)} inputs")
    return U, inputs, len(inputs) - detect


def event_likelihoods(
    U,
    inputs,
    detect: int,
    patterns,
    profile: LossProfile | None = None,
    weighted: bool = True,
    post_selected: bool = True,
) -> tuple[np.ndarray, np.ndarray]:
    """Indistinguishable and distinguishable likelihoods of each pattern.

    With ``post_selected`` each is conditioned on detecting a collision-free
    pattern, i.e. divided by its total over the collision-free support.
    Boson bunching leaves less collision-free mass for indistinguishable
    photons, so the unconditioned ratio is biased below one even for genuine
    boson data.
    """
    U, inputs, k = _check_geometry(U, inputs, detect)
    kw = dict(k_src=k, profile=profile if weighted else None)
    p_ind = pattern_weights(U, inputs, patterns, kernel="boson", **kw)
    p_dis = pattern_weights(U, inputs, patterns, kernel="distinguishable", **kw)
    if post_selected:
        support = enumerate_no_collision(U.shape[0], detect)
        p_ind = p_ind / pattern_weights(U, inputs, support, kernel="boson", **kw).sum()
        p_dis = p_dis / pattern_weights(U, inputs, support, kernel="distinguishable", **kw).sum()
    return p_ind, p_dis


def lr_trace(p_ind: np.ndarray, p_dis: np.ndarray, a1: float = 0.9, a2: float = 1.5, log_space: bool = False) -> np.ndarray:
    """Fold per-event likelihoods into the counter sequence."""
    if not 0 < a1 < 1 < a2:
        raise ValueError(f"need 0 < a1 < 1 < a2, got a1={a1}, a2={a2}")
    p_ind = np.asarray(p_ind, dtype=float)
    p_dis = np.asarray(p_dis, dtype=float)
    if log_space:
        with np.errstate(divide="ignore"):
            logL = np.log(p_ind) - np.log(p_dis)
        steps = [_lr_step_log(x, a1, a2) for x in logL]
    else:
        with np.errstate(divide="ignore", invalid="ignore"):
            L = p_ind / p_dis
        steps = [lr_step(x, a1, a2) for x in L]
    return np.cumsum(np.asarray(steps, dtype=np.int64))


def lr_test(
    log: EventLog,
    U,
    inputs,
    detect: int,
    profile: LossProfile | None = None,
    a1: float = 0.9,
    a2: float = 1.5,
    weighted: bool = True,
    post_selected: bool = True,
) -> CounterTrace:
    """Likelihood-ratio counter: positive final value favours indistinguishable photons."""
    if not 0 < a1 < 1 < a2:
        raise ValueError(f"need 0 < a1 < 1 < a2, got a1={a1}, a2={a2}")
    U, inputs, _ = _check_geometry(U, inputs, detect)
    uniq, idx = _unique_events(log, U.shape[0], detect)
    p_ind, p_dis = event_likelihoods(U, inputs, detect, uniq, profile, weighted, post_selected)
    values = lr_trace(p_ind[idx], p_dis[idx], a1, a2, log_space=detect > LOG_SPACE_ABOVE)
    params = {"a1": a1, "a2": a2, "inputs": list(inputs.ports), "detect": detect, "weighted": weighted,
              "post_selected": post_selected, "events": len(log)}
    return CounterTrace("lr", values, params)


def rne_threshold(m: int, n: int) -> float:
    """Expected value ``(n/m)^n`` of the estimator under uniform sampling."""
    return (n / m) ** n


def row_norm_estimators(U, inputs, detect: int, patterns, profile: LossProfile | None = None, weighted: bool = True) -> np.ndarray:
    """Row-norm product of each pattern, averaged over the surviving input subsets.

    For every detected output mode, the squared moduli reaching it from the
    surviving inputs are summed; those row norms are multiplied together.
    """
    U, inputs, k = _check_geometry(U, inputs, detect)
    profile = profile if weighted else None
    total = pattern_weights(U, inputs, patterns, k_src=k, profile=profile, kernel="row_norm", detector_weights=False)
    if profile is None:
        return total / math.comb(len(inputs), detect)
    xi = source_efficiencies(profile, inputs.ports, U.shape[0])
    norm = sum(math.prod(c) for c in itertools.combinations(xi.tolist(), detect))
    return total / norm


def rne_test(
    log: EventLog, U, inputs, detect: int, profile: LossProfile | None = None, weighted: bool = True
) -> CounterTrace:
    """Row-norm counter: +1 when the estimator beats ``(n/m)^n``, otherwise -1.

    When ``m == n`` the only pattern has every row norm equal to one, so the
    estimator sits on the threshold and the outcome is decided by rounding.
    """
    U, inputs, _ = _check_geometry(U, inputs, detect)
    m = U.shape[0]
    uniq, idx = _unique_events(log, m, detect)
    est = row_norm_estimators(U, inputs, detect, uniq, profile, weighted)[idx]
    thr = rne_threshold(m, detect)
    if detect > LOG_SPACE_ABOVE:
        with np.errstate(divide="ignore"):
            above = np.log(est) > math.log(thr)
    else:
        above = est > thr
    values = np.cumsum(np.where(above, 1, -1).astype(np.int64))
    params = {"threshold": thr, "inputs": list(inputs.ports), "detect": detect, "weighted": weighted, "events": len(log)}
    return CounterTrace("rne", values, params)
