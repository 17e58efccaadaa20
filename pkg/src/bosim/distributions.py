"""Exact output distributions for standard, lossy, distinguishable and uniform samplers.

Every lossy model is evaluated by one engine, :func:`pattern_weights`. For a
detected pattern ``T`` it sums, over the subsets ``S`` of the inputs that
survive source loss and over the ways ``E`` of placing the photons lost at
the detectors, a weight times a kernel of the submatrix ``U[S, T + E]``:

    w(T) = sum_S sum_E  xi(S) * eps(T + E) * c(E) * kernel(U[S, T + E])

``xi`` and ``eps`` are products of source and detector efficiencies. ``c(E)``
is 1 in ``"paper_literal"`` mode. In ``"physical"`` mode it is
``1 / prod_j e_j!``, where ``e_j`` counts the lost photons that left through
port ``j``; with this factor, uniform detector loss gives the same
distribution as uniform source loss. Experiment-facing tables cover the
collision-free detected patterns and are renormalised over them.
"""

from __future__ import annotations

import csv
import itertools
import json
import math
import os
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from os import PathLike
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .interferometer import check_unitary
from .loss import LossProfile, lossless
from .patterns import (
    InputPattern,
    OutputPattern,
    enumerate_multisets,
    enumerate_no_collision,
    format_pattern,
    parse_pattern,
)
from .permanent import perm_ryser_batch

MODES = ("physical", "paper_literal")
NORM_TOL = 1e-12
_CHUNK = 1 << 17  # submatrices per batched permanent call


def worker_count() -> int:
    """Threads used by table builders; capped by ``BOSIM_THREADS`` (default 1)."""
    try:
        return max(1, int(os.environ.get("BOSIM_THREADS", "1")))
    except ValueError:
        return 1


@dataclass
class Distribution:
    m: int
    photon_count: int
    support: list[OutputPattern]
    probs: np.ndarray
    normalized: bool = True
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.probs = np.asarray(self.probs, dtype=float)
        if self.probs.shape != (len(self.support),):
            raise ValueError("probabilities must align with the support")
        if np.any(self.probs < 0):
            raise ValueError("probabilities must be non-negative")
        if any(a >= b for a, b in zip(self.support, self.support[1:])):
            raise ValueError("support must be strictly lexicographically increasing")
        if self.normalized and abs(self.probs.sum() - 1.0) > NORM_TOL:
            raise ValueError(f"distribution flagged normalized but sums to {self.probs.sum()!r}")

    def __len__(self) -> int:
        return len(self.support)

    def prob(self, pattern) -> float:
        return float(self.probs[self.support.index(OutputPattern(pattern))])

    def as_dict(self) -> dict[OutputPattern, float]:
        return dict(zip(self.support, self.probs.tolist()))

    def normalize(self) -> Distribution:
        total = self.probs.sum()
        if total <= 0:
            raise ValueError("cannot normalise an all-zero distribution")
        return Distribution(self.m, self.photon_count, list(self.support), self.probs / total, True, dict(self.meta))

    def same_support(self, other: Distribution) -> bool:
        return self.m == other.m and self.support == other.support

    def to_csv(self, path: str | PathLike, write_meta: bool = True) -> None:
        """Write ``pattern,probability`` rows; metadata goes to a ``.json`` sidecar."""
        path = Path(path)
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["pattern", "probability"])
            for pat, p in zip(self.support, self.probs):
                w.writerow([format_pattern(pat), repr(float(p))])
        if write_meta:
            meta = {"m": self.m, "n": self.photon_count, **self.meta}
            with open(path.with_suffix(".json"), "w") as fh:
                json.dump(meta, fh, indent=2, sort_keys=True)

    @classmethod
    def from_csv(cls, path: str | PathLike, m: int | None = None) -> Distribution:
        path = Path(path)
        meta: dict = {}
        sidecar = path.with_suffix(".json")
        if sidecar.exists():
            with open(sidecar) as fh:
                meta = json.load(fh)
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
        if not rows or rows[0] != ["pattern", "probability"]:
            raise ValueError(f"{path}: expected header 'pattern,probability'")
        support = [parse_pattern(r[0]) for r in rows[1:]]
        probs = np.array([float(r[1]) for r in rows[1:]])
        m = m or meta.pop("m", None) or max(p.ports[-1] for p in support)
        n = meta.pop("n", len(support[0]) if support else 0)
        meta.pop("m", None)
        normalized = abs(probs.sum() - 1.0) <= 1e-9
        if normalized:
            probs = probs / probs.sum()
        return cls(int(m), int(n), support, probs, normalized, meta)


def _kernel_indistinguishable(stack: np.ndarray) -> np.ndarray:
    return np.abs(perm_ryser_batch(stack)) ** 2


def _kernel_distinguishable(stack: np.ndarray) -> np.ndarray:
    return perm_ryser_batch(np.abs(stack) ** 2).real


def _kernel_row_norms(stack: np.ndarray) -> np.ndarray:
    # product over detected output modes of the squared norm collected from the inputs
    return np.prod(np.sum(np.abs(stack) ** 2, axis=1), axis=-1)


KERNELS: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "boson": _kernel_indistinguishable,
    "distinguishable": _kernel_distinguishable,
    "row_norm": _kernel_row_norms,
}


def source_efficiencies(profile: LossProfile, inputs: Sequence[int], m: int) -> np.ndarray:
    """Efficiency for each occupied input port.

    A profile with one entry per occupied input is read positionally; one
    with ``m`` entries is read by port label.
    """
    inputs = list(inputs)
    eff = np.asarray(profile.input_eff, dtype=float)
    if eff.size == len(inputs):
        return eff
    if eff.size == m:
        return eff[np.asarray(inputs) - 1]
    raise ValueError(
        f"loss profile has {eff.size} input efficiencies; expected {len(inputs)} (one per input) or {m} (one per mode)"
    )


def _lost_factor(extra: tuple[int, ...], mode: str) -> float:
    if mode == "paper_literal":
        return 1.0
    return 1.0 / math.prod(math.factorial(c) for c in Counter(extra).values())


def pattern_weights(
    U,
    inputs,
    patterns: Sequence[OutputPattern],
    k_src: int = 0,
    k_det: int = 0,
    profile: LossProfile | None = None,
    mode: str = "physical",
    kernel: str = "boson",
    detector_weights: bool = True,
    source_weights: bool = True,
    multiplicity_divisor: bool = False,
) -> np.ndarray:
    """Unnormalised weight of each detected pattern under the lossy model.

    ``k_src`` photons are lost before the network and ``k_det`` after it.
    ``multiplicity_divisor`` divides each term by the factorials of the
    multiplicities of the detected pattern itself, which turns the lossless
    kernel into a probability for collision outputs.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    U = np.asarray(U, dtype=np.complex128)
    m = U.shape[0]
    inputs = InputPattern(inputs)
    inputs.check_modes(m)
    n_in = len(inputs)
    if k_src < 0 or k_det < 0 or k_src > n_in:
        raise ValueError(f"invalid loss split k_src={k_src}, k_det={k_det} for {n_in} inputs")
    n_detected = n_in - k_src - k_det
    profile = profile or lossless(m)
    if profile.m != m:
        raise ValueError(f"loss profile covers {profile.m} outputs, unitary has {m}")
    xi = source_efficiencies(profile, inputs.ports, m)
    fn = KERNELS[kernel]

    in_ports = np.asarray(inputs.ports) - 1
    subsets = list(itertools.combinations(range(n_in), n_in - k_src))
    rows = np.array([in_ports[list(s)] for s in subsets], dtype=np.int64).reshape(len(subsets), n_in - k_src)
    src_w = np.array([np.prod(xi[list(s)]) if source_weights else 1.0 for s in subsets])

    extras = list(itertools.combinations_with_replacement(range(m), k_det))
    extra_idx = np.array(extras, dtype=np.int64).reshape(len(extras), k_det)
    extra_w = np.array([_lost_factor(e, mode) for e in extras])
    eps = np.asarray(profile.output_eff, dtype=float)

    patterns = [OutputPattern(p) for p in patterns]
    for p in patterns:
        if len(p) != n_detected:
            raise ValueError(f"pattern {p} has {len(p)} photons, model detects {n_detected}")
        p.check_modes(m)

    per_pattern = max(1, len(subsets) * len(extras))
    step = max(1, _CHUNK // per_pattern)
    chunks = [patterns[i : i + step] for i in range(0, len(patterns), step)]

    def run(chunk: list[OutputPattern]) -> np.ndarray:
        det = np.array([p.ports for p in chunk], dtype=np.int64).reshape(len(chunk), n_detected) - 1
        P, E = det.shape[0], extra_idx.shape[0]
        cols = np.concatenate(
            [np.broadcast_to(det[:, None, :], (P, E, n_detected)), np.broadcast_to(extra_idx[None], (P, E, k_det))],
            axis=-1,
        )
        cols.sort(axis=-1)  # (P, E, n): completed output multisets
        det_w = np.broadcast_to(extra_w, (P, E))
        if detector_weights:
            det_w = det_w * np.prod(eps[cols], axis=-1)
        n = cols.shape[-1]
        if n == 0:
            vals = np.ones((len(subsets), P, E))
        else:
            stack = U[rows[:, None, None, :, None], cols[None, :, :, None, :]]  # (S, P, E, n, n)
            vals = fn(stack.reshape(-1, n, n)).reshape(len(subsets), P, E)
        out = np.einsum("s,spe,pe->p", src_w, vals, det_w)
        if multiplicity_divisor:
            out = out / np.array([p.factorial_weight() for p in chunk], dtype=float)
        return out

    workers = min(worker_count(), len(chunks))
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(run, chunks))
    else:
        results = [run(c) for c in chunks]
    return np.concatenate(results) if results else np.zeros(0)


def _table(U, inputs, n_detected, k_src, k_det, profile, mode, kernel, meta) -> Distribution:
    U = check_unitary(U)
    m = U.shape[0]
    support = enumerate_no_collision(m, n_detected)
    w = pattern_weights(U, inputs, support, k_src, k_det, profile, mode, kernel)
    total = w.sum()
    if total <= 0:
        raise ValueError("every collision-free detected pattern has zero weight")
    meta = {"k": k_src + k_det, "k_src": k_src, "k_det": k_det, "mode": mode, "model": kernel, **meta}
    if profile is not None:
        meta["loss_profile"] = profile.digest()
    return Distribution(m, n_detected, list(support), w / total, True, meta)


def standard_distribution(U, S, no_collision_only: bool = True) -> Distribution:
    """Lossless boson-sampling distribution for input ports ``S``.

    With ``no_collision_only`` the table covers the collision-free outputs and
    is renormalised over them. Otherwise it covers every output multiset with
    probability ``|Perm(U[S, T])|^2 / prod_j t_j!`` and is left as computed.
    """
    S = InputPattern(S)
    if no_collision_only:
        return _table(U, S, len(S), 0, 0, None, "physical", "boson", {"inputs": list(S.ports)})
    U = check_unitary(U)
    m = U.shape[0]
    if len(S) > m:
        raise ValueError(f"{len(S)} photons do not fit in {m} modes")
    support = enumerate_multisets(m, len(S))
    w = pattern_weights(U, S, support, multiplicity_divisor=True)
    total = w.sum()
    normalized = abs(total - 1.0) <= NORM_TOL
    meta = {"k": 0, "mode": "physical", "model": "boson", "inputs": list(S.ports), "collisions": True}
    return Distribution(m, len(S), list(support), w, normalized, meta)


def _check_detect(inputs, detect: int) -> int:
    n_in = len(InputPattern(inputs))
    if detect > n_in:
        raise ValueError(f"cannot detect {detect} photons from {n_in} inputs")
    if detect < 1:
        raise ValueError("must detect at least one photon")
    return n_in - detect


def lossy_source_distribution(U, inputs, detect: int, profile: LossProfile | None = None) -> Distribution:
    """Photons lost before the network: average over surviving input subsets."""
    k = _check_detect(inputs, detect)
    return _table(U, inputs, detect, k, 0, profile, "physical", "boson", {"inputs": list(InputPattern(inputs).ports)})


def lossy_detector_distribution(
    U, S, detect: int, profile: LossProfile | None = None, mode: str = "physical"
) -> Distribution:
    """All photons cross the network; ``|S| - detect`` are lost at the detectors."""
    k = _check_detect(S, detect)
    return _table(U, S, detect, 0, k, profile, mode, "boson", {"inputs": list(InputPattern(S).ports)})


def lossy_both_distribution(
    U,
    inputs,
    detect: int,
    k_src: int,
    k_det: int,
    profile: LossProfile | None = None,
    mode: str = "physical",
) -> Distribution:
    k = _check_detect(inputs, detect)
    if k_src < 0 or k_det < 0 or k_src + k_det != k:
        raise ValueError(f"k_src + k_det must equal {k} (inputs minus detected), got {k_src} + {k_det}")
    return _table(U, inputs, detect, k_src, k_det, profile, mode, "boson", {"inputs": list(InputPattern(inputs).ports)})


def distinguishable_distribution(U, inputs, detect: int, profile: LossProfile | None = None) -> Distribution:
    """Same loss structure as :func:`lossy_source_distribution` with classical particles."""
    k = _check_detect(inputs, detect)
    return _table(
        U, inputs, detect, k, 0, profile, "physical", "distinguishable", {"inputs": list(InputPattern(inputs).ports)}
    )


def uniform_distribution(m: int, n: int) -> Distribution:
    support = enumerate_no_collision(m, n)
    return Distribution(m, n, list(support), np.full(len(support), 1.0 / len(support)), True, {"model": "uniform"})


def point_mass(m: int, n: int, pattern) -> Distribution:
    support = enumerate_no_collision(m, n)
    probs = np.zeros(len(support))
    probs[support.index(OutputPattern(pattern))] = 1.0
    return Distribution(m, n, list(support), probs, True, {"model": "point"})


def _aligned(p: Distribution, q: Distribution) -> tuple[np.ndarray, np.ndarray]:
    if not p.same_support(q):
        raise ValueError("distributions are defined over different supports")
    return p.probs, q.probs


def tvd(p: Distribution, q: Distribution) -> float:
    """Total variation distance ``0.5 * sum |p - q|``."""
    a, b = _aligned(p, q)
    return float(0.5 * np.abs(a - b).sum())


def similarity(p: Distribution, q: Distribution) -> float:
    """Bhattacharyya overlap ``sum sqrt(p q)``."""
    a, b = _aligned(p, q)
    return float(np.sqrt(a * b).sum())
