"""Path-independent loss at the sources and at the detectors.

A :class:`LossProfile` holds one efficiency per input port (``input_eff``)
and one per output port (``output_eff``). Loss inside the interferometer is
not represented; the transfer matrix stays unitary.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from os import PathLike
from typing import Sequence


def _check_efficiencies(values: Sequence[float], what: str) -> tuple[float, ...]:
    out = tuple(float(v) for v in values)
    for v in out:
        if not (0.0 < v <= 1.0) or math.isnan(v):
            raise ValueError(f"{what} efficiencies must lie in (0, 1], got {v}")
    return out


@dataclass(frozen=True)
class LossProfile:
    input_eff: tuple[float, ...]
    output_eff: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "input_eff", _check_efficiencies(self.input_eff, "input"))
        object.__setattr__(self, "output_eff", _check_efficiencies(self.output_eff, "output"))

    @property
    def m(self) -> int:
        return len(self.output_eff)

    def to_dict(self) -> dict:
        return {"input_eff": list(self.input_eff), "output_eff": list(self.output_eff)}

    @classmethod
    def from_dict(cls, data: dict) -> LossProfile:
        return cls(tuple(data["input_eff"]), tuple(data["output_eff"]))

    def digest(self) -> str:
        """Short stable hash used in file metadata."""
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    def save(self, path: str | PathLike) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh)

    @classmethod
    def load(cls, path: str | PathLike) -> LossProfile:
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


def uniform_profile(m: int, n_in: int, xi: float = 1.0, eps: float = 1.0) -> LossProfile:
    """Profile with every source efficiency ``xi`` and every detector efficiency ``eps``."""
    return LossProfile((xi,) * n_in, (eps,) * m)


def lossless(m: int) -> LossProfile:
    return uniform_profile(m, m)


def _product(eff: Sequence[float], ports, what: str) -> float:
    w = 1.0
    for p in getattr(ports, "ports", ports):
        if not 1 <= p <= len(eff):
            raise IndexError(f"{what} port {p} outside 1..{len(eff)}")
        w *= eff[p - 1]
    return w


def input_weight(profile: LossProfile, S) -> float:
    """Product of the source efficiencies over the surviving input ports ``S``."""
    return _product(profile.input_eff, S, "input")


def output_weight(profile: LossProfile, S_out) -> float:
    """Product of the detector efficiencies over a multiset of output ports.

    A port that appears ``mu`` times contributes its efficiency to the power ``mu``.
    """
    return _product(profile.output_eff, S_out, "output")
