"""Experiment configuration read from YAML.

Schema (every key optional except where a command needs it)::

    m: 16                      # modes
    inputs: [1, 2, 3, 4]       # occupied input ports
    detect: 3                  # post-selected photon number
    k_src: null                # photons lost at the sources (default: all losses)
    k_det: 0                   # photons lost at the detectors
    mode: physical             # or paper_literal
    model: boson               # boson | distinguishable | uniform
    unitary:
      path: U.json             # matrix file, or
      haar_seed: 7             # Haar draw of size m
    loss:
      path: loss.json          # LossProfile file, or
      input_eff: [...]         # explicit efficiencies, or
      output_eff: [...]
      xi: 0.85                 # uniform values
      eps: 0.53
    sampler:
      events: 10000
      seed: 1
    out: results/

Relative paths are resolved against the directory of the config file.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from .interferometer import check_unitary, haar_random
from .loss import LossProfile, uniform_profile
from .permanent import load_matrix


@dataclass
class ExperimentConfig:
    m: int = 16
    inputs: list[int] = field(default_factory=lambda: [1, 2, 3, 4])
    detect: int = 3
    k_src: int | None = None
    k_det: int = 0
    mode: str = "physical"
    model: str = "boson"
    unitary_path: Path | None = None
    haar_seed: int = 0
    loss: dict = field(default_factory=dict)
    events: int = 10000
    sample_seed: int = 1
    out: Path = Path(".")

    @classmethod
    def from_yaml(cls, path: str | Path) -> ExperimentConfig:
        path = Path(path)
        with open(path) as fh:
            data = yaml.safe_load(fh) or {}
        return cls.from_dict(data, base=path.parent)

    @classmethod
    def from_dict(cls, data: dict, base: Path = Path(".")) -> ExperimentConfig:
        unknown = set(data) - {"m", "inputs", "detect", "k_src", "k_det", "mode", "model", "unitary", "loss", "sampler", "out"}
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        cfg = cls()
        for key in ("m", "detect", "k_det"):
            if key in data:
                setattr(cfg, key, int(data[key]))
        if data.get("k_src") is not None:
            cfg.k_src = int(data["k_src"])
        if "inputs" in data:
            cfg.inputs = [int(p) for p in data["inputs"]]
        for key in ("mode", "model"):
            if key in data:
                setattr(cfg, key, str(data[key]))
        unitary = data.get("unitary") or {}
        if "path" in unitary:
            cfg.unitary_path = base / unitary["path"]
        if "haar_seed" in unitary:
            cfg.haar_seed = int(unitary["haar_seed"])
        loss = dict(data.get("loss") or {})
        if "path" in loss:
            loss["path"] = str(base / loss["path"])
        cfg.loss = loss
        sampler = data.get("sampler") or {}
        cfg.events = int(sampler.get("events", cfg.events))
        cfg.sample_seed = int(sampler.get("seed", cfg.sample_seed))
        if "out" in data:
            cfg.out = base / data["out"]
        return cfg

    @property
    def k_total(self) -> int:
        return len(self.inputs) - self.detect

    @property
    def loss_split(self) -> tuple[int, int]:
        k_src = self.k_total - self.k_det if self.k_src is None else self.k_src
        return k_src, self.k_det

    def validate(self) -> None:
        if len(set(self.inputs)) != len(self.inputs):
            raise ValueError(f"input ports repeat: {self.inputs}")
        if not 1 <= self.detect <= len(self.inputs) <= self.m:
            raise ValueError(f"need 1 <= detect <= len(inputs) <= m, got {self.detect}, {len(self.inputs)}, {self.m}")
        if any(not 1 <= p <= self.m for p in self.inputs):
            raise ValueError(f"input ports must lie in 1..{self.m}: {self.inputs}")
        k_src, k_det = self.loss_split
        if k_src < 0 or k_det < 0 or k_src + k_det != self.k_total:
            raise ValueError(f"k_src + k_det must equal {self.k_total}, got {k_src} + {k_det}")
        if self.mode not in ("physical", "paper_literal"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.model not in ("boson", "distinguishable", "uniform"):
            raise ValueError(f"unknown model {self.model!r}")
        if self.unitary_path is not None and not Path(self.unitary_path).exists():
            raise FileNotFoundError(f"unitary file {self.unitary_path} does not exist")
        if "path" in self.loss and not Path(self.loss["path"]).exists():
            raise FileNotFoundError(f"loss profile {self.loss['path']} does not exist")

    def unitary(self) -> np.ndarray:
        if self.unitary_path is not None:
            U = check_unitary(load_matrix(self.unitary_path))
            if U.shape[0] != self.m:
                raise ValueError(f"unitary file is {U.shape[0]}x{U.shape[0]}, config says m={self.m}")
            return U
        return haar_random(self.m, self.haar_seed)

    def profile(self) -> LossProfile:
        loss = self.loss
        if "path" in loss:
            return LossProfile.load(loss["path"])
        if "input_eff" in loss or "output_eff" in loss:
            return LossProfile(
                tuple(loss.get("input_eff", [1.0] * len(self.inputs))), tuple(loss.get("output_eff", [1.0] * self.m))
            )
        return uniform_profile(self.m, len(self.inputs), float(loss.get("xi", 1.0)), float(loss.get("eps", 1.0)))
