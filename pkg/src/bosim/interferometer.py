"""Unitary transfer matrices for the photonic network.

Index convention used throughout the package: ``U[i, j]`` is the amplitude
for a photon entering input port ``i + 1`` to leave at output port ``j + 1``
(rows are inputs, columns are outputs).

Square mesh convention. A cell at ``(layer, pos)`` mixes modes ``pos`` and
``pos + 1`` (1-based) with the block

    T(theta, phi) = [[exp(1j*phi) cos(theta), -sin(theta)],
                     [exp(1j*phi) sin(theta),  cos(theta)]]

acting on the column vector of mode amplitudes. Cells act in order of
``(layer, pos)`` and are followed by the diagonal of output phases, so the
column-action map is ``V = D @ T_last @ ... @ T_first``. Because rows are
inputs here, :func:`compose_mesh` returns ``V.T``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from os import PathLike

import numpy as np

from .permanent import as_complex_matrix

UNITARY_TOL = 1e-9


def unitarity_residual(U) -> float:
    """``max |U^dagger U - I|`` over all entries."""
    A = np.asarray(U)
    return float(np.max(np.abs(A.conj().T @ A - np.eye(A.shape[0]))))


def check_unitary(U, tol: float = UNITARY_TOL) -> np.ndarray:
    A = as_complex_matrix(U, square=True)
    res = unitarity_residual(A)
    if res > tol:
        raise ValueError(f"matrix is not unitary: residual {res:.3e} > {tol:.1e}")
    return A


def haar_random(m: int, seed: int) -> np.ndarray:
    """Haar-distributed ``m x m`` unitary from a seeded complex Ginibre draw.

    The Q factor of the QR decomposition is multiplied by the phases of
    R's diagonal, which makes the distribution exactly Haar.
    """
    if not 2 <= m <= 32:
        raise ValueError(f"haar_random supports 2 <= m <= 32, got {m}")
    rng = np.random.default_rng(seed)
    Z = (rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))) / np.sqrt(2.0)
    Q, R = np.linalg.qr(Z)
    d = np.diag(R)
    return Q * (d / np.abs(d))


def balanced_beamsplitter() -> np.ndarray:
    return np.array([[1.0, 1.0], [1.0, -1.0]], dtype=np.complex128) / np.sqrt(2.0)


@dataclass(frozen=True)
class MeshCell:
    layer: int
    pos: int
    theta: float
    phi: float


@dataclass
class MeshSpec:
    m: int
    cells: list[MeshCell] = field(default_factory=list)
    output_phases: list[float] = field(default_factory=list)

    def validate(self, full: bool = False) -> None:
        if self.m < 1:
            raise ValueError(f"mesh needs at least one mode, got m={self.m}")
        if len(self.output_phases) != self.m:
            raise ValueError(f"expected {self.m} output phases, got {len(self.output_phases)}")
        used: dict[int, set[int]] = {}
        for c in self.cells:
            if c.layer < 1:
                raise ValueError(f"layers are 1-based, got {c.layer}")
            if not 1 <= c.pos <= self.m - 1:
                raise ValueError(f"cell position {c.pos} does not address modes (pos, pos+1) within 1..{self.m}")
            modes = used.setdefault(c.layer, set())
            if c.pos in modes or c.pos + 1 in modes:
                raise ValueError(f"layer {c.layer} has overlapping cells at position {c.pos}")
            modes.update((c.pos, c.pos + 1))
        if full and len(self.cells) != self.m * (self.m - 1) // 2:
            raise ValueError(f"a full mesh has {self.m * (self.m - 1) // 2} cells, got {len(self.cells)}")

    @property
    def depth(self) -> int:
        return max((c.layer for c in self.cells), default=0)

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "cells": [{"layer": c.layer, "pos": c.pos, "theta": c.theta, "phi": c.phi} for c in self.cells],
            "output_phases": list(self.output_phases),
        }

    @classmethod
    def from_dict(cls, data: dict) -> MeshSpec:
        cells = [MeshCell(int(c["layer"]), int(c["pos"]), float(c["theta"]), float(c["phi"])) for c in data["cells"]]
        spec = cls(int(data["m"]), cells, [float(p) for p in data["output_phases"]])
        spec.validate()
        return spec

    def save(self, path: str | PathLike) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh)

    @classmethod
    def load(cls, path: str | PathLike) -> MeshSpec:
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


def cell_block(theta: float, phi: float) -> np.ndarray:
    c, s, e = np.cos(theta), np.sin(theta), np.exp(1j * phi)
    return np.array([[e * c, -s], [e * s, c]], dtype=np.complex128)


def compose_mesh(spec: MeshSpec) -> np.ndarray:
    """Transfer matrix (rows = inputs) realised by a square mesh."""
    spec.validate()
    V = np.eye(spec.m, dtype=np.complex128)
    for c in sorted(spec.cells, key=lambda c: (c.layer, c.pos)):
        a = c.pos - 1
        V[a : a + 2, :] = cell_block(c.theta, c.phi) @ V[a : a + 2, :]
    V = np.exp(1j * np.asarray(spec.output_phases))[:, None] * V
    return V.T


def _split_phase_cell(M: np.ndarray) -> tuple[float, float, float, float]:
    """Write a 2x2 unitary as ``diag(exp(i alpha), exp(i beta)) @ T(theta, phi)``."""
    c, s = abs(M[1, 1]), abs(M[1, 0])
    theta = float(np.arctan2(s, c))
    if c > 1e-14 and s > 1e-14:
        beta = np.angle(M[1, 1])
        alpha = np.angle(-M[0, 1])
        phi = np.angle(M[0, 0]) - alpha
    elif s <= 1e-14:
        beta = np.angle(M[1, 1])
        alpha, phi = np.angle(M[0, 0]), 0.0
    else:
        alpha, phi = np.angle(-M[0, 1]), 0.0
        beta = np.angle(M[1, 0])
    return float(alpha), float(beta), theta, float(phi)


def decompose_mesh(U, tol: float = UNITARY_TOL) -> MeshSpec:
    """Square-mesh parameters reproducing ``U`` through :func:`compose_mesh`.

    Alternately nulls the lower-left entries of the column-action matrix with
    inverse cells from the right and cells from the left, then pushes the
    left-hand cells through the remaining diagonal.
    """
    V = check_unitary(U, tol).T.copy()
    N = V.shape[0]
    right: list[tuple[int, float, float]] = []  # (a, theta, phi), applied first to the light
    left: list[tuple[int, float, float]] = []
    for i in range(1, N):
        if i % 2 == 1:
            for j in range(i):
                a = i - j - 1  # 0-based column pair (a, a+1)
                r = N - j - 1
                x, y = V[r, a], V[r, a + 1]
                theta = float(np.arctan2(abs(x), abs(y)))
                phi = float(np.angle(x) - np.angle(y))
                V[:, a : a + 2] = V[:, a : a + 2] @ cell_block(theta, phi).conj().T
                right.append((a, theta, phi))
        else:
            for j in range(1, i + 1):
                a = N + j - i - 2  # 0-based row pair (a, a+1)
                col = j - 1
                x, y = V[a, col], V[a + 1, col]
                theta = float(np.arctan2(abs(y), abs(x)))
                phi = float(np.angle(-y) - np.angle(x))
                V[a : a + 2, :] = cell_block(theta, phi) @ V[a : a + 2, :]
                left.append((a, theta, phi))
    phases = np.angle(np.diag(V)).astype(float)
    # V_orig = L_1^-1 ... L_k^-1 D R_p^-1 ... R_1^-1; move each L^-1 to the left of D.
    moved: list[tuple[int, float, float]] = []
    for a, theta, phi in reversed(left):
        M = cell_block(theta, phi).conj().T @ np.diag(np.exp(1j * phases[a : a + 2]))
        alpha, beta, theta2, phi2 = _split_phase_cell(M)
        phases[a], phases[a + 1] = alpha, beta
        moved.append((a, theta2, phi2))
    order = right + moved  # light order: first right cell ... last moved cell
    next_free = [1] * N
    cells = []
    for a, theta, phi in order:
        layer = max(next_free[a], next_free[a + 1])
        next_free[a] = next_free[a + 1] = layer + 1
        cells.append(MeshCell(layer, a + 1, theta, phi))
    cells.sort(key=lambda c: (c.layer, c.pos))
    return MeshSpec(N, cells, phases.tolist())
