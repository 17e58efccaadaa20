import numpy as np
import pytest

from bosim.interferometer import (
    MeshCell,
    MeshSpec,
    balanced_beamsplitter,
    compose_mesh,
    decompose_mesh,
    haar_random,
    unitarity_residual,
)


def test_haar_unitarity_and_determinism():
    U = haar_random(16, 7)
    assert unitarity_residual(U) <= 1e-9
    assert np.array_equal(U, haar_random(16, 7))
    assert abs(abs(np.linalg.det(haar_random(2, 123))) - 1) <= 1e-9
    assert np.allclose(np.linalg.norm(U, axis=0), 1, atol=1e-9)


@pytest.mark.parametrize("m", [1, 33])
def test_haar_range(m):
    with pytest.raises(ValueError):
        haar_random(m, 0)


def test_haar_second_moment():
    vals = [abs(haar_random(3, s)[0, 0]) ** 2 for s in range(1000)]
    assert abs(np.mean(vals) - 1 / 3) < 0.02


def test_compose_identity_and_balanced_splitter():
    spec = MeshSpec(3, [MeshCell(1, 1, 0.0, 0.0), MeshCell(2, 2, 0.0, 0.0), MeshCell(3, 1, 0.0, 0.0)], [0.0] * 3)
    assert np.allclose(compose_mesh(spec), np.eye(3))
    bs = compose_mesh(MeshSpec(2, [MeshCell(1, 1, np.pi / 4, 0.0)], [0.0, 0.0]))
    assert np.allclose(np.abs(bs) ** 2, 0.5)


@pytest.mark.parametrize("m", range(2, 17))
def test_round_trip_haar(m):
    U = haar_random(m, 100 + m)
    spec = decompose_mesh(U)
    assert len(spec.cells) == m * (m - 1) // 2
    spec.validate(full=True)
    assert spec.depth <= m
    assert np.max(np.abs(compose_mesh(spec) - U)) <= 1e-8


def test_round_trip_examples():
    spec = decompose_mesh(np.eye(4))
    assert all(abs(np.sin(c.theta)) < 1e-12 for c in spec.cells)
    assert np.max(np.abs(compose_mesh(spec) - np.eye(4))) <= 1e-8
    assert np.max(np.abs(compose_mesh(decompose_mesh(haar_random(8, 1))) - haar_random(8, 1))) <= 1e-8
    assert len(decompose_mesh(haar_random(16, 2)).cells) == 120
    assert np.max(np.abs(compose_mesh(decompose_mesh(balanced_beamsplitter())) - balanced_beamsplitter())) <= 1e-8


def test_decompose_rejects_non_unitary():
    with pytest.raises(ValueError):
        decompose_mesh(np.ones((3, 3)))


@pytest.mark.parametrize(
    "cells, phases",
    [
        ([MeshCell(1, 3, 0.1, 0.0)], [0.0] * 3),  # position past the last pair
        ([MeshCell(1, 1, 0.1, 0.0), MeshCell(1, 2, 0.1, 0.0)], [0.0] * 3),  # overlapping in one layer
        ([MeshCell(0, 1, 0.1, 0.0)], [0.0] * 3),
        ([], [0.0] * 2),
    ],
)
def test_malformed_mesh(cells, phases):
    with pytest.raises(ValueError):
        compose_mesh(MeshSpec(3, cells, phases))


def test_mesh_file_round_trip(tmp_path):
    spec = decompose_mesh(haar_random(5, 3))
    spec.save(tmp_path / "mesh.json")
    back = MeshSpec.load(tmp_path / "mesh.json")
    assert back.to_dict() == spec.to_dict()
    assert np.allclose(compose_mesh(back), haar_random(5, 3), atol=1e-8)
