"""Decompose a Haar-random unitary into a square mesh of two-mode cells and rebuild it."""
import numpy as np

from bosim.interferometer import MeshSpec, compose_mesh, decompose_mesh, haar_random, unitarity_residual

U = haar_random(8, seed=3)
print("unitarity residual:", unitarity_residual(U))

spec = decompose_mesh(U)
print(f"{len(spec.cells)} cells over {spec.depth} layers for m={spec.m}")
print("first cells:", spec.cells[:3])

V = compose_mesh(spec)
print("max |compose(decompose(U)) - U|:", np.abs(V - U).max())

# the mesh serialises to plain JSON
again = MeshSpec.from_dict(spec.to_dict())
print("JSON round trip exact:", np.array_equal(compose_mesh(again), V))

# a 16-mode device needs 120 cells
print("m=16 cells:", len(decompose_mesh(haar_random(16, 0)).cells))
