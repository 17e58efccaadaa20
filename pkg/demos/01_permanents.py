"""Permanents by brute force and by Ryser's formula, and what they predict for two photons."""
import math
import time

import numpy as np

from bosim import perm_naive, perm_ryser
from bosim.distributions import standard_distribution
from bosim.interferometer import balanced_beamsplitter
from bosim.permanent import perm_ryser_batch

rng = np.random.default_rng(0)
M = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
print("naive :", perm_naive(M))
print("ryser :", perm_ryser(M))

# all-ones matrices count permutations
for n in (3, 5, 8):
    print(f"perm(ones({n})) = {perm_ryser(np.ones((n, n))).real:.0f}  n! = {math.factorial(n)}")

# the batched routine amortises the Gray-code walk across a stack
stack = rng.normal(size=(2000, 7, 7)) + 1j * rng.normal(size=(2000, 7, 7))
t = time.perf_counter()
batch = perm_ryser_batch(stack)
print(f"2000 permanents of 7x7 in {time.perf_counter() - t:.3f}s")
print("batch agrees with scalar:", np.allclose(batch[:5], [perm_ryser(a) for a in stack[:5]]))

# two photons on a 50:50 splitter never leave through different ports
hom = standard_distribution(balanced_beamsplitter(), [1, 2], no_collision_only=False)
for pattern, p in hom.as_dict().items():
    print(pattern, round(p, 12))
