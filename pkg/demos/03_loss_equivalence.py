"""Uniform loss gives the same detected distribution whether photons vanish before or after the chip."""
import time

from bosim.distributions import (
    lossy_both_distribution,
    lossy_detector_distribution,
    lossy_source_distribution,
    tvd,
)
from bosim.interferometer import haar_random
from bosim.loss import uniform_profile

U = haar_random(16, seed=11)
inputs = [1, 2, 3, 4, 5]
profile = uniform_profile(16, len(inputs), xi=0.85, eps=0.53)

t = time.perf_counter()
source = lossy_source_distribution(U, inputs, 3, profile)
both = lossy_both_distribution(U, inputs, 3, 1, 1, profile)
det = lossy_detector_distribution(U, inputs, 3, profile, mode="physical")
literal = lossy_detector_distribution(U, inputs, 3, profile, mode="paper_literal")
print(f"built four distributions over {len(source.support)} patterns in {time.perf_counter() - t:.2f}s")

print("TVD source vs both      :", tvd(source, both))
print("TVD source vs detector  :", tvd(source, det))
# summing lost completions without the 1/e! divisor over-weights bunched losses
print("TVD source vs literal   :", tvd(source, literal))
