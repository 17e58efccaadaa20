"""Tell boson data from distinguishable and uniform impostors with two running counters."""
from bosim.distributions import distinguishable_distribution, lossy_source_distribution, uniform_distribution
from bosim.interferometer import haar_random
from bosim.sampler import sample
from bosim.validation import lr_test, rne_test, rne_threshold

m, inputs, detect = 16, [1, 2, 3, 4], 3
U = haar_random(m, seed=21)
boson = sample(lossy_source_distribution(U, inputs, detect), 1000, seed=0)
classical = sample(distinguishable_distribution(U, inputs, detect), 1000, seed=1)
flat = sample(uniform_distribution(m, detect), 1000, seed=2)

for name, log in (("boson", boson), ("distinguishable", classical)):
    trace = lr_test(log, U, inputs, detect)
    print(f"LR  on {name:<16} final={trace.final:+5d}  verdict={trace.verdict}")

print(f"RNE threshold (n/m)^n = {rne_threshold(m, detect):.5f}")
for name, log in (("boson", boson), ("uniform", flat)):
    trace = rne_test(log, U, inputs, detect)
    print(f"RNE on {name:<16} final={trace.final:+5d}  verdict={trace.verdict}")
