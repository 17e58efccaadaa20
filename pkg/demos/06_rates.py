"""How much faster post-selecting n of n+k photons fills up the detectors."""
from bosim.rates import RateParams, projected_rate, rate_table, speedup_factor

print("combinatorial gain for n=3:", [speedup_factor(3, k) for k in range(1, 5)])

params = RateParams()
print(f"eta={params.eta:.3f}, attempts/s={params.attempt_rate:.3g}")
for n, k, factor, rate in rate_table(params, [10, 30, 50], range(0, 3)):
    print(f"n={n:>2} k={k}  C(n+k,k)={factor:>5}  rate={rate:.3e} Hz")

gain = projected_rate(params, 50, 2) / projected_rate(params, 50, 0)
print(f"50 photons, k=2 over k=0: x{gain:.0f}")
