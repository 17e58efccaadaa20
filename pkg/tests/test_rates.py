import math

import pytest

from bosim.rates import RateParams, projected_rate, rate_table, speedup_factor, write_rate_table


def test_speedup_factors():
    assert [speedup_factor(3, k) for k in range(1, 5)] == [4, 10, 20, 35]
    assert speedup_factor(9, 0) == 1
    assert speedup_factor(5, 2) == 21


def test_speedup_is_exact_integer():
    for n in range(1, 60):
        for k in range(0, 61 - n):
            f = speedup_factor(n, k)
            assert isinstance(f, int) and f == math.comb(n + k, k)


def test_projected_rate_model():
    p = RateParams(rep_rate=1e6, eta_source=0.8, eta_interf=0.9, eta_det=0.9, demux_duty=0.5)
    assert projected_rate(p, 4, 0) == pytest.approx(5e5 * p.eta**4)
    for k in range(6):
        ratio = projected_rate(p, 50, k) / projected_rate(p, 50, 0)
        assert ratio == pytest.approx(math.comb(50 + k, k) * (1 - p.eta) ** k, rel=1e-12)


def test_fifty_photon_rates_grow_with_loss():
    p = RateParams(eta_source=0.8, eta_interf=0.9, eta_det=0.9)
    assert p.eta == pytest.approx(0.648)
    rates = [projected_rate(p, 50, k) for k in range(6)]
    assert all(a < b for a, b in zip(rates, rates[1:]))


def test_invalid_params():
    with pytest.raises(ValueError):
        RateParams(rep_rate=0)
    with pytest.raises(ValueError):
        RateParams(eta_det=1.2)
    with pytest.raises(ValueError):
        speedup_factor(0, 1)


def test_rate_csv(tmp_path):
    write_rate_table(rate_table(RateParams(), [3], range(3)), tmp_path / "r.csv")
    lines = (tmp_path / "r.csv").read_text().splitlines()
    assert lines[0] == "n,k,factor,rate_hz" and lines[2].startswith("3,1,4,")
