import json

import numpy as np
import pytest
from scipy import stats

from bosim.distributions import Distribution, point_mass, standard_distribution, tvd, uniform_distribution
from bosim.interferometer import haar_random
from bosim.patterns import OutputPattern
from bosim.sampler import EventLog, counts, empirical_distribution, sample


def test_point_mass_sampling():
    log = sample(point_mass(6, 2, [2, 5]), 50, seed=3)
    assert set(log.events) == {OutputPattern([2, 5])}


def test_uniform_frequencies_within_five_sigma():
    u = uniform_distribution(16, 3)
    N = 56000
    c = counts(sample(u, N, seed=11), u)
    p = 1 / 560
    sigma = np.sqrt(N * p * (1 - p))
    assert np.all(np.abs(c - N * p) <= 5 * sigma)


def test_large_sample_close_to_exact():
    d = standard_distribution(haar_random(16, 0), [1, 2, 3])
    emp = empirical_distribution(sample(d, 400000, seed=5), d)
    assert tvd(emp, d) <= 0.03


def test_empirical_converges():
    d = standard_distribution(haar_random(10, 1), [1, 2, 3])
    dists = [tvd(empirical_distribution(sample(d, N, seed=9), d), d) for N in (1000, 10000, 100000)]
    assert dists[0] > dists[1] > dists[2]


def test_chi_square_goodness_of_fit():
    d = standard_distribution(haar_random(16, 2), [1, 2, 3])
    N = 100000
    for seed in range(20):
        c = counts(sample(d, N, seed), d)
        assert stats.chisquare(c, N * d.probs).pvalue > 0.001


def test_determinism(tmp_path):
    d = uniform_distribution(8, 3)
    sample(d, 200, 42).to_jsonl(tmp_path / "a.jsonl")
    sample(d, 200, 42).to_jsonl(tmp_path / "b.jsonl")
    assert (tmp_path / "a.jsonl").read_bytes() == (tmp_path / "b.jsonl").read_bytes()
    assert sample(d, 200, 43).events != sample(d, 200, 42).events


def test_zero_probability_patterns_never_drawn():
    support = [OutputPattern(p) for p in ([1, 2], [1, 3], [2, 3])]
    d = Distribution(3, 2, support, [0.0, 1.0, 0.0])
    assert set(sample(d, 500, 1).events) == {support[1]}


def test_rejects_bad_inputs():
    d = uniform_distribution(5, 2)
    un = Distribution(5, 2, list(d.support), d.probs * 2, normalized=False)
    with pytest.raises(ValueError):
        sample(un, 10, 0)
    with pytest.raises(ValueError):
        sample(d, 0, 0)
    log = EventLog(6, 2, [[1, 6]])
    with pytest.raises(ValueError):
        empirical_distribution(log, Distribution(6, 2, [OutputPattern([1, 2])], [1.0]))
    with pytest.raises(ValueError):
        EventLog(6, 2, [[1, 1]])


def test_single_repeated_event_is_point_mass():
    u = uniform_distribution(6, 2)
    emp = empirical_distribution(EventLog(6, 2, [[2, 4]] * 7), u)
    assert emp.prob([2, 4]) == 1.0 and emp.probs.sum() == 1.0


def test_jsonl_format(tmp_path):
    log = sample(uniform_distribution(16, 3), 5, seed=1)
    log.to_jsonl(tmp_path / "e.jsonl")
    lines = (tmp_path / "e.jsonl").read_text().splitlines()
    head = json.loads(lines[0])
    assert head == {"m": 16, "n": 3, "seed": 1, "source": "uniform", "rng": "numpy.PCG64"}
    assert all(json.loads(ln) == sorted(json.loads(ln)) for ln in lines[1:])
    back = EventLog.from_jsonl(tmp_path / "e.jsonl")
    assert back.events == log.events and back.source == "uniform"


def test_jsonl_reader_sorts_unsorted_events(tmp_path):
    (tmp_path / "x.jsonl").write_text('{"m": 5, "n": 2, "seed": null, "source": "external", "rng": "none"}\n[4, 1]\n')
    assert EventLog.from_jsonl(tmp_path / "x.jsonl").events == [OutputPattern([1, 4])]
