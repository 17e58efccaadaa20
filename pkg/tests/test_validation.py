import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bosim.distributions import distinguishable_distribution, lossy_source_distribution, uniform_distribution
from bosim.interferometer import haar_random
from bosim.loss import LossProfile
from bosim.sampler import EventLog, sample
from bosim.validation import lr_step, lr_test, lr_trace, rne_test, rne_threshold, row_norm_estimators

INPUTS, DETECT, M = [1, 2, 3, 4], 3, 16


@pytest.mark.parametrize(
    "L, step",
    [(1.0, 0), (0.95, 0), (1 / 0.9, 1), (1.2, 1), (1.5, 2), (10.0, 2), (0.9, -1), (0.7, -1), (1 / 1.5, -1), (0.5, -2), (0.0, -2)],
)
def test_lr_cases(L, step):
    assert lr_step(L, 0.9, 1.5) == step


def test_single_neutral_event_leaves_counter():
    assert lr_trace([0.5], [0.5 / 1.05]).tolist() == [0]


def test_lr_rejects_bad_thresholds():
    with pytest.raises(ValueError):
        lr_trace([1.0], [1.0], a1=1.2, a2=1.5)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(1e-6, 1.0), min_size=1, max_size=60), st.floats(0.01, 100.0), st.integers(0, 2**31))
def test_lr_steps_bounded_and_scale_invariant(p, c, seed):
    p_ind = np.array(p)
    p_dis = np.random.default_rng(seed).uniform(1e-6, 1.0, len(p))
    trace = lr_trace(p_ind, p_dis)
    assert np.all(np.abs(np.diff(np.concatenate([[0], trace]))) <= 2)
    assert np.array_equal(trace, lr_trace(c * p_ind, c * p_dis)) or np.any(
        np.isclose(p_ind / p_dis, [0.9, 1 / 0.9, 1.5, 1 / 1.5], rtol=1e-12)
    )


def test_log_space_agrees_with_linear():
    rng = np.random.default_rng(0)
    a, b = rng.uniform(0.001, 1, 200), rng.uniform(0.001, 1, 200)
    assert np.array_equal(lr_trace(a, b), lr_trace(a, b, log_space=True))


def _logs(seed, N):
    U = haar_random(M, seed)
    boson = lossy_source_distribution(U, INPUTS, DETECT)
    dist = distinguishable_distribution(U, INPUTS, DETECT)
    unif = uniform_distribution(M, DETECT)
    return U, sample(boson, N, 10 * seed + 1), sample(dist, N, 10 * seed + 2), sample(unif, N, 10 * seed + 3)


def test_verdicts_small_monte_carlo():
    ok = {"lr_b": 0, "lr_d": 0, "rne_b": 0, "rne_u": 0}
    for seed in range(20):
        U, b, d, u = _logs(seed, 1000)
        ok["lr_b"] += lr_test(b, U, INPUTS, DETECT).final > 0
        ok["lr_d"] += lr_test(d, U, INPUTS, DETECT).final < 0
        ok["rne_b"] += rne_test(b, U, INPUTS, DETECT).final > 0
        ok["rne_u"] += rne_test(u, U, INPUTS, DETECT).final < 0
    assert min(ok.values()) >= 19, ok


def test_trace_invariants_and_verdict_labels():
    U, b, d, u = _logs(3, 400)
    lr = lr_test(b, U, INPUTS, DETECT)
    rne = rne_test(u, U, INPUTS, DETECT)
    assert np.all(np.abs(lr.steps()) <= 2) and np.all(np.abs(rne.steps()) == 1)
    assert lr.verdict == "boson" and rne.verdict == "uniform"
    assert lr_test(d, U, INPUTS, DETECT).verdict == "distinguishable"
    assert np.array_equal(lr.values, lr_test(b, U, INPUTS, DETECT).values)


def test_discrimination_grows_with_events():
    totals = {500: np.zeros(4), 2000: np.zeros(4)}
    for seed in range(8):
        U, b, d, u = _logs(seed, 2000)
        for N in totals:
            totals[N] += np.abs([
                lr_test(b[:N], U, INPUTS, DETECT).final,
                lr_test(d[:N], U, INPUTS, DETECT).final,
                rne_test(b[:N], U, INPUTS, DETECT).final,
                rne_test(u[:N], U, INPUTS, DETECT).final,
            ])
    assert np.all(totals[2000] > totals[500])


def test_rne_degenerate_single_pattern():
    assert rne_threshold(4, 4) == 1.0
    U = haar_random(4, 0)
    est = row_norm_estimators(U, [1, 2, 3, 4], 4, [[1, 2, 3, 4]])
    assert est[0] == pytest.approx(1.0, abs=1e-12)
    assert rne_threshold(16, 3) == (3 / 16) ** 3


def test_weighted_lr_and_rne_on_nonuniform_loss():
    U = haar_random(M, 5)
    prof = LossProfile((0.9, 0.7, 0.8, 0.85), tuple(np.linspace(0.3, 0.75, M)))
    boson = lossy_source_distribution(U, INPUTS, DETECT, prof)
    log = sample(boson, 1500, 1)
    assert lr_test(log, U, INPUTS, DETECT, prof).final > 0
    assert rne_test(log, U, INPUTS, DETECT, prof).final > 0
    assert lr_test(log, U, INPUTS, DETECT, prof, weighted=False).final > 0


def test_unconditioned_likelihoods_are_biased_low():
    U, b, _, _ = _logs(1, 1000)
    assert lr_test(b, U, INPUTS, DETECT, post_selected=False).final < lr_test(b, U, INPUTS, DETECT).final


def test_log_space_path_for_seven_photons():
    U = haar_random(8, 2)
    inputs = list(range(1, 9))
    d = lossy_source_distribution(U, inputs, 7)
    log = sample(d, 60, 0)
    assert len(lr_test(log, U, inputs, 7).values) == 60
    assert len(rne_test(log, U, inputs, 7).values) == 60


def test_incompatible_log():
    U = haar_random(M, 0)
    with pytest.raises(ValueError):
        lr_test(EventLog(10, 3, [[1, 2, 3]]), U, INPUTS, DETECT)
    with pytest.raises(ValueError):
        rne_test(EventLog(16, 2, [[1, 2]]), U, INPUTS, DETECT)


def test_trace_files(tmp_path):
    U, b, _, _ = _logs(0, 30)
    tr = rne_test(b, U, INPUTS, DETECT)
    tr.to_csv(tmp_path / "t.csv")
    tr.write_summary(tmp_path / "v.json")
    lines = (tmp_path / "t.csv").read_text().splitlines()
    assert lines[0] == "event_index,counter" and len(lines) == 31
    summary = json.loads((tmp_path / "v.json").read_text())
    assert set(summary) == {"test", "final", "verdict", "params"}
