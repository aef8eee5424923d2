import itertools

import numpy as np
import pytest

from pytmmse import run_campaign
from pytmmse.equalizers import InitStrategy, LrTmmseConfig, lr_tmmse_train, mmse_sample
from pytmmse.harness import RunConfiguration, emit_csv, run_trial, trial_seed
from pytmmse.helper import complex_normal
from pytmmse.sysmodel import ScenarioParams, draw_channel, synthesize_frame
from pytmmse.tensor import CpFilter, cp_element, reshape_vector_to_tensor, vectorize_cp


def desk_rows(sweep, **overrides):
    run_config = RunConfiguration.shipped("desk")
    for key, raw in overrides.items():
        run_config.override(key, raw)
    run_config.override_sweep(sweep)
    (campaign,) = run_config.campaigns()
    rows = run_campaign(campaign)
    by_equalizer: dict[str, dict[float, float]] = {}
    for row in rows:
        by_equalizer.setdefault(row.equalizer, {})[row.sweep_value] = row.sinr_db
    return by_equalizer


def test_cp_filters_agree_elementwise():
    rng = np.random.default_rng(2)
    for _ in range(100):
        order = int(rng.integers(1, 5))
        dims = tuple(int(n) for n in rng.integers(1, 5, size=order))
        f = CpFilter.random(dims, int(rng.integers(1, 5)), rng)
        t = reshape_vector_to_tensor(vectorize_cp(f), dims)
        for index in itertools.product(*(range(1, n + 1) for n in dims)):
            element = cp_element(f, index)
            assert abs(t[index] - element) <= 1e-12 * max(1.0, abs(element))


def test_single_mode_reduction_on_many_frames():
    rng = np.random.default_rng(3)
    config = LrTmmseConfig(
        dims=(16,), rank=1, max_iters=1, loading=0.0, init=InitStrategy.CANONICAL
    )
    for _ in range(50):
        x, s = complex_normal(rng, (16, 64)), complex_normal(rng, 64)
        w_mmse = mmse_sample(x, s).w
        w_tensor = lr_tmmse_train(x, s, config).w_vec
        assert np.linalg.norm(w_tensor - w_mmse) <= 1e-9 * np.linalg.norm(w_mmse)


def test_block_descent_is_monotone():
    params = ScenarioParams(antennas=16, frame_length=200)
    config = LrTmmseConfig(dims=(4, 4), rank=2, loading=0.0, epsilon=1e-6)
    for trial in range(100):
        rng = np.random.default_rng(trial)
        frame = synthesize_frame(params, draw_channel(params, rng), rng)
        report = lr_tmmse_train(frame.received, frame.training(0, 0), config, rng=rng)
        assert np.all(np.diff(report.mse_trace) <= 1e-10)


@pytest.mark.slow
def test_rank_ordering():
    tensor = desk_rows("R=1,3,4")["lr-tmmse"]
    assert tensor[3.0] - tensor[1.0] >= 2.0
    assert abs(tensor[3.0] - tensor[4.0]) <= 1.5


@pytest.mark.slow
def test_two_mode_filter_leads_at_high_snr():
    tensor = desk_rows("D=2,3,4,5", snr_db="30")["lr-tmmse"]
    assert tensor[2.0] > max(tensor[3.0], tensor[4.0], tensor[5.0])


@pytest.mark.slow
def test_theoretical_mmse_bounds_tensor_filter():
    sinr = desk_rows("snr_db=0,10,20,30")
    for snr_db in (0.0, 10.0, 20.0, 30.0):
        assert sinr["mmse-theoretical"][snr_db] + 0.1 >= sinr["lr-tmmse"][snr_db]


@pytest.mark.slow
def test_sample_mmse_approaches_theory_with_k():
    sinr = desk_rows("K=200,600,2000")
    gaps = [
        sinr["mmse-theoretical"][k] - sinr["mmse-sample"][k] for k in (200.0, 600.0, 2000.0)
    ]
    assert gaps[0] > gaps[1] > gaps[2]


@pytest.mark.slow
def test_shipped_campaigns_are_byte_identical(tmp_path):
    def run(directory):
        run_config = RunConfiguration.shipped("desk")
        run_config.override("trials", "5")
        return [
            emit_csv(run_campaign(campaign), directory / f"{campaign.name}.csv").read_bytes()
            for campaign in run_config.campaigns()
        ]

    assert run(tmp_path / "first") == run(tmp_path / "second")


@pytest.mark.slow
def test_tensor_filter_converges_quickly():
    (campaign,) = [c for c in RunConfiguration.shipped("desk").campaigns() if c.name == "snr_r3"]
    config = campaign.base.with_sweep("snr_db", 20.0)
    outcomes = [
        run_trial(config, trial_seed(campaign.seed, 0, trial)).outcomes["lr-tmmse"]
        for trial in range(campaign.trials)
    ]
    quick = [o.converged and o.iterations <= 3 for o in outcomes]
    assert np.mean(quick) >= 0.9
