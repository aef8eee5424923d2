from pathlib import Path

import numpy as np
import pytest

from pytmmse.harness import RunConfiguration
from pytmmse.sysmodel import (
    ChannelRealization,
    ScenarioParams,
    SignalFrame,
    draw_channel,
    synthesize_frame,
)

TINY_CONFIG = """
[scenario]
antennas = 8
users = 2
taps = 3
paths = 3
frame_length = 60
snr_db = 20

[filter]
dims = 2,2,2
rank = 2
max_iters = 10

[campaign]
trials = 3
seed = 7

[sweep.snr]
variable = snr_db
values = 10,20
"""


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def scenario() -> ScenarioParams:
    return ScenarioParams(
        antennas=16, users=2, taps=3, paths=3, frame_length=200, snr_db=20
    )


@pytest.fixture
def channel(scenario: ScenarioParams, rng: np.random.Generator) -> ChannelRealization:
    return draw_channel(scenario, rng)


@pytest.fixture
def frame(
    scenario: ScenarioParams, channel: ChannelRealization, rng: np.random.Generator
) -> SignalFrame:
    return synthesize_frame(scenario, channel, rng)


@pytest.fixture
def tiny_config_text() -> str:
    return TINY_CONFIG


@pytest.fixture
def tiny_config() -> RunConfiguration:
    return RunConfiguration.from_string(TINY_CONFIG)


@pytest.fixture
def tiny_config_file(tmp_path: Path) -> Path:
    path = tmp_path / "tiny.ini"
    path.write_text(TINY_CONFIG, encoding="utf-8")
    return path
