import asyncio
import logging
from concurrent.futures import Executor, ThreadPoolExecutor
from contextlib import ExitStack
from typing import Any, Self

from pytmmse.harness.campaign import ResultRow, TrialResult, aggregate, run_trial, trial_seed
from pytmmse.harness.config import Campaign, TrialConfig

_LOGGER = logging.getLogger(__name__)


class Simulator:
    """Runs campaigns on a worker pool.

    Trials are independent; results are gathered in submission order, so
    the rows do not depend on how the pool schedules them.
    """

    def __init__(self, workers: int = 1, executor: Executor | None = None) -> None:
        self._resources = ExitStack()
        self._workers = workers
        self._executor = executor

    async def __aenter__(self) -> Self:
        return await self.setup()

    async def setup(self) -> Self:
        if self._executor is None:
            self._executor = self._resources.enter_context(
                ThreadPoolExecutor(max_workers=self._workers, thread_name_prefix="trial")
            )
        return self

    async def aclose(self) -> None:
        self._resources.close()

    async def __aexit__(self, *args: Any) -> None:
        await self.aclose()

    async def run_point(
        self, config: TrialConfig, master_seed: int, sweep_index: int, trials: int
    ) -> list[TrialResult]:
        loop = asyncio.get_running_loop()
        return list(
            await asyncio.gather(
                *(
                    loop.run_in_executor(
                        self._executor,
                        run_trial,
                        config,
                        trial_seed(master_seed, sweep_index, trial),
                    )
                    for trial in range(trials)
                )
            )
        )

    async def run(self, campaign: Campaign) -> list[ResultRow]:
        configs = campaign.trial_configs()
        _LOGGER.info(
            "Campaign %s: %s over %s, %d trials per point",
            campaign.name,
            campaign.variable,
            list(campaign.values),
            campaign.trials,
        )
        rows: list[ResultRow] = []
        for index, (value, config) in enumerate(zip(campaign.values, configs, strict=True)):
            results = await self.run_point(config, campaign.seed, index, campaign.trials)
            rows.extend(aggregate(value, results, campaign.seed, config.equalizers))
        _LOGGER.info("Campaign %s finished: %d rows", campaign.name, len(rows))
        return sorted(rows, key=lambda row: (row.sweep_value, row.equalizer))


def run_campaign(campaign: Campaign) -> list[ResultRow]:
    """Blocking front door of ``Simulator.run``."""

    async def _run() -> list[ResultRow]:
        async with Simulator(campaign.workers) as simulator:
            return await simulator.run(campaign)

    return asyncio.run(_run())
