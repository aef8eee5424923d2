"""INI run configuration.

Sections ``[scenario]``, ``[filter]`` and ``[campaign]`` hold the base
trial; every ``[sweep.<name>]`` section becomes one campaign and may
override any base key.
"""

import logging
import os
from collections.abc import Iterable, Mapping
from configparser import ConfigParser
from configparser import Error as ConfigParserError
from dataclasses import dataclass, replace
from importlib import resources
from math import prod
from pathlib import Path
from typing import Any, Self

from pytmmse import const
from pytmmse.equalizers import LrTmmseConfig
from pytmmse.exceptions import ConfigurationError
from pytmmse.helper import prime_factors
from pytmmse.parameter import (
    EnumParameter,
    FlagParameter,
    Parameter,
    RangeParameter,
    SequenceParameter,
)
from pytmmse.sysmodel import ScenarioParams

_LOGGER = logging.getLogger(__name__)

SWEEP_PREFIX = "sweep."

_RANGE: dict[str, Any] = {"typology": "range"}
_COUNT: dict[str, Any] = {"typology": "range", "integer": True, "minimumValue": 1}
_FLAG: dict[str, Any] = {"typology": "flag"}

_SCHEMA: dict[str, dict[str, dict[str, Any]]] = {
    "scenario": {
        "antennas": _COUNT | {"defaultValue": 64},
        "users": _COUNT | {"defaultValue": const.USERS},
        "taps": _COUNT | {"defaultValue": const.TAPS},
        "paths": _COUNT | {"defaultValue": const.PATHS},
        "frame_length": _COUNT | {"defaultValue": const.FRAME_LENGTH},
        "symbol_variance": _RANGE | {"minimumValue": 1e-300, "defaultValue": 1.0},
        "snr_db": _RANGE | {"defaultValue": 20},
        "max_delay": _RANGE | {"minimumValue": 0},
        "normalize_gains": _FLAG | {"defaultValue": "no"},
        "user": _COUNT | {"minimumValue": 0, "defaultValue": 0},
    },
    "filter": {
        "dims": {"typology": "sequence", "item": _COUNT, "defaultValue": "4,4,4"},
        "rank": _COUNT | {"defaultValue": 3},
        "max_iters": _COUNT | {"defaultValue": const.MAX_ITERATIONS},
        "epsilon": _RANGE | {"minimumValue": 1e-300, "defaultValue": const.EPSILON},
        "loading": _RANGE | {"minimumValue": 0, "defaultValue": const.LOADING},
        "relative_loading": _FLAG | {"defaultValue": "yes"},
        "init": {
            "typology": "enum",
            "enumValues": ["canonical", "canonical-perturbed", "random", "matched"],
            "defaultValue": "canonical-perturbed",
        },
        "perturbation": _RANGE | {"minimumValue": 0, "defaultValue": const.PERTURBATION},
        "sample_loading": _RANGE | {"minimumValue": 0, "defaultValue": 0},
    },
    "campaign": {
        "equalizers": {
            "typology": "sequence",
            "defaultValue": ",".join(const.EQUALIZER_IDS),
        },
        "delta_rule": {
            "typology": "enum",
            "enumValues": ["genie", "training"],
            "defaultValue": "genie",
        },
        "trials": _COUNT | {"defaultValue": 100},
        "seed": _COUNT | {"minimumValue": 0, "defaultValue": 0},
        "workers": _COUNT | {"defaultValue": 1},
        "count_products": _FLAG | {"defaultValue": "yes"},
        "output": {"typology": "text"},
    },
    "sweep": {
        "variable": {"typology": "enum", "enumValues": list(const.SWEEP_VARIABLES)},
        "values": {"typology": "sequence", "item": _RANGE},
    },
}


def _create_parameter(name: str, data: dict[str, Any], group: str) -> Parameter:
    match data.get("typology"):
        case "range":
            return RangeParameter(name, data, group)
        case "enum":
            return EnumParameter(name, data, group)
        case "flag":
            return FlagParameter(name, data, group)
        case "sequence":
            return SequenceParameter(name, data, group)
        case _:
            return Parameter(name, data, group)


def balanced_factorization(antennas: int, order: int) -> tuple[int, ...]:
    """Split ``antennas`` into ``order`` factors that are as equal as possible.

    Prime factors are dealt largest-first to the currently smallest
    dimension; every dimension must end up larger than one.
    """
    if antennas < 1 or order < 1:
        raise ConfigurationError(f"Cannot factor N={antennas} into D={order} dims")
    primes = prime_factors(antennas)
    if order == 1:
        return (antennas,)
    if len(primes) < order:
        raise ConfigurationError(
            f"N={antennas} has only {len(primes)} prime factors, cannot build D={order} dims"
        )
    dims = [1] * order
    for p in primes:
        dims[dims.index(min(dims))] *= p
    return tuple(sorted(dims, reverse=True))


@dataclass(frozen=True)
class TrialConfig:
    scenario: ScenarioParams
    filter: LrTmmseConfig
    equalizers: tuple[str, ...] = const.EQUALIZER_IDS
    delta_rule: str = "genie"
    user: int = 0
    sample_loading: float = 0.0
    count_products: bool = True

    def __post_init__(self) -> None:
        if prod(self.filter.dims) != self.scenario.antennas:
            raise ConfigurationError(
                f"Filter dims {self.filter.dims} do not factor N={self.scenario.antennas}"
            )
        if not 0 <= self.user < self.scenario.users:
            raise ConfigurationError(
                f"Target user {self.user} outside 0..{self.scenario.users - 1}"
            )
        unknown = set(self.equalizers) - set(const.EQUALIZER_IDS)
        if unknown or not self.equalizers:
            raise ConfigurationError(
                f"Allowed equalizers: {list(const.EQUALIZER_IDS)} But was: {self.equalizers}"
            )

    def with_sweep(self, variable: str, value: float) -> "TrialConfig":
        """Copy with one sweep variable set; D and N sweeps refactor the dims."""
        scenario, filter_config = self.scenario, self.filter
        match variable:
            case "snr_db":
                scenario = replace(scenario, snr_db=float(value))
            case "K":
                scenario = replace(scenario, frame_length=_as_int(variable, value))
            case "R":
                filter_config = replace(filter_config, rank=_as_int(variable, value))
            case "D":
                dims = balanced_factorization(scenario.antennas, _as_int(variable, value))
                filter_config = replace(filter_config, dims=dims)
            case "N":
                antennas = _as_int(variable, value)
                dims = balanced_factorization(antennas, filter_config.order)
                scenario = replace(scenario, antennas=antennas)
                filter_config = replace(filter_config, dims=dims)
            case _:
                raise ConfigurationError(
                    f"Allowed sweep variables: {list(const.SWEEP_VARIABLES)} But was: {variable}"
                )
        return replace(self, scenario=scenario, filter=filter_config)


def _as_int(variable: str, value: float) -> int:
    if value != int(value) or value < 1:
        raise ConfigurationError(f"Sweep over {variable} needs positive integers, got {value}")
    return int(value)


@dataclass(frozen=True)
class Campaign:
    name: str
    variable: str
    values: tuple[float, ...]
    trials: int
    base: TrialConfig
    seed: int = 0
    output: Path | None = None
    workers: int = 1

    def __post_init__(self) -> None:
        if not self.values:
            raise ConfigurationError(f"Campaign {self.name} has no sweep values")
        if self.trials < 1:
            raise ConfigurationError(f"Campaign {self.name} needs at least one trial")
        if self.variable not in const.SWEEP_VARIABLES:
            raise ConfigurationError(
                f"Allowed sweep variables: {list(const.SWEEP_VARIABLES)} But was: {self.variable}"
            )

    def trial_configs(self) -> list[TrialConfig]:
        """One validated config per sweep value, in sweep order."""
        return [self.base.with_sweep(self.variable, value) for value in self.values]


def default_output_dir() -> Path:
    return Path(os.environ.get(const.OUTPUT_DIR_ENV, const.DEFAULT_OUTPUT_DIR))


class RunConfiguration:
    def __init__(self, parser: ConfigParser) -> None:
        self._parser = parser
        self._overrides: dict[str, str] = {}
        self._sweep_override: tuple[str, str] | None = None

    @classmethod
    def from_string(cls, text: str) -> Self:
        parser = ConfigParser()
        try:
            parser.read_string(text)
        except ConfigParserError as error:
            raise ConfigurationError(f"Malformed configuration: {error}") from error
        return cls(parser)

    @classmethod
    def from_file(cls, path: Path) -> Self:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as error:
            raise ConfigurationError(f"Cannot read configuration {path}: {error}") from error
        _LOGGER.info("Loading configuration %s", path)
        return cls.from_string(text)

    @classmethod
    def shipped(cls, name: str = "desk") -> Self:
        """One of the configurations bundled with the package (desk, full)."""
        source = resources.files("pytmmse.configs").joinpath(f"{name}.ini")
        if not source.is_file():
            raise ConfigurationError(f"No shipped configuration named {name}")
        return cls.from_string(source.read_text(encoding="utf-8"))

    def override(self, key: str, raw: str) -> None:
        """CLI override of a base key; wins over every section."""
        self._group_of(key)
        self._overrides[key] = str(raw)

    def override_sweep(self, sweep: str) -> None:
        """``VAR=v1,v2,...`` replaces the configured sweeps."""
        variable, sep, values = sweep.partition("=")
        if not sep:
            raise ConfigurationError(f"Sweep must look like VAR=v1,v2,... But was: {sweep}")
        self._sweep_override = (variable.strip(), values)

    @staticmethod
    def _group_of(key: str) -> str:
        for group, keys in _SCHEMA.items():
            if group != "sweep" and key in keys:
                return group
        raise ConfigurationError(f"Unknown configuration key: {key}")

    def _resolve(self, sections: Iterable[Mapping[str, str]]) -> dict[str, Any]:
        raw: dict[str, str] = {}
        for section in sections:
            for key, value in section.items():
                self._group_of(key)
                raw[key] = value
        raw |= self._overrides

        values: dict[str, Any] = {}
        for group, keys in _SCHEMA.items():
            if group == "sweep":
                continue
            for name, data in keys.items():
                parameter = _create_parameter(name, data, group)
                if name in raw:
                    try:
                        parameter.value = raw[name]
                    except ValueError as error:
                        raise ConfigurationError(f"[{group}] {name}: {error}") from error
                values[name] = parameter.value
        return values

    def _base_sections(self) -> list[Mapping[str, str]]:
        return [
            self._parser[name]
            for name in ("scenario", "filter", "campaign")
            if self._parser.has_section(name)
        ]

    def trial_config(self, extra: Mapping[str, str] | None = None) -> TrialConfig:
        values = self._resolve([*self._base_sections(), *([extra] if extra else [])])
        return self._build_trial(values)

    @staticmethod
    def _build_trial(values: dict[str, Any]) -> TrialConfig:
        try:
            scenario = ScenarioParams(
                antennas=values["antennas"],
                users=values["users"],
                taps=values["taps"],
                paths=values["paths"],
                frame_length=values["frame_length"],
                symbol_variance=values["symbol_variance"],
                snr_db=values["snr_db"],
                max_delay=values["max_delay"],
                normalize_gains=values["normalize_gains"],
            )
        except ValueError as error:
            raise ConfigurationError(f"[scenario] {error}") from error
        filter_config = LrTmmseConfig(
            dims=values["dims"],
            rank=values["rank"],
            max_iters=values["max_iters"],
            epsilon=values["epsilon"],
            loading=values["loading"],
            relative_loading=values["relative_loading"],
            init=values["init"],
            perturbation=values["perturbation"],
        )
        return TrialConfig(
            scenario,
            filter_config,
            equalizers=values["equalizers"],
            delta_rule=values["delta_rule"],
            user=values["user"],
            sample_loading=values["sample_loading"],
            count_products=values["count_products"],
        )

    def campaigns(self) -> list[Campaign]:
        if self._sweep_override is not None:
            variable, values = self._sweep_override
            sweeps = {"cli": {"variable": variable, "values": values}}
        else:
            sweeps = {
                name.removeprefix(SWEEP_PREFIX): dict(self._parser[name])
                for name in self._parser.sections()
                if name.startswith(SWEEP_PREFIX)
            }
        if not sweeps:
            raise ConfigurationError("No [sweep.<name>] section and no --sweep given")

        campaigns = []
        for name, section in sweeps.items():
            sweep = {
                key: _create_parameter(key, data, "sweep")
                for key, data in _SCHEMA["sweep"].items()
            }
            for key, parameter in sweep.items():
                if key not in section:
                    raise ConfigurationError(f"[sweep.{name}] misses key {key}")
                try:
                    parameter.value = section.pop(key)
                except ValueError as error:
                    raise ConfigurationError(f"[sweep.{name}] {key}: {error}") from error

            values = self._resolve([*self._base_sections(), section])
            campaign = Campaign(
                name=name,
                variable=sweep["variable"].value,
                values=sweep["values"].value,
                trials=values["trials"],
                base=self._build_trial(values),
                seed=values["seed"],
                output=Path(values["output"]) if values["output"] else None,
                workers=values["workers"],
            )
            campaign.trial_configs()
            campaigns.append(campaign)
        return campaigns
