from typing import Any

from pytmmse.helper import str_to_float

from .base import Parameter


class RangeParameter(Parameter):
    def __init__(self, key: str, attributes: dict[str, Any], group: str) -> None:
        self.min: float | None = None
        self.max: float | None = None
        self._integer: bool = False
        super().__init__(key, attributes, group)

    def _set_attributes(self) -> None:
        self.min = self._bound("minimumValue")
        self.max = self._bound("maximumValue")
        self._integer = bool(self._attributes.get("integer", False))
        super()._set_attributes()

    def _bound(self, name: str) -> float | None:
        raw = self._attributes.get(name)
        return None if raw is None else str_to_float(str(raw))

    @property
    def _allowed_values_repr(self) -> str:
        kind = "int" if self._integer else "float"
        return f"[{self.min}:{self.max}] {kind}"

    @property
    def integer(self) -> bool:
        return self._integer

    def parse(self, raw: Any) -> int | float:
        try:
            value = str_to_float(str(raw).strip())
        except ValueError:
            raise ValueError(f"Expected a number for {self.key} But was: {raw}") from None
        if self._integer and value != int(value):
            raise ValueError(f"Expected an integer for {self.key} But was: {raw}")
        if (self.min is not None and value < self.min) or (
            self.max is not None and value > self.max
        ):
            allowed = f"min {self.min} max {self.max}"
            raise ValueError(f"Allowed: {allowed} But was: {value}")
        return int(value) if self._integer else float(value)
