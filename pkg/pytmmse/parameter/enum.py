from typing import Any

from .base import Parameter

_TRUE = {"1", "yes", "true", "on"}
_FALSE = {"0", "no", "false", "off"}


def clean_value(value: str | float) -> str:
    return str(value).strip().lower()


class EnumParameter(Parameter):
    def __init__(self, key: str, attributes: dict[str, Any], group: str) -> None:
        self._values: list[str] = []
        super().__init__(key, attributes, group)

    def _set_attributes(self) -> None:
        self._values = [str(v) for v in self._attributes.get("enumValues", [])]
        super()._set_attributes()

    @property
    def _allowed_values_repr(self) -> str:
        return f"{{{self.values}}}"

    @property
    def values(self) -> list[str]:
        return list(self._values)

    def parse(self, raw: Any) -> str:
        value = clean_value(raw)
        for allowed in self._values:
            if clean_value(allowed) == value:
                return allowed
        raise ValueError(f"Allowed values: {self._values} But was: {raw}")


class FlagParameter(EnumParameter):
    def _set_attributes(self) -> None:
        self._attributes = self._attributes | {"enumValues": sorted(_TRUE | _FALSE)}
        super()._set_attributes()

    @property
    def _allowed_values_repr(self) -> str:
        return "{yes|no}"

    def parse(self, raw: Any) -> bool:  # type: ignore[override]
        if isinstance(raw, bool):
            return raw
        return super().parse(raw) in _TRUE
