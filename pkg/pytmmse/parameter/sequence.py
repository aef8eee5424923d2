from typing import Any

from .base import Parameter
from .range import RangeParameter


class SequenceParameter(Parameter):
    """Comma-separated list; every item is checked by an item parameter."""

    def __init__(self, key: str, attributes: dict[str, Any], group: str) -> None:
        self._item: Parameter | None = None
        self._min_length: int = 1
        super().__init__(key, attributes, group)

    def _set_attributes(self) -> None:
        item = self._attributes.get("item")
        self._item = RangeParameter(self.key, item, self.group) if item else None
        self._min_length = int(self._attributes.get("minimumLength", 1))
        super()._set_attributes()

    @property
    def _allowed_values_repr(self) -> str:
        item = self._item._allowed_values_repr if self._item else "str"  # noqa: SLF001
        return f"[{item}, ...]"

    def parse(self, raw: Any) -> tuple[Any, ...]:
        items = raw.split(",") if isinstance(raw, str) else list(raw)
        items = [i.strip() if isinstance(i, str) else i for i in items]
        items = [i for i in items if i != ""]
        if len(items) < self._min_length:
            raise ValueError(
                f"At least {self._min_length} values needed for {self.key} But was: {raw}"
            )
        if self._item is None:
            return tuple(str(i) for i in items)
        return tuple(self._item.parse(i) for i in items)

    @property
    def values(self) -> list[str]:
        return [str(v) for v in self.value or ()]
