from typing import Any


class Parameter:
    """One configuration key, declared by an attribute dict.

    Recognised attributes: ``typology``, ``defaultValue``, ``description``
    plus whatever the subclass reads.
    """

    def __init__(self, key: str, attributes: dict[str, Any], group: str) -> None:
        self._key = key
        self._attributes = attributes
        self._typology: str = ""
        self._description: str = ""
        self._value: Any = None
        self._group: str = group
        self._set_attributes()

    def _set_attributes(self) -> None:
        self._typology = self._attributes.get("typology", "")
        self._description = self._attributes.get("description", "")
        default = self._attributes.get("defaultValue")
        self._value = None if default is None else self.parse(default)

    def __repr__(self) -> str:
        avr = self._allowed_values_repr
        return f"{self.__class__.__name__} (<{self.key}>={self.value} {avr})"

    @property
    def _allowed_values_repr(self) -> str:
        return ""

    def parse(self, raw: Any) -> Any:
        return raw

    @property
    def key(self) -> str:
        return self._key

    @property
    def value(self) -> Any:
        return self._value

    @value.setter
    def value(self, value: Any) -> None:
        self._value = self.parse(value)

    @property
    def values(self) -> list[str]:
        return [str(self.value)]

    @property
    def typology(self) -> str:
        return self._typology

    @property
    def description(self) -> str:
        return self._description

    @property
    def group(self) -> str:
        return self._group

    def reset(self) -> None:
        self._set_attributes()
