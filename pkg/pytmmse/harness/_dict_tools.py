from collections.abc import Iterator
from itertools import groupby
from typing import Any, Self

import numpy as np

_Key = str | int
_Path = tuple[_Key, ...]
_Leaf = str | int | float | bool | None | list[Any] | dict[str, Any]


class DictTool:
    """Flattens nested result structures to ``path -> leaf`` and back.

    Used by the CLI to print campaign summaries and complexity tables either
    nested or as ``a.b.0.c`` keys. Methods return ``self`` so calls chain.
    """

    def __init__(self) -> None:
        self.__leaves: dict[_Path, _Leaf] | None = None

    def load(self, data: Any) -> Self:
        """Take dicts, lists, tuples and numpy scalars in any nesting."""
        self.__leaves = dict(self.__walk(data))
        return self

    @staticmethod
    def __walk(node: Any) -> Iterator[tuple[_Path, _Leaf]]:
        match node:
            case dict() | list() | tuple() if node:
                pairs = node.items() if isinstance(node, dict) else enumerate(node)
                for key, child in pairs:
                    for path, leaf in DictTool.__walk(child):
                        yield (key, *path), leaf
            case tuple():
                yield (), []
            case np.generic():
                yield (), node.item()
            case _:
                yield (), node

    @staticmethod
    def __nest(leaves: dict[_Path, _Leaf]) -> Any:
        if set(leaves) == {()}:
            return leaves[()]
        children = {
            head: DictTool.__nest({path[1:]: leaf for path, leaf in group})
            for head, group in groupby(leaves.items(), key=lambda item: item[0][0])
        }
        if all(isinstance(head, int) for head in children):
            return list(children.values())
        return children

    @property
    def _leaves(self) -> dict[_Path, _Leaf]:
        if self.__leaves is None:
            raise ValueError("Data not loaded")
        return self.__leaves

    def round_floats(self, digits: int = 6) -> Self:
        """Keep ``digits`` significant digits of every finite float leaf."""
        for path, leaf in self._leaves.items():
            if isinstance(leaf, float) and np.isfinite(leaf):
                self._leaves[path] = float(f"{leaf:.{digits}g}")
        return self

    def get_flat_result(self) -> dict[str, _Leaf]:
        """``{"a.b.0": leaf}``; clears the loaded data."""
        leaves = self._leaves
        self.__leaves = None
        if set(leaves) == {()}:
            root = leaves[()]
            return root if isinstance(root, dict) else {"": root}
        return {".".join(map(str, path)): leaf for path, leaf in leaves.items()}

    def get_result(self) -> Any:
        """Nested structure again; clears the loaded data."""
        result = DictTool.__nest(self._leaves)
        self.__leaves = None
        return result
