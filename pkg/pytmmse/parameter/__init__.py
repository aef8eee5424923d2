from .base import Parameter
from .enum import EnumParameter, FlagParameter
from .range import RangeParameter
from .sequence import SequenceParameter

__all__ = [
    "Parameter",
    "EnumParameter",
    "FlagParameter",
    "RangeParameter",
    "SequenceParameter",
]
