import abc
import numpy as np
from blowuplab.utils.typing import Any, Union, Callable, Sequence


class BaseAggregator(abc.ABC):
    def __init__(self, name: str):
        self._name = name

    @property
    def name(self) -> str:
        return self._name

    @abc.abstractmethod
    def apply(self, x: Sequence[Any]) -> Any:
        raise NotImplementedError


class Sum(BaseAggregator):
    def __init__(self, *args, **kwargs):
        super().__init__(name="sum")

    def apply(self, x: Sequence[Any]) -> Any:
        # integer counters stay python ints so that json output is stable
        return sum(x)


class Max(BaseAggregator):
    """Maximum that ignores missing (None) entries."""

    def __init__(self, *args, **kwargs):
        super().__init__(name="max")

    def apply(self, x: Sequence[Any]) -> Any:
        present = [e for e in x if e is not None]
        return float(np.max(present)) if present else None


class Min(BaseAggregator):
    """Minimum that ignores missing (None) entries."""

    def __init__(self, *args, **kwargs):
        super().__init__(name="min")

    def apply(self, x: Sequence[Any]) -> Any:
        present = [e for e in x if e is not None]
        return float(np.min(present)) if present else None


class Aggregator:
    SUM = "sum"
    MAX = "max"
    MIN = "min"

    m = dict(zip([SUM, MAX, MIN], [Sum, Max, Min]))

    @staticmethod
    def register(name: str, cls_build_func: Callable):
        Aggregator.m.update({name: cls_build_func})

    @staticmethod
    def get(name: str) -> Union[BaseAggregator, None]:
        cls = Aggregator.m.get(name, None)
        return cls() if cls is not None else None
