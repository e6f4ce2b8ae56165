import abc
import os

import yaml
from typing import Dict, Any, Callable

from blowuplab.utils.errors import InvalidConfig


def load_config_file(path: str) -> Dict[str, Any]:
    """Load a JSON or YAML configuration file into a dict.

    JSON is a subset of YAML, so both go through ``yaml.safe_load``.
    """

    try:
        with open(path, "r", encoding="utf-8") as f:
            records = yaml.safe_load(f)
    except (OSError, yaml.YAMLError) as e:
        raise InvalidConfig(f"cannot read config file {path}: {e}") from e
    if records is None:
        return {}
    if not isinstance(records, dict):
        raise InvalidConfig(f"config file {path} must hold a mapping at top level")
    return records


class BaseConfigFormatter(abc.ABC):
    @staticmethod
    def parse(global_configs):
        raise NotImplementedError


class DefaultConfigFormatter(BaseConfigFormatter):
    pattern_file_path = os.path.join(
        os.path.dirname(os.path.abspath(__file__)), "default.yaml"
    )

    @staticmethod
    def parse(global_configs: Dict[str, Any]) -> Dict[str, Any]:
        """Project a command configuration onto the keys listed in default.yaml."""

        with open(DefaultConfigFormatter.pattern_file_path, "r") as f:
            records = yaml.load(f, Loader=yaml.SafeLoader)
        return DefaultConfigFormatter.fill(records, global_configs)

    @staticmethod
    def fill(dst, src) -> Dict[str, Any]:
        if dst is not None and src is not None:
            for k, v in dst.items():
                if v is not None:
                    DefaultConfigFormatter.fill(v, src.get(k, None))
                else:
                    val = src.get(k, None)
                    if isinstance(val, Callable):
                        val = val.__name__
                    elif isinstance(val, tuple):
                        val = list(val)
                    dst.update({k: val})
        return dst
