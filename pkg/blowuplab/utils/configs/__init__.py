from .config import update_config, update_configs
from .formatter import DefaultConfigFormatter, load_config_file

__all__ = [
    "update_config",
    "update_configs",
    "DefaultConfigFormatter",
    "load_config_file",
]
