from .base_io_wrapper import BaseIOWrapper
from .std_io_wrapper import StandardIOWrapper
from .file_io_wrapper import FileIOWrapper

__all__ = ["BaseIOWrapper", "StandardIOWrapper", "FileIOWrapper", "get_io_wrapper"]


def get_io_wrapper(path: str = None) -> BaseIOWrapper:
    """Return a file wrapper for a path, stdout otherwise."""

    return FileIOWrapper(path) if path else StandardIOWrapper()
