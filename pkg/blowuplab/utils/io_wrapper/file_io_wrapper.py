import os

from .base_io_wrapper import BaseIOWrapper


class FileIOWrapper(BaseIOWrapper):
    """Write serialized payloads to a file, UTF-8 with ``\\n`` line endings."""

    def __init__(self, path: str):
        self.path = path

    def write(self, object, serializer=None):
        directory = os.path.dirname(os.path.abspath(self.path))
        if not os.path.exists(directory):
            os.makedirs(directory)
        with open(self.path, "w", encoding="utf-8", newline="\n") as f:
            f.write(self.serialize(object, serializer))

    def read(self):
        with open(self.path, "r", encoding="utf-8") as f:
            return f.read()
