import sys

from .base_io_wrapper import BaseIOWrapper


class StandardIOWrapper(BaseIOWrapper):
    def __init__(self, in_stream=None, out_stream=None):
        self.in_stream = in_stream or sys.stdin
        self.out_stream = out_stream or sys.stdout

    def write(self, object, serializer=None):
        self.out_stream.write(self.serialize(object, serializer))
        self.out_stream.flush()

    def read(self):
        return self.in_stream.read()
