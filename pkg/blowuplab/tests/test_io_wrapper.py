import io

from blowuplab.utils.io_wrapper import (
    FileIOWrapper,
    StandardIOWrapper,
    get_io_wrapper,
)


class Payload:
    def __serialize__(self):
        return "serialized\n"


def test_factory():
    assert isinstance(get_io_wrapper(), StandardIOWrapper)
    assert isinstance(get_io_wrapper("report.json"), FileIOWrapper)


def test_file_round(tmp_path):
    path = tmp_path / "nested" / "out.txt"
    wrapper = FileIOWrapper(str(path))
    wrapper.write(Payload())
    assert wrapper.read() == "serialized\n"
    assert path.read_bytes() == b"serialized\n"


def test_stream_serializer():
    stream = io.StringIO()
    wrapper = StandardIOWrapper(out_stream=stream)
    wrapper.write([1, 2], serializer=lambda v: "x" * len(v))
    assert stream.getvalue() == "xx"
