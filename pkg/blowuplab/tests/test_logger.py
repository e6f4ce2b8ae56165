import logging
import os

from blowuplab.utils.logger import Log, get_logger


def test_named_logger_is_configured_once():
    first = get_logger(name="blowuplab.tests.once")
    second = get_logger(name="blowuplab.tests.once")
    assert first is second
    assert len(first.handlers) == 1


def test_file_stream(tmp_path):
    logger = get_logger(
        log_level=logging.INFO,
        log_dir=str(tmp_path),
        name="blowuplab.tests.file",
        expr_group="suite",
        expr_name="gen",
        file_stream=True,
    )
    logger.info("seed=42")
    for handler in logger.handlers:
        handler.flush()
    path = os.path.join(
        str(tmp_path), "log_files", "suite", "gen", "blowuplab.tests.file.log"
    )
    with open(path, "r") as f:
        assert "seed=42" in f.read()


class Timed:
    def __init__(self, logger):
        self.logger = logger

    @Log.method_timer(enable=True)
    def work(self, value):
        return 2 * value


def test_timers(caplog):
    logger = get_logger(log_level=logging.DEBUG, name="blowuplab.tests.timer")
    logger.propagate = True
    try:
        with caplog.at_level(logging.DEBUG, logger="blowuplab.tests.timer"):
            assert Timed(logger).work(3) == 6
            with Log.timer(log=True, logger=logger, tag="block"):
                pass
            with Log.timer(log=False, logger=logger, tag="silent"):
                pass
    finally:
        logger.propagate = False
    messages = [r.getMessage() for r in caplog.records]
    assert any("Timed.work" in m for m in messages)
    assert any("block" in m for m in messages)
    assert not any("silent" in m for m in messages)
