import logging
import os
import time

import wrapt

from contextlib import contextmanager

from blowuplab import settings
from blowuplab.utils.typing import Any


class Log:
    @staticmethod
    @contextmanager
    def timer(log: bool = False, logger: logging.Logger = None, tag: str = ""):
        """Log the wall time spent inside the block at DEBUG level.

        :param bool log: Enable timing or not.
        :param logging.Logger logger: Logger handler, nothing is recorded if None.
        :param str tag: Label of the timed block.
        """

        if logger is None or not log:
            yield None
        else:
            _start = time.perf_counter()
            yield None
            logger.debug(f"[timer] {tag}: {time.perf_counter() - _start:.6f}s")

    @staticmethod
    def method_timer(enable=settings.PROFILING, logger: logging.Logger = None):
        @wrapt.decorator
        def wrapper(func, instance, args, kwargs):
            handler = logger or getattr(instance, "logger", None)
            if handler is None or not enable:
                return func(*args, **kwargs)

            _start = time.perf_counter()
            ret = func(*args, **kwargs)
            handler.debug(
                f"[timer] {func.__qualname__}: {time.perf_counter() - _start:.6f}s"
            )
            return ret

        return wrapper


def get_logger(
    log_level=settings.LOG_LEVEL,
    log_dir: str = "",
    name: str = None,
    expr_group: str = None,
    expr_name: str = None,
    file_stream: bool = False,
    *args: Any,
    **kwargs: Any,
) -> logging.Logger:
    """Return a named logger with a stream handler and an optional file handler.

    Repeated calls with the same name return the already configured logger.
    """

    formatter = logging.Formatter(
        "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    )
    logger = logging.getLogger(name)
    if logger.handlers:
        return logger
    logger.setLevel(log_level)
    logger.propagate = False
    stream_handler = logging.StreamHandler()
    stream_handler.setFormatter(formatter)

    logger.addHandler(stream_handler)
    if file_stream:
        log_dir = os.path.join(
            log_dir or settings.LOG_DIR,
            "log_files",
            expr_group or "default",
            expr_name or "run",
        )
        try:
            if not os.path.exists(log_dir):
                os.makedirs(log_dir)
        except FileExistsError:
            logger.warning(f"file exists: {log_dir}")
        file_handler = logging.FileHandler(
            filename=os.path.join(log_dir, f"{name}.log"), mode="w"
        )
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)
    return logger
