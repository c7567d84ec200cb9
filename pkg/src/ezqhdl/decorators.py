import functools
import logging
import time

logger = logging.getLogger(__name__)


def logged_stage(stage_name: str):
    """
    Logs entry into and wall-clock duration of a pipeline stage.

    @param stage_name: human readable stage name, e.g. "synthesize"
    """

    def _decorator(func):

        @functools.wraps(func)
        def _wrapper(*args, **kwargs):
            logger.info(f"Stage {stage_name} ({func.__module__ + '.' + func.__qualname__}) started")
            start_time = time.perf_counter()
            result = func(*args, **kwargs)
            logger.info(f"Stage {stage_name} finished in {time.perf_counter() - start_time:.3f}s")
            return result

        return _wrapper

    return _decorator
