"""
A `SuiteManager` fans the chunks of a verification suite out over a pool of
ray workers and folds the partial reports back together. Chunk layout and
per-sample seeds do not depend on the pool size, so the folded report is
the same for any number of workers.
"""

import psutil
import ray

from typing import Any, List, Optional

from blowuplab.utils.logger import Log, get_logger
from blowuplab.utils.typing import Chunk


@ray.remote
def _evaluate_chunk(evaluator: Any, chunk: Chunk) -> Any:
    return evaluator.evaluate_chunk(chunk)


class SuiteManager:
    def __init__(self, workers: Optional[int] = 1):
        """Create a suite manager.

        :param int workers: Number of worker processes, ``<= 1`` evaluates in-process,
            ``None`` uses every physical core.
        """

        if workers is None:
            workers = psutil.cpu_count(logical=False) or 1
        self._workers = int(workers)
        self.logger = get_logger(name="blowuplab.manager.suite_manager")

    @property
    def workers(self) -> int:
        return self._workers

    def _init_ray(self):
        if not ray.is_initialized():
            ray.init(
                num_cpus=self._workers,
                include_dashboard=False,
                ignore_reinit_error=True,
                log_to_driver=False,
            )

    @Log.method_timer(enable=True)
    def run(self, evaluator: Any) -> Any:
        """Evaluate every chunk of ``evaluator`` and merge the results.

        Partial reports are merged in chunk order, which together with the
        commutative merge keeps the output independent of completion order.
        """

        chunks: List[Chunk] = evaluator.chunks()
        self.logger.info(
            f"suite {evaluator.name}: {len(chunks)} chunks on {self._workers} worker(s)"
        )
        if self._workers <= 1 or len(chunks) <= 1:
            return evaluator.evaluate()

        self._init_ray()
        evaluator_ref = ray.put(evaluator)
        pending = [_evaluate_chunk.remote(evaluator_ref, chunk) for chunk in chunks]
        reports = ray.get(pending)
        return evaluator.reduce(reports)
