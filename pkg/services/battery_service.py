"""
Battery Service
Runs independent verification scenarios concurrently and returns their
results in submission order
"""

import concurrent.futures
import contextvars
from dataclasses import dataclass
from typing import Callable, Generic, List, Optional, Sequence, TypeVar

from src.constants import DEFAULT_MAX_WORKERS
from src.verbose_logger import get_logger

T = TypeVar("T")
R = TypeVar("R")


@dataclass
class BatteryResult(Generic[T, R]):
    """Outcome of one scenario; `error` is set instead of `value` on failure"""
    scenario: T
    value: Optional[R] = None
    error: Optional[Exception] = None

    @property
    def ok(self) -> bool:
        return self.error is None


class BatteryService:
    """Thread-pool runner for scenario batteries

    numpy releases the GIL inside its linear algebra kernels, so threads
    give real overlap for the dense computations here.
    """

    def __init__(self, max_workers: int = DEFAULT_MAX_WORKERS, fail_fast: bool = False):
        self.max_workers = max(1, int(max_workers))
        self.fail_fast = fail_fast

    def run(self, scenarios: Sequence[T], fn: Callable[[T], R]) -> List[BatteryResult]:
        """Apply fn to every scenario

        Args:
            scenarios: Independent inputs
            fn: Work function; exceptions are captured per scenario unless fail_fast

        Returns:
            One BatteryResult per scenario, in input order
        """
        logger = get_logger()
        logger.log_debug(f"Battery: {len(scenarios)} scenarios on {self.max_workers} workers")
        if self.max_workers == 1:
            return [self._run_one(fn, s) for s in scenarios]

        with concurrent.futures.ThreadPoolExecutor(max_workers=self.max_workers) as executor:
            # Propagate contextvars into worker threads.
            futures = [
                executor.submit(contextvars.copy_context().run, self._run_one, fn, s)
                for s in scenarios
            ]
            # Collect in submission order so reports are deterministic
            return [f.result() for f in futures]

    def _run_one(self, fn: Callable[[T], R], scenario: T) -> BatteryResult:
        try:
            return BatteryResult(scenario, value=fn(scenario))
        except Exception as e:
            if self.fail_fast:
                raise
            get_logger().log_error(e, context=f"battery scenario {scenario}")
            return BatteryResult(scenario, error=e)
