"""Exhaustive sweep of the subset space [0, 2^n), optionally across worker processes."""

from dataclasses import dataclass
from multiprocessing import Pool
from typing import Callable, Iterator, Optional, Tuple

from ..domain.subsets import Subset

# checker(u) -> None when u is not a target, True when covered, False on failure.
Checker = Callable[[Subset], Optional[bool]]

_MIN_CHUNK = 1 << 12


@dataclass(frozen=True)
class SweepResult:
    checked: int
    targets: int
    counterexample: Optional[Subset] = None

    @property
    def ok(self) -> bool:
        return self.counterexample is None


def _chunks(n: int, workers: int) -> Iterator[Tuple[int, int]]:
    total = 1 << n
    size = max(_MIN_CHUNK, total // (workers * 8) or 1)
    for start in range(0, total, size):
        yield start, min(start + size, total)


def _sweep_range(task: Tuple[Checker, int, int]) -> Tuple[int, int, Optional[Subset]]:
    checker, start, stop = task
    targets = 0
    for u in range(start, stop):
        verdict = checker(u)
        if verdict is None:
            continue
        targets += 1
        if not verdict:
            return u - start + 1, targets, u
    return stop - start, targets, None


def sweep(checker: Checker, n: int, workers: int = 1) -> SweepResult:
    """Check every subset in increasing mask order; stop at the first failure.

    Chunks are consumed in order, so the reported counterexample is the global
    minimum whatever the worker count. With workers > 1 the checker must be picklable.
    """
    checked = 0
    targets = 0
    if workers <= 1 or n <= 12:
        for start, stop in _chunks(n, 1):
            done, hit, failure = _sweep_range((checker, start, stop))
            checked += done
            targets += hit
            if failure is not None:
                return SweepResult(checked=checked, targets=targets, counterexample=failure)
        return SweepResult(checked=checked, targets=targets)

    tasks = ((checker, start, stop) for start, stop in _chunks(n, workers))
    with Pool(processes=workers) as pool:
        for done, hit, failure in pool.imap(_sweep_range, tasks):
            checked += done
            targets += hit
            if failure is not None:
                pool.terminate()
                return SweepResult(checked=checked, targets=targets, counterexample=failure)
    return SweepResult(checked=checked, targets=targets)
