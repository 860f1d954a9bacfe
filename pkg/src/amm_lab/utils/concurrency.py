"""Utility functions related to running independent jobs concurrently."""

from anyio import CapacityLimiter, create_task_group, to_thread
from contextlib import contextmanager
from functools import partial
from sys import version_info
from typing import (
    Any,
    Callable,
    Generator,
    Iterable,
    List,
    Optional,
    Tuple,
    TypeVar,
    Union,
    cast,
)

__all__ = ("collapse_excgroups", "gather_in_threads")

T = TypeVar("T")

#: Type specification for a job: either a callable without arguments or a
#: tuple consisting of a callable and its positional arguments
Job = Union[Callable[[], T], Tuple[Any, ...]]

has_exceptiongroups = True
if version_info < (3, 11):
    try:
        from exceptiongroup import BaseExceptionGroup
    except ImportError:
        has_exceptiongroups = False


@contextmanager
def collapse_excgroups() -> Generator[None, None, None]:
    """Context manager that collapses exception groups holding a single
    exception into the exception itself, so a failing job in a sweep
    surfaces as its own error type.
    """
    try:
        yield
    except BaseException as exc:
        if has_exceptiongroups:
            while isinstance(exc, BaseExceptionGroup) and len(exc.exceptions) == 1:
                exc = exc.exceptions[0]

        raise exc from None


async def _execute_in_thread(
    limiter: Optional[CapacityLimiter],
    func: Callable[..., T],
    args: Any,
    result: List[Optional[T]],
    index: int,
) -> None:
    result[index] = await to_thread.run_sync(
        partial(func, *args), limiter=limiter
    )


async def gather_in_threads(
    jobs: Iterable[Job],
    limiter: Optional[Union[CapacityLimiter, int]] = None,
) -> List[T]:
    """Runs synchronous jobs in worker threads and collects their results.

    Parameters:
        jobs: the jobs to run; each job is either a callable with no
            arguments or a tuple holding a callable and its arguments
        limiter: optional capacity limiter or maximum number of jobs that
            may run at the same time

    Returns:
        the results of the jobs, in the order the jobs were given,
        independently of the order in which they finished
    """
    to_execute = [
        (job, ()) if callable(job) else (job[0], job[1:]) for job in jobs
    ]
    result: List[Optional[T]] = [None] * len(to_execute)

    if isinstance(limiter, int):
        limiter = CapacityLimiter(limiter)

    with collapse_excgroups():
        async with create_task_group() as group:
            for index, (func, args) in enumerate(to_execute):
                group.start_soon(_execute_in_thread, limiter, func, args, result, index)

    return cast(List[T], result)
