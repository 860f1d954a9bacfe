from contextlib import contextmanager
from time import perf_counter
from typing import Callable, Iterator, Optional

__all__ = ("timing",)


class TimerContext:
    """Object returned from the `timing` context manager."""

    def __init__(self, timer: Callable[[], float]):
        """Constructor.

        Parameters:
            timer: a function that returns a monotonic timestamp in seconds
                when called with no arguments
        """
        self._timer = timer
        self._start = timer()
        self._end: Optional[float] = None

    def stop(self) -> None:
        """Freezes the elapsed time at the current reading of the clock."""
        if self._end is None:
            self._end = self._timer()

    @property
    def elapsed(self) -> float:
        """Returns the number of seconds elapsed since entering the context,
        or the total duration of the block once the context was left.
        """
        end = self._end if self._end is not None else self._timer()
        return end - self._start


@contextmanager
def timing(
    description: str = "",
    timer: Callable[[], float] = perf_counter,
    report: Optional[Callable[[str], None]] = None,
) -> Iterator[TimerContext]:
    """Context manager that measures the execution time of a code block,
    e.g. a simulation sweep.

    Parameters:
        description: textual description of what we are measuring; nothing
            is reported when it is empty
        timer: function that must be called with no arguments to get a
            reading of the clock we are using for measurements
        report: function that receives the formatted report line; defaults
            to the console reporter
    """
    context = TimerContext(timer)
    try:
        yield context
    finally:
        context.stop()
        if description:
            line = "{0}: {1:.3f}s".format(description, context.elapsed)
            if report is None:
                from .console import reporter

                reporter.info(line)
            else:
                report(line)
