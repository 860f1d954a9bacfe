"""Colored console reporting for quotes and simulation events.

Everything here writes human-facing text to stderr by default so that
machine-readable output on stdout stays pipeable.
"""

import sys
from typing import Any, Mapping, Optional, TextIO

try:
    from colorama import init, Fore, Style

    _has_colors = True
except ImportError:

    class Unstyled:
        def __getattr__(self, attr):
            return ""

    Fore = Style = Unstyled()

    def init(*args, **kwds):
        pass

    _has_colors = False


__all__ = ("ConsoleReporter", "EventPrinter", "format_number", "reporter")


#: Glyph and color of each simulation event kind
_event_styles = {
    "arb": (Fore.CYAN + Style.BRIGHT, "⇄"),
    "trade": (Fore.YELLOW, "▶"),
    "lp_deposit": (Fore.GREEN, "+"),
    "lp_withdraw": (Fore.RED, "-"),
    "mark": (Fore.MAGENTA, "●"),
}


def format_number(value: Any) -> str:
    """Formats a number with the fixed nine-decimal precision used in all
    tabular output.
    """
    if isinstance(value, float):
        text = "{0:.9f}".format(value)
        # values that round to zero are written without a sign
        return text[1:] if text.startswith("-") and float(text) == 0 else text
    return str(value)


class ConsoleReporter:
    """Writes styled status lines to a text stream."""

    _initialized = False

    def __init__(
        self, stream: Optional[TextIO] = None, color: Optional[bool] = None
    ):
        """Constructor.

        Parameters:
            stream: the stream to write to; `None` means the current
                ``sys.stderr``, looked up at every write
            color: whether to use ANSI styles; `None` means only when the
                stream is a terminal
        """
        self._stream = stream
        self._color = color

    @property
    def stream(self) -> TextIO:
        return self._stream or sys.stderr

    def _use_color(self) -> bool:
        if not _has_colors or self._color is False:
            return False
        if self._color is None:
            isatty = getattr(self.stream, "isatty", None)
            return bool(isatty and isatty())
        return True

    def _style(self, style: str, text: str) -> str:
        if not self._use_color():
            return text
        if not ConsoleReporter._initialized:
            init()
            ConsoleReporter._initialized = True
        return style + text + Style.RESET_ALL

    def _write(self, line: str) -> None:
        print(line, file=self.stream)

    def error(self, message: str) -> None:
        self._write(self._style(Fore.RED + Style.BRIGHT, "error: ") + message)

    def info(self, message: str) -> None:
        self._write(self._style(Style.DIM, message))

    def warn(self, message: str) -> None:
        self._write(self._style(Fore.YELLOW, "warning: ") + message)

    def table(self, rows: Mapping[str, Any]) -> None:
        """Prints a two-column key-value table with aligned keys."""
        width = max((len(key) for key in rows), default=0)
        for key, value in rows.items():
            label = self._style(Fore.GREEN, "{0:<{1}}".format(key, width))
            self._write("{0}  {1}".format(label, format_number(value)))

    def quote(self, quote: Any) -> None:
        """Prints a swap quote as a key-value table, the new state of the
        market maker excluded.
        """
        rows = quote.to_json()
        rows.pop("new_state", None)
        self.table(rows)

    def event(self, event: Any) -> None:
        """Prints a one-line rendering of a simulation event.

        Parameters:
            event: an object with ``tick``, ``kind`` and ``payload``
                attributes
        """
        kind = getattr(event.kind, "value", event.kind)
        style, glyph = _event_styles.get(kind, ("", "?"))
        fields = " ".join(
            "{0}={1}".format(key, format_number(value))
            for key, value in event.payload.items()
        )
        self._write(
            "{0} {1} {2} {3}".format(
                self._style(Style.DIM, "{0:>6}".format(event.tick)),
                self._style(style, glyph),
                self._style(style, "{0:<11}".format(kind)),
                fields,
            )
        )


class EventPrinter:
    """Simulation observer that prints every event as it is recorded."""

    def __init__(self, reporter: Optional[ConsoleReporter] = None):
        self._reporter = reporter or ConsoleReporter()

    def __call__(self, event: Any) -> None:
        self._reporter.event(event)


#: Shared reporter writing to stderr
reporter = ConsoleReporter()
