"""Cooperative deadlines for long-running operations.

A :class:`Deadline` is passed down into grid evaluation, subdivision and
time-stepping loops, which call :meth:`Deadline.check` at natural chunk
boundaries.  Expiry raises :class:`~delaydesign.errors.DeadlineExceeded`
carrying whatever progress metadata the interrupted loop supplied.
"""

from __future__ import annotations

import time

from .errors import DeadlineExceeded


class Deadline:
    """Wall-clock budget measured with a monotonic clock."""

    def __init__(self, seconds: float):
        if not seconds > 0:
            raise ValueError("deadline must be positive")
        self.seconds = seconds
        self._expiry = time.monotonic() + seconds

    @classmethod
    def from_ms(cls, ms: float) -> "Deadline":
        return cls(ms / 1000.0)

    def expired(self) -> bool:
        return time.monotonic() >= self._expiry

    def check(self, **progress) -> None:
        """Raise DeadlineExceeded (with progress metadata) once expired."""
        if self.expired():
            raise DeadlineExceeded(
                f"deadline of {self.seconds:.3f}s exceeded", partial=progress
            )


def check(cancel: Deadline | None, **progress) -> None:
    """Convenience for optional deadlines threaded through inner loops."""
    if cancel is not None:
        cancel.check(**progress)
