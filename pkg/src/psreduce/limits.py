"""Search limits and stage deadlines."""
from __future__ import annotations

import os
import time
from dataclasses import dataclass, replace

from .errors import LimitExceeded


def default_timeout() -> float:
    return float(os.environ.get("PS2_TIMEOUT", "30"))


@dataclass(frozen=True)
class Limits:
    s_degree: int = 2
    r_degree: int = 2
    max_degree: int = 4
    timeout: float | None = None  # seconds per stage; None -> PS2_TIMEOUT or 30
    gb_max_degree: int = 12
    gb_max_size: int = 500
    all_degrees: bool = False

    def __post_init__(self):
        if not 1 <= self.s_degree <= self.max_degree:
            raise ValueError("need 1 <= s_degree <= max_degree")
        if self.r_degree < 1:
            raise ValueError("need r_degree >= 1")

    @property
    def stage_timeout(self) -> float:
        return default_timeout() if self.timeout is None else self.timeout

    def with_(self, **kw) -> "Limits":
        return replace(self, **kw)

    def deadline(self) -> "Deadline":
        return Deadline(self.stage_timeout)


class Deadline:
    def __init__(self, seconds: float | None):
        self.seconds = seconds
        self.end = None if seconds is None else time.monotonic() + seconds

    def check(self) -> None:
        if self.end is not None and time.monotonic() > self.end:
            raise LimitExceeded(f"stage timeout of {self.seconds:g} s exceeded")

    def remaining(self) -> float | None:
        return None if self.end is None else self.end - time.monotonic()

    def expired(self) -> bool:
        return self.end is not None and time.monotonic() > self.end

    def sub(self, seconds: float) -> "Deadline":
        """A deadline ending after `seconds` or at this one's end, whichever is first."""
        rem = self.remaining()
        return Deadline(seconds if rem is None else max(0.0, min(seconds, rem)))


NO_DEADLINE = Deadline(None)
