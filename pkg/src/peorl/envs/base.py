from __future__ import annotations

from dataclasses import dataclass
from typing import Any


class EnvError(RuntimeError):
    """Contract violation, e.g. stepping an environment whose episode is over."""


@dataclass(frozen=True)
class StepResult:
    next: Any
    reward: float
    done: bool = False
    failed: bool = False


@dataclass(frozen=True)
class EnvConfig:
    scenario: str = "taxi1"
    seed: int = 0
    initial: Any = None  # explicit initial state; overrides the seeded draw
