"""Run settings shared by the CLI and the scripts."""

from __future__ import annotations

from dataclasses import asdict, dataclass

from .dynamics import Scheduler
from .stability import DEFAULT_BUDGET


@dataclass(frozen=True)
class SearchConfig:
    budget: int = DEFAULT_BUDGET
    threads: int = 1
    prune_twins: bool = True

    def __post_init__(self):
        if self.budget < 1:
            raise ValueError("budget: must be positive")
        if self.threads < 1:
            raise ValueError("threads: must be positive")


@dataclass(frozen=True)
class DynamicsConfig:
    k: int = 1
    policy: str = "firstlex"
    seed: int = 0
    max_steps: int = 100_000
    gossip: bool = False

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k: must be >= 1")
        if self.max_steps < 0:
            raise ValueError("max_steps: must be non-negative")
        Scheduler(self.policy, self.seed)  # validates the policy name

    @property
    def scheduler(self) -> Scheduler:
        return Scheduler(self.policy, self.seed)

    def to_dict(self) -> dict:
        return asdict(self)
