"""Ring configurations and ID placement strategies.

Random placements shuffle ``0..n-1`` with :class:`random.Random` (MT19937)
seeded by the 64-bit run seed, so the same seed gives the same ring on every
platform and Python version that keeps ``random.shuffle`` stable.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import ConfigurationError, UsageError

SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class Placement:
    """Placement strategy: ``random``, ``cr-worst``, ``cr-best`` or ``explicit``."""

    kind: str
    ids: Optional[tuple[int, ...]] = None

    KINDS = ("random", "cr-worst", "cr-best", "explicit")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ConfigurationError(f"unknown placement strategy {self.kind!r}")
        if (self.kind == "explicit") != (self.ids is not None):
            raise ConfigurationError("explicit placements (and only those) carry an ID list")

    @classmethod
    def parse(cls, text: str) -> Placement:
        """Parse the CLI form, e.g. ``cr-best`` or ``explicit:3,0,2,1``."""
        if text.startswith("explicit:"):
            body = text[len("explicit:"):]
            try:
                ids = tuple(int(tok) for tok in body.split(",") if tok.strip())
            except ValueError:
                raise ConfigurationError(f"bad explicit ID list {body!r}") from None
            return cls("explicit", ids)
        return cls(text)

    def __str__(self):
        if self.kind == "explicit":
            return "explicit:" + ",".join(map(str, self.ids))
        return self.kind


RANDOM = Placement("random")
CR_WORST = Placement("cr-worst")
CR_BEST = Placement("cr-best")


def explicit(ids: Sequence[int]) -> Placement:
    return Placement("explicit", tuple(ids))


@dataclass(frozen=True)
class RingConfig:
    """A validated ring: ``placement[i]`` is the ID at position ``i``."""

    placement: tuple[int, ...]
    seed: int = 0
    strategy: Placement = field(default=RANDOM)

    def __post_init__(self):
        ids = self.placement
        if len(ids) < 1:
            raise ConfigurationError("a ring needs at least one process")
        if any((not isinstance(i, int)) or i < 0 for i in ids):
            raise ConfigurationError(f"process IDs must be unsigned integers: {ids}")
        if len(set(ids)) != len(ids):
            raise ConfigurationError(f"process IDs must be unique: {ids}")

    @property
    def n(self) -> int:
        return len(self.placement)

    @property
    def max_id(self) -> int:
        return max(self.placement)

    def successor(self, position: int) -> int:
        return neighbors(self, position)[1]

    def predecessor(self, position: int) -> int:
        return neighbors(self, position)[0]


def neighbors(cfg: RingConfig, position: int) -> tuple[int, int]:
    """Return ``(predecessor, successor)`` positions of ``position``."""
    n = cfg.n
    if not 0 <= position < n:
        raise UsageError(f"position {position} outside ring of size {n}")
    return (position + n - 1) % n, (position + 1) % n


def build_ring(n: int, strategy: Placement = RANDOM, seed: int = 0) -> RingConfig:
    if n < 1:
        raise ConfigurationError(f"ring size must be >= 1, got {n}")
    seed &= SEED_MASK
    if strategy.kind == "random":
        ids = list(range(n))
        random.Random(seed).shuffle(ids)
    elif strategy.kind == "cr-worst":
        ids = list(range(n - 1, -1, -1))
    elif strategy.kind == "cr-best":
        ids = list(range(n))
    else:
        ids = list(strategy.ids)
        if len(ids) != n:
            raise ConfigurationError(f"explicit placement has {len(ids)} IDs, ring size is {n}")
    return RingConfig(tuple(ids), seed=seed, strategy=strategy)
