"""Run-wide knobs shared by the checker, the evaluator and the CLI."""
from dataclasses import dataclass, fields

from .syntax import DEFAULT_FUEL


@dataclass(frozen=True)
class Config:
    fuel: int = DEFAULT_FUEL
    max_level: int = 3
    list_depth: int = 3
    carrier_cap: int = 64
    seed: int = 0

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name == "seed":
                if not 0 <= v < 2**64:
                    raise ValueError("seed must fit in 64 bits")
            elif v <= 0:
                raise ValueError(f"{f.name} must be positive")


DEFAULT = Config()
