"""Run and engine configuration."""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .onestep.backends import DEFAULT_EPSILON

LOGIC_CHOICES = ("rel", "graded", "prob")


def parse_logic(spec: str) -> tuple[str, ...]:
    """``rel``, ``graded``, ``prob`` or ``fusion:rel,prob`` (``fusion`` alone means rel+prob)."""
    if spec.startswith("fusion"):
        rest = spec.split(":", 1)[1] if ":" in spec else "rel,prob"
        parts = tuple(p.strip() for p in rest.split(",") if p.strip())
        if len(parts) < 2:
            raise ValueError("fusion needs at least two component logics")
        if len(set(parts)) != len(parts) or any(p not in LOGIC_CHOICES for p in parts):
            raise ValueError(f"bad fusion components {rest!r}")
        return parts
    if spec not in LOGIC_CHOICES:
        raise ValueError(f"unknown logic {spec!r}")
    return (spec,)


@dataclass
class EngineOptions:
    solve_every: int = 0  # 0: solve only once the frontier is empty
    expansion_order: str = "fifo"  # or "label-size"
    max_nodes: Optional[int] = 20000
    max_dpa_states: Optional[int] = 200000
    epsilon: Fraction = DEFAULT_EPSILON
    check_labels: bool = True
    compress_priorities: bool = True
    extract_model: bool = False
    verify: bool = False
    deep_verify: bool = False

    def __post_init__(self):
        if self.expansion_order not in ("fifo", "label-size"):
            raise ValueError(f"unknown expansion order {self.expansion_order!r}")
        if self.solve_every < 0:
            raise ValueError("solve_every must be >= 0")


@dataclass
class RunConfig:
    logic: tuple[str, ...] = ("rel",)
    formula: Optional[str] = None
    input_path: Optional[str] = None
    engine: EngineOptions = field(default_factory=EngineOptions)
    model_path: Optional[str] = None
    stats: bool = False
    dump_npa: bool = False
    dump_dpa: bool = False
    seed: int = 0

    def __post_init__(self):
        if (self.formula is None) == (self.input_path is None) and (self.formula or self.input_path):
            raise ValueError("give exactly one of an inline formula or an input file")
        env = os.environ.get("MUCALC_SEED")
        if env is not None:
            self.seed = int(env)

    def read_formula(self) -> str:
        if self.formula is not None:
            return self.formula
        if self.input_path is None:
            raise ValueError("no formula given")
        with open(self.input_path, encoding="utf-8") as fh:
            return fh.read()
