"""Benchmark action descriptions shipped with the package."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

from ..action_language import parse_action_description
from ..grounding import GroundDomain, ground

NAMES = ("gridworld", "taxi1", "taxi2")


def domain_text(name: str) -> str:
    if name not in NAMES:
        raise KeyError(f"unknown domain {name!r}; expected one of {', '.join(NAMES)}")
    return resources.files(__name__).joinpath(f"{name}.bc").read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def load_domain(name: str) -> GroundDomain:
    return ground(parse_action_description(domain_text(name)))
