"""Benchmark environments and their abstraction into symbolic states."""

from __future__ import annotations

from .base import EnvConfig, EnvError, StepResult
from .gridworld import CATALOG as GRIDWORLD_CATALOG
from .gridworld import GridState, GridWorldEnv, gridworld_reset, gridworld_step
from .layout import Layout, load_layout, parse_layout
from .taxi import CATALOG as TAXI_CATALOG
from .taxi import TaxiEnv, TaxiState, taxi_reset, taxi_step

DOMAINS = ("taxi1", "taxi2", "gridworld")


def make_env(domain: str, seed: int, ground=None):
    """Environment for ``domain`` whose fixed initial configuration is drawn from ``seed``."""
    if domain in ("taxi1", "taxi2"):
        return TaxiEnv(EnvConfig(domain, seed), ground=ground)
    if domain == "gridworld":
        return GridWorldEnv(EnvConfig(domain, seed), ground=ground)
    raise ValueError(f"unknown domain {domain!r}; expected one of {', '.join(DOMAINS)}")


def option_catalog(domain: str) -> dict:
    """Realization of each symbolic action as a set of admissible env actions."""
    if domain in ("taxi1", "taxi2"):
        return TAXI_CATALOG
    if domain == "gridworld":
        return GRIDWORLD_CATALOG
    raise ValueError(f"unknown domain {domain!r}; expected one of {', '.join(DOMAINS)}")


def abstract(env, state=None):
    return env.abstract(state)


__all__ = [
    "DOMAINS",
    "EnvConfig",
    "EnvError",
    "GridState",
    "GridWorldEnv",
    "Layout",
    "StepResult",
    "TaxiEnv",
    "TaxiState",
    "abstract",
    "gridworld_reset",
    "gridworld_step",
    "load_layout",
    "make_env",
    "option_catalog",
    "parse_layout",
    "taxi_reset",
    "taxi_step",
]
