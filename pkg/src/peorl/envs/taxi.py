"""Taxi domain (Taxi-v1 map) with an optional bonus-cell scenario.

Rewards: -1 per movement (including bumping into walls), +20 for a successful
drop-off, -10 for an improper pick-up or drop-off. In scenario 2 a successful
drop-off after the bonus cell was visited pays an extra +30.
"""

from __future__ import annotations

import random
from typing import NamedTuple

from ..grounding import GroundDomain, SymbolicState, initial_state
from .base import EnvConfig, EnvError, StepResult
from .layout import Layout, load_layout

MOVES = [("move", d) for d in ("n", "w", "s", "e")]
ACTIONS = MOVES + [("pickup",), ("dropoff",)]

STEP_REWARD = -1.0
DROPOFF_REWARD = 20.0
BONUS_REWARD = 30.0
IMPROPER_REWARD = -10.0


def _move(t) -> list:
    return [("move", t.action[1])]


# symbolic action -> admissible env actions (one-to-one)
CATALOG = {"move": _move, "pickup": [("pickup",)], "dropoff": [("dropoff",)]}


class TaxiState(NamedTuple):
    row: int
    col: int
    passenger: str  # depot label, "intaxi" or "delivered"
    dest: str
    visited: bool = False  # bonus cell visited this episode


def taxi_reset(cfg: EnvConfig, layout: Layout | None = None) -> TaxiState:
    """Taxi on a uniform random cell, passenger and destination on distinct depots."""
    layout = layout or load_layout("taxi")
    if cfg.initial is not None:
        return TaxiState(*cfg.initial)
    rng = random.Random(cfg.seed)
    row = rng.randint(layout.origin, layout.origin + layout.rows - 1)
    col = rng.randint(layout.origin, layout.origin + layout.cols - 1)
    labels = sorted(layout.depots)
    passenger, dest = rng.sample(labels, 2)
    return TaxiState(row, col, passenger, dest, (row, col) == layout.bonus)


def taxi_step(s: TaxiState, action: tuple, layout: Layout, scenario: int = 1) -> StepResult:
    if s.passenger == "delivered":
        raise EnvError("step after the episode ended")
    kind = action[0]
    if kind == "move":
        cell = layout.neighbour((s.row, s.col), action[1]) or (s.row, s.col)
        visited = s.visited or cell == layout.bonus
        return StepResult(s._replace(row=cell[0], col=cell[1], visited=visited), STEP_REWARD)
    here = (s.row, s.col)
    if kind == "pickup":
        if s.passenger in layout.depots and layout.depots[s.passenger] == here:
            return StepResult(s._replace(passenger="intaxi"), STEP_REWARD)
        return StepResult(s, IMPROPER_REWARD, failed=True)
    if kind == "dropoff":
        if s.passenger == "intaxi" and layout.depots[s.dest] == here:
            reward = DROPOFF_REWARD + (BONUS_REWARD if scenario == 2 and s.visited else 0.0)
            return StepResult(s._replace(passenger="delivered"), reward, done=True)
        return StepResult(s, IMPROPER_REWARD, failed=True)
    raise EnvError(f"unknown taxi action {action!r}")


class TaxiEnv:
    """Stateful wrapper: one fixed initial configuration, replayed by ``reset``."""

    actions = ACTIONS

    def __init__(self, cfg: EnvConfig, ground: GroundDomain | None = None, layout: Layout | None = None):
        self.scenario = 2 if cfg.scenario in ("taxi2", 2, "2") else 1
        self.layout = layout or load_layout("taxi")
        self.initial = taxi_reset(cfg, self.layout)
        self._ground = ground
        self._abstract_cache: dict = {}
        self.state = self.initial
        self.done = False

    @property
    def ground(self) -> GroundDomain:
        if self._ground is None:
            from ..domains import load_domain

            self._ground = load_domain("taxi2" if self.scenario == 2 else "taxi1")
        return self._ground

    def reset(self) -> TaxiState:
        self.state = self.initial
        self.done = False
        return self.state

    def step(self, action: tuple) -> StepResult:
        if self.done:
            raise EnvError("step after the episode ended")
        result = taxi_step(self.state, action, self.layout, self.scenario)
        self.state, self.done = result.next, result.done
        return result

    def observe(self, s: TaxiState) -> dict:
        obs = {("taxi",): (s.row, s.col), ("passenger",): s.passenger, ("dest",): s.dest}
        if ("rewardvisited",) in self.ground.index:
            obs[("rewardvisited",)] = s.visited
        return obs

    def abstract(self, s: TaxiState | None = None) -> SymbolicState:
        s = self.state if s is None else s
        out = self._abstract_cache.get(s)
        if out is None:
            out = self._abstract_cache[s] = initial_state(self.ground, self.observe(s))
        return out

    def goal(self) -> dict:
        return {("passenger",): "delivered"}
