"""Grid World with a door that must be activated (grab, rotate) and pushed open.

Entering a cell pays that cell's penalty: -30 for red bumpers, -15 for yellow,
-1 otherwise. ``grab`` and ``push`` take an integer force 0..60 and succeed
only for 20 <= F < 40. Every failed primitive costs -10 and leaves the state
unchanged.
"""

from __future__ import annotations

import random
from typing import NamedTuple

from ..grounding import GroundDomain, SymbolicState, initial_state
from .base import EnvConfig, EnvError, StepResult
from .layout import Layout, load_layout

FORCES = range(0, 61)
MOVES = [("move", d) for d in ("e", "s", "w", "n")]
ACTIONS = (
    MOVES
    + [("grab", f) for f in FORCES]
    + [("rotate", "cw"), ("rotate", "ccw")]
    + [("push", f) for f in FORCES]
)

RED_PENALTY = -30.0
YELLOW_PENALTY = -15.0
STEP_REWARD = -1.0
FAILURE_PENALTY = -10.0


def _move(t) -> list:
    return [("move", t.action[1])]


# activate is realized by grabbing the knob with some force and turning it
CATALOG = {
    "move": _move,
    "activate": [("grab", f) for f in FORCES] + [("rotate", "cw"), ("rotate", "ccw")],
    "push": [("push", f) for f in FORCES],
}


def force_ok(force: int) -> bool:
    return 20 <= force < 40


class GridState(NamedTuple):
    row: int
    col: int
    grabbed: bool = False
    active: bool = False
    open: bool = False


def gridworld_reset(cfg: EnvConfig, layout: Layout | None = None) -> GridState:
    """Agent on one of the marked first-column cells, door closed and inactive."""
    layout = layout or load_layout("gridworld")
    if cfg.initial is not None:
        return GridState(*cfg.initial)
    row, col = random.Random(cfg.seed).choice(layout.starts)
    return GridState(row, col)


def cell_reward(layout: Layout, cell: tuple) -> float:
    if cell in layout.red:
        return RED_PENALTY
    if cell in layout.yellow:
        return YELLOW_PENALTY
    return STEP_REWARD


def gridworld_step(s: GridState, action: tuple, layout: Layout) -> StepResult:
    here = (s.row, s.col)
    if here == layout.goal:
        raise EnvError("step after the episode ended")
    kind = action[0]
    fail = StepResult(s, FAILURE_PENALTY, failed=True)
    if kind == "move":
        nxt = layout.neighbour(here, action[1])
        if nxt == layout.goal and not (here == layout.door and s.open):
            nxt = None
        if nxt is None:
            return StepResult(s._replace(grabbed=False), STEP_REWARD)
        return StepResult(s._replace(row=nxt[0], col=nxt[1], grabbed=False), cell_reward(layout, nxt), done=nxt == layout.goal)
    at_door = here == layout.door
    if kind == "grab":
        if at_door and not s.grabbed and not s.active and force_ok(action[1]):
            return StepResult(s._replace(grabbed=True), STEP_REWARD)
        return fail
    if kind == "rotate":
        if action[1] == "cw" and s.grabbed and not s.active:
            return StepResult(s._replace(grabbed=False, active=True), STEP_REWARD)
        return fail
    if kind == "push":
        if at_door and s.active and not s.open and force_ok(action[1]):
            return StepResult(s._replace(open=True), STEP_REWARD)
        return fail
    raise EnvError(f"unknown gridworld action {action!r}")


class GridWorldEnv:
    actions = ACTIONS

    def __init__(self, cfg: EnvConfig, ground: GroundDomain | None = None, layout: Layout | None = None):
        self.layout = layout or load_layout("gridworld")
        self.initial = gridworld_reset(cfg, self.layout)
        self._ground = ground
        self._abstract_cache: dict = {}
        self.state = self.initial
        self.done = False

    @property
    def ground(self) -> GroundDomain:
        if self._ground is None:
            from ..domains import load_domain

            self._ground = load_domain("gridworld")
        return self._ground

    def reset(self) -> GridState:
        self.state = self.initial
        self.done = False
        return self.state

    def step(self, action: tuple) -> StepResult:
        if self.done:
            raise EnvError("step after the episode ended")
        result = gridworld_step(self.state, action, self.layout)
        self.state, self.done = result.next, result.done
        return result

    def observe(self, s: GridState) -> dict:
        return {("pos",): (s.row, s.col), ("dooractive",): s.active, ("dooropen",): s.open}

    def abstract(self, s: GridState | None = None) -> SymbolicState:
        s = self.state if s is None else s
        out = self._abstract_cache.get(s)
        if out is None:
            out = self._abstract_cache[s] = initial_state(self.ground, self.observe(s))
        return out

    def goal(self) -> dict:
        return {("pos",): self.layout.goal, ("dooractive",): True, ("dooropen",): True}
