"""Options realizing symbolic transitions, and hierarchical R-learning over them.

Both levels keep an average-adjusted value R and a gain reward rho indexed by
(state, action). Inside an option the maxima range over the option's
admissible primitive actions; at the option level they range over the
ground actions executable in the symbolic state. Missing entries read as 0.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence, Union

from .grounding import GroundAction, GroundDomain, SymbolicState, SymbolicTransition, fmt_action
from .planner import Plan

DEFAULT_STEP_CAP = 100

# symbolic action name (or full ground action) -> admissible env actions
Catalog = Mapping[Union[str, tuple], Union[Sequence, Callable[[SymbolicTransition], Sequence]]]


class OptionError(RuntimeError):
    pass


@dataclass(frozen=True)
class OptionSpec:
    transition: SymbolicTransition
    actions: tuple
    step_cap: int = DEFAULT_STEP_CAP

    @property
    def initiation(self) -> SymbolicState:
        return self.transition.source

    @property
    def target(self) -> SymbolicState:
        return self.transition.target

    @property
    def key(self) -> tuple:
        return (self.transition.source, self.transition.action)

    def available(self, abstract_state: SymbolicState) -> bool:
        return abstract_state == self.transition.source

    def terminates(self, abstract_state: SymbolicState) -> bool:
        return abstract_state == self.transition.target


@dataclass
class LearningTables:
    option_R: dict = field(default_factory=dict)
    option_rho: dict = field(default_factory=dict)
    intra_R: dict = field(default_factory=dict)
    intra_rho: dict = field(default_factory=dict)

    def intra(self, key: tuple) -> tuple[dict, dict]:
        R = self.intra_R.get(key)
        if R is None:
            R = self.intra_R[key] = {}
            self.intra_rho[key] = {}
        return R, self.intra_rho[key]


@dataclass(frozen=True)
class Rates:
    alpha: float
    beta: float
    epsilon: float = 0.0


def linear_schedule(start: float, end: float, horizon: int, k: int) -> float:
    if horizon <= 0 or k >= horizon:
        return end
    return start + (end - start) * k / horizon


@dataclass
class LearningConfig:
    """Learning-rate and exploration schedules, annealed linearly per episode."""

    alpha_start: float = 1.0
    alpha_end: float = 0.01
    alpha_anneal: int = 1000
    beta: float = 0.5
    epsilon_start: float = 0.1
    epsilon_end: float = 0.0
    epsilon_anneal: int = 1000

    def __post_init__(self):
        for name in ("alpha_start", "alpha_end", "beta"):
            v = getattr(self, name)
            if not 0.0 < v <= 1.0:
                raise ValueError(f"{name} must lie in (0, 1], got {v}")
        if self.alpha_end > self.alpha_start or self.epsilon_end > self.epsilon_start:
            raise ValueError("schedules must be non-increasing")
        if not 0.0 <= self.epsilon_end <= self.epsilon_start <= 1.0:
            raise ValueError("exploration probabilities must lie in [0, 1]")

    def rates(self, episode: int) -> Rates:
        return Rates(
            linear_schedule(self.alpha_start, self.alpha_end, self.alpha_anneal, episode),
            self.beta,
            linear_schedule(self.epsilon_start, self.epsilon_end, self.epsilon_anneal, episode),
        )


def map_transition_to_option(t: SymbolicTransition, catalog: Catalog, step_cap: int = DEFAULT_STEP_CAP) -> OptionSpec:
    entry = catalog.get(t.action, catalog.get(t.action[0]))
    if entry is None:
        raise OptionError(f"no realization for symbolic action {fmt_action(t.action)}")
    actions = tuple(entry(t) if callable(entry) else entry)
    if not actions:
        raise OptionError(f"empty realization for {fmt_action(t.action)}")
    return OptionSpec(t, actions, step_cap)


def map_plan_to_options(p: Plan, catalog: Catalog, step_cap: int = DEFAULT_STEP_CAP) -> list[OptionSpec]:
    return [map_transition_to_option(t, catalog, step_cap) for t in p.transitions()]


def intra_option_update(tables: LearningTables, option: OptionSpec, x, a, r: float, y, rates: Rates) -> None:
    R, rho = tables.intra(option.key)
    max_y = max(R.get((y, b), 0.0) for b in option.actions)
    max_x = max(R.get((x, b), 0.0) for b in option.actions)
    old_rho = rho.get((x, a), 0.0)
    R[(x, a)] = (1 - rates.alpha) * R.get((x, a), 0.0) + rates.alpha * (r - old_rho + max_y)
    rho[(x, a)] = (1 - rates.beta) * old_rho + rates.beta * (r + max_y - max_x)


def _max_option_value(tables: LearningTables, s: SymbolicState, ground: GroundDomain) -> float:
    values = [tables.option_R.get((s, b), 0.0) for b in ground.executable_actions(s)]
    return max(values) if values else 0.0


def option_terminal_update(
    tables: LearningTables,
    s_prev: SymbolicState,
    a_prev: GroundAction,
    r_cum: float,
    s_next: SymbolicState,
    rates: Rates,
    ground: GroundDomain,
) -> None:
    max_next = _max_option_value(tables, s_next, ground)
    max_prev = _max_option_value(tables, s_prev, ground)
    key = (s_prev, a_prev)
    old_rho = tables.option_rho.get(key, 0.0)
    tables.option_R[key] = (1 - rates.alpha) * tables.option_R.get(key, 0.0) + rates.alpha * (r_cum - old_rho + max_next)
    tables.option_rho[key] = (1 - rates.beta) * old_rho + rates.beta * (r_cum + max_next - max_prev)


@dataclass
class OptionOutcome:
    reward: float
    state: object
    failures: int
    steps: int
    terminated: bool
    trace: list = field(default_factory=list)  # (x, action, reward, y)


def greedy_action(R: dict, x, actions: Sequence):
    best, best_v = actions[0], R.get((x, actions[0]), 0.0)
    for b in actions[1:]:
        v = R.get((x, b), 0.0)
        if v > best_v:
            best, best_v = b, v
    return best


def run_option(
    option: OptionSpec,
    env,
    tables: LearningTables,
    rates: Rates,
    rng: random.Random,
    learn: bool = True,
    policy: str = "egreedy",
) -> OptionOutcome:
    """Execute one option until its termination predicate holds or the step cap is hit.

    ``policy`` is ``egreedy`` (on the option's intra R table) or ``random``
    (uniform over admissible actions).
    """
    if not option.available(env.abstract()):
        raise OptionError(f"option for {fmt_action(option.transition.action)} is not available here")
    R, _ = tables.intra(option.key)
    outcome = OptionOutcome(0.0, env.state, 0, 0, option.terminates(env.abstract()))
    actions = option.actions
    while not outcome.terminated and outcome.steps < option.step_cap:
        x = env.state
        if policy == "random" or (rates.epsilon > 0 and rng.random() < rates.epsilon):
            a = actions[rng.randrange(len(actions))]
        else:
            a = greedy_action(R, x, actions)
        result = env.step(a)
        y = result.next
        if learn:
            intra_option_update(tables, option, x, a, result.reward, y, rates)
        outcome.trace.append((x, a, result.reward, y))
        outcome.reward += result.reward
        outcome.failures += int(result.failed)
        outcome.steps += 1
        outcome.state = y
        abstract_y = env.abstract()
        if option.terminates(abstract_y):
            outcome.terminated = True
        elif abstract_y != option.initiation or result.done:
            break  # left the option's domain: symbolic execution failure
    return outcome


def plan_quality(p: Plan, tables: LearningTables) -> float:
    q = 0.0
    for s, a in zip(p.states, p.actions):
        q += tables.option_rho.get((s, a), 0.0)
    return q


# -- snapshots ----------------------------------------------------------------


def _dump(value) -> str:
    return json.dumps(value, separators=(",", ":"))


def _load(text: str):
    def tup(v):
        return tuple(tup(x) for x in v) if isinstance(v, list) else v

    return tup(json.loads(text))


def dump_tables(tables: LearningTables) -> str:
    """Text snapshot: ``R``/``RHO`` option-level lines, ``IR``/``IRHO`` intra-option lines."""
    lines = []
    for tag, table in (("R", tables.option_R), ("RHO", tables.option_rho)):
        for (s, a), v in table.items():
            lines.append(f"{tag} {s.key()} {fmt_action(a)} {v!r}")
    for tag, tabs in (("IR", tables.intra_R), ("IRHO", tables.intra_rho)):
        for (s, a), table in tabs.items():
            for (x, b), v in table.items():
                lines.append(f"{tag} {s.key()} {fmt_action(a)} {_dump(x)} {_dump(b)} {v!r}")
    return "\n".join(lines) + "\n"


def load_tables(text: str, ground: GroundDomain) -> LearningTables:
    tables = LearningTables()
    states: dict = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        parts = line.split()
        if not parts:
            continue
        tag = parts[0]
        try:
            key = parts[1]
            s = states.get(key) or states.setdefault(key, ground.state_from_key(key))
            a = ground.parse_action(parts[2])
            if tag in ("R", "RHO"):
                table = tables.option_R if tag == "R" else tables.option_rho
                table[(s, a)] = float(parts[3])
            elif tag in ("IR", "IRHO"):
                R, rho = tables.intra((s, a))
                (R if tag == "IR" else rho)[(_load(parts[3]), _load(parts[4]))] = float(parts[5])
            else:
                raise ValueError(f"unknown record {tag!r}")
        except (IndexError, ValueError) as e:
            raise ValueError(f"line {lineno}: {e}") from None
    return tables


def export_rho(tables: LearningTables, transitions: Iterable[SymbolicTransition]) -> dict:
    return {(t.source, t.action): tables.option_rho.get((t.source, t.action), 0.0) for t in transitions}
