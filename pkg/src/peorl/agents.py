"""Baseline agents: flat Q-learning, a pure planning agent, and hierarchical Q-learning
over hand-crafted Taxi options.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .grounding import GroundDomain
from .hrl import Catalog, LearningConfig, LearningTables, Rates, map_plan_to_options, run_option
from .loop import EpisodeRecord
from .planner import GoalSpec, Plan, Planner, PlannerConfig, RhoFacts


def _argmax(values: list) -> int:
    best, best_v = 0, values[0]
    for i in range(1, len(values)):
        if values[i] > best_v:
            best, best_v = i, values[i]
    return best


def _egreedy(values: list, epsilon: float, rng: random.Random) -> int:
    if epsilon > 0 and rng.random() < epsilon:
        return rng.randrange(len(values))
    return _argmax(values)


# -- flat Q-learning -----------------------------------------------------------


def q_agent_episode(
    env,
    q: dict,
    rates: Rates,
    gamma: float,
    rng: random.Random,
    max_steps: int = 1000,
    episode: int = 0,
) -> EpisodeRecord:
    """One epsilon-greedy Q-learning episode over the env's primitive actions.

    ``q`` maps env states to per-action value lists; greedy ties go to the
    first action.
    """
    actions = env.actions
    n = len(actions)
    s = env.reset()
    total, failures, steps = 0.0, 0, 0
    while steps < max_steps:
        qs = q.get(s)
        if qs is None:
            qs = q[s] = [0.0] * n
        i = _egreedy(qs, rates.epsilon, rng)
        result = env.step(actions[i])
        y = result.next
        total += result.reward
        failures += int(result.failed)
        steps += 1
        future = 0.0
        if not result.done:
            qy = q.get(y)
            future = max(qy) if qy is not None else 0.0
        qs[i] += rates.alpha * (result.reward + gamma * future - qs[i])
        s = y
        if result.done:
            break
    return EpisodeRecord(episode, total, None, failures, None, steps, env.done)


@dataclass
class QAgent:
    learning: LearningConfig
    gamma: float = 0.99
    max_steps: int = 1000
    rng: random.Random = field(default_factory=lambda: random.Random(0))
    q: dict = field(default_factory=dict)
    episode: int = 0

    def run_episode(self, env) -> EpisodeRecord:
        rec = q_agent_episode(env, self.q, self.learning.rates(self.episode), self.gamma, self.rng, self.max_steps, self.episode)
        self.episode += 1
        return rec


# -- pure planning -------------------------------------------------------------


@dataclass
class PlanningAgent:
    """Executes a shortest plan with a fixed uniformly random intra-option policy.

    Gain-reward facts stay empty, so every plan looks equally unexplored and the
    planner's tie-breaking yields its shortest plan. When an option leaves its
    symbolic transition the agent replans from the observed state.
    """

    grounded: GroundDomain
    goal_atoms: dict
    catalog: Catalog
    planner_cfg: PlannerConfig = field(default_factory=PlannerConfig)
    step_cap: int = 100
    max_steps: int = 1000
    rng: random.Random = field(default_factory=lambda: random.Random(0))
    episode: int = 0

    def __post_init__(self):
        self.planner = Planner(self.grounded, self.planner_cfg)
        self.goal = GoalSpec.of(self.goal_atoms)
        self._plans: dict = {}
        self._tables = LearningTables()  # stays empty: learn=False
        self._rates = Rates(0.0, 0.0, 0.0)

    def plan_from(self, s) -> Plan | None:
        if s not in self._plans:
            self._plans[s] = self.planner.plan(s, self.goal, RhoFacts())
        return self._plans[s]

    def run_episode(self, env) -> EpisodeRecord:
        env.reset()
        total, failures, steps = 0.0, 0, 0
        first = None
        while not env.done and steps < self.max_steps:
            p = self.plan_from(env.abstract())
            if p is None:
                break
            first = first or p
            for option in map_plan_to_options(p, self.catalog, min(self.step_cap, self.max_steps - steps)):
                out = run_option(option, env, self._tables, self._rates, self.rng, learn=False, policy="random")
                total += out.reward
                failures += out.failures
                steps += out.steps
                if not out.terminated or steps >= self.max_steps:
                    break
            if self.goal.reached(env.abstract()):
                break
        rec = EpisodeRecord(self.episode, total, len(first) if first else None, failures, None, steps, env.done)
        self.episode += 1
        return rec


def p_agent_episode(agent: PlanningAgent, env) -> EpisodeRecord:
    return agent.run_episode(env)


# -- hierarchical Q-learning over Taxi options ----------------------------------

PRIMITIVE_OPTIONS = ("pickup", "dropoff")


@dataclass
class TaxiOptions:
    """go-to-depot(d) for each depot plus one-step pickup and dropoff."""

    depots: dict
    moves: tuple
    step_cap: int = 50

    @property
    def names(self) -> list:
        return [("goto", d) for d in sorted(self.depots)] + [(p,) for p in PRIMITIVE_OPTIONS]

    def available(self, option: tuple, s) -> bool:
        if option[0] == "goto":
            return (s.row, s.col) != self.depots[option[1]]
        return True

    def at_target(self, option: tuple, s) -> bool:
        return (s.row, s.col) == self.depots[option[1]]


@dataclass
class HrlAgent:
    options: TaxiOptions
    learning: LearningConfig
    gamma: float = 0.99
    max_steps: int = 200
    rng: random.Random = field(default_factory=lambda: random.Random(0))
    top: dict = field(default_factory=dict)  # env state -> value per option
    intra: dict = field(default_factory=dict)  # (depot, cell) -> value per move
    episode: int = 0

    def run_episode(self, env) -> EpisodeRecord:
        rec = hrl_agent_episode(env, self, self.learning.rates(self.episode), self.rng)
        self.episode += 1
        return rec


def _masked_choice(values: list, mask: list, epsilon: float, rng: random.Random) -> int:
    allowed = [i for i, ok in enumerate(mask) if ok]
    if epsilon > 0 and rng.random() < epsilon:
        return allowed[rng.randrange(len(allowed))]
    return max(allowed, key=lambda i: (values[i], -i))


def hrl_agent_episode(env, agent: HrlAgent, rates: Rates, rng: random.Random) -> EpisodeRecord:
    """SMDP Q-learning over options with intra-option Q-learning for go-to-depot."""
    opts = agent.options
    names = opts.names
    gamma = agent.gamma
    s = env.reset()
    total, failures, steps = 0.0, 0, 0
    while not env.done and steps < agent.max_steps:
        qs = agent.top.setdefault(s, [0.0] * len(names))
        k = _masked_choice(qs, [opts.available(o, s) for o in names], rates.epsilon, rng)
        option = names[k]
        cum, discount, n = 0.0, 1.0, 0
        if option[0] == "goto":
            depot = option[1]
            while not opts.at_target(option, s) and n < opts.step_cap and steps < agent.max_steps:
                cell = (s.row, s.col)
                qi = agent.intra.setdefault((depot, cell), [0.0] * len(opts.moves))
                i = _egreedy(qi, rates.epsilon, rng)
                result = env.step(opts.moves[i])
                y = result.next
                ycell = (y.row, y.col)
                future = 0.0
                if ycell != opts.depots[depot]:
                    qy = agent.intra.get((depot, ycell))
                    future = max(qy) if qy is not None else 0.0
                qi[i] += rates.alpha * (result.reward + gamma * future - qi[i])
                cum += discount * result.reward
                discount *= gamma
                total += result.reward
                failures += int(result.failed)
                steps += 1
                n += 1
                s = y
        else:
            result = env.step(option)
            cum, discount = result.reward, gamma
            total += result.reward
            failures += int(result.failed)
            steps += 1
            s = result.next
        future = 0.0
        if not env.done:
            qn = agent.top.get(s)
            if qn is not None:
                future = max(v for v, o in zip(qn, names) if opts.available(o, s))
        qs[k] += rates.alpha * (cum + discount * future - qs[k])
    return EpisodeRecord(agent.episode, total, None, failures, None, steps, env.done)
