"""The plan, execute, learn, tighten loop.

Each iteration either asks the planner for a plan strictly better than the
last executed one (with probability ``epsilon_plan``) or re-executes the
current plan. Executed options update the learning tables; the learned gain
rewards of the plan's transitions are exported back to the planner as rho
facts. The loop has converged once the planner finds nothing better.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Mapping

from .grounding import GroundDomain, SymbolicState
from .hrl import (
    DEFAULT_STEP_CAP,
    Catalog,
    LearningConfig,
    LearningTables,
    linear_schedule,
    map_plan_to_options,
    option_terminal_update,
    plan_quality,
    run_option,
)
from .planner import (
    DEFAULT_INF,
    UNCONSTRAINED,
    Constraint,
    GoalSpec,
    Plan,
    Planner,
    PlannerConfig,
    PlanningTruncated,
    RhoFacts,
    check_plan,
)


class LoopError(RuntimeError):
    pass


@dataclass
class LoopConfig:
    epsilon_plan: float = 0.2
    max_episodes: int = 2000
    # optional linear decay of epsilon_plan to epsilon_plan_end over epsilon_plan_anneal episodes
    epsilon_plan_end: float | None = None
    epsilon_plan_anneal: int = 0
    learning: LearningConfig = field(default_factory=LearningConfig)
    planner: PlannerConfig = field(default_factory=PlannerConfig)
    step_cap: int = DEFAULT_STEP_CAP
    inf_value: float = DEFAULT_INF

    def __post_init__(self):
        if not 0.0 <= self.epsilon_plan <= 1.0:
            raise ValueError(f"epsilon_plan must lie in [0, 1], got {self.epsilon_plan}")
        if self.max_episodes < 1 or self.step_cap < 1:
            raise ValueError("max_episodes and step_cap must be positive")
        if self.epsilon_plan_end is not None and not 0.0 <= self.epsilon_plan_end <= self.epsilon_plan:
            raise ValueError("epsilon_plan_end must lie in [0, epsilon_plan]")

    def plan_probability(self, episode: int) -> float:
        if self.epsilon_plan_end is None:
            return self.epsilon_plan
        return linear_schedule(self.epsilon_plan, self.epsilon_plan_end, self.epsilon_plan_anneal, episode)


@dataclass
class EpisodeRecord:
    episode: int
    cum_reward: float
    plan_len: int | None
    failures: int
    quality: float | None
    steps: int = 0
    completed: bool = True
    replanned: bool = False
    converged: bool = False
    ms: float = 0.0


@dataclass
class LoopState:
    init: SymbolicState
    goal: GoalSpec
    facts: RhoFacts
    tables: LearningTables = field(default_factory=LearningTables)
    current_plan: Plan | None = None
    previous_plan: Plan | None = None
    converged: bool = False
    force_replan: bool = False
    episode: int = 0
    log: list = field(default_factory=list)
    seen: dict = field(default_factory=dict)  # action sequence -> Plan


def export_facts(tables: LearningTables, p: Plan) -> dict:
    """rho facts for the executed transitions of ``p``; unexecuted ones stay at INF."""
    out = {}
    for s, a in zip(p.states, p.actions):
        v = tables.option_rho.get((s, a))
        if v is not None:
            out[(s, a)] = v
    return out


class PeorlAgent:
    def __init__(
        self,
        grounded: GroundDomain,
        init: SymbolicState,
        goal_atoms: Mapping,
        catalog: Catalog,
        cfg: LoopConfig | None = None,
        rng: random.Random | None = None,
    ):
        self.ground = grounded
        self.catalog = catalog
        self.cfg = cfg or LoopConfig()
        self.rng = rng or random.Random(0)
        self.planner = Planner(grounded, self.cfg.planner)
        self.state = LoopState(init, GoalSpec.of(goal_atoms), RhoFacts(inf_value=self.cfg.inf_value))

    @property
    def converged(self) -> bool:
        return self.state.converged

    def plan_step(self) -> bool:
        """Decide whether to replan; returns True when a new plan was adopted."""
        st = self.state
        if st.converged:
            return False
        if st.current_plan is not None and not st.force_replan and self.rng.random() >= self.cfg.plan_probability(st.episode):
            return False
        goal = st.goal if st.current_plan is not None else st.goal.with_constraint(UNCONSTRAINED)
        try:
            p = self.planner.plan(st.init, goal, st.facts)
        except PlanningTruncated:
            if st.current_plan is None:
                raise
            return False  # a capped search proves nothing; keep the current plan
        if p is None:
            if st.current_plan is None:
                raise LoopError("no plan reaches the goal within the planning horizon")
            st.converged = True
            st.previous_plan = st.current_plan
            return False
        problems = check_plan(p, self.ground, st.init, goal)
        if problems:
            raise LoopError("planner returned an invalid plan: " + "; ".join(problems))
        st.previous_plan, st.current_plan = st.current_plan, p
        st.force_replan = False
        return True

    def execute(self, env, replanned: bool = False) -> EpisodeRecord:
        """Run the current plan's options once, learning at both levels."""
        st = self.state
        plan = st.current_plan
        rates = self.cfg.learning.rates(st.episode)
        env.reset()
        if env.abstract() != st.init:
            raise LoopError("environment reset does not match the planning initial state")
        total, failures, steps, completed = 0.0, 0, 0, True
        for option in map_plan_to_options(plan, self.catalog, self.cfg.step_cap):
            if not option.available(env.abstract()):
                completed = False
                break
            out = run_option(option, env, st.tables, rates, self.rng)
            total += out.reward
            failures += out.failures
            steps += out.steps
            if not out.terminated:
                completed = False
                break
            option_terminal_update(
                st.tables, option.initiation, option.transition.action, out.reward, option.target, rates, self.ground
            )
        st.force_replan = not completed
        quality = plan_quality(plan, st.tables)
        if not st.converged:
            st.goal = st.goal.with_constraint(Constraint(">", quality))
            st.facts.update(export_facts(st.tables, plan))
            st.seen[plan.actions] = plan
        rec = EpisodeRecord(
            st.episode, total, len(plan), failures, quality, steps, completed, replanned, st.converged
        )
        st.log.append(rec)
        st.episode += 1
        return rec

    def run_episode(self, env) -> EpisodeRecord:
        replanned = self.plan_step()
        return self.execute(env, replanned)

    def final_plan(self) -> Plan:
        """The converged plan, or the best executed plan by learned quality."""
        st = self.state
        if st.converged:
            return st.current_plan
        if not st.seen:
            raise LoopError("no plan has been executed yet")
        return max(st.seen.values(), key=lambda p: (plan_quality(p, st.tables), -len(p)))


@dataclass
class TrainResult:
    plan: Plan
    log: list
    converged: bool
    agent: PeorlAgent


def peorl_train(
    init: SymbolicState,
    goal_atoms: Mapping,
    grounded: GroundDomain,
    env_factory: Callable[[], object],
    catalog: Catalog,
    cfg: LoopConfig | None = None,
    rng: random.Random | None = None,
) -> TrainResult:
    """Iterate until the planner finds no better plan or ``max_episodes`` is reached."""
    agent = PeorlAgent(grounded, init, goal_atoms, catalog, cfg, rng)
    env = env_factory()
    for _ in range(agent.cfg.max_episodes):
        replanned = agent.plan_step()
        if agent.converged:
            break
        agent.execute(env, replanned)
    return TrainResult(agent.final_plan(), agent.state.log, agent.converged, agent)
