"""Quality-constrained planning over a grounded transition system.

Plans are loop-free paths from an initial state to the first state satisfying
the goal atoms. A plan's estimated quality is the running sum of gain-reward
facts along it, with unexplored (state, action) pairs read as ``inf_value``.

Two objectives are supported:

``shortest``
    Iterative deepening on plan length: the shortest length admitting a plan
    that meets the quality constraint wins; within that length the plan of
    maximum estimated quality is returned. This is how an incremental
    answer-set solver behaves and is what the learning loop uses.
``quality``
    Maximum estimated quality over all plans within the horizon, ties broken
    by shorter length.

Remaining ties go to the lexicographically smallest action sequence under the
configured action order. Search is depth-first branch-and-bound. Its bounds
come from dynamic programs over walks in the horizon-restricted graph; every
loop-free path is such a walk, so the bounds are admissible.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Mapping

from .grounding import GroundAction, GroundDomain, SymbolicState, SymbolicTransition, fmt_action

DEFAULT_INF = 1e6
_NEG = -math.inf


class PlanningTruncated(RuntimeError):
    """The node cap was hit before the search could decide the problem."""


@dataclass(frozen=True)
class Constraint:
    comparator: str = ">="
    threshold: float = _NEG

    def __post_init__(self):
        if self.comparator not in (">=", ">"):
            raise ValueError(f"comparator must be '>=' or '>', got {self.comparator!r}")

    def satisfied(self, quality: float) -> bool:
        if self.comparator == ">":
            return quality > self.threshold
        return quality >= self.threshold

    def __str__(self) -> str:
        return f"quality {self.comparator} {self.threshold:g}"


UNCONSTRAINED = Constraint(">=", _NEG)


@dataclass(frozen=True)
class GoalSpec:
    atoms: tuple  # ((fluent key, value), ...)
    constraint: Constraint = UNCONSTRAINED

    @classmethod
    def of(cls, atoms: Mapping, constraint: Constraint = UNCONSTRAINED) -> "GoalSpec":
        return cls(tuple(sorted(atoms.items(), key=repr)), constraint)

    def reached(self, state: SymbolicState) -> bool:
        return all(state[k] == v for k, v in self.atoms)

    def with_constraint(self, constraint: Constraint) -> "GoalSpec":
        return GoalSpec(self.atoms, constraint)


class RhoFacts:
    """Gain-reward facts keyed by (state, ground action); missing pairs read as INF."""

    def __init__(self, table: Mapping | None = None, inf_value: float = DEFAULT_INF):
        self.table = dict(table or {})
        self.inf_value = inf_value

    @classmethod
    def sized(cls, max_horizon: int, reward_bound: float) -> "RhoFacts":
        """INF large enough that one unexplored transition outweighs a horizon of known ones."""
        return cls(inf_value=(1 + max_horizon) * abs(reward_bound))

    def update(self, delta: Mapping) -> None:
        self.table.update(delta)

    def copy(self) -> "RhoFacts":
        return RhoFacts(self.table, self.inf_value)

    def __len__(self) -> int:
        return len(self.table)


def rho_lookup(facts: RhoFacts, s: SymbolicState, a: GroundAction) -> float:
    return facts.table.get((s, a), facts.inf_value)


@dataclass(frozen=True)
class Plan:
    states: tuple
    actions: tuple
    estimated_quality: float = 0.0
    truncated: bool = field(default=False, compare=False)

    def __len__(self) -> int:
        return len(self.actions)

    def transitions(self) -> list[SymbolicTransition]:
        return [SymbolicTransition(self.states[i], a, self.states[i + 1]) for i, a in enumerate(self.actions)]

    def describe(self) -> str:
        return " -> ".join(fmt_action(a) for a in self.actions) or "(empty plan)"


@dataclass
class PlannerConfig:
    max_horizon: int = 50
    node_cap: int = 500_000
    objective: str = "shortest"
    action_order: tuple | None = None  # tie-break order; defaults to declaration order

    def __post_init__(self):
        if self.max_horizon < 1:
            raise ValueError("max_horizon must be >= 1")
        if self.objective not in ("shortest", "quality"):
            raise ValueError(f"unknown objective {self.objective!r}")


def plan_quality_estimate(p: Plan, facts: RhoFacts) -> float:
    q = 0.0
    for s, a in zip(p.states, p.actions):
        q += rho_lookup(facts, s, a)
    return q


def _close(a: float, b: float) -> bool:
    return abs(a - b) <= 1e-9 * max(1.0, abs(a), abs(b))


class _Cap(Exception):
    pass


@dataclass
class _Graph:
    states: list  # id -> SymbolicState
    edges: list  # id -> [(action rank, action, next id)]
    goal: list  # id -> bool
    init: int


class Planner:
    """Planner bound to one grounded domain; caches horizon-restricted graphs."""

    def __init__(self, grounded: GroundDomain, cfg: PlannerConfig | None = None):
        self.ground = grounded
        self.cfg = cfg or PlannerConfig()
        order = self.cfg.action_order or tuple(grounded.actions)
        self._actions = list(order)
        self._graphs: dict = {}
        self.nodes_expanded = 0

    def _graph(self, init: SymbolicState, goal: GoalSpec, horizon: int) -> _Graph | None:
        key = (init, goal.atoms, horizon)
        if key in self._graphs:
            return self._graphs[key]
        depth = {init: 0}
        queue = deque([init])
        succ: dict = {}
        goal_states = set()
        while queue:
            s = queue.popleft()
            if goal.reached(s):
                goal_states.add(s)
                succ[s] = []
                continue
            out = []
            if depth[s] < horizon:
                for rank, a in enumerate(self._actions):
                    t = self.ground.successor(s, a)
                    if t is None or t == s:
                        continue
                    out.append((rank, a, t))
                    if t not in depth:
                        depth[t] = depth[s] + 1
                        queue.append(t)
            succ[s] = out
        # backward distances to the goal, to drop states that cannot lie on a plan
        preds: dict = {}
        for s, out in succ.items():
            for _, _, t in out:
                preds.setdefault(t, []).append(s)
        back = {g: 0 for g in goal_states}
        queue = deque(goal_states)
        while queue:
            t = queue.popleft()
            for s in preds.get(t, ()):
                if s not in back and s not in goal_states:
                    back[s] = back[t] + 1
                    queue.append(s)
        kept = [s for s in succ if s in back and depth[s] + back[s] <= horizon]
        graph = None
        if kept and kept[0] == init:
            ids = {s: i for i, s in enumerate(kept)}
            edges = [[(r, a, ids[t]) for r, a, t in succ[s] if t in ids] for s in kept]
            graph = _Graph(kept, edges, [s in goal_states for s in kept], 0)
        if len(self._graphs) > 256:
            self._graphs.clear()
        self._graphs[key] = graph
        return graph

    def _exact_bounds(self, graph: _Graph, weights: list, horizon: int) -> list[tuple]:
        """bounds[d] = (b1, t1, b2), lists indexed by state id: best quality of a
        d-step walk from the state that ends at its first goal state and never
        steps straight back to the state it came from.

        b1 is the best value and t1 the successor it starts with; b2 is the best
        value over walks starting with any other successor. Loop-free paths are
        such walks, so the values bound them from above.
        """
        n = len(graph.states)
        b1 = [0.0 if g else _NEG for g in graph.goal]
        bounds = [(b1, [-1] * n, [_NEG] * n)]
        for _ in range(horizon):
            p1, pt, p2 = bounds[-1]
            c1, ct, c2 = [_NEG] * n, [-1] * n, [_NEG] * n
            for s, out in enumerate(graph.edges):
                if graph.goal[s]:
                    continue
                w = weights[s]
                x1, xt, x2 = _NEG, -1, _NEG
                for j, (_, _, t) in enumerate(out):
                    u = p2[t] if pt[t] == s else p1[t]
                    if u == _NEG:
                        continue
                    v = w[j] + u
                    if t == xt:
                        if v > x1:
                            x1 = v
                    elif v > x1:
                        x1, xt, x2 = v, t, x1
                    elif v > x2:
                        x2 = v
                c1[s], ct[s], c2[s] = x1, xt, x2
            bounds.append((c1, ct, c2))
        return bounds

    def _walk_bounds(self, graph: _Graph, weights: list, horizon: int) -> list[list]:
        """best_within[d][s]: best quality of a walk of at most d steps from s to a goal."""
        best = [[0.0 if g else _NEG for g in graph.goal]]
        for _ in range(horizon):
            prev = best[-1]
            cur = list(prev)
            for s, out in enumerate(graph.edges):
                if graph.goal[s]:
                    continue
                w = weights[s]
                for j, (_, _, t) in enumerate(out):
                    if prev[t] > _NEG:
                        v = w[j] + prev[t]
                        if v > cur[s]:
                            cur[s] = v
            best.append(cur)
        return best

    def plan(self, init: SymbolicState, goal: GoalSpec, facts: RhoFacts) -> Plan | None:
        horizon = self.cfg.max_horizon
        graph = self._graph(init, goal, horizon)
        if graph is None:
            return None
        table, inf = facts.table, facts.inf_value
        weights = [[table.get((s, a), inf) for _, a, _ in out] for s, out in zip(graph.states, graph.edges)]
        search = _Search(graph, weights, goal.constraint, self.cfg.node_cap)
        try:
            if self.cfg.objective == "shortest":
                bounds = self._exact_bounds(graph, weights, horizon)
                for length in range(horizon + 1):
                    u = bounds[length][0][graph.init]
                    if u == _NEG or not goal.constraint.satisfied(u + _slack(u)):
                        continue
                    search.exact(length, bounds)
                    if search.best is not None:
                        break
            else:
                search.anylength(horizon, self._walk_bounds(graph, weights, horizon))
        except _Cap:
            self.nodes_expanded += search.nodes
            if search.best is None:
                raise PlanningTruncated(f"node cap {self.cfg.node_cap} reached without a plan") from None
            return search.result(truncated=True)
        self.nodes_expanded += search.nodes
        return search.result() if search.best is not None else None


def _slack(x: float) -> float:
    return 1e-9 * max(1.0, abs(x))


class _Search:
    def __init__(self, graph: _Graph, weights: list, constraint: Constraint, node_cap: int):
        self.graph = graph
        self.weights = weights
        self.constraint = constraint
        self.node_cap = node_cap
        self.nodes = 0
        self.best: tuple | None = None  # (quality, state ids, actions, ranks)

    def result(self, truncated: bool = False) -> Plan:
        q, ids, actions, _ = self.best
        states = self.graph.states
        return Plan(tuple(states[i] for i in ids), tuple(actions), q, truncated)

    def _offer(self, q: float, ids: list, actions: list, ranks: list, prefer_short: bool) -> None:
        if not self.constraint.satisfied(q):
            return
        if self.best is not None:
            bq, _, bactions, branks = self.best
            if _close(q, bq):
                if not prefer_short or len(actions) >= len(bactions):
                    if len(actions) != len(bactions) or ranks >= branks:
                        return
            elif q < bq:
                return
        self.best = (q, list(ids), list(actions), list(ranks))

    def exact(self, length: int, bounds: list[tuple]) -> None:
        """Best plan of exactly ``length`` steps; action ranks settle ties lexicographically.

        Children are expanded best bound first so that good plans turn up early
        when the search is capped.
        """
        init = self.graph.init
        ids, actions, ranks = [init], [], []
        on_path = [False] * len(self.graph.states)
        on_path[init] = True
        edges, weights, constraint = self.graph.edges, self.weights, self.constraint

        def beaten(bound: float, rank: int) -> bool:
            if self.best is None:
                return False
            bq = self.best[0]
            if bound + _slack(bound) < bq:
                return True
            if _close(bound, bq):
                return ranks + [rank] > self.best[3][: len(ranks) + 1]
            return False

        def visit(s, d, q):
            self.nodes += 1
            if self.nodes > self.node_cap:
                raise _Cap
            if d == 0:
                self._offer(q, ids, actions, ranks, prefer_short=False)
                return
            b1, bt, b2 = bounds[d - 1]
            w = weights[s]
            children = []
            for j, (rank, a, t) in enumerate(edges[s]):
                if on_path[t]:
                    continue
                u = b2[t] if bt[t] == s else b1[t]
                if u == _NEG:
                    continue
                qa = q + w[j]
                bound = qa + u
                if constraint.satisfied(bound + _slack(bound)):
                    children.append((-bound, rank, a, t, qa))
            children.sort(key=lambda c: (c[0], c[1]))
            for neg, rank, a, t, qa in children:
                if beaten(-neg, rank):
                    continue
                ids.append(t)
                actions.append(a)
                ranks.append(rank)
                on_path[t] = True
                visit(t, d - 1, qa)
                on_path[t] = False
                ids.pop()
                actions.pop()
                ranks.pop()

        visit(init, length, 0.0)

    def anylength(self, horizon: int, best_within: list[list]) -> None:
        init = self.graph.init
        ids, actions, ranks = [init], [], []
        on_path = [False] * len(self.graph.states)
        on_path[init] = True
        edges, weights, constraint, goal = self.graph.edges, self.weights, self.constraint, self.graph.goal

        def visit(s, d, q):
            self.nodes += 1
            if self.nodes > self.node_cap:
                raise _Cap
            if goal[s]:
                self._offer(q, ids, actions, ranks, prefer_short=True)
                return
            if d == 0:
                return
            below = best_within[d - 1]
            w = weights[s]
            for j, (rank, a, t) in enumerate(edges[s]):
                if on_path[t] or below[t] == _NEG:
                    continue
                qa = q + w[j]
                bound = qa + below[t]
                slack = _slack(bound)
                if not constraint.satisfied(bound + slack):
                    continue
                if self.best is not None and bound + slack < self.best[0]:
                    continue
                ids.append(t)
                actions.append(a)
                ranks.append(rank)
                on_path[t] = True
                visit(t, d - 1, qa)
                on_path[t] = False
                ids.pop()
                actions.pop()
                ranks.pop()

        visit(init, horizon, 0.0)


def plan(
    init: SymbolicState,
    goal: GoalSpec,
    grounded: GroundDomain,
    facts: RhoFacts,
    cfg: PlannerConfig | None = None,
) -> Plan | None:
    """Solve (init, goal, facts); None when no plan within the horizon meets the constraint."""
    return Planner(grounded, cfg).plan(init, goal, facts)


def check_plan(p: Plan, grounded: GroundDomain, init: SymbolicState, goal: GoalSpec) -> list[str]:
    """Soundness problems of a plan; empty when it is executable, loop-free and reaches the goal."""
    problems = []
    if not p.states or p.states[0] != init:
        problems.append("plan does not start at the initial state")
    if len(p.states) != len(p.actions) + 1:
        problems.append("states and actions do not alternate")
        return problems
    for i, (s, a, t) in enumerate(zip(p.states, p.actions, p.states[1:])):
        if grounded.successor(s, a) != t:
            problems.append(f"step {i + 1}: {fmt_action(a)} does not lead to the recorded state")
    if len(set(p.states)) != len(p.states):
        problems.append("plan revisits a state")
    if not goal.reached(p.states[-1]):
        problems.append("final state does not satisfy the goal")
    if any(goal.reached(s) for s in p.states[:-1]):
        problems.append("plan passes through a goal state before its end")
    return problems
