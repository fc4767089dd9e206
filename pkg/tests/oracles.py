"""Independent reference implementations used as test oracles.

Nothing here calls the planner; state expansion goes through
``GroundDomain.successor`` only, or through the environments directly.
"""

from __future__ import annotations

import random
from collections import deque


def bfs_states(grounded, init):
    """Reachable states by plain BFS over (state, action) pairs; returns (states set, edge count)."""
    seen = {init}
    queue = deque([init])
    edges = 0
    while queue:
        s = queue.popleft()
        for a in grounded.actions:
            t = grounded.successor(s, a)
            if t is None:
                continue
            edges += 1
            if t not in seen:
                seen.add(t)
                queue.append(t)
    return seen, edges


def bfs_plan_length(grounded, init, goal_atoms, limit=200):
    """Length of a shortest action sequence from ``init`` to a goal state."""
    if init.holds(goal_atoms):
        return 0
    seen = {init}
    frontier = [init]
    for depth in range(1, limit + 1):
        nxt = []
        for s in frontier:
            for a in grounded.actions:
                t = grounded.successor(s, a)
                if t is None or t in seen:
                    continue
                if t.holds(goal_atoms):
                    return depth
                seen.add(t)
                nxt.append(t)
        frontier = nxt
        if not frontier:
            break
    return None


def loop_free_plans(grounded, init, goal_atoms, horizon):
    """Every loop-free path (states, actions) that ends at its first goal state."""
    out = []
    if init.holds(goal_atoms):
        return [((init,), ())]

    def visit(states, actions):
        if len(actions) == horizon:
            return
        s = states[-1]
        for a in grounded.actions:
            t = grounded.successor(s, a)
            if t is None or t in states:
                continue
            if t.holds(goal_atoms):
                out.append((states + (t,), actions + (a,)))
            else:
                visit(states + (t,), actions + (a,))

    visit((init,), ())
    return out


def quality(states, actions, table, inf):
    return sum(table.get((s, a), inf) for s, a in zip(states, actions))


def best_plan(plans, grounded, table, inf, satisfied, objective):
    """Reference optimum under the planner's documented ordering."""
    rank = {a: i for i, a in enumerate(grounded.actions)}
    cands = [(quality(s, a, table, inf), s, a) for s, a in plans]
    cands = [c for c in cands if satisfied(c[0])]
    if not cands:
        return None
    if objective == "shortest":
        shortest = min(len(c[2]) for c in cands)
        cands = [c for c in cands if len(c[2]) == shortest]
    return min(cands, key=lambda c: (-c[0], len(c[2]), [rank[a] for a in c[2]]))


def toy_domain(rng: random.Random, nodes: int, edge_p: float) -> tuple[str, list]:
    """Random directed graph as an action description: ``go(J)`` moves from I to J along an edge."""
    edges = [(i, j) for i in range(nodes) for j in range(nodes) if i != j and rng.random() < edge_p]
    lines = [
        f"sort node = 0..{nodes - 1}.",
        "fluent at : node.",
        "action go(node).",
        "inertial at.",
    ]
    for i, j in edges:
        lines.append(f"go({j}) causes at = {j} if at = {i}.")
    present = set(edges)
    for i in range(nodes):
        for j in range(nodes):
            if (i, j) not in present:
                lines.append(f"nonexecutable go({j}) if at = {i}.")
    return "\n".join(lines) + "\n", edges


def random_facts(rng: random.Random, plans, keep: float, values=(-3, -2, -1, 0, 1, 2)) -> dict:
    """Integer rho facts on a random subset of the transitions used by ``plans``."""
    table = {}
    for states, actions in plans:
        for s, a in zip(states, actions):
            if (s, a) not in table and rng.random() < keep:
                table[(s, a)] = float(rng.choice(values))
    return table

