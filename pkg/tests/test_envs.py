from collections import Counter, deque

import pytest

from peorl.envs import (
    EnvConfig,
    EnvError,
    GridState,
    GridWorldEnv,
    TaxiEnv,
    TaxiState,
    gridworld_reset,
    gridworld_step,
    load_layout,
    make_env,
    parse_layout,
    taxi_reset,
    taxi_step,
)
from peorl.envs.layout import MapError
from peorl.grounding import enumerate_reachable

TAXI = load_layout("taxi")
GRID = load_layout("gridworld")

# chi-square critical value, 24 degrees of freedom, upper 0.1% tail
CHI2_24_999 = 51.179


def closure(next_state, start, actions, done):
    """States reachable from ``start`` by BFS, not expanding states where ``done`` holds."""
    seen = {start}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        if done(s):
            continue
        for a in actions:
            t = next_state(s, a)
            if t not in seen:
                seen.add(t)
                queue.append(t)
    return seen


def symbolic_closure(grounded, start, goal):
    """Symbolic states reachable from ``start`` without passing through a goal state."""
    return closure(lambda s, a: grounded.successor(s, a) or s, start, grounded.actions, lambda s: s.holds(goal))


# -- taxi


def test_taxi_reset_is_seeded():
    assert taxi_reset(EnvConfig("taxi1", 0)) == taxi_reset(EnvConfig("taxi1", 0))


def test_taxi_reset_uses_distinct_depots_and_uniform_cells():
    cells = Counter()
    depots = set(TAXI.depots)
    for seed in range(10_000):
        s = taxi_reset(EnvConfig("taxi1", seed), TAXI)
        assert s.passenger in depots and s.dest in depots and s.passenger != s.dest
        cells[(s.row, s.col)] += 1
    assert len(cells) == 25
    expected = 10_000 / 25
    chi2 = sum((n - expected) ** 2 / expected for n in cells.values())
    assert chi2 < CHI2_24_999


def test_taxi_wall_blocks_move():
    s = TaxiState(0, 1, "r", "b")
    out = taxi_step(s, ("move", "e"), TAXI)
    assert (out.next.row, out.next.col) == (0, 1) and out.reward == -1.0


def test_taxi_border_blocks_move():
    out = taxi_step(TaxiState(0, 0, "r", "b"), ("move", "n"), TAXI)
    assert out.next == TaxiState(0, 0, "r", "b") and out.reward == -1.0


def test_taxi_improper_dropoff_and_pickup():
    s = TaxiState(2, 2, "intaxi", "b")
    out = taxi_step(s, ("dropoff",), TAXI)
    assert out.reward == -10.0 and not out.done and out.next == s and out.failed
    out = taxi_step(TaxiState(2, 2, "r", "b"), ("pickup",), TAXI)
    assert out.reward == -10.0 and out.failed


def test_taxi_successful_dropoff():
    out = taxi_step(TaxiState(4, 3, "intaxi", "b"), ("dropoff",), TAXI)
    assert out.reward == 20.0 and out.done


def test_taxi_scenario_two_bonus_on_arrival():
    s = TaxiState(4, 3, "intaxi", "b", visited=True)
    assert taxi_step(s, ("dropoff",), TAXI, scenario=2).reward == 50.0
    assert taxi_step(s, ("dropoff",), TAXI, scenario=1).reward == 20.0
    assert taxi_step(s._replace(visited=False), ("dropoff",), TAXI, scenario=2).reward == 20.0
    assert taxi_step(TaxiState(4, 3, "intaxi", "b"), ("move", "e"), TAXI, scenario=2).next.visited


def test_taxi_step_after_done_is_an_error():
    env = TaxiEnv(EnvConfig("taxi1", 0, initial=(4, 3, "intaxi", "b")))
    env.reset()
    env.step(("dropoff",))
    with pytest.raises(EnvError):
        env.step(("move", "n"))


def test_taxi_rewards_are_bounded():
    rewards = set()
    for scenario in (1, 2):
        for s in closure(lambda s, a: taxi_step(s, a, TAXI, scenario).next, TaxiState(2, 2, "r", "b"), TaxiEnv.actions, lambda s: s.passenger == "delivered"):
            if s.passenger == "delivered":
                continue
            for a in TaxiEnv.actions:
                rewards.add(taxi_step(s, a, TAXI, scenario).reward)
    assert rewards == {-10.0, -1.0, 20.0, 50.0}


@pytest.mark.parametrize("domain", ["taxi1", "taxi2"])
@pytest.mark.parametrize("seed", [0, 7])
def test_taxi_abstraction_is_onto_reachable_symbolic_states(domain, seed):
    env = make_env(domain, seed)
    start = env.reset()
    scenario = env.scenario
    reach = closure(lambda s, a: taxi_step(s, a, TAXI, scenario).next, start, env.actions, lambda s: s.passenger == "delivered")
    images = {env.abstract(s) for s in reach}
    assert images == symbolic_closure(env.ground, env.abstract(start), env.goal())
    assert any(s.passenger == "delivered" for s in reach)


# -- gridworld


def test_gridworld_resets_in_first_column():
    for seed in range(200):
        s = gridworld_reset(EnvConfig("gridworld", seed), GRID)
        assert s.col == 1 and (s.row, s.col) in GRID.starts
        assert not (s.grabbed or s.active or s.open)
    assert gridworld_reset(EnvConfig("gridworld", 4), GRID) == gridworld_reset(EnvConfig("gridworld", 4), GRID)


def test_gridworld_reset_abstracts_to_initial_symbolic_state():
    env = GridWorldEnv(EnvConfig("gridworld", 0, initial=(9, 8)))
    s = env.abstract(env.reset())
    assert s.as_dict() == {("pos",): (9, 8), ("dooractive",): False, ("dooropen",): False}


def test_gridworld_bumper_penalties():
    assert gridworld_step(GridState(9, 4), ("move", "e"), GRID).reward == -30.0
    assert gridworld_step(GridState(6, 4), ("move", "e"), GRID).reward == -15.0
    assert gridworld_step(GridState(1, 1), ("move", "e"), GRID).reward == -1.0


def test_gridworld_push_with_bad_force_fails():
    s = GridState(9, 9, active=True)
    out = gridworld_step(s, ("push", 10), GRID)
    assert out.reward == -10.0 and out.failed and out.next == s


def test_gridworld_force_window():
    s = GridState(9, 9, active=True)
    ok = [f for f in range(61) if gridworld_step(s, ("push", f), GRID).next.open]
    assert ok == list(range(20, 40))


def test_gridworld_grab_then_rotate_activates():
    s = gridworld_step(GridState(9, 9), ("grab", 25), GRID).next
    assert s.grabbed and not s.active
    out = gridworld_step(s, ("rotate", "cw"), GRID)
    assert out.next.active and out.reward == -1.0
    assert gridworld_step(s, ("rotate", "ccw"), GRID).reward == -10.0


def test_gridworld_goal_needs_open_door():
    assert gridworld_step(GridState(9, 9, active=True), ("move", "e"), GRID).next == GridState(9, 9, active=True)
    assert gridworld_step(GridState(8, 10), ("move", "s"), GRID).next == GridState(8, 10)
    out = gridworld_step(GridState(9, 9, active=True, open=True), ("move", "e"), GRID)
    assert out.done and (out.next.row, out.next.col) == (9, 10)


def test_gridworld_step_after_done_is_an_error():
    env = GridWorldEnv(EnvConfig("gridworld", 0, initial=(9, 9, False, True, True)))
    env.reset()
    env.step(("move", "e"))
    with pytest.raises(EnvError):
        env.step(("move", "w"))


def test_gridworld_abstraction_is_onto_and_goal_reachable():
    env = make_env("gridworld", 0)
    start = env.reset()
    reach = closure(lambda s, a: gridworld_step(s, a, GRID).next, start, env.actions, lambda s: (s.row, s.col) == GRID.goal)
    images = {env.abstract(s) for s in reach}
    assert images == symbolic_closure(env.ground, env.abstract(start), env.goal())
    assert images <= set(enumerate_reachable(env.ground, env.abstract(start)).states)
    # every start cell is connected to the goal, so one closure covers all resets
    assert all(GridState(r, c) in reach for r, c in GRID.starts)
    assert any((s.row, s.col) == GRID.goal for s in reach)


def test_map_parse_errors():
    with pytest.raises(MapError, match="line 2"):
        parse_layout("SIZE 3 3\nLAVA 1 1\n")
    with pytest.raises(MapError, match="SIZE"):
        parse_layout("RED 1 1\n")
