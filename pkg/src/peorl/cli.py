"""Command-line interface: ``peorl plan|train|eval|report``.

Exit codes: 0 success, 1 usage error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

from . import __version__
from .action_language import ParseError, parse_action_description
from .domains import NAMES as BUILTIN_DOMAINS
from .domains import load_domain
from .envs import DOMAINS, make_env, option_catalog
from .experiment import ConfigError, ExperimentConfig, load_config, run_experiment, shortest_plan
from .grounding import GroundingError, fmt_action, ground, initial_state
from .hrl import Rates, load_tables, map_plan_to_options, run_option
from .loop import LoopError
from .planner import (
    DEFAULT_INF,
    UNCONSTRAINED,
    Constraint,
    GoalSpec,
    Planner,
    PlannerConfig,
    PlanningTruncated,
    RhoFacts,
)

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _load_grounded(spec: str):
    if spec in BUILTIN_DOMAINS:
        return load_domain(spec)
    path = Path(spec)
    if not path.exists():
        raise UsageError(f"domain {spec!r} is neither a file nor one of {', '.join(BUILTIN_DOMAINS)}")
    return ground(parse_action_description(path.read_text(encoding="utf-8")))


# -- plan -------------------------------------------------------------------------


def cmd_plan(args) -> int:
    grounded = _load_grounded(args.domain)
    init = initial_state(grounded, args.init)
    constraint = UNCONSTRAINED if args.quality_min is None else Constraint(">=", args.quality_min)
    goal = GoalSpec.of(grounded.parse_assignment(args.goal), constraint)
    facts = RhoFacts()
    if args.facts:
        tables = load_tables(Path(args.facts).read_text(encoding="utf-8"), grounded)
        facts.update(tables.option_rho)
    cfg = PlannerConfig(max_horizon=args.horizon, node_cap=args.node_cap, objective=args.objective)
    p = Planner(grounded, cfg).plan(init, goal, facts)
    if p is None:
        print(f"no plan within {args.horizon} steps satisfies {constraint}", file=sys.stderr)
        return EXIT_RUNTIME
    if args.verbose:
        print(f"0. {p.states[0].key()}")
    for i, t in enumerate(p.transitions(), 1):
        before = set(t.source.atoms())
        diff = ",".join(x for x in t.target.atoms() if x not in before)
        print(f"{i}. {fmt_action(t.action)}  {{{diff}}}")
    print(f"quality: {p.estimated_quality:g}")
    return EXIT_OK


# -- train --------------------------------------------------------------------------

_TRAIN_FLAGS = (
    ("agent", str),
    ("domain", str),
    ("episodes", int),
    ("seeds", str),
    ("alpha_start", float),
    ("alpha_end", float),
    ("alpha_anneal", int),
    ("beta", float),
    ("gamma", float),
    ("epsilon_plan", float),
    ("epsilon_action", float),
    ("epsilon_anneal", int),
    ("slack", int),
    ("node_cap", int),
    ("step_cap", int),
    ("max_steps", int),
    ("out", str),
    ("workers", int),
)


def cmd_train(args) -> int:
    overrides = {name: getattr(args, name) for name, _ in _TRAIN_FLAGS}
    if args.timing:
        overrides["timing"] = True
    cfg = load_config(args.config, overrides)
    results = run_experiment(cfg, tables_dir=args.tables_out)
    out = Path(cfg.out)
    print(f"wrote {sum(len(r.records) for r in results)} rows to {out}")
    for r in results:
        if r.final_plan is not None:
            state = "converged" if r.converged else "not converged"
            print(f"seed {r.seed}: {state}; final plan {r.final_plan}")
    if args.report:
        from .plotting import render_report

        for path in render_report([out], out.parent, prefix=f"{out.stem}_"):
            print(f"wrote {path}")
    return EXIT_OK


# -- eval -----------------------------------------------------------------------------


def cmd_eval(args) -> int:
    env = make_env(args.domain, args.seed)
    tables = load_tables(Path(args.tables).read_text(encoding="utf-8"), env.ground)
    short = shortest_plan(env)
    slack = args.slack if args.slack is not None else ExperimentConfig(domain=args.domain).horizon_slack
    # exploit: unexplored transitions are ruled out rather than sought
    facts = RhoFacts(tables.option_rho, inf_value=-DEFAULT_INF)
    env.reset()
    cfg = PlannerConfig(max_horizon=len(short) + slack, node_cap=args.node_cap, objective="quality")
    p = Planner(env.ground, cfg).plan(env.abstract(), GoalSpec.of(env.goal()), facts)
    if p is None:
        print("no plan reaches the goal", file=sys.stderr)
        return EXIT_RUNTIME
    print(f"plan: {p.describe()}")
    epsilon = 0.0 if args.greedy else args.epsilon
    rng = random.Random(args.seed)
    for episode in range(args.episodes):
        env.reset()
        total, failures, completed = 0.0, 0, True
        for option in map_plan_to_options(p, option_catalog(args.domain), args.step_cap):
            out = run_option(option, env, tables, Rates(0.0, 0.0, epsilon), rng, learn=False)
            total += out.reward
            failures += out.failures
            if not out.terminated:
                completed = False
                break
        status = "" if completed else " (plan execution failed)"
        print(f"episode {episode}: reward {total:g}, failures {failures}{status}")
    return EXIT_OK


# -- report ---------------------------------------------------------------------------


def cmd_report(args) -> int:
    from .plotting import render_report

    out_dir = args.out_dir or Path(args.csv[0]).parent
    for path in render_report(args.csv, out_dir, window=args.window):
        print(f"wrote {path}")
    return EXIT_OK


# -- entry point ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="peorl", description="Symbolic planning guided by hierarchical R-learning.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("plan", help="solve one planning problem")
    p.add_argument("--domain", required=True, help=f"action description file or one of {', '.join(BUILTIN_DOMAINS)}")
    p.add_argument("--init", required=True, help="initial atoms, e.g. 'pos(9,8),~dooropen'")
    p.add_argument("--goal", required=True, help="goal atoms")
    p.add_argument("--quality-min", type=float, help="require plan quality >= this value")
    p.add_argument("--facts", help="table snapshot whose RHO lines become gain-reward facts")
    p.add_argument("--horizon", type=int, default=50)
    p.add_argument("--objective", choices=("shortest", "quality"), default="shortest")
    p.add_argument("--node-cap", type=int, default=500_000)
    p.add_argument("-v", "--verbose", action="store_true", help="also print the initial state")
    p.set_defaults(func=cmd_plan)

    t = sub.add_parser("train", help="run an agent on a benchmark and log episodes to CSV")
    t.add_argument("--config", help="key = value file; flags override it")
    for name, kind in _TRAIN_FLAGS:
        t.add_argument("--" + name.replace("_", "-"), dest=name, type=kind, default=None)
    t.add_argument("--timing", action="store_true", help="record wall-clock ms (breaks byte-identical output)")
    t.add_argument("--tables-out", help="directory for per-seed table snapshots (peorl only)")
    t.add_argument("--report", action="store_true", help="render figures and a summary next to the CSV")
    t.set_defaults(func=cmd_train)

    e = sub.add_parser("eval", help="execute the best plan under a table snapshot")
    e.add_argument("--tables", required=True)
    e.add_argument("--domain", choices=DOMAINS, required=True)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--greedy", action="store_true", help="no exploration inside options")
    e.add_argument("--epsilon", type=float, default=0.1)
    e.add_argument("--episodes", type=int, default=1)
    e.add_argument("--slack", type=int)
    e.add_argument("--step-cap", type=int, default=100)
    e.add_argument("--node-cap", type=int, default=500_000)
    e.set_defaults(func=cmd_eval)

    r = sub.add_parser("report", help="plot learning curves from CSV files")
    r.add_argument("csv", nargs="+")
    r.add_argument("--out-dir")
    r.add_argument("--window", type=int, default=50)
    r.set_defaults(func=cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_help(sys.stderr)
            return EXIT_USAGE
        return args.func(args)
    except (UsageError, ConfigError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as e:
        print(f"error: cannot parse domain:\n{e}", file=sys.stderr)
        return EXIT_RUNTIME
    except (GroundingError, LoopError, PlanningTruncated, OSError, ValueError, RuntimeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
