"""Experiment configuration, per-seed runners and CSV logging."""

from __future__ import annotations

import csv
import dataclasses
import io
import random
import time
from dataclasses import dataclass, field
from multiprocessing import Pool
from pathlib import Path
from typing import Iterable

from .agents import HrlAgent, PlanningAgent, QAgent, TaxiOptions
from .envs import DOMAINS, make_env, option_catalog
from .envs.taxi import MOVES as TAXI_MOVES
from .hrl import LearningConfig, dump_tables
from .loop import LoopConfig, PeorlAgent
from .planner import GoalSpec, Planner, PlannerConfig, RhoFacts

AGENTS = ("peorl", "q", "planner", "hrl")
CSV_HEADER = ("seed", "episode", "cum_reward", "plan_len", "failures", "quality", "ms")

# Tuned defaults. Unset config fields fall back to these.
EPISODES = {"taxi1": 2000, "taxi2": 2000, "gridworld": 1000}
ALPHA_ANNEAL = {
    ("peorl", "taxi1"): 1000,
    ("peorl", "taxi2"): 100,
    ("peorl", "gridworld"): 10,
    ("q", "gridworld"): 500,
}
EPSILON_PLAN = {"taxi1": 0.1, "taxi2": 0.2, "gridworld": 1.0}
SLACK = {"taxi1": 10, "taxi2": 16, "gridworld": 6}
MAX_STEPS = {"q": {"gridworld": 1000}, "planner": {"gridworld": 1000}}
DEFAULT_ALPHA_ANNEAL = 1000
DEFAULT_MAX_STEPS = 200


class ConfigError(ValueError):
    """Invalid experiment configuration (a usage error)."""


def parse_seeds(text: str) -> tuple:
    """``0,1,2`` or ``0-9`` or a mix of both."""
    seeds = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        try:
            if "-" in part:
                lo, hi = part.split("-", 1)
                seeds.extend(range(int(lo), int(hi) + 1))
            else:
                seeds.append(int(part))
        except ValueError:
            raise ConfigError(f"bad seed list {text!r}") from None
    return tuple(seeds)


@dataclass
class ExperimentConfig:
    agent: str = "peorl"
    domain: str = "taxi1"
    episodes: int | None = None
    seeds: tuple = tuple(range(10))
    alpha_start: float = 1.0
    alpha_end: float = 0.01
    alpha_anneal: int | None = None
    beta: float = 0.5
    gamma: float = 0.99
    epsilon_plan: float | None = None
    epsilon_action: float = 0.1
    epsilon_anneal: int | None = None  # defaults to 80% of the episodes
    slack: int | None = None  # planning horizon = shortest plan length + slack
    node_cap: int = 20_000
    step_cap: int = 100
    max_steps: int | None = None
    out: str = "results.csv"
    timing: bool = False
    workers: int = 1

    def __post_init__(self):
        if isinstance(self.seeds, (str, int)):
            self.seeds = parse_seeds(str(self.seeds))
        self.seeds = tuple(self.seeds)
        if self.agent not in AGENTS:
            raise ConfigError(f"agent must be one of {', '.join(AGENTS)}, got {self.agent!r}")
        if self.domain not in DOMAINS:
            raise ConfigError(f"domain must be one of {', '.join(DOMAINS)}, got {self.domain!r}")
        if self.agent == "hrl" and self.domain == "gridworld":
            raise ConfigError("the hrl agent's options are defined for the Taxi domains only")
        if self.episodes is not None and self.episodes < 1:
            raise ConfigError("episodes must be >= 1")
        if not self.seeds:
            raise ConfigError("seeds must be non-empty")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        try:
            self.learning()
            self.loop()
        except ValueError as e:
            raise ConfigError(str(e)) from None

    # -- resolved values --------------------------------------------------------

    @property
    def n_episodes(self) -> int:
        return self.episodes if self.episodes is not None else EPISODES[self.domain]

    def learning(self) -> LearningConfig:
        anneal = self.alpha_anneal
        if anneal is None:
            anneal = ALPHA_ANNEAL.get((self.agent, self.domain), DEFAULT_ALPHA_ANNEAL)
        eps_anneal = self.epsilon_anneal if self.epsilon_anneal is not None else int(0.8 * self.n_episodes)
        return LearningConfig(
            alpha_start=self.alpha_start,
            alpha_end=self.alpha_end,
            alpha_anneal=anneal,
            beta=self.beta,
            epsilon_start=self.epsilon_action,
            epsilon_end=0.0,
            epsilon_anneal=eps_anneal,
        )

    def loop(self, horizon: int = 50) -> LoopConfig:
        eps = self.epsilon_plan if self.epsilon_plan is not None else EPSILON_PLAN[self.domain]
        return LoopConfig(
            epsilon_plan=eps,
            max_episodes=self.n_episodes,
            learning=self.learning(),
            planner=PlannerConfig(max_horizon=horizon, node_cap=self.node_cap),
            step_cap=self.step_cap,
        )

    @property
    def horizon_slack(self) -> int:
        return self.slack if self.slack is not None else SLACK[self.domain]

    @property
    def steps_per_episode(self) -> int:
        if self.max_steps is not None:
            return self.max_steps
        return MAX_STEPS.get(self.agent, {}).get(self.domain, DEFAULT_MAX_STEPS)


# -- config files ---------------------------------------------------------------

_FIELDS = {f.name: f for f in dataclasses.fields(ExperimentConfig)}


def _convert(name: str, text: str):
    if name not in _FIELDS:
        raise ConfigError(f"unknown config key {name!r}")
    if name == "seeds":
        return parse_seeds(text)
    kind = str(_FIELDS[name].type)
    if text.lower() in ("", "none") and "None" in kind:
        return None
    try:
        if kind.startswith("bool"):
            if text.lower() not in ("true", "false", "1", "0", "yes", "no"):
                raise ValueError(text)
            return text.lower() in ("true", "1", "yes")
        if kind.startswith("int"):
            return int(text)
        if kind.startswith("float"):
            return float(text)
    except ValueError:
        raise ConfigError(f"bad value for {name}: {text!r}") from None
    return text


def parse_config_text(text: str) -> dict:
    """Flat ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        values[key] = _convert(key, value)
    return values


def load_config(path: str | Path | None = None, overrides: dict | None = None) -> ExperimentConfig:
    values = parse_config_text(Path(path).read_text(encoding="utf-8")) if path else {}
    for key, value in (overrides or {}).items():
        if value is not None:
            values[key] = _convert(key, value) if isinstance(value, str) else value
    return ExperimentConfig(**values)


def format_config(cfg: ExperimentConfig) -> str:
    lines = []
    for name in _FIELDS:
        value = getattr(cfg, name)
        if name == "seeds":
            value = ",".join(str(s) for s in value)
        lines.append(f"{name} = {value}")
    return "\n".join(lines) + "\n"


# -- runners ----------------------------------------------------------------------


@dataclass
class SeedResult:
    seed: int
    records: list
    tables: str | None = None  # snapshot of the learned tables (peorl only)
    final_plan: str | None = None
    converged: bool | None = None
    extras: dict = field(default_factory=dict)


def shortest_plan(env, horizon: int = 60):
    env.reset()
    p = Planner(env.ground, PlannerConfig(max_horizon=horizon)).plan(env.abstract(), GoalSpec.of(env.goal()), RhoFacts())
    if p is None:
        raise RuntimeError(f"no plan reaches the goal within {horizon} steps")
    return p


def build_agent(cfg: ExperimentConfig, seed: int, env):
    rng = random.Random(seed)
    steps = cfg.steps_per_episode
    if cfg.agent == "q":
        return QAgent(cfg.learning(), cfg.gamma, steps, rng)
    if cfg.agent == "hrl":
        return HrlAgent(TaxiOptions(dict(env.layout.depots), tuple(TAXI_MOVES)), cfg.learning(), cfg.gamma, steps, rng)
    short = shortest_plan(env)
    if cfg.agent == "planner":
        return PlanningAgent(
            env.ground, env.goal(), option_catalog(cfg.domain), PlannerConfig(max_horizon=len(short)), cfg.step_cap, steps, rng
        )
    env.reset()
    loop_cfg = cfg.loop(horizon=len(short) + cfg.horizon_slack)
    return PeorlAgent(env.ground, env.abstract(), env.goal(), option_catalog(cfg.domain), loop_cfg, rng)


def run_seed(cfg: ExperimentConfig, seed: int) -> SeedResult:
    env = make_env(cfg.domain, seed)
    agent = build_agent(cfg, seed, env)
    records = []
    for _ in range(cfg.n_episodes):
        start = time.perf_counter()
        rec = agent.run_episode(env)
        if cfg.timing:
            rec.ms = (time.perf_counter() - start) * 1000.0
        records.append(rec)
    result = SeedResult(seed, records)
    if isinstance(agent, PeorlAgent):
        result.tables = dump_tables(agent.state.tables)
        result.final_plan = agent.final_plan().describe()
        result.converged = agent.converged
    return result


def _run_seed_args(args) -> SeedResult:
    return run_seed(*args)


def run_seeds(cfg: ExperimentConfig) -> list[SeedResult]:
    """All seeds in seed order; with workers > 1 seeds run in parallel processes."""
    jobs = [(cfg, s) for s in cfg.seeds]
    if cfg.workers == 1 or len(jobs) == 1:
        return [run_seed(*job) for job in jobs]
    with Pool(min(cfg.workers, len(jobs))) as pool:
        return pool.map(_run_seed_args, jobs)


# -- CSV ----------------------------------------------------------------------------


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def csv_rows(results: Iterable[SeedResult], timing: bool = False) -> Iterable[tuple]:
    for res in results:
        for rec in res.records:
            ms = round(rec.ms, 3) if timing else 0
            yield (res.seed, rec.episode, float(rec.cum_reward), rec.plan_len, rec.failures, rec.quality, ms)


def write_csv(results: Iterable[SeedResult], out, timing: bool = False) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in csv_rows(results, timing):
        writer.writerow([_cell(v) for v in row])


def render_csv(results: Iterable[SeedResult], timing: bool = False) -> str:
    buf = io.StringIO()
    write_csv(results, buf, timing)
    return buf.getvalue()


def run_experiment(cfg: ExperimentConfig, tables_dir: str | Path | None = None) -> list[SeedResult]:
    """Run every seed and write the CSV to ``cfg.out``; optionally snapshot learned tables."""
    results = run_seeds(cfg)
    out = Path(cfg.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", encoding="utf-8", newline="") as fh:
        write_csv(results, fh, cfg.timing)
    if tables_dir is not None:
        d = Path(tables_dir)
        d.mkdir(parents=True, exist_ok=True)
        for res in results:
            if res.tables is not None:
                (d / f"tables_{cfg.domain}_seed{res.seed}.txt").write_text(res.tables, encoding="utf-8")
    return results


def read_csv(path: str | Path) -> list[dict]:
    with Path(path).open(encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_HEADER:
            raise ValueError(f"{path}: unexpected header {reader.fieldnames}")
        rows = []
        for row in reader:
            rows.append(
                {
                    "seed": int(row["seed"]),
                    "episode": int(row["episode"]),
                    "cum_reward": float(row["cum_reward"]),
                    "plan_len": int(row["plan_len"]) if row["plan_len"] else None,
                    "failures": int(row["failures"]),
                    "quality": float(row["quality"]) if row["quality"] else None,
                    "ms": float(row["ms"]),
                }
            )
        return rows
