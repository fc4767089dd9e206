"""Symbolic planning with an action language, guided by hierarchical R-learning."""

__version__ = "0.1.0"

from .action_language import ActionDescription, ParseError, parse_action_description, pretty_print, validate
from .grounding import GroundDomain, SymbolicState, SymbolicTransition, ground, initial_state, successor
from .hrl import LearningConfig, LearningTables, OptionSpec, map_plan_to_options, plan_quality, run_option
from .loop import LoopConfig, PeorlAgent, peorl_train
from .planner import Constraint, GoalSpec, Plan, Planner, PlannerConfig, RhoFacts, check_plan, plan

__all__ = [
    "ActionDescription",
    "Constraint",
    "GoalSpec",
    "GroundDomain",
    "LearningConfig",
    "LearningTables",
    "LoopConfig",
    "OptionSpec",
    "ParseError",
    "PeorlAgent",
    "Plan",
    "Planner",
    "PlannerConfig",
    "RhoFacts",
    "SymbolicState",
    "SymbolicTransition",
    "check_plan",
    "ground",
    "initial_state",
    "map_plan_to_options",
    "parse_action_description",
    "peorl_train",
    "plan",
    "plan_quality",
    "pretty_print",
    "run_option",
    "successor",
    "validate",
]
