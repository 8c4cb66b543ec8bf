"""Initial configurations, experiment runs, traces, rendering and the CLI."""

from amoebot.harness.generators import InitialConfig, gen_line, gen_random_connected, make_initial
from amoebot.harness.runner import RunResult, run_single
from amoebot.harness.experiment import ExperimentSpec, run_experiment

__all__ = [
    "ExperimentSpec",
    "InitialConfig",
    "RunResult",
    "gen_line",
    "gen_random_connected",
    "make_initial",
    "run_experiment",
    "run_single",
]
