"""Shape formation for self-organizing particle systems on the triangular grid.

Spanning-forest movement plus snake-formation rules for the hexagon (HEX)
and triangle (TRI) shapes, a fair asynchronous scheduler, and the checkers
used to validate runs.
"""

from amoebot.algorithms import HEX, TRI, SnakeRule, rule_for
from amoebot.core import Configuration, Particle, State
from amoebot.grid import Node
from amoebot.scheduler import Policy, RunStats, Schedule, Simulation

__all__ = [
    "HEX",
    "TRI",
    "Configuration",
    "Node",
    "Particle",
    "Policy",
    "RunStats",
    "Schedule",
    "Simulation",
    "SnakeRule",
    "State",
    "rule_for",
]
