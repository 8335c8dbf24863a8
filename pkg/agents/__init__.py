"""
Verification Agents

This package contains the agents that evaluate a Randers-changed metric at
each sample (tensors, inverse, flatness) and the runner that dispatches them.
"""

from .flatness_agent import FlatnessAgent
from .inverse_agent import InverseAgent
from .minkowski_agent import MinkowskiAgent
from .scenario_runner import ScenarioRunner
from .tensor_agent import TensorAgent

__all__ = ["TensorAgent", "InverseAgent", "FlatnessAgent", "MinkowskiAgent", "ScenarioRunner"]
