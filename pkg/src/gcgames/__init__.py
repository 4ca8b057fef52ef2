"""Guaranteed-cost Nash strategies for uncertain two-player LQ games.

The package splits into a generic layer (linalg, sdp, game, synthesis,
uncertainty) that works for any model in the canonical uncertain-game form,
and an application layer (fimo, scenario, estimate, cli) for the
fiscal-monetary interaction model and its catch-up scenario analysis.
"""

from .fimo import MacroParams, MacroState, build_canonical, canonical_cones
from .game import GameModel, UncertaintyBlock
from .scenario import DeficitPath, GrowthPath, ScenarioSpec, run_all_nine
from .synthesis import (
    GuaranteedSolution,
    SynthesisError,
    SynthesisOptions,
    guaranteed_cost,
    synthesize,
)
from .uncertainty import ConeSpec, Realization

__version__ = "0.1.0"

__all__ = [
    "MacroParams",
    "MacroState",
    "build_canonical",
    "canonical_cones",
    "GameModel",
    "UncertaintyBlock",
    "GrowthPath",
    "DeficitPath",
    "ScenarioSpec",
    "run_all_nine",
    "GuaranteedSolution",
    "SynthesisOptions",
    "SynthesisError",
    "synthesize",
    "guaranteed_cost",
    "ConeSpec",
    "Realization",
    "__version__",
]
