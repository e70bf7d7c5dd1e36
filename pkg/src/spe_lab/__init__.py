"""spe-lab: equilibrium checking, Folk-theorem fixpoints and strategy
synthesis for n-player turn-based quantitative games on finite graphs."""

from .game import Game, LassoPlay
from .strategy import MooreStrategy, Profile, outcome, deviation_steps, \
    one_shot_variant
from .eqcheck import check_ne, check_very_weak_spe, check_very_weak_ne, \
    check_weak_ne_bounded
from .synthesis import synthesize, audit

__version__ = "0.1.0"

__all__ = [
    "Game", "LassoPlay", "MooreStrategy", "Profile", "outcome",
    "deviation_steps", "one_shot_variant", "check_ne",
    "check_very_weak_spe", "check_very_weak_ne", "check_weak_ne_bounded",
    "synthesize", "audit", "__version__",
]
