"""Cooperative coloring games: dynamics, stability, cascades and efficiency."""

from .config import DynamicsConfig, SearchConfig
from .dynamics import Deviation, Scheduler, run_dynamics
from .game import (BEST_FRIEND, NEG_INF, AsymGame, Game, Partition, canonicalize, global_utility,
                   load_game, partition_vector, save_game, uniform_game, utility)
from .stability import SearchTooLarge, exists_k_stable, is_k_stable, longest_sequence

__all__ = ["BEST_FRIEND", "NEG_INF", "AsymGame", "Deviation", "DynamicsConfig", "Game", "Partition",
           "Scheduler", "SearchConfig", "SearchTooLarge", "canonicalize", "exists_k_stable",
           "global_utility", "is_k_stable", "load_game", "longest_sequence", "partition_vector",
           "run_dynamics", "save_game", "uniform_game", "utility"]
