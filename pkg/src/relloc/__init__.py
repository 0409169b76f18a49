"""Localization games on graphs with one bit of relative-distance feedback.

A cat probes one vertex per round and learns only whether an invisible,
moving mouse got closer to its probe than in the previous round.  The
package tracks the cat's exact knowledge set, implements localization
strategies for trees, grids, paths and slow mice, and adversaries that try
to keep the knowledge set wide.
"""

from .cats import GridCat, PathCat, RandomCat, SlowCat, TreeCat, grid_cat, path_cat, random_cat, slow_cat, tree_cat
from .engine import (
    CandidateSet,
    Done,
    GameConfig,
    GameError,
    GameTrace,
    Probe,
    Referee,
    brute_force_candidates,
    play_game,
    update_candidates,
    verify_trace,
)
from .generators import gen_grid, gen_path, gen_random_connected, gen_random_tree, gen_subdivided_star
from .graph import Graph, GraphError, build_graph, find_splitting_edge, radius_of_set
from .kernels import BACKEND
from .mice import (
    ExhaustiveEvader,
    GreedyEvader,
    RandomMouse,
    StationaryMouse,
    exhaustive_evader,
    greedy_evader,
    random_mouse,
    search_escape,
    stationary_mouse,
)

__version__ = "0.1.0"
