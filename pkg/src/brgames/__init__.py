"""Convergence of random normal-form games under clockwork best-response dynamics."""

from .closed_form import convergent_freq_2p, crossover_m, p1, p1_expansion, p2_k, type_b_freq_2p
from .ensemble import (
    EnsembleEstimate,
    ExactCensus,
    enumerate_all_configurations,
    random_game,
    sample_ensemble,
    wilson_interval,
)
from .game import (
    BestResponseMap,
    DegenerateGameError,
    Environment,
    Game,
    GameError,
    best_response,
    best_response_map,
    enumerate_psne,
    env_rank,
    env_unrank,
    is_degenerate,
)
from .graph import (
    Classification,
    GameType,
    SizeGuardError,
    build_full_graph,
    build_functional_graph,
    classify,
    condense_psne,
    find_cycles,
    trajectory,
)
from .spectral import det_exact, laplacian, spanning_tree_count, type_a_frequency_via_kirchhoff

__version__ = "0.1.0"
