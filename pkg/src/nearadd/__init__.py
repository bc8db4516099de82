"""Near-additive emulators, spanners and hopsets for weighted undirected graphs."""
from .apsp import additive_apsp, greedy_hitting_set
from .asp import asp_all, oracle_preprocess, oracle_query
from .emulator import BetaVariant, OverlayEdgeSet, beta_bound, build_emulator, hopset_distance
from .errors import NoPathError, ParameterError, ParseError
from .graph import Graph, bellman_ford_bounded, dijkstra, dijkstra_min_bottleneck, extract_path, load_graph
from .hierarchy import Schedule, compute_bunches, compute_pivots, sample_levels
from .spanner import build_spanner, check_intersection_lemma

__version__ = "0.1.0"
