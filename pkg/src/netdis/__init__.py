"""Cost-effective network disintegration via rank-aggregated targeted
enumeration, with centrality, collective-influence and tabu-search baselines.
"""

from ._kernels import USING_COMPILED, implementation_name
from .aggregation import (
    CompetitionGraph,
    RoidTable,
    aggregate_rankings,
    candidate_set,
    candidate_size,
    competition_graph,
    overlap_analysis,
    roid_scores,
    transition_matrix,
)
from .centrality import (
    CRITERIA,
    Ranking,
    ScoreTable,
    betweenness_centrality,
    closeness_centrality,
    degree_centrality,
    eigenvector_centrality,
    rank_from_scores,
    subgraph_centrality,
)
from .connectivity import (
    BaselineEstimate,
    DegenerateBaselineError,
    GammaEvaluator,
    PerformanceValue,
    disintegration_effect,
    natural_connectivity,
    natural_connectivity_approx,
    natural_connectivity_exact,
    random_baseline,
)
from .generators import GeneratorSpec, build, complete, newman_watts, path, ring, scale_free, star
from .graph import (
    Graph,
    GraphFormatError,
    as_node_set,
    degree,
    indicator_from_nodes,
    nodes_from_indicator,
    parse_edge_list,
    remove_nodes,
    to_edge_list,
)
from .strategies import (
    DisintegrationResult,
    TabuParams,
    centrality_attack,
    collective_influence,
    enumerate_combinations,
    evaluate_removal,
    random_attack,
    tabu_search,
    targeted_enumeration,
)

__version__ = "0.1.0"
