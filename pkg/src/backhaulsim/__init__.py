"""backhaulsim: mmWave multi-hop backhaul network simulator and optimizer.

Deploys random small-cell networks on a disc, analyzes their connectivity,
samples millimeter-wave MIMO link capacities, places gateways on a long time
scale and rebuilds capacity-aware routing forests on a short time scale,
reporting transport capacity and cost efficiency.
"""

from .config import ChannelParams, CostParams, ScenarioConfig, load_config
from .deployment import (
    Deployment,
    LinkGraph,
    build_link_graph,
    sample_deployment,
    sample_deployment_fixed_n,
)
from .clustering import ClusterPartition, form_clusters, validate_gateway_coverage
from .connectivity import (
    ConnectivityEstimate,
    effective_coverage_area,
    isolation_probability,
    mc_connectivity,
    non_isolation_probability,
)
from .channel import (
    ChannelRealization,
    edge_capacities,
    link_capacity,
    path_loss_db,
    sample_channel,
    sample_edge_gains,
    steering_vector,
)
from .costmodel import (
    EvaluationReport,
    average_hops,
    cost_efficiency,
    operation_energy,
    simplified_capacity,
    transport_capacity,
    weighted_capacity,
)
from .gateway_opt import (
    GatewaySelection,
    brute_force_gateways,
    know_gateway,
    optimize_gateway_count,
    unknow_gateway,
)
from .routing import (
    RoutingForest,
    bf_routing,
    evaluate_forest,
    mcst,
    sp_routing,
    validate_forest,
)
from .driver import SweepSpec, run_sweep, run_two_scale
from .errors import (
    BackhaulError,
    ConfigurationError,
    InfeasibleScenarioError,
    NumericalError,
)

__version__ = "0.1.0"
