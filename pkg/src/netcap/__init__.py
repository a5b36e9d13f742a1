"""netcap: capacity/cost evaluation of communication-network designs.

A design is a (topology, routing algorithm, node-capability scheme)
triple.  The toolkit generates the seven benchmark topology families,
builds candidate-path systems for shortest-path and degree-sum routing,
assigns node capabilities under four schemes, and evaluates the
critical packet-generating rate both analytically and by discrete-time
traffic simulation, along with the maximum-capability cost proxy.
"""

__version__ = "0.1.0"

from .capacity import (
    BC,
    DC,
    EBC,
    SCHEMES,
    UC,
    CapabilityAssignment,
    ClosedForm,
    DesignEvaluation,
    analytic_rc,
    assign,
    closed_form_cmax,
    closed_form_rc,
    tradeoff_ratios,
)
from .errors import (
    BracketError,
    DisconnectedGraphError,
    EdgeListParseError,
    GenerationError,
    NetcapError,
    SweepError,
)
from .experiments import (
    FitResult,
    SweepResult,
    SweepRow,
    benchmark_spec,
    fit_power_law,
    reproduce_tables,
    scaling_sweep,
)
from .generators import (
    FAMILIES,
    GenSpec,
    build,
    gen_ba,
    gen_er,
    gen_hot,
    gen_lattice,
    gen_pa,
    gen_ring,
    gen_ws,
)
from .graphs import (
    Graph,
    GraphMetrics,
    is_connected,
    load_edge_list,
    metrics,
    save_edge_list,
)
from .routing import (
    ALGORITHMS,
    EFR,
    SPR,
    BetweennessProfile,
    RoutingSystem,
    build_routing,
    effective_betweenness,
)
from .simulate import (
    OrderParameterEstimate,
    Packet,
    RcSearchResult,
    TrafficState,
    estimate_rc,
    measure_eta,
    step,
)
