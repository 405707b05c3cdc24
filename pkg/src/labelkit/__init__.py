"""Boundary labeling for zoomless maps.

Point features inside a fixed viewport get labels attached to ports on the
bottom edge, connected by two-segment leaders.  Three interaction styles
are supported, each with its own optimizer:

- multipage: labels split over pages, solved exactly by bipartite matching,
- sliding: one label row sliding leftward, exact order search plus a
  hill-climbing heuristic,
- stacking: one label stack per port, minimum total leader length.
"""

from .costs import (
    StateCosts,
    cost_mpl,
    cost_slid,
    crossing_cost,
    distance_cost,
    leader_cost,
    relative_cost,
    state_costs,
    weight_cost,
)
from .errors import BudgetExceededError, DataError, LabelkitError
from .ingest import BBox, load_csv, normalize_weights, project_to_screen, sample_instances
from .model import (
    Feature,
    Instance,
    Labeling,
    StackSet,
    State,
    leader_length,
    leaders_cross,
    port_positions,
)
from .multipage import (
    MatchingProblem,
    build_matching_problem,
    edge_weight,
    min_cost_perfect_matching,
    resolve_page_crossings,
    solve_multipage,
)
from .sliding import (
    Budget,
    SlidingOrder,
    is_valid_transition,
    max_cost_sliding,
    order_to_labeling,
    random_sliding_baseline,
    solve_sliding_exact,
    solve_sliding_heuristic,
)
from .stacking import pop_stack, solve_stacking, sort_stacks_by_weight, stacks_to_pages
from .synth import generate_instance, generate_instances

__version__ = "0.1.0"
