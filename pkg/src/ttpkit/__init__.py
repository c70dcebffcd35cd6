"""Double round-robin tournament synthesis from k-tour covers.

The package builds tour-cover instances and solutions, pads them into
path packings, expands a packing into a provably feasible bounded-by-k
double round-robin over super-team blocks, evaluates schedule cost
exactly (streaming at scales where the table cannot be materialised),
extracts covers back out of schedules, and checks the associated cost
inequalities over exact integers.
"""

from .errors import (
    AssemblyError,
    CapabilityError,
    CostMismatchError,
    FormatError,
    LayoutError,
    MetricViolationError,
    RestrictedBoundsError,
    SeatDemandError,
    TtpkitError,
)
from .ktour import (
    KPathPacking,
    KTCSolution,
    SaturatedInstance,
    brute_force_ktc,
    heuristic_ktc,
    packing_weight,
    saturate,
    saturate_to,
    tour_weight,
    validate_ktc_solution,
)
from .metric import (
    KTCInstance,
    MetricInstance,
    check_metric,
    load_instance,
    random_restricted_ktc,
    save_instance,
)
from .reduction import (
    BoundReport,
    ReductionBundle,
    best_extraction,
    build_bundle,
    build_mini_bundle,
    bundle_cost,
    construct_schedule,
    extract_ktc,
    verify_bounds,
)
from .roundrobin import Ttp2Schedule, circle_rounds, seat_assignment, special_ttp2
from .supergames import (
    ConstructedSchedule,
    GameBlock,
    SlotPlan,
    SuperTeamLayout,
    assemble_schedule,
    extend_left,
    extend_normal,
    slot_plan,
    uniform_layout,
)
from .ttp import (
    DenseSchedule,
    Itinerary,
    TTPInstance,
    brute_force_ttp,
    itinerary,
    load_schedule,
    save_schedule,
    schedule_cost,
    validate_schedule,
    validate_schedule_sampled,
)

__version__ = "0.1.0"
