"""Expected meeting time of two independent random walks on regular graphs."""

from .graphs import (
    RegularGraph,
    TorusCoord,
    build_circle,
    build_complete,
    build_torus,
    random_regular,
    read_graph,
    write_graph,
)
from .meeting import (
    MeetingEstimate,
    absorbing_meeting_time,
    relative_meeting_time,
    spectral_meeting_time,
)
from .montecarlo import McConfig, McResult, simulate_meeting
from .walks import (
    CircleWalk,
    SimpleWalk,
    TorusWalk,
    laplacian,
    relative_chain,
    relative_chain_for,
    transition_matrix,
)

__version__ = "0.1.0"
