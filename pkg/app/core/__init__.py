from app.core.engine import (
    Channel,
    History,
    LISTEN,
    NodeAction,
    Transcript,
    run,
    step,
    verify_simulation,
)
from app.core.graphs import make_graph
from app.core.network import Network
from app.core.noise import NoiseModel, RandomStream

__all__ = [
    "Channel",
    "History",
    "LISTEN",
    "NodeAction",
    "Network",
    "NoiseModel",
    "RandomStream",
    "Transcript",
    "make_graph",
    "run",
    "step",
    "verify_simulation",
]
