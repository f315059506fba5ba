from app.simulators.common import SimulationReport
from app.simulators.general import main_general, reconstruct_history, share_knowledge
from app.simulators.primitives import broadcast_decay, dist_to_active, learn_delays
from app.simulators.progress import service_bounds, simulate_with_progress_detection
from app.simulators.repetition import simulate_by_repetition
from app.simulators.runner import SIMULATORS, run_simulation
from app.simulators.static import main_static

__all__ = [
    "SIMULATORS",
    "SimulationReport",
    "broadcast_decay",
    "dist_to_active",
    "learn_delays",
    "main_general",
    "main_static",
    "reconstruct_history",
    "run_simulation",
    "service_bounds",
    "share_knowledge",
    "simulate_by_repetition",
    "simulate_with_progress_detection",
]
