# app/simulators/runner.py

import logging

from app.config import DEFAULT_CONSTANTS, SimulationConstants
from app.core.engine import run, verify_simulation
from app.core.network import Network
from app.core.noise import NoiseModel
from app.errors import ConfigurationError
from app.simulators.common import SimulationReport, resolve_inputs
from app.simulators.general import main_general
from app.simulators.progress import simulate_with_progress_detection
from app.simulators.repetition import simulate_by_repetition
from app.simulators.static import main_static

logger = logging.getLogger(__name__)

SIMULATORS = ("progress", "static", "general", "repeat")


def run_simulation(
    simulator: str,
    protocol,
    network: Network,
    noise: NoiseModel,
    inputs=None,
    constants: SimulationConstants = DEFAULT_CONSTANTS,
    oracle_mode: bool = False,
) -> SimulationReport:
    """Runs one simulator and checks every claimed history against the faultless run."""
    inputs = resolve_inputs(protocol, network, noise, inputs)

    if simulator == "progress":
        report = simulate_with_progress_detection(protocol, network, noise, inputs, constants=constants)
        faultless = report.extras["faultless"]
    elif simulator == "static":
        report = main_static(protocol, network, noise, inputs, constants, oracle_mode=oracle_mode)
        faultless = None
    elif simulator == "general":
        report = main_general(protocol, network, noise, inputs, constants)
        faultless = None
    elif simulator == "repeat":
        report = simulate_by_repetition(protocol, network, noise, inputs, constants)
        faultless = None
    else:
        raise ConfigurationError(f"unknown simulator {simulator!r}, expected one of {SIMULATORS}")

    if faultless is None:
        faultless = run(network, protocol, inputs, noise.faultless(), protocol.length, constants.payload_cap)
    report.verified = [
        ok and done for ok, done in zip(verify_simulation(faultless, report.histories), report.completed)
    ]
    report.extras.setdefault("faultless", faultless)

    logger.debug(
        "%s on %s (p=%s, seed=%d): %d rounds, %d/%d verified",
        simulator, network.name, noise.p, noise.seed, report.rounds,
        sum(report.verified), network.n,
    )
    return report
