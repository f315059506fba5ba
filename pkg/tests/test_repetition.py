from app.config import DEFAULT_CONSTANTS
from app.core.graphs import star
from app.core.noise import NoiseModel
from app.protocols.library import RoundRobinProtocol, StarFloodProtocol
from app.simulators.repetition import repetition_factor, simulate_by_repetition
from app.simulators.runner import run_simulation


def test_repetition_factor(star4):
    assert repetition_factor(star4, DEFAULT_CONSTANTS) == 8
    assert repetition_factor(star(1), DEFAULT_CONSTANTS) == 4


def test_faultless_repetition(star4, quiet):
    report = run_simulation("repeat", StarFloodProtocol(star4, 5), star4, quiet)
    assert report.all_verified
    assert report.rounds == 5 * 8
    assert report.extras["lost_receipts"] == 0


def test_repetition_with_noise(small_random):
    report = run_simulation("repeat", RoundRobinProtocol(small_random), small_random, NoiseModel(0.3, 9))
    assert report.rounds == report.scheduled_rounds
    assert report.all_verified == (report.extras["lost_receipts"] == 0)


def test_heavy_noise_loses_receipts(star4):
    constants = DEFAULT_CONSTANTS.override(c_rep=1)
    report = simulate_by_repetition(StarFloodProtocol(star4, 32), star4, NoiseModel(0.9, 3), constants=constants)
    assert report.extras["lost_receipts"] > 0
