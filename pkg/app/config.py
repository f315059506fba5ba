# app/config.py

import configparser
import logging
import os
from pathlib import Path

from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError

from app.errors import ConfigurationError

load_dotenv()


# --------------------------------------------------
# SIMULATION CONSTANTS
# --------------------------------------------------
class SimulationConstants(BaseModel):
    """Multipliers for every phase length the simulators use."""

    c1: int = Field(4, ge=0, description="LearnDelays + round attempts per outer step, times log Δ")
    c3: int = Field(4, ge=1, description="Decay outer repetitions multiplier")
    c4: int = Field(6, ge=1, description="ShareKnowledge rounds multiplier")
    c5: int = Field(8, ge=1, description="MainGeneral iteration budget multiplier")
    cQ: int = Field(8, ge=1, description="Window size multiplier on ln n")
    c_rep: int = Field(4, ge=1, description="Trivial repetition factor on ln n")
    budget_factor: int = Field(8, ge=1, description="Round budget factor for sim_progress")
    payload_cap: int = Field(64, ge=1, description="Largest payload a protocol may broadcast, in bytes")

    model_config = {
        "frozen": True,
        "extra": "forbid",
        "json_schema_extra": {
            "example": {"c1": 4, "c3": 4, "c4": 6, "c5": 8, "cQ": 8}
        },
    }

    def override(self, **changes) -> "SimulationConstants":
        try:
            return SimulationConstants(**{**self.model_dump(), **changes})
        except ValidationError as exc:
            raise ConfigurationError(f"invalid constants: {exc}") from exc


DEFAULT_CONSTANTS = SimulationConstants()


# --------------------------------------------------
# PROCESS SETTINGS (ENVIRONMENT)
# --------------------------------------------------
class Settings(BaseModel):
    threads: int = Field(1, ge=1)
    log_level: str = "WARNING"


def get_settings() -> Settings:
    threads = os.getenv("NRS_THREADS")
    try:
        return Settings(
            threads=int(threads) if threads else 1,
            log_level=os.getenv("NRS_LOG_LEVEL", "WARNING").upper(),
        )
    except (ValueError, ValidationError) as exc:
        raise ConfigurationError(f"bad NRS_* environment: {exc}") from exc


def configure_logging(level: str | None = None) -> None:
    logging.basicConfig(
        level=(level or get_settings().log_level),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


# --------------------------------------------------
# EXPERIMENT FILES (INI)
# --------------------------------------------------
def load_experiment_file(path: str | Path) -> dict:
    """
    Reads the [experiment] section of an INI file into a plain dict.
    List-valued keys are comma separated; the caller validates them
    through ExperimentSpec.
    """
    parser = configparser.ConfigParser()
    parser.optionxform = str
    if not parser.read(path):
        raise ConfigurationError(f"experiment file not found: {path}")
    if "experiment" not in parser:
        raise ConfigurationError(f"{path}: missing [experiment] section")

    section = {key.lower(): value for key, value in parser["experiment"].items()}
    constants = dict(parser["constants"]) if "constants" in parser else {}
    if constants:
        try:
            section["constants"] = {key: int(value) for key, value in constants.items()}
        except ValueError as exc:
            raise ConfigurationError(f"{path}: constants must be integers ({exc})") from exc
        unknown = sorted(set(constants) - set(SimulationConstants.model_fields))
        if unknown:
            raise ConfigurationError(f"{path}: unknown constants {', '.join(unknown)} (names are case sensitive)")
    return section
