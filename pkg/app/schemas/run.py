# app/schemas/run.py

from typing import List, Optional

from pydantic import BaseModel, Field

from app.config import SimulationConstants
from app.schemas.specs import GraphSpec, ProtocolSpec, SimulatorKind


class RunCell(BaseModel):
    """One (instance, seed) run; the unit handed to worker processes."""

    sim: SimulatorKind
    graph: GraphSpec
    protocol: ProtocolSpec
    p: float = Field(0.0, ge=0.0, lt=1.0)
    seed: int = Field(0, ge=0)
    constants: SimulationConstants = SimulationConstants()
    oracle_mode: bool = False


class RunConfig(BaseModel):
    """Everything `simulate` needs, range-checked before the first run."""

    graph: GraphSpec
    protocol: ProtocolSpec
    sim: SimulatorKind = "progress"
    p: float = Field(0.0, ge=0.0, lt=1.0)
    seeds: List[int] = Field(default_factory=lambda: [0], min_length=1)
    constants: SimulationConstants = SimulationConstants()
    oracle_mode: bool = False
    out: Optional[str] = None
    transcripts: Optional[str] = None
    emit_gnuplot: bool = False
    timestamp: bool = True

    model_config = {
        "json_schema_extra": {
            "example": {
                "graph": {"kind": "star", "delta": 4},
                "protocol": {"kind": "flood", "T": 8},
                "sim": "static",
                "p": 0.0,
                "seeds": [1],
            }
        }
    }

    def cells(self) -> list[RunCell]:
        return [
            RunCell(
                sim=self.sim,
                graph=self.graph.with_seed(seed),
                protocol=self.protocol,
                p=self.p,
                seed=seed,
                constants=self.constants,
                oracle_mode=self.oracle_mode,
            )
            for seed in self.seeds
        ]
