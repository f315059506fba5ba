# app/schemas/experiment.py

from typing import List, Literal, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from app.config import SimulationConstants
from app.schemas.specs import GraphSpec, ProtocolSpec, SimulatorKind

ExperimentKind = Literal[
    "overhead-sweep",
    "hard-instance",
    "blaming-chains",
    "lower-bound",
    "directed-bipartite",
    "tail-bound",
]


class ExperimentSpec(BaseModel):
    kind: ExperimentKind
    graphs: List[GraphSpec] = Field(default_factory=list)
    protocol: Optional[ProtocolSpec] = None
    T: List[int] = Field(default_factory=list)
    p: List[float] = Field(default_factory=lambda: [0.0])
    seeds: List[int] = Field(..., min_length=1)
    sims: List[SimulatorKind] = Field(default_factory=lambda: ["progress"])
    constants: SimulationConstants = SimulationConstants()
    out: Optional[str] = None

    # lower-bound / directed-bipartite / tail-bound
    delta: List[int] = Field(default_factory=list)
    samples: int = Field(100_000, ge=1)
    t_grid: List[float] = Field(default_factory=lambda: [1, 2, 3, 4, 5])
    C: Optional[float] = Field(None, gt=0)
    q: float = Field(0.5, gt=0.0, le=1.0, description="Geometric success probability in the tail-bound sums")

    model_config = {
        "json_schema_extra": {
            "example": {
                "kind": "overhead-sweep",
                "graphs": [{"kind": "star", "delta": 16}, {"kind": "star", "delta": 256}],
                "protocol": {"kind": "flood"},
                "T": [256],
                "p": [0.5],
                "seeds": [1, 2, 3],
                "sims": ["progress"],
            }
        }
    }

    @field_validator("p")
    @classmethod
    def _probabilities(cls, values):
        if not values or any(not 0.0 <= p < 1.0 for p in values):
            raise ValueError("every p must lie in [0, 1)")
        return values

    @field_validator("T", "delta")
    @classmethod
    def _positive(cls, values):
        if any(v < 1 for v in values):
            raise ValueError("lengths and degrees must be positive")
        return values

    @model_validator(mode="after")
    def _grid_not_empty(self):
        if self.kind in ("overhead-sweep", "blaming-chains"):
            if not self.graphs or self.protocol is None:
                raise ValueError(f"{self.kind} needs graphs and a protocol")
            if self.protocol.T is None and not self.T:
                raise ValueError(f"{self.kind} needs a T grid or a protocol length")
        elif self.kind == "hard-instance":
            if not self.graphs:
                raise ValueError("hard-instance needs at least one bipartite_hard graph")
        elif not self.delta:
            raise ValueError(f"{self.kind} needs a delta grid")
        if self.kind == "lower-bound" and not self.T:
            raise ValueError("lower-bound needs a T grid")
        return self

    def lengths(self) -> list[int | None]:
        return list(self.T) or [self.protocol.T if self.protocol else None]
