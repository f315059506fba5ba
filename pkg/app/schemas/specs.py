# app/schemas/specs.py

from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator

GraphKind = Literal["star", "path", "cycle", "random_bounded", "bipartite_hard", "directed_bipartite", "file"]
ProtocolKind = Literal["silent", "flood", "roundrobin", "decay"]
SimulatorKind = Literal["progress", "static", "general", "repeat"]


# --------------------------------------------------
# GRAPH
# --------------------------------------------------
class GraphSpec(BaseModel):
    kind: GraphKind = Field(..., examples=["star"])
    n: Optional[int] = Field(None, ge=1, examples=[16])
    delta: Optional[int] = Field(None, ge=1, examples=[4])
    seed: Optional[int] = Field(None, ge=0, description="Generator seed; runs fill it from the run seed when unset")
    path: Optional[str] = None

    model_config = {
        "frozen": True,
        "json_schema_extra": {"example": {"kind": "random_bounded", "n": 32, "delta": 4, "seed": 7}},
    }

    @model_validator(mode="after")
    def _parameters_present(self):
        needs = {
            "star": ("delta",),
            "directed_bipartite": ("delta",),
            "path": ("n",),
            "cycle": ("n",),
            "random_bounded": ("n", "delta"),
            "bipartite_hard": ("n", "delta"),
            "file": ("path",),
        }[self.kind]
        missing = [name for name in needs if getattr(self, name) is None]
        if missing:
            raise ValueError(f"graph {self.kind} needs {', '.join(missing)}")
        return self

    @property
    def directed(self) -> bool:
        return self.kind == "directed_bipartite"

    @property
    def seeded(self) -> bool:
        return self.kind in ("random_bounded", "bipartite_hard")

    def with_seed(self, seed: int) -> "GraphSpec":
        if self.seeded and self.seed is None:
            return self.model_copy(update={"seed": seed})
        return self

    @property
    def label(self) -> str:
        if self.kind in ("star", "directed_bipartite"):
            return f"{self.kind}:{self.delta}"
        if self.kind in ("path", "cycle"):
            return f"{self.kind}:{self.n}"
        if self.kind == "file":
            return f"file:{self.path}"
        return f"{self.kind}:{self.n}:{self.delta}"


# --------------------------------------------------
# PROTOCOL
# --------------------------------------------------
class ProtocolSpec(BaseModel):
    kind: ProtocolKind = Field(..., examples=["flood"])
    T: Optional[int] = Field(None, ge=1, examples=[8])

    model_config = {"frozen": True}

    def with_length(self, length: int | None) -> "ProtocolSpec":
        return self if length is None else self.model_copy(update={"T": length})

    @property
    def label(self) -> str:
        return self.kind if self.T is None else f"{self.kind}:{self.T}"
