"""Pydantic request/response models for the HTTP surface."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field

from ..partition import Partition


class PartitionModel(BaseModel):
    d: int
    colors: list[int]

    @classmethod
    def from_partition(cls, p: Partition) -> "PartitionModel":
        return cls(d=p.d, colors=list(p.colors))

    def to_partition(self) -> Partition:
        from ..formats import partition_from_json_obj

        return partition_from_json_obj({"d": self.d, "colors": self.colors})


class EnumerateRequest(BaseModel):
    d: int
    fixed: Optional[dict[int, int]] = None
    count_only: bool = False
    limit: Optional[int] = Field(default=None, ge=0)


class EnumerateResponse(BaseModel):
    d: int
    count: int
    truncated: bool = False
    partitions: Optional[list[PartitionModel]] = None


class OrbitRequest(BaseModel):
    d: Optional[int] = None
    start: Optional[PartitionModel] = None
    generators: Literal["involutions_only", "involutions_plus_symmetry"] = (
        "involutions_only"
    )
    max_states: Optional[int] = None
    max_depth: Optional[int] = None
    checkpoint: Optional[str] = None
    checkpoint_interval: Optional[int] = None
    resume: bool = False
    threads: int = 1


class OrbitResponse(BaseModel):
    start: PartitionModel
    generator_set: str
    size: int
    parity_consistent: Optional[bool]
    diameter_reached: int
    elapsed: float
    complete: bool
    checkpoint_ref: Optional[str]


class VerifyTransitiveRequest(BaseModel):
    d: int
    allow_long: bool = False
    threads: int = 1


class VerifyTransitiveResponse(BaseModel):
    d: int
    size: int
    total: int
    transitive: bool
    report: OrbitResponse


class WeakClassesRequest(BaseModel):
    d: int
    allow_long: bool = False
    include_representatives: bool = True


class WeakClassEntry(BaseModel):
    size: int
    representative: PartitionModel


class WeakClassesResponse(BaseModel):
    d: int
    count: int
    total: int
    classes: Optional[list[WeakClassEntry]] = None


class SignRequest(BaseModel):
    partition: PartitionModel
    allow_long: bool = False


class SignResponse(BaseModel):
    sign: int
    parity_consistent: bool


class InvolveRequest(BaseModel):
    partition: PartitionModel
    triple: tuple[int, int, int]


class ActRequest(BaseModel):
    partition: PartitionModel
    sigma: list[int]
    tau: list[int]


class PathRequest(BaseModel):
    origin: PartitionModel
    target: PartitionModel
    max_states: int = 2_000_000


class PathResponse(BaseModel):
    word: list[tuple[int, int, int]]
    length: int


class ReducePathRequest(BaseModel):
    partition: PartitionModel
    class_index: int


class ReduceD4Request(BaseModel):
    partition: PartitionModel
    class_index: int = 4
    stage: Literal["t19", "targets", "t16", "t20"] = "t19"


class TraceStepModel(BaseModel):
    inv: Optional[tuple[int, int, int]] = None
    sym: Optional[dict] = None
    cert: str
    t_label: Optional[int] = None


class TraceResponse(BaseModel):
    start: PartitionModel
    class_index: int
    steps: list[TraceStepModel]
    final: PartitionModel


class TwinstarRequest(BaseModel):
    count: int = 100
    seed: int = 0
    budget: int = 1_000_000
    threads: int = 1


class TwinstarRecord(BaseModel):
    index: int
    seed: Optional[str]
    instance: PartitionModel
    status: str
    expanded: int
    elapsed: float
    budget: int
    trace: Optional[TraceResponse] = None


class TwinstarResponse(BaseModel):
    representative: list[tuple[int, int]]
    records: list[TwinstarRecord]
    successes: int
    unresolved: int


class EvalRequest(BaseModel):
    family: dict
    allow_long: bool = False


class EvalResponse(BaseModel):
    value: str
    numerator: int
    denominator: int


class ClassifyTreeRequest(BaseModel):
    edges: list[tuple[int, int]]
    n: int


class ClassifyTreeResponse(BaseModel):
    canon: str
    degree_seq: list[int]
    t_label: Optional[int] = None
    t_label_anchored: Optional[bool] = None
    diameter_path: list[int]


class NormalizeSymmetryRequest(BaseModel):
    d: int
    sigma: list[int]
    tau: list[int]


class NormalizeSymmetryResponse(BaseModel):
    word: list[tuple[int, int, int]]
    length: int
    verified: bool


class HealthResponse(BaseModel):
    status: str
    version: str
