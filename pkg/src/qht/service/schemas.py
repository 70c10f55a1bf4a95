"""Pydantic request/response models for the HTTP service."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field

Mode = Literal["dynamic", "static"]


class HealthResponse(BaseModel):
    status: str
    version: str


class ResourceCounts(BaseModel):
    n: int
    d: int
    mode: Mode
    count_1q: int
    count_2q: int
    total: int
    depth: int
    qubits_used: int
    extra_ancillas: int
    measurements: int


class TransformRequest(BaseModel):
    values: list[float] = Field(description="row-major tensor entries")
    shape: Optional[list[int]] = Field(default=None, description="defaults to 1-D")
    mode: Mode = "dynamic"


class TransformResponse(BaseModel):
    shape: list[int]
    output_re: list[float]
    output_im: list[float]
    denormalized_re: list[float]
    denormalized_im: list[float]
    classical_re: list[float]
    classical_im: list[float]
    fidelity: float
    success_probability: float
    dc_fraction: float
    input_scale: float
    resources: ResourceCounts


class AnalyticRequest(BaseModel):
    n: int = Field(default=7, ge=1)
    step: float = Field(default=0.01, gt=0)
    mode: Mode = "dynamic"


class AnalyticResponse(BaseModel):
    x: list[float]
    f: list[float]
    hf_quantum: list[float]
    hf_classical: list[float]
    hf_analytic: list[float]
    fidelity: float
    success_probability: float
    dc_fraction: float
    max_row_error: float
    resources: ResourceCounts


class EnvelopeRequest(BaseModel):
    signal: list[float]
    mode: Mode = "dynamic"
    fault_count: int = Field(default=0, ge=0, description="burst windows to report")


class EnvelopeResponse(BaseModel):
    ia_quantum: list[float]
    ia_classical: list[float]
    hf_quantum: list[float]
    hf_classical: list[float]
    fidelity: float
    success_probability: float
    dc_fraction: float
    ia_max_abs_diff: float
    fault_windows: list[list[int]]
    resources: ResourceCounts


class CornersRequest(BaseModel):
    pixels: list[int] = Field(description="row-major grayscale values, 0..255")
    side: int = Field(ge=2)
    tau: float = Field(default=0.5, gt=0, le=1)
    mode: Mode = "dynamic"


class CornersResponse(BaseModel):
    side: int
    magnitude: list[float]
    corners_quantum: list[list[int]]
    corners_classical: list[list[int]]
    corners_equal: bool
    corner_cluster_count: int
    fidelity: float
    success_probability: float
    dc_fraction: float
    resources: ResourceCounts


class ResourceRow(BaseModel):
    n: int
    d: int
    N: int
    k: int
    classical_fft_flops: int
    classical_direct_flops: int
    classical_min_flops: int
    quantum_total: int
    quantum_1q: int
    quantum_2q: int
    quantum_depth: int
    qubits_used: int
    extra_ancillas: int


class ResourcesRequest(BaseModel):
    n_values: list[int]
    d_values: list[int] = Field(default_factory=lambda: [1])
    k: int = Field(default=1, ge=1)
    mode: Mode = "dynamic"


class ResourcesResponse(BaseModel):
    rows: list[ResourceRow]
