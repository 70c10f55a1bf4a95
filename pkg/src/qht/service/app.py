"""FastAPI service exposing the transform, the three demo pipelines, and the
resource tables over JSON. The CLI is a thin client of these endpoints."""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__, oracle, signals
from ..circuits import dc_fraction, run_qht
from ..errors import QhtError, ShapeMismatch, NonPowerOfTwoSide, error_code
from ..resources import compare_classical, estimate
from .schemas import (
    AnalyticRequest,
    AnalyticResponse,
    CornersRequest,
    CornersResponse,
    EnvelopeRequest,
    EnvelopeResponse,
    HealthResponse,
    ResourceCounts,
    ResourceRow,
    ResourcesRequest,
    ResourcesResponse,
    TransformRequest,
    TransformResponse,
)

_MAX_TABLE_N = 128

app = FastAPI(title="qht", version=__version__)


@app.exception_handler(QhtError)
def _domain_error(request: Request, exc: QhtError):
    return JSONResponse(
        status_code=400,
        content={"detail": {"code": error_code(exc), "message": str(exc)}},
    )


def _as_tensor(values: list[float], shape: list[int] | None) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if shape is not None:
        if int(np.prod(shape)) != arr.size:
            raise ShapeMismatch(f"shape {shape} does not hold {arr.size} values")
        arr = arr.reshape(shape)
    return arr


class _Bundle:
    """One QHT run next to its classical ground truth."""

    def __init__(self, arr: np.ndarray, mode: str):
        d, n = oracle.tensor_dims(arr)
        self.result = run_qht(arr, mode)
        self.classical = oracle.dht_classical(arr)
        self.dc = dc_fraction(arr)
        self.fidelity = oracle.fidelity(self.result.output.ravel(), self.classical.ravel())
        self.denormalized = self.result.denormalized()
        self.resources = ResourceCounts(**estimate(n, d, mode).to_dict())


@app.get("/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__)


@app.post("/v1/transform", response_model=TransformResponse)
def transform(req: TransformRequest) -> TransformResponse:
    arr = _as_tensor(req.values, req.shape)
    b = _Bundle(arr, req.mode)
    return TransformResponse(
        shape=list(arr.shape),
        output_re=b.result.output.real.ravel().tolist(),
        output_im=b.result.output.imag.ravel().tolist(),
        denormalized_re=b.denormalized.real.ravel().tolist(),
        denormalized_im=b.denormalized.imag.ravel().tolist(),
        classical_re=b.classical.real.ravel().tolist(),
        classical_im=b.classical.imag.ravel().tolist(),
        fidelity=b.fidelity,
        success_probability=b.result.success_probability,
        dc_fraction=b.dc,
        input_scale=b.result.input_scale,
        resources=b.resources,
    )


@app.post("/v1/analytic", response_model=AnalyticResponse)
def analytic(req: AnalyticRequest) -> AnalyticResponse:
    x = signals.analytic_grid(req.n, req.step)
    f, hf = oracle.analytic_pair(x)
    b = _Bundle(f, req.mode)
    return AnalyticResponse(
        x=x.tolist(),
        f=f.tolist(),
        hf_quantum=b.denormalized.real.tolist(),
        hf_classical=b.classical.real.tolist(),
        hf_analytic=hf.tolist(),
        fidelity=b.fidelity,
        success_probability=b.result.success_probability,
        dc_fraction=b.dc,
        max_row_error=float(np.abs(b.denormalized - b.classical).max()),
        resources=b.resources,
    )


@app.post("/v1/envelope", response_model=EnvelopeResponse)
def envelope(req: EnvelopeRequest) -> EnvelopeResponse:
    f = np.asarray(req.signal, dtype=np.float64)
    b = _Bundle(f, req.mode)
    hf_quantum = b.denormalized.real
    ia_quantum = np.sqrt(f**2 + hf_quantum**2)
    ia_classical = oracle.envelope(f)
    windows = signals.detect_bursts(ia_quantum, req.fault_count) if req.fault_count else []
    return EnvelopeResponse(
        ia_quantum=ia_quantum.tolist(),
        ia_classical=ia_classical.tolist(),
        hf_quantum=hf_quantum.tolist(),
        hf_classical=b.classical.real.tolist(),
        fidelity=b.fidelity,
        success_probability=b.result.success_probability,
        dc_fraction=b.dc,
        ia_max_abs_diff=float(np.abs(ia_quantum - ia_classical).max()),
        fault_windows=[list(w) for w in windows],
        resources=b.resources,
    )


@app.post("/v1/corners", response_model=CornersResponse)
def corners(req: CornersRequest) -> CornersResponse:
    side = req.side
    if side & (side - 1):
        raise NonPowerOfTwoSide(f"side {side} is not a power of two")
    if len(req.pixels) != side * side:
        raise ShapeMismatch(f"{len(req.pixels)} pixels cannot fill {side}x{side}")
    pixels = np.asarray(req.pixels, dtype=np.float64)
    if pixels.min() < 0 or pixels.max() > 255:
        raise ShapeMismatch("pixel values must be within 0..255")
    b = _Bundle(pixels.reshape(side, side) / 255.0, req.mode)
    mag_quantum = np.abs(b.result.output)
    mag_classical = np.abs(b.classical / np.linalg.norm(b.classical.ravel()))
    corners_quantum = signals.find_corners(mag_quantum, req.tau)
    corners_classical = signals.find_corners(mag_classical, req.tau)
    return CornersResponse(
        side=side,
        magnitude=mag_quantum.ravel().tolist(),
        corners_quantum=[list(c) for c in corners_quantum],
        corners_classical=[list(c) for c in corners_classical],
        corners_equal=corners_quantum == corners_classical,
        corner_cluster_count=len(signals.corner_clusters(corners_quantum, (side, side))),
        fidelity=b.fidelity,
        success_probability=b.result.success_probability,
        dc_fraction=b.dc,
        resources=b.resources,
    )


@app.post("/v1/resources", response_model=ResourcesResponse)
def resources(req: ResourcesRequest) -> ResourcesResponse:
    rows = []
    for d in req.d_values:
        for n in req.n_values:
            if n > _MAX_TABLE_N:
                raise ShapeMismatch(f"n={n} above the tabulation cap {_MAX_TABLE_N}")
            rows.append(ResourceRow(**compare_classical(n, d, k=req.k, mode=req.mode)))
    return ResourcesResponse(rows=rows)
