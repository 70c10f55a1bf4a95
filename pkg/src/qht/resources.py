"""Static gate-count and depth estimation over a {1-qubit rotation, CNOT} basis.

Multi-controlled X gates are lowered Barenco-style: negative controls are
X-conjugated, an m-controlled X with m-2 borrowable (dirty) qubits becomes a
V-chain of 4(m-2) Toffolis, and when only a single borrowable qubit exists the
gate is first split into two smaller MCX pairs that lend each other their idle
controls. Toffolis bottom out in the standard 6-CNOT / 9-rotation network.
All rewrites are exact, so the decomposed circuit can be simulated against the
original gate for verification. Everything here is pure and safe for
concurrent use.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .circuits import Circuit, build_qht_circuit
from .errors import UnsupportedGate
from .sim import CPhase, CX, GateOp, H, MCX, MeasureReset, Phase, Swap, X, Z, _op_qubits

# real-operation constant of a radix-2 FFT butterfly pass, per N log2 N
C_FFT = 5


@dataclass
class ResourceReport:
    n: int
    d: int
    mode: str
    count_1q: int
    count_2q: int
    total: int
    depth: int
    qubits_used: int
    extra_ancillas: int
    measurements: int

    def to_dict(self) -> dict:
        return asdict(self)


def _toffoli(a: int, b: int, t: int) -> list[GateOp]:
    """Exact CCX as 6 CNOTs and 9 single-qubit gates (T = Phase(pi/4))."""
    T = np.pi / 4
    return [
        H(t),
        CX(b, t),
        Phase(t, -T),
        CX(a, t),
        Phase(t, T),
        CX(b, t),
        Phase(t, -T),
        CX(a, t),
        Phase(b, T),
        Phase(t, T),
        CX(a, b),
        H(t),
        Phase(a, T),
        Phase(b, -T),
        CX(a, b),
    ]


def _mcx_vchain(controls: list[int], target: int, dirty: list[int]) -> list[GateOp]:
    """m-controlled X as 4(m-2) Toffolis using m-2 dirty ancillas (restored)."""
    m = len(controls)
    a = dirty[: m - 2]
    top = _toffoli(controls[m - 1], a[m - 3], target)
    down = []
    for i in range(m - 3, 0, -1):
        down += _toffoli(controls[i + 1], a[i - 1], a[i])
    bottom = _toffoli(controls[0], controls[1], a[0])
    up = []
    for i in range(1, m - 2):
        up += _toffoli(controls[i + 1], a[i - 1], a[i])
    half = top + down + bottom + up
    return half + half


def _mcx_positive(controls: list[int], target: int, dirty: list[int]) -> list[GateOp]:
    m = len(controls)
    if m == 0:
        return [X(target)]
    if m == 1:
        return [CX(controls[0], target)]
    if m == 2:
        return _toffoli(controls[0], controls[1], target)
    if len(dirty) >= m - 2:
        return _mcx_vchain(controls, target, dirty)
    if not dirty:
        raise UnsupportedGate(
            f"{m}-controlled X needs at least one borrowable qubit to decompose"
        )
    # split through the one borrowed qubit; each half borrows the other's idle controls
    borrow = dirty[0]
    first = controls[: (m + 1) // 2]
    second = controls[(m + 1) // 2 :]
    g1 = _mcx_positive(first, borrow, second + [target] + dirty[1:])
    g2 = _mcx_positive(second + [borrow], target, first + dirty[1:])
    return g1 + g2 + g1 + g2


def decompose(op: GateOp, dirty=()) -> list[GateOp]:
    """Rewrite one gate into the {H, X, Z, Phase, CX} basis.

    dirty lists qubits outside the gate's support that may be borrowed in any
    state (required for MCX with three or more controls). Measurements cost no
    gates and return an empty list.
    """
    dirty = list(dirty)
    if isinstance(op, (H, X, Z, Phase)):
        return [op]
    if isinstance(op, CX):
        return [op]
    if isinstance(op, CPhase):
        half = op.angle / 2.0
        return [
            Phase(op.control, half),
            Phase(op.target, half),
            CX(op.control, op.target),
            Phase(op.target, -half),
            CX(op.control, op.target),
        ]
    if isinstance(op, Swap):
        return [CX(op.a, op.b), CX(op.b, op.a), CX(op.a, op.b)]
    if isinstance(op, MCX):
        flips = [X(q) for q, want in op.controls if want == 0]
        inner = _mcx_positive([q for q, _ in op.controls], op.target, dirty)
        return flips + inner + flips
    if isinstance(op, MeasureReset):
        return []
    raise UnsupportedGate(f"cannot decompose {op!r}")


def decompose_circuit(circuit: Circuit) -> tuple[list[GateOp], int]:
    """Lower a whole circuit; returns (ops, extra borrowed ancilla count).

    MeasureReset ops pass through unchanged (they cost no gates), so the
    lowered list still runs on the simulator with identical postselection
    semantics. When an MCX has no spare circuit qubit to borrow (the d = 1
    layouts), one extra ancilla beyond the layout is accounted for and used
    as the borrow; it starts and ends in |0>.
    """
    ops: list[GateOp] = []
    extra = 0
    phantom = circuit.num_qubits
    for op in circuit.ops:
        if isinstance(op, MeasureReset):
            ops.append(op)
            continue
        dirty: list[int] = []
        if isinstance(op, MCX) and len(op.controls) >= 3:
            support = set(_op_qubits(op))
            dirty = [q for q in range(circuit.num_qubits) if q not in support]
            if not dirty:
                dirty = [phantom]
                extra = 1
        ops.extend(decompose(op, dirty))
    return ops, extra


def schedule_depth(ops) -> int:
    """Greedy schedule: a gate starts one tick after its busiest qubit frees up.

    Measurements are excluded; the model counts gate depth only.
    """
    busy: dict[int, int] = {}
    depth = 0
    for op in ops:
        if isinstance(op, MeasureReset):
            continue
        qubits = _op_qubits(op)
        finish = 1 + max((busy.get(q, 0) for q in qubits), default=0)
        for q in qubits:
            busy[q] = finish
        depth = max(depth, finish)
    return depth


def estimate(n: int, d: int, mode: str = "dynamic") -> ResourceReport:
    """Build the QHT circuit, lower it, and count gates and greedy depth."""
    circuit = build_qht_circuit(n, d, mode, enforce_qubit_limit=False)
    ops, extra = decompose_circuit(circuit)
    count_2q = sum(isinstance(op, CX) for op in ops)
    measurements = sum(isinstance(op, MeasureReset) for op in ops)
    count_1q = len(ops) - count_2q - measurements
    return ResourceReport(
        n=n,
        d=d,
        mode=mode,
        count_1q=count_1q,
        count_2q=count_2q,
        total=count_1q + count_2q,
        depth=schedule_depth(ops),
        qubits_used=circuit.layout.total_qubits,
        extra_ancillas=extra,
        measurements=measurements,
    )


def compare_classical(n: int, d: int, k: int = 1, mode: str = "dynamic") -> dict:
    """One table row: quantum counts next to the classical FLOP model.

    The classical model is C_FFT * N^d * log2(N^d) real operations per FFT
    pass, doubled for the forward/inverse pair; estimating k components
    directly instead costs k * N^d.
    """
    report = estimate(n, d, mode)
    size = (1 << n) ** d
    fft_pair = 2 * C_FFT * size * (d * n)
    direct = k * size
    return {
        "n": n,
        "d": d,
        "N": 1 << n,
        "k": k,
        "classical_fft_flops": fft_pair,
        "classical_direct_flops": direct,
        "classical_min_flops": min(fft_pair, direct),
        "quantum_total": report.total,
        "quantum_1q": report.count_1q,
        "quantum_2q": report.count_2q,
        "quantum_depth": report.depth,
        "qubits_used": report.qubits_used,
        "extra_ancillas": report.extra_ancillas,
    }
