"""Builders for the d-dimensional quantum Hilbert transform circuit.

Pipeline: one QFT per register, DC removal through an open-controlled MCX
onto an ancilla that is measured and postselected on |0>, a Z on every
register's most significant qubit, then inverse QFTs. ``run_qht`` executes
the whole thing on the statevector simulator and undoes the residual
(-i)**d global phase so the output can be compared bin by bin with
``oracle.dht_classical``.

Register 0 of the layout holds tensor axis 0 and occupies the highest data
qubits, so the amplitude array is exactly the row-major tensor. Ancillas sit
above all data qubits ("prepended as the most significant qubit").

Circuit building is pure and thread-safe; each run_qht call owns its state,
so concurrent runs on distinct inputs are fine.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import oracle
from .errors import (
    EmptyRegister,
    LayoutMismatch,
    QubitCountOutOfRange,
    ShapeMismatch,
    UnsupportedGate,
    ZeroNorm,
)
from .sim import (
    CPhase,
    GateOp,
    H,
    MCX,
    MeasureReset,
    Phase,
    Statevector,
    Swap,
    Z,
    max_qubits,
)

MODES = ("dynamic", "static")


@dataclass(frozen=True)
class RegisterLayout:
    """Qubit assignment for d registers of n qubits plus measurement ancilla(s).

    register_qubits[r] lists register r's qubits LSB first; its last entry is
    the register's most significant qubit.
    """

    d: int
    n: int
    register_qubits: tuple[tuple[int, ...], ...]
    ancilla_qubits: tuple[int, ...]

    @property
    def total_qubits(self) -> int:
        return self.d * self.n + len(self.ancilla_qubits)

    def msb(self, r: int) -> int:
        return self.register_qubits[r][-1]

    def __post_init__(self):
        seen = [q for reg in self.register_qubits for q in reg] + list(self.ancilla_qubits)
        if sorted(seen) != list(range(self.total_qubits)):
            raise LayoutMismatch("registers and ancillas must partition 0..total-1")

    @classmethod
    def for_qht(cls, d: int, n: int, mode: str) -> "RegisterLayout":
        if mode not in MODES:
            raise LayoutMismatch(f"mode must be one of {MODES}, got {mode!r}")
        if d < 1 or n < 1:
            raise LayoutMismatch(f"need d >= 1 and n >= 1, got d={d}, n={n}")
        # axis 0 is the most significant block of the row-major index
        regs = tuple(
            tuple(range((d - 1 - r) * n, (d - 1 - r) * n + n)) for r in range(d)
        )
        num_anc = 1 if mode == "dynamic" else d
        ancs = tuple(range(d * n, d * n + num_anc))
        return cls(d=d, n=n, register_qubits=regs, ancilla_qubits=ancs)


@dataclass
class Circuit:
    num_qubits: int
    ops: list[GateOp]
    layout: RegisterLayout


@dataclass
class QhtResult:
    """Transformed tensor plus the run's bookkeeping.

    output has unit Frobenius norm; multiply by input_scale * sqrt(success
    probability) to recover the unnormalized classical transform.
    """

    output: np.ndarray
    success_probability: float
    state: Statevector
    global_phase: complex
    input_scale: float
    branch_probabilities: list[float] = field(default_factory=list)

    def denormalized(self) -> np.ndarray:
        return self.output * self.input_scale * np.sqrt(self.success_probability)


def build_qft(n: int, qubits) -> list[GateOp]:
    """QFT gate list, |k> -> N^{-1/2} sum_j e^{+2*pi*i*j*k/N} |j>.

    qubits are LSB first; the closing swap network keeps the output bit order
    equal to the input bit order.
    """
    qubits = list(qubits)
    if n < 1 or len(qubits) != n:
        raise EmptyRegister(f"need n == len(qubits) >= 1, got n={n}, qubits={qubits}")
    ops: list[GateOp] = []
    for t in range(n - 1, -1, -1):
        ops.append(H(qubits[t]))
        for c in range(t - 1, -1, -1):
            ops.append(CPhase(qubits[c], qubits[t], np.pi / (1 << (t - c))))
    for i in range(n // 2):
        ops.append(Swap(qubits[i], qubits[n - 1 - i]))
    return ops


def adjoint(ops) -> list[GateOp]:
    """Adjoint of a unitary gate list: reversed order, negated phases."""
    out: list[GateOp] = []
    for op in reversed(list(ops)):
        if isinstance(op, CPhase):
            out.append(CPhase(op.control, op.target, -op.angle))
        elif isinstance(op, Phase):
            out.append(Phase(op.target, -op.angle))
        elif isinstance(op, MeasureReset):
            raise UnsupportedGate("measurement ops have no adjoint")
        else:
            out.append(op)
    return out


def build_iqft(n: int, qubits) -> list[GateOp]:
    """Inverse QFT: adjoint of build_qft on the same qubits."""
    return adjoint(build_qft(n, qubits))


def build_dc_removal(layout: RegisterLayout, mode: str) -> list[GateOp]:
    """Per register: open-controlled MCX onto an ancilla, then postselect-0 measure.

    Dynamic mode reuses one ancilla d times; static mode burns one per register.
    """
    if mode not in MODES:
        raise LayoutMismatch(f"mode must be one of {MODES}, got {mode!r}")
    expected = 1 if mode == "dynamic" else layout.d
    if len(layout.ancilla_qubits) != expected:
        raise LayoutMismatch(
            f"{mode} mode needs {expected} ancilla(s), layout has {len(layout.ancilla_qubits)}"
        )
    ops: list[GateOp] = []
    for r in range(layout.d):
        anc = layout.ancilla_qubits[0] if mode == "dynamic" else layout.ancilla_qubits[r]
        controls = tuple((q, 0) for q in layout.register_qubits[r])
        ops.append(MCX(controls=controls, target=anc))
        ops.append(MeasureReset(anc, postselect=0))
    return ops


def build_qht_circuit(
    n: int, d: int, mode: str = "dynamic", enforce_qubit_limit: bool = True
) -> Circuit:
    """Full d-dimensional Hilbert transform circuit over d*n data qubits.

    The qubit ceiling only matters for simulation; static analysis passes
    enforce_qubit_limit=False.
    """
    layout = RegisterLayout.for_qht(d, n, mode)
    limit = max_qubits()
    if enforce_qubit_limit and layout.total_qubits > limit:
        raise QubitCountOutOfRange(
            f"{layout.total_qubits} qubits exceeds the limit {limit} "
            "(set QHT_MAX_QUBITS to override)"
        )
    ops: list[GateOp] = []
    for r in range(d):
        ops.extend(build_qft(n, layout.register_qubits[r]))
    ops.extend(build_dc_removal(layout, mode))
    for r in range(d):
        ops.append(Z(layout.msb(r)))
    for r in range(d):
        ops.extend(build_iqft(n, layout.register_qubits[r]))
    return Circuit(num_qubits=layout.total_qubits, ops=ops, layout=layout)


def encode_tensor(f: np.ndarray, layout: RegisterLayout) -> tuple[Statevector, float]:
    """Frobenius-normalized amplitude encoding; returns the state and the norm."""
    f = np.asarray(f, dtype=np.complex128)
    d, n = oracle.tensor_dims(f)
    if d != layout.d or n != layout.n:
        raise ShapeMismatch(
            f"tensor is d={d}, n={n} but layout expects d={layout.d}, n={layout.n}"
        )
    scale = float(np.linalg.norm(f.ravel()))
    if scale == 0.0:
        raise ZeroNorm("cannot encode an all-zero tensor")
    amps = np.zeros(1 << layout.total_qubits, dtype=np.complex128)
    amps[: f.size] = f.ravel() / scale
    return Statevector(amps, layout.total_qubits), scale


def run_qht(f: np.ndarray, mode: str = "dynamic") -> QhtResult:
    """Encode f, run the QHT circuit with postselection, and decode the result.

    Raises PostselectionImpossible when all spectral energy sits in the DC
    bins (for example a constant input).
    """
    f = np.asarray(f)
    d, n = oracle.tensor_dims(f)
    circuit = build_qht_circuit(n, d, mode)
    state, scale = encode_tensor(f, circuit.layout)
    measurements = state.apply_all(circuit.ops)
    probs = [p for _, p in measurements]
    success = float(np.prod(probs))
    phase = (-1j) ** d
    block = state.amps[: f.size] / phase
    return QhtResult(
        output=block.reshape(f.shape),
        success_probability=success,
        state=state,
        global_phase=phase,
        input_scale=scale,
        branch_probabilities=probs,
    )


def dc_fraction(f: np.ndarray) -> float:
    """Fraction of spectral energy on bins with at least one zero frequency index."""
    f = np.asarray(f)
    d, _ = oracle.tensor_dims(f)
    energy = oracle.spectral_energy(f)
    total = float(energy.sum())
    if total == 0.0:
        raise ZeroNorm("zero tensor has no spectrum")
    ac = float(energy[tuple(slice(1, None) for _ in range(d))].sum())
    return min(1.0, max(0.0, 1.0 - ac / total))
