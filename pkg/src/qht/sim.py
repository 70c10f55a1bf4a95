"""Dense statevector simulator for the Hilbert-transform gate set.

Qubit 0 is the least significant bit of the basis index, so ``amps`` maps
row-major onto tensor indices when registers are laid out high-to-low.
Gate kernels mutate the amplitude array in place through strided views;
no full unitary matrices are ever built outside the test suite.

Distinct ``Statevector`` instances are safe to use from different threads;
a single instance must not be mutated concurrently.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .errors import (
    DuplicateQubit,
    InvalidQubitIndex,
    NonPowerOfTwoLength,
    PostselectionImpossible,
    QubitCountOutOfRange,
    ZeroNorm,
)

DEFAULT_MAX_QUBITS = 30
POSTSELECT_FLOOR = 1e-12
NORM_TOL = 1e-10

_INV_SQRT2 = 1.0 / np.sqrt(2.0)


def max_qubits() -> int:
    """Simulable qubit ceiling. The QHT_MAX_QUBITS env var overrides the default 30."""
    return int(os.environ.get("QHT_MAX_QUBITS", DEFAULT_MAX_QUBITS))


# --- gate ops -------------------------------------------------------------
#
# Control polarity is encoded as the bit value the control must hold:
# 1 = positive control (fires on |1>), 0 = negative control (fires on |0>).

@dataclass(frozen=True)
class H:
    target: int


@dataclass(frozen=True)
class X:
    target: int


@dataclass(frozen=True)
class Z:
    target: int


@dataclass(frozen=True)
class Phase:
    """Single-qubit phase gate diag(1, e^{i*angle})."""

    target: int
    angle: float


@dataclass(frozen=True)
class CPhase:
    """Two-qubit controlled phase diag(1, 1, 1, e^{i*angle}); symmetric in its qubits."""

    control: int
    target: int
    angle: float


@dataclass(frozen=True)
class Swap:
    a: int
    b: int


@dataclass(frozen=True)
class CX:
    control: int
    target: int


@dataclass(frozen=True)
class MCX:
    """Multi-controlled X; each control is (qubit, required bit value)."""

    controls: tuple[tuple[int, int], ...]
    target: int


@dataclass(frozen=True)
class MeasureReset:
    """Measure one qubit, then reset it to |0>.

    postselect 0/1 conditions on that outcome; postselect None samples it.
    """

    qubit: int
    postselect: Optional[int] = 0


GateOp = Union[H, X, Z, Phase, CPhase, Swap, CX, MCX, MeasureReset]


def _op_qubits(op: GateOp) -> list[int]:
    if isinstance(op, (H, X, Z, Phase)):
        return [op.target]
    if isinstance(op, CPhase):
        return [op.control, op.target]
    if isinstance(op, Swap):
        return [op.a, op.b]
    if isinstance(op, CX):
        return [op.control, op.target]
    if isinstance(op, MCX):
        return [q for q, _ in op.controls] + [op.target]
    return [op.qubit]


class Statevector:
    """Unit-norm complex amplitude vector over ``2**num_qubits`` basis states."""

    __slots__ = ("num_qubits", "amps")

    def __init__(self, amps: np.ndarray, num_qubits: int):
        self.num_qubits = num_qubits
        self.amps = amps

    def copy(self) -> "Statevector":
        return Statevector(self.amps.copy(), self.num_qubits)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amps) ** 2)))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2

    # internal: tensor view with axis (num_qubits-1-q) belonging to qubit q
    def _view(self) -> np.ndarray:
        return self.amps.reshape([2] * self.num_qubits)

    def _axis(self, qubit: int) -> int:
        return self.num_qubits - 1 - qubit

    def _slices(self, qubit: int) -> tuple[tuple, tuple]:
        sel0: list = [slice(None)] * self.num_qubits
        sel1 = sel0.copy()
        sel0[self._axis(qubit)] = 0
        sel1[self._axis(qubit)] = 1
        return tuple(sel0), tuple(sel1)

    def _check_qubits(self, op: GateOp) -> None:
        qubits = _op_qubits(op)
        for q in qubits:
            if not 0 <= q < self.num_qubits:
                raise InvalidQubitIndex(
                    f"qubit {q} out of range for {self.num_qubits}-qubit state"
                )
        if len(set(qubits)) != len(qubits):
            raise DuplicateQubit(f"duplicate qubit in {op!r}")

    def _check_norm(self) -> None:
        nrm = self.norm()
        if abs(nrm - 1.0) > NORM_TOL:
            raise AssertionError(f"state norm drifted to {nrm!r}")

    def apply(self, op: GateOp, rng=None) -> Optional[tuple[int, float]]:
        """Apply one gate in place.

        Returns None for unitaries; for MeasureReset returns (outcome, probability)
        of the branch that was kept.
        """
        self._check_qubits(op)
        v = self._view()

        if isinstance(op, H):
            s0, s1 = self._slices(op.target)
            a0 = v[s0].copy()
            a1 = v[s1].copy()
            v[s0] = (a0 + a1) * _INV_SQRT2
            v[s1] = (a0 - a1) * _INV_SQRT2
        elif isinstance(op, X):
            s0, s1 = self._slices(op.target)
            a0 = v[s0].copy()
            v[s0] = v[s1]
            v[s1] = a0
        elif isinstance(op, Z):
            _, s1 = self._slices(op.target)
            v[s1] *= -1.0
        elif isinstance(op, Phase):
            _, s1 = self._slices(op.target)
            v[s1] *= np.exp(1j * op.angle)
        elif isinstance(op, CPhase):
            sel: list = [slice(None)] * self.num_qubits
            sel[self._axis(op.control)] = 1
            sel[self._axis(op.target)] = 1
            v[tuple(sel)] *= np.exp(1j * op.angle)
        elif isinstance(op, Swap):
            sel01: list = [slice(None)] * self.num_qubits
            sel10 = sel01.copy()
            sel01[self._axis(op.a)] = 0
            sel01[self._axis(op.b)] = 1
            sel10[self._axis(op.a)] = 1
            sel10[self._axis(op.b)] = 0
            tmp = v[tuple(sel01)].copy()
            v[tuple(sel01)] = v[tuple(sel10)]
            v[tuple(sel10)] = tmp
        elif isinstance(op, CX):
            self._flip_target([(op.control, 1)], op.target, v)
        elif isinstance(op, MCX):
            self._flip_target(list(op.controls), op.target, v)
        elif isinstance(op, MeasureReset):
            if op.postselect is None:
                outcome = self.measure_sample(op.qubit, rng)
                prob = 1.0
            else:
                outcome = op.postselect
                prob = self.measure_postselect(op.qubit, outcome)
            if outcome == 1:
                self.apply(X(op.qubit))
            return outcome, prob
        else:
            raise TypeError(f"unknown gate op {op!r}")

        self._check_norm()
        return None

    def _flip_target(self, controls: list[tuple[int, int]], target: int, v: np.ndarray) -> None:
        base: list = [slice(None)] * self.num_qubits
        for q, want in controls:
            if want not in (0, 1):
                raise InvalidQubitIndex(f"control polarity must be 0 or 1, got {want!r}")
            base[self._axis(q)] = want
        sel0 = base.copy()
        sel1 = base.copy()
        sel0[self._axis(target)] = 0
        sel1[self._axis(target)] = 1
        tmp = v[tuple(sel0)].copy()
        v[tuple(sel0)] = v[tuple(sel1)]
        v[tuple(sel1)] = tmp

    def apply_all(self, ops, rng=None) -> list[tuple[int, float]]:
        """Apply a gate sequence; returns the (outcome, probability) list of all measurements."""
        measured = []
        for op in ops:
            res = self.apply(op, rng=rng)
            if res is not None:
                measured.append(res)
        return measured

    def measure_postselect(self, qubit: int, outcome: int) -> float:
        """Project onto ``qubit == outcome`` and renormalize; returns the branch probability."""
        if not 0 <= qubit < self.num_qubits:
            raise InvalidQubitIndex(f"qubit {qubit} out of range")
        v = self._view()
        s0, s1 = self._slices(qubit)
        keep, drop = (s0, s1) if outcome == 0 else (s1, s0)
        prob = float(np.sum(np.abs(v[keep]) ** 2))
        if prob < POSTSELECT_FLOOR:
            raise PostselectionImpossible(
                f"outcome {outcome} on qubit {qubit} has probability {prob:.3e}",
                probability=prob,
            )
        v[drop] = 0.0
        self.amps /= np.sqrt(prob)
        return prob

    def measure_sample(self, qubit: int, rng=None) -> int:
        """Born-rule sample of one qubit; collapses and renormalizes the state."""
        if not 0 <= qubit < self.num_qubits:
            raise InvalidQubitIndex(f"qubit {qubit} out of range")
        rng = np.random.default_rng(rng) if not isinstance(rng, np.random.Generator) else rng
        v = self._view()
        s0, s1 = self._slices(qubit)
        p1 = float(np.sum(np.abs(v[s1]) ** 2))
        outcome = 1 if rng.random() < p1 else 0
        keep, drop = (s1, s0) if outcome == 1 else (s0, s1)
        prob = p1 if outcome == 1 else 1.0 - p1
        v[drop] = 0.0
        self.amps /= np.sqrt(prob)
        return outcome


def new_zero_state(num_qubits: int) -> Statevector:
    """All-zeros computational basis state |0...0>."""
    limit = max_qubits()
    if not 1 <= num_qubits <= limit:
        raise QubitCountOutOfRange(
            f"num_qubits must be in [1, {limit}], got {num_qubits}"
        )
    amps = np.zeros(1 << num_qubits, dtype=np.complex128)
    amps[0] = 1.0
    return Statevector(amps, num_qubits)


def from_amplitudes(raw) -> Statevector:
    """Statevector with amplitudes ``raw / ||raw||``; length must be a power of two."""
    amps = np.asarray(raw, dtype=np.complex128).ravel()
    n = len(amps)
    if n < 2 or n & (n - 1):
        raise NonPowerOfTwoLength(f"length {n} is not a power of two >= 2")
    nrm = np.sqrt(np.sum(np.abs(amps) ** 2))
    if nrm == 0.0:
        raise ZeroNorm("cannot normalize a zero amplitude vector")
    num_qubits = n.bit_length() - 1
    if num_qubits > max_qubits():
        raise QubitCountOutOfRange(f"{num_qubits} qubits exceeds the limit {max_qubits()}")
    return Statevector(amps / nrm, num_qubits)
