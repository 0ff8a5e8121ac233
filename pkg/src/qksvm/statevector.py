"""Dense statevector simulation for small gate circuits.

Conventions
-----------
* Little-endian qubit order: qubit ``k`` is bit ``k`` of the basis index.
* ``RZ(t) = diag(exp(-it/2), exp(+it/2))``, ``RX(t) = cos(t/2) I - i sin(t/2) X``,
  ``RY(t) = cos(t/2) I - i sin(t/2) Y``, ``H = [[1, 1], [1, -1]] / sqrt(2)``.
* Global phase is never normalised away.
"""

from dataclasses import dataclass
from functools import cached_property
import math

import numpy as np

from . import _backend
from ._simkernel_py import OP_CNOT, OP_H, OP_RX, OP_RY, OP_RZ
from .errors import CapacityError, ValidationError

MAX_QUBITS = 24

_OPCODES = {"H": OP_H, "RX": OP_RX, "RY": OP_RY, "RZ": OP_RZ, "CNOT": OP_CNOT}
_U64 = (1 << 64) - 1


@dataclass(frozen=True)
class Gate:
    """One primitive gate.

    ``qubits`` is ``(target,)`` for single-qubit gates and
    ``(control, target)`` for CNOT. ``theta`` is in radians and ignored by
    H and CNOT.
    """

    name: str
    qubits: tuple
    theta: float = 0.0

    def __post_init__(self):
        if self.name not in _OPCODES:
            raise ValidationError(f"unknown gate {self.name!r}")
        arity = 2 if self.name == "CNOT" else 1
        if len(self.qubits) != arity:
            raise ValidationError(f"{self.name} takes {arity} qubit index(es)")
        if any(int(q) != q or q < 0 for q in self.qubits):
            raise ValidationError(f"bad qubit index in {self.qubits}")
        if arity == 2 and self.qubits[0] == self.qubits[1]:
            raise ValidationError("CNOT control and target must differ")
        if not math.isfinite(self.theta):
            raise ValidationError("gate angle must be finite")

    def adjoint(self):
        if self.name in ("H", "CNOT"):
            return self
        return Gate(self.name, self.qubits, -self.theta)

    def __repr__(self):
        if self.name in ("H", "CNOT"):
            return f"{self.name}{self.qubits}"
        return f"{self.name}({self.qubits[0]}, {self.theta!r})"


def H(target):
    return Gate("H", (target,))


def RX(target, theta):
    return Gate("RX", (target,), float(theta))


def RY(target, theta):
    return Gate("RY", (target,), float(theta))


def RZ(target, theta):
    return Gate("RZ", (target,), float(theta))


def CNOT(control, target):
    return Gate("CNOT", (control, target))


@dataclass(frozen=True)
class Circuit:
    """An ordered gate list on ``num_qubits`` qubits."""

    num_qubits: int
    gates: tuple = ()

    def __post_init__(self):
        if not 1 <= self.num_qubits:
            raise ValidationError("a circuit needs at least one qubit")
        object.__setattr__(self, "gates", tuple(self.gates))
        for gate in self.gates:
            if max(gate.qubits) >= self.num_qubits:
                raise ValidationError(
                    f"{gate!r} addresses a qubit outside 0..{self.num_qubits - 1}"
                )

    def __len__(self):
        return len(self.gates)

    def __add__(self, other):
        if not isinstance(other, Circuit):
            return NotImplemented
        if other.num_qubits != self.num_qubits:
            raise ValidationError("cannot concatenate circuits of different widths")
        return Circuit(self.num_qubits, self.gates + other.gates)

    def adjoint(self):
        return Circuit(self.num_qubits, tuple(g.adjoint() for g in reversed(self.gates)))

    @cached_property
    def encoded(self):
        """``(ops, thetas)`` arrays in the layout the simulation kernels expect."""
        ops = np.full((len(self.gates), 3), -1, dtype=np.int64)
        thetas = np.zeros(len(self.gates), dtype=np.float64)
        for row, gate in enumerate(self.gates):
            ops[row, 0] = _OPCODES[gate.name]
            ops[row, 1 : 1 + len(gate.qubits)] = gate.qubits
            thetas[row] = gate.theta
        ops.setflags(write=False)
        thetas.setflags(write=False)
        return ops, thetas


class StateVector:
    """Immutable pure state of ``num_qubits`` qubits."""

    __slots__ = ("num_qubits", "amplitudes")

    def __init__(self, amplitudes, *, check_norm=True):
        amps = np.array(amplitudes, dtype=np.complex128).ravel()
        dim = amps.shape[0]
        num_qubits = dim.bit_length() - 1
        if dim < 2 or dim != 1 << num_qubits:
            raise ValidationError(f"amplitude count {dim} is not a power of two >= 2")
        if num_qubits > MAX_QUBITS:
            raise CapacityError(f"{num_qubits} qubits exceeds the {MAX_QUBITS}-qubit cap")
        if check_norm and abs(np.vdot(amps, amps).real - 1.0) > 1e-8:
            raise ValidationError("amplitudes are not normalised")
        amps.setflags(write=False)
        self.num_qubits = num_qubits
        self.amplitudes = amps

    def __len__(self):
        return self.amplitudes.shape[0]

    def __repr__(self):
        return f"StateVector(num_qubits={self.num_qubits})"

    def norm_squared(self):
        return float(np.vdot(self.amplitudes, self.amplitudes).real)


def _check_width(num_qubits):
    if int(num_qubits) != num_qubits or num_qubits < 1 or num_qubits > MAX_QUBITS:
        raise CapacityError(f"qubit count must be in 1..{MAX_QUBITS}, got {num_qubits}")


def zero_state(num_qubits):
    """|0...0> on ``num_qubits`` qubits."""
    _check_width(num_qubits)
    amps = np.zeros(1 << num_qubits, dtype=np.complex128)
    amps[0] = 1.0
    return StateVector(amps, check_norm=False)


def _evolve(amps, circuit, apply_ops=None):
    ops, thetas = circuit.encoded
    if len(ops):
        (apply_ops or _backend.apply_ops)(amps, ops, thetas)
    return amps


def apply_gate(state, gate):
    """Return ``gate`` applied to ``state``; the input is left untouched."""
    if max(gate.qubits) >= state.num_qubits:
        raise ValidationError(f"{gate!r} addresses a qubit outside the {state.num_qubits}-qubit state")
    amps = state.amplitudes.copy()
    _evolve(amps, Circuit(state.num_qubits, (gate,)))
    return StateVector(amps, check_norm=False)


def run(circuit, apply_ops=None):
    """Simulate ``circuit`` from |0...0>.

    ``apply_ops`` overrides the import-time kernel choice (used by the
    benchmark and the backend-agreement tests).
    """
    _check_width(circuit.num_qubits)
    amps = np.zeros(1 << circuit.num_qubits, dtype=np.complex128)
    amps[0] = 1.0
    return StateVector(_evolve(amps, circuit, apply_ops), check_norm=False)


def overlap(a, b):
    """Real and imaginary parts of <a|b>, each accumulated symmetrically.

    Writing the sums over real arrays makes ``overlap(b, a)`` the exact
    conjugate of ``overlap(a, b)``, so fidelities are bit-symmetric.
    """
    ar, ai = a.real, a.imag
    br, bi = b.real, b.imag
    re = np.dot(ar, br) + np.dot(ai, bi)
    im = np.dot(ar, bi) - np.dot(ai, br)
    return re, im


def fidelity(a, b):
    """|<a|b>|^2 for two states of equal width."""
    if a.num_qubits != b.num_qubits:
        raise ValidationError(
            f"fidelity of a {a.num_qubits}-qubit and a {b.num_qubits}-qubit state"
        )
    re, im = overlap(a.amplitudes, b.amplitudes)
    return float(min(1.0, re * re + im * im))


def prob_all_zeros(state):
    amp = state.amplitudes[0]
    return float(amp.real * amp.real + amp.imag * amp.imag)


def bernoulli_fraction(p, shots, seed, stream=0):
    """Fraction of ``shots`` Bernoulli(p) successes.

    The draws come from a Philox counter-based generator keyed by
    ``(seed, stream)``, so a given triple always yields the same value
    regardless of platform, thread or evaluation order.
    """
    if int(shots) != shots or shots < 1:
        raise ValidationError(f"shots must be a positive integer, got {shots}")
    if not 0.0 <= p <= 1.0 + 1e-12:
        raise ValidationError(f"probability {p} outside [0, 1]")
    key = np.array([int(seed) & _U64, int(stream) & _U64], dtype=np.uint64)
    gen = np.random.Generator(np.random.Philox(key=key))
    hits = np.count_nonzero(gen.random(int(shots)) < p)
    return hits / shots


def sample_all_zeros(state, shots, seed, stream=0):
    """Shot estimate of the probability of measuring |0...0>."""
    return bernoulli_fraction(prob_all_zeros(state), shots, seed, stream)
