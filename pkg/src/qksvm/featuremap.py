"""Data-encoding circuits for the Z, ZZ and Pauli feature maps.

Each map is built per repetition from the scaled input ``s = data_scale * x``
(angles in radians), using ``exp(i a Z) = RZ(-2a)`` and
``exp(-i a P) = RP(2a)``:

* ``Z``:     [H layer], ``exp(i 2 s_k Z_k)`` on every qubit.
* ``ZZ``:    [H layer], ``exp(i s_j Z_j)`` on every qubit, then
  ``exp(i s_j s_k Z_j Z_k)`` for every pair ``j < k``.
* ``PAULI``: [H layer], ``exp(-i s_j X_j)``, ``exp(-i s_j Y_j)``,
  ``exp(-i s_j Z_j)`` on every qubit, then ``exp(-i s_j s_k Z_j X_k)`` for
  every pair ``j < k``.

Two-qubit exponentials are decomposed by CNOT conjugation (plus H on the
target for the ``Z X`` term). Pairs run in lexicographic order, qubits in
ascending order, and gates are listed in the order they act on the state.
"""

from dataclasses import asdict, dataclass
import math

from .errors import CapacityError, ValidationError
from .statevector import CNOT, MAX_QUBITS, RX, RY, RZ, Circuit, H

KINDS = ("Z", "ZZ", "PAULI")

DISPLAY_NAMES = {"Z": "ZFeatureMap", "ZZ": "ZZFeatureMap", "PAULI": "PauliFeatureMap"}


@dataclass(frozen=True)
class FeatureMapSpec:
    """Which encoding to build and how.

    ``initial_hadamard=None`` resolves to True for Z/ZZ and False for PAULI.
    Z and ZZ without the Hadamard layer only attach phases to |0...0>, which
    makes every kernel entry 1, so that combination is rejected.
    """

    kind: str
    num_features: int
    reps: int = 2
    initial_hadamard: bool = None
    data_scale: float = 1.0

    def __post_init__(self):
        kind = str(self.kind).upper()
        if kind not in KINDS:
            raise ValidationError(f"feature map kind must be one of {KINDS}, got {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        if self.initial_hadamard is None:
            object.__setattr__(self, "initial_hadamard", kind != "PAULI")
        if int(self.num_features) != self.num_features or self.num_features < 1:
            raise ValidationError("num_features must be a positive integer")
        if self.num_features > MAX_QUBITS:
            raise CapacityError(f"{self.num_features} features exceed the {MAX_QUBITS}-qubit cap")
        if int(self.reps) != self.reps or self.reps < 1:
            raise ValidationError("reps must be a positive integer")
        if kind in ("Z", "ZZ") and not self.initial_hadamard:
            raise ValidationError(
                f"{kind} map without the Hadamard layer is degenerate (kernel is identically 1)"
            )
        if not math.isfinite(self.data_scale):
            raise ValidationError("data_scale must be finite")

    @property
    def display_name(self):
        return DISPLAY_NAMES[self.kind]

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, d):
        return cls(**d)


def encoding_gates(x, kind, reps=1, initial_hadamard=True, data_scale=1.0):
    """Gate list for one input, without validating the map settings.

    ``build_feature_circuit`` is the checked entry point; this exists so the
    degenerate no-Hadamard Z/ZZ variants can still be constructed.
    """
    s = [data_scale * float(v) for v in x]
    n = len(s)
    pairs = [(j, k) for j in range(n) for k in range(j + 1, n)]
    gates = []
    for _ in range(reps):
        if initial_hadamard:
            gates.extend(H(q) for q in range(n))
        if kind == "Z":
            gates.extend(RZ(q, -4.0 * s[q]) for q in range(n))
        elif kind == "ZZ":
            gates.extend(RZ(q, -2.0 * s[q]) for q in range(n))
            for j, k in pairs:
                gates += [CNOT(j, k), RZ(k, -2.0 * s[j] * s[k]), CNOT(j, k)]
        elif kind == "PAULI":
            for q in range(n):
                gates += [RX(q, 2.0 * s[q]), RY(q, 2.0 * s[q]), RZ(q, 2.0 * s[q])]
            for j, k in pairs:
                gates += [H(k), CNOT(j, k), RZ(k, 2.0 * s[j] * s[k]), CNOT(j, k), H(k)]
        else:
            raise ValidationError(f"unknown feature map kind {kind!r}")
    return gates


def build_feature_circuit(x, spec):
    """The encoding circuit U(x) for one sample."""
    if len(x) != spec.num_features:
        raise ValidationError(
            f"sample has {len(x)} features, map expects {spec.num_features}"
        )
    if not all(math.isfinite(float(v)) for v in x):
        raise ValidationError("features must be finite")
    gates = encoding_gates(x, spec.kind, spec.reps, spec.initial_hadamard, spec.data_scale)
    return Circuit(spec.num_features, gates)


def adjoint(circuit):
    """Reverse the gates and negate rotation angles (H and CNOT are self-inverse)."""
    return circuit.adjoint()


def gate_count(spec):
    n, reps = spec.num_features, spec.reps
    npairs = n * (n - 1) // 2
    hadamards = n if spec.initial_hadamard else 0
    per_rep = {
        "Z": hadamards + n,
        "ZZ": hadamards + n + 3 * npairs,
        "PAULI": hadamards + 3 * n + 5 * npairs,
    }[spec.kind]
    return reps * per_rep
