"""Pure NumPy statevector kernels (fallback when the extension is not built).

Gates are encoded as rows ``[opcode, a, b]`` of an int64 table with one
float64 angle per row. Single-qubit gates act on qubit ``a``; CNOT uses
``a`` as control and ``b`` as target. Qubit ``k`` is bit ``k`` of the
basis index (little-endian).
"""

import math

import numpy as np

OP_H, OP_RX, OP_RY, OP_RZ, OP_CNOT = range(5)

_SQRT1_2 = 1.0 / math.sqrt(2.0)


def _split(amps, num_qubits, k):
    # view as (high, bit k, low) so [:, 0, :] / [:, 1, :] address qubit k
    return amps.reshape(1 << (num_qubits - 1 - k), 2, 1 << k)


def apply_ops(amps, ops, thetas):
    """Apply every encoded gate to ``amps`` in place."""
    if len(ops) != len(thetas):
        raise ValueError("ops and thetas disagree in length")
    num_qubits = int(amps.shape[0]).bit_length() - 1
    for (code, a, b), theta in zip(ops.tolist(), thetas.tolist()):
        if code == OP_CNOT:
            hi, lo = max(a, b), min(a, b)
            v = amps.reshape(
                1 << (num_qubits - 1 - hi), 2, 1 << (hi - lo - 1), 2, 1 << lo
            )
            if a > b:
                sel = v[:, 1, :, :, :]
                sel[:, :, [0, 1], :] = sel[:, :, [1, 0], :]
            else:
                sel = v[:, :, :, 1, :]
                sel[:, [0, 1], :, :] = sel[:, [1, 0], :, :]
            continue
        v = _split(amps, num_qubits, a)
        x0 = v[:, 0, :].copy()
        x1 = v[:, 1, :].copy()
        if code == OP_H:
            v[:, 0, :] = (x0 + x1) * _SQRT1_2
            v[:, 1, :] = (x0 - x1) * _SQRT1_2
        elif code == OP_RZ:
            c, s = math.cos(0.5 * theta), math.sin(0.5 * theta)
            v[:, 0, :] = x0 * complex(c, -s)
            v[:, 1, :] = x1 * complex(c, s)
        elif code == OP_RX:
            c, s = math.cos(0.5 * theta), math.sin(0.5 * theta)
            mis = complex(0.0, -s)
            v[:, 0, :] = c * x0 + mis * x1
            v[:, 1, :] = mis * x0 + c * x1
        elif code == OP_RY:
            c, s = math.cos(0.5 * theta), math.sin(0.5 * theta)
            v[:, 0, :] = c * x0 - s * x1
            v[:, 1, :] = s * x0 + c * x1
        else:
            raise ValueError(f"unknown opcode {code}")
