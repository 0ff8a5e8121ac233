"""Compare the compiled and NumPy statevector kernels.

    python benchmarks/bench_kernels.py [--qubits 15] [--samples 8] [--repeat 3]

Times the two workloads that dominate a run: simulating feature-map
circuits (one per sample) and a random gate mix. Reports the best of
``--repeat`` wall-clock timings and checks both backends agree.
"""

import argparse
import time

import numpy as np

from qksvm import _backend
from qksvm.featuremap import FeatureMapSpec, build_feature_circuit
from qksvm.statevector import CNOT, RX, RY, RZ, Circuit, H, run


def random_circuit(rng, n, gates):
    out = []
    for _ in range(gates):
        kind = rng.integers(5)
        q = int(rng.integers(n))
        if kind == 0:
            out.append(H(q))
        elif kind == 4:
            t = int((q + 1 + rng.integers(n - 1)) % n)
            out.append(CNOT(q, t))
        else:
            out.append((RX, RY, RZ)[kind - 1](q, float(rng.uniform(-3, 3))))
    return Circuit(n, out)


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - t0)
    return min(times), result


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--qubits", type=int, default=15)
    ap.add_argument("--samples", type=int, default=8)
    ap.add_argument("--gates", type=int, default=2000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    backends = _backend.available()
    if "cython" not in backends:
        print("compiled extension not built; only the NumPy kernel is available")
    rng = np.random.default_rng(0)
    X = rng.normal(size=(args.samples, args.qubits))
    workloads = {}
    for kind in ("Z", "ZZ", "PAULI"):
        spec = FeatureMapSpec(kind, args.qubits)
        circuits = [build_feature_circuit(x, spec) for x in X]
        workloads[f"{kind} map x{args.samples}"] = circuits
    workloads[f"random {args.gates} gates"] = [random_circuit(rng, args.qubits, args.gates)]

    print(f"{args.qubits} qubits, default backend: {_backend.BACKEND}")
    print(f"{'workload':<22}{'gates':>8}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}")
    for name, circuits in workloads.items():
        row, states = [], {}
        for bname, apply_ops in backends.items():
            t, out = best_of(lambda: [run(c, apply_ops).amplitudes for c in circuits], args.repeat)
            row.append(t)
            states[bname] = out
        ref = states["python"]
        for out in states.values():
            assert max(np.max(np.abs(a - b)) for a, b in zip(out, ref)) < 1e-10
        speed = f"{row[0] / row[1]:>9.1f}x" if len(row) == 2 else ""
        gates = sum(len(c) for c in circuits)
        print(f"{name:<22}{gates:>8}" + "".join(f"{t * 1e3:>10.1f}ms" for t in row) + speed)


if __name__ == "__main__":
    main()
