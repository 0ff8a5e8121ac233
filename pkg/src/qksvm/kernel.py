"""Classical and quantum fidelity kernels, Gram and cross matrices.

Kernel specs are small frozen dataclasses; ``spec_to_dict`` and
``spec_from_dict`` give the JSON descriptor form used in experiment
configs and saved models.

Quantum kernels come in two modes. ``exact`` takes |<psi(a)|psi(b)>|^2
from simulated statevectors. ``sampled`` estimates the same quantity the
way hardware would: run U(a) followed by U(b)^dagger from |0...0> and count
how often ``shots`` measurements return all zeros. Each pair draws from its
own Philox stream keyed by ``(seed, pair_stream(a, b))``, so entries do not
depend on evaluation order or thread count.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import hashlib

import numpy as np

from .errors import ValidationError
from .featuremap import FeatureMapSpec, build_feature_circuit
from .statevector import (
    bernoulli_fraction,
    fidelity,
    run,
    sample_all_zeros,
)

DEFAULT_SHOTS = 8192
MODES = ("exact", "sampled")


@dataclass(frozen=True)
class Linear:
    pass


@dataclass(frozen=True)
class Poly:
    degree: int = 3
    coef: float = 1.0

    def __post_init__(self):
        if int(self.degree) != self.degree or self.degree < 1:
            raise ValidationError("polynomial degree must be a positive integer")


@dataclass(frozen=True)
class RBF:
    # None means "scale": 1 / (d * mean per-feature variance of the training data)
    gamma: float = None

    def __post_init__(self):
        if self.gamma is not None and not self.gamma > 0:
            raise ValidationError("RBF gamma must be positive")


@dataclass(frozen=True)
class Quantum:
    feature_map: FeatureMapSpec
    mode: str = "exact"
    shots: int = DEFAULT_SHOTS
    seed: int = 0

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValidationError(f"quantum kernel mode must be one of {MODES}")
        if int(self.shots) != self.shots or self.shots < 1:
            raise ValidationError("shots must be a positive integer")


def spec_to_dict(spec):
    if isinstance(spec, Linear):
        return {"kind": "linear"}
    if isinstance(spec, Poly):
        return {"kind": "poly", "degree": spec.degree, "coef": spec.coef}
    if isinstance(spec, RBF):
        return {"kind": "rbf", "gamma": spec.gamma}
    if isinstance(spec, Quantum):
        return {
            "kind": "quantum",
            "feature_map": spec.feature_map.to_dict(),
            "mode": spec.mode,
            "shots": spec.shots,
            "seed": spec.seed,
        }
    raise ValidationError(f"not a kernel spec: {spec!r}")


def spec_from_dict(d, num_features=None):
    """Parse a descriptor; ``num_features`` fills a missing feature-map width."""
    d = dict(d)
    kind = str(d.pop("kind", "")).lower()
    try:
        if kind == "linear":
            return Linear(**d)
        if kind == "poly":
            return Poly(**d)
        if kind == "rbf":
            return RBF(**d)
        if kind == "quantum":
            fm = dict(d.pop("feature_map"))
            if fm.get("num_features") is None:
                if num_features is None:
                    raise ValidationError("feature_map.num_features is required")
                fm["num_features"] = num_features
            return Quantum(feature_map=FeatureMapSpec(**fm), **d)
    except TypeError as exc:
        raise ValidationError(f"bad {kind} kernel descriptor: {exc}") from None
    raise ValidationError(f"unknown kernel kind {kind!r}")


def kernel_label(spec):
    """Short human-readable model name used in reports."""
    if isinstance(spec, Quantum):
        return spec.feature_map.display_name
    return {Linear: "linear", Poly: "poly", RBF: "rbf"}[type(spec)]


def resolve_gamma(spec, X_train):
    """Fill in the "scale" default of an RBF spec from training data."""
    if not isinstance(spec, RBF) or spec.gamma is not None:
        return spec
    X_train = np.asarray(X_train, dtype=float)
    var = float(np.mean(np.var(X_train, axis=0)))
    d = X_train.shape[1]
    return RBF(gamma=1.0 / (d * var) if var > 0 else 1.0)


def _vector_digest(x):
    return hashlib.blake2b(np.asarray(x, dtype="<f8").tobytes(), digest_size=16).digest()


def pair_stream(x_i, x_j):
    """64-bit stream id of an unordered pair of samples."""
    a, b = sorted((_vector_digest(x_i), _vector_digest(x_j)))
    return int.from_bytes(hashlib.blake2b(a + b, digest_size=8).digest(), "little")


def _check_pair(x_i, x_j, spec):
    if len(x_i) != len(x_j):
        raise ValidationError(f"vector lengths differ: {len(x_i)} vs {len(x_j)}")
    if isinstance(spec, Quantum) and len(x_i) != spec.feature_map.num_features:
        raise ValidationError(
            f"vectors have {len(x_i)} features, map expects {spec.feature_map.num_features}"
        )


def compute_uncompute_circuit(x_i, x_j, feature_map):
    """U(x_i) followed by U(x_j)^dagger; P(all zeros) equals the kernel value."""
    return build_feature_circuit(x_i, feature_map) + build_feature_circuit(
        x_j, feature_map
    ).adjoint()


def eval_kernel(x_i, x_j, spec):
    """One kernel value K(x_i, x_j)."""
    _check_pair(x_i, x_j, spec)
    a = np.asarray(x_i, dtype=float)
    b = np.asarray(x_j, dtype=float)
    if isinstance(spec, Linear):
        return float(a @ b)
    if isinstance(spec, Poly):
        return float((a @ b + spec.coef) ** spec.degree)
    if isinstance(spec, RBF):
        if spec.gamma is None:
            raise ValidationError("RBF gamma unresolved; call resolve_gamma first")
        diff = a - b
        return float(np.exp(-spec.gamma * (diff @ diff)))
    if isinstance(spec, Quantum):
        fm = spec.feature_map
        if spec.mode == "exact":
            return fidelity(run(build_feature_circuit(a, fm)), run(build_feature_circuit(b, fm)))
        state = run(compute_uncompute_circuit(a, b, fm))
        return sample_all_zeros(state, spec.shots, spec.seed, pair_stream(a, b))
    raise ValidationError(f"not a kernel spec: {spec!r}")


def _as_matrix(X, name):
    X = np.asarray(X, dtype=float)
    if X.ndim == 1 and X.size == 0:
        X = X.reshape(0, 0)
    if X.ndim != 2:
        raise ValidationError(f"{name} must be a 2-D array")
    return X


def feature_states(X, feature_map, workers=1):
    """Statevectors of every row of ``X`` as an (m, 2**n) complex array."""
    X = _as_matrix(X, "X")
    if X.shape[0] and X.shape[1] != feature_map.num_features:
        raise ValidationError(
            f"samples have {X.shape[1]} features, map expects {feature_map.num_features}"
        )
    out = np.empty((X.shape[0], 1 << feature_map.num_features), dtype=np.complex128)

    def prepare(row):
        out[row] = run(build_feature_circuit(X[row], feature_map)).amplitudes

    _map(prepare, range(X.shape[0]), workers)
    return out


def _map(fn, items, workers):
    if workers is None or workers <= 1:
        for item in items:
            fn(item)
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for _ in pool.map(fn, items):
            pass


def _fidelity_matrix(A, B):
    re, im = _overlap_matrix(A, B)
    return np.clip(re * re + im * im, 0.0, 1.0)


def _overlap_matrix(A, B):
    Ar, Ai, Br, Bi = A.real, A.imag, B.real, B.imag
    return Ar @ Br.T + Ai @ Bi.T, Ar @ Bi.T - Ai @ Br.T


def _classical_matrix(A, B, spec):
    if isinstance(spec, Linear):
        return A @ B.T
    if isinstance(spec, Poly):
        return (A @ B.T + spec.coef) ** spec.degree
    if isinstance(spec, RBF):
        if spec.gamma is None:
            raise ValidationError("RBF gamma unresolved; call resolve_gamma first")
        sq = (A * A).sum(1)[:, None] + (B * B).sum(1)[None, :] - 2.0 * (A @ B.T)
        return np.exp(-spec.gamma * np.maximum(sq, 0.0))
    raise ValidationError(f"not a kernel spec: {spec!r}")


def _sample_entries(P, X_rows, X_cols, spec, pairs, workers):
    out = np.empty(P.shape)

    def draw(ij):
        i, j = ij
        out[i, j] = bernoulli_fraction(
            P[i, j], spec.shots, spec.seed, pair_stream(X_rows[i], X_cols[j])
        )

    _map(draw, pairs, workers)
    return out


def _mirror_upper(K):
    iu = np.triu_indices(K.shape[0], 1)
    K[(iu[1], iu[0])] = K[iu]
    return K


def build_gram(X, spec, workers=1):
    """Symmetric training Gram matrix.

    Each unordered pair is evaluated once and mirrored. The exact quantum
    diagonal is set to 1.0 without simulation; the sampled diagonal is
    estimated like every other entry.
    """
    X = _as_matrix(X, "X")
    n = X.shape[0]
    if n < 1:
        raise ValidationError("Gram matrix needs at least one sample")
    if isinstance(spec, Quantum):
        if X.shape[1] != spec.feature_map.num_features:
            raise ValidationError(
                f"samples have {X.shape[1]} features, map expects {spec.feature_map.num_features}"
            )
        S = feature_states(X, spec.feature_map, workers)
        P = _fidelity_matrix(S, S)
        if spec.mode == "exact":
            K = _mirror_upper(P)
            np.fill_diagonal(K, 1.0)
            return K
        pairs = [(i, j) for i in range(n) for j in range(i, n)]
        return _mirror_upper(_sample_entries(P, X, X, spec, pairs, workers))
    K = _mirror_upper(np.array(_classical_matrix(X, X, spec), dtype=float))
    if isinstance(spec, RBF):
        np.fill_diagonal(K, 1.0)
    return K


def build_cross(X_test, X_train, spec, workers=1):
    """Kernel rows K(X_test[t], X_train[i]) for prediction, shape (m, n)."""
    X_test = _as_matrix(X_test, "X_test")
    X_train = _as_matrix(X_train, "X_train")
    m, n = X_test.shape[0], X_train.shape[0]
    if m == 0 or n == 0:
        return np.zeros((m, n))
    if X_test.shape[1] != X_train.shape[1]:
        raise ValidationError(
            f"feature counts differ: {X_test.shape[1]} vs {X_train.shape[1]}"
        )
    if isinstance(spec, Quantum):
        A = feature_states(X_test, spec.feature_map, workers)
        B = feature_states(X_train, spec.feature_map, workers)
        P = _fidelity_matrix(A, B)
        if spec.mode == "exact":
            return P
        pairs = [(t, i) for t in range(m) for i in range(n)]
        return _sample_entries(P, X_test, X_train, spec, pairs, workers)
    return np.array(_classical_matrix(X_test, X_train, spec), dtype=float)


def write_kernel_csv(path, K):
    """Full matrix, row-major, 17 significant digits."""
    K = np.asarray(K, dtype=float)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for row in K:
            fh.write(",".join(format(v, ".17g") for v in row) + "\n")


def read_kernel_csv(path):
    with open(path, encoding="utf-8") as fh:
        rows = [[float(v) for v in line.split(",")] for line in fh if line.strip()]
    return np.array(rows, dtype=float)


def train_test_matrices(X_train, X_test, spec, workers=1):
    """``(build_gram(X_train), build_cross(X_test, X_train))`` in one pass.

    Quantum statevectors for each sample are simulated once and shared
    between the two matrices.
    """
    if not isinstance(spec, Quantum):
        return build_gram(X_train, spec, workers), build_cross(X_test, X_train, spec, workers)
    X_train = _as_matrix(X_train, "X_train")
    X_test = _as_matrix(X_test, "X_test")
    n, m = X_train.shape[0], X_test.shape[0]
    S = feature_states(np.vstack([X_train, X_test]), spec.feature_map, workers)
    P = _fidelity_matrix(S, S[:n])
    P_train, P_test = P[:n], P[n:]
    if spec.mode == "exact":
        K = _mirror_upper(P_train.copy())
        np.fill_diagonal(K, 1.0)
        return K, P_test.copy()
    train_pairs = [(i, j) for i in range(n) for j in range(i, n)]
    K = _mirror_upper(_sample_entries(P_train, X_train, X_train, spec, train_pairs, workers))
    test_pairs = [(t, i) for t in range(m) for i in range(n)]
    return K, _sample_entries(P_test, X_test, X_train, spec, test_pairs, workers)
