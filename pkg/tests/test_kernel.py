import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qksvm.errors import ValidationError
from qksvm.featuremap import FeatureMapSpec
from qksvm.kernel import (
    RBF,
    Linear,
    Poly,
    Quantum,
    build_cross,
    build_gram,
    eval_kernel,
    kernel_label,
    pair_stream,
    read_kernel_csv,
    resolve_gamma,
    spec_from_dict,
    spec_to_dict,
    train_test_matrices,
    write_kernel_csv,
)


def quantum(kind, n, **kw):
    return Quantum(FeatureMapSpec(kind, n, reps=kw.pop("reps", 2)), **kw)


# -- examples -------------------------------------------------------------------


def test_eval_examples():
    assert eval_kernel([1, 2], [1, 2], Linear()) == 5.0
    assert eval_kernel([1, 1], [1, 1], Poly(degree=2, coef=1)) == 9.0
    assert eval_kernel([0.3, -2], [0.3, -2], RBF(gamma=0.7)) == 1.0
    z1 = Quantum(FeatureMapSpec("Z", 1, reps=1))
    assert abs(eval_kernel([math.pi / 4], [0.0], z1)) < 1e-10


def test_eval_rejects_mismatch():
    with pytest.raises(ValidationError):
        eval_kernel([1, 2], [1], Linear())
    with pytest.raises(ValidationError):
        eval_kernel([1, 2], [1, 2], quantum("Z", 3))
    with pytest.raises(ValidationError):
        eval_kernel([1], [1], RBF())


def test_gram_examples():
    np.testing.assert_array_equal(build_gram([[0.4, 0.1]], RBF(gamma=2.0)), [[1.0]])
    np.testing.assert_array_equal(build_gram([[0.4, 0.1]], quantum("ZZ", 2)), [[1.0]])
    np.testing.assert_array_equal(build_gram([[1, 0], [0, 1]], Linear()), np.eye(2))
    with pytest.raises(ValidationError):
        build_gram(np.zeros((0, 2)), Linear())


def test_cross_examples():
    rng = np.random.default_rng(0)
    X = rng.normal(size=(6, 3))
    np.testing.assert_array_equal(build_cross(X, X, Linear()), build_gram(X, Linear()))
    assert build_cross(np.zeros((0, 3)), X, Linear()).shape == (0, 6)
    C = build_cross(X, X, quantum("PAULI", 3))
    assert np.max(np.abs(C - C.T)) < 1e-12
    with pytest.raises(ValidationError):
        build_cross(rng.normal(size=(2, 2)), X, Linear())


# -- classical arithmetic -------------------------------------------------------


def test_classical_kernels_match_direct_arithmetic():
    rng = np.random.default_rng(1000)
    specs = [Linear(), Poly(3, 1.0), Poly(2, -0.5), RBF(0.3)]
    for _ in range(1000):
        d = int(rng.integers(1, 16))
        a, b = rng.normal(size=d), rng.normal(size=d)
        dot = sum(float(u) * float(v) for u, v in zip(a, b))
        sq = sum((float(u) - float(v)) ** 2 for u, v in zip(a, b))
        want = [dot, (dot + 1.0) ** 3, (dot - 0.5) ** 2, math.exp(-0.3 * sq)]
        for spec, w in zip(specs, want):
            assert abs(eval_kernel(a, b, spec) - w) <= 1e-12 * max(1.0, abs(w))


@pytest.mark.parametrize("spec", [Linear(), Poly(), RBF(0.5)])
def test_classical_gram_matches_eval(spec):
    rng = np.random.default_rng(2)
    X = rng.normal(size=(7, 4))
    K = build_gram(X, spec)
    for i in range(7):
        for j in range(7):
            assert K[i, j] == pytest.approx(eval_kernel(X[i], X[j], spec), rel=1e-12, abs=1e-12)
    assert np.array_equal(K, K.T)


def test_resolve_gamma_scale_rule():
    X = np.array([[0.0, 1.0], [2.0, 3.0], [4.0, 8.0]])
    var = np.mean(np.var(X, axis=0))
    assert resolve_gamma(RBF(), X).gamma == pytest.approx(1 / (2 * var))
    assert resolve_gamma(RBF(), np.ones((3, 2))).gamma == 1.0
    assert resolve_gamma(RBF(0.2), X) == RBF(0.2)
    assert resolve_gamma(Linear(), X) == Linear()


# -- quantum Gram properties ------------------------------------------------------


@pytest.mark.parametrize("kind", ["Z", "ZZ", "PAULI"])
def test_exact_gram_is_symmetric_psd(kind):
    rng = np.random.default_rng(20)
    X = rng.normal(size=(12, 6))
    K = build_gram(X, quantum(kind, 6))
    assert np.array_equal(K, K.T)
    assert np.all(np.diag(K) == 1.0)
    assert K.min() >= 0.0 and K.max() <= 1.0
    assert np.linalg.eigvalsh(K).min() >= -1e-8


def test_exact_gram_entries_match_eval_kernel():
    rng = np.random.default_rng(21)
    X = rng.normal(size=(5, 4))
    spec = quantum("ZZ", 4)
    K = build_gram(X, spec)
    for i in range(5):
        for j in range(i + 1, 5):
            assert K[i, j] == pytest.approx(eval_kernel(X[i], X[j], spec), abs=1e-13)


def test_sampled_entries_match_literal_circuit():
    rng = np.random.default_rng(22)
    X = rng.normal(size=(4, 3))
    spec = quantum("PAULI", 3, mode="sampled", shots=512, seed=9)
    K = build_gram(X, spec)
    for i in range(4):
        for j in range(i, 4):
            assert K[i, j] == eval_kernel(X[i], X[j], spec)


def test_sampled_converges_to_exact():
    rng = np.random.default_rng(23)
    X = rng.normal(size=(10, 5))
    exact = build_gram(X, quantum("ZZ", 5))
    sampled = build_gram(X, quantum("ZZ", 5, mode="sampled", shots=8192, seed=1))
    band = 4 * np.sqrt(exact * (1 - exact) / 8192) + 1e-12
    assert np.mean(np.abs(sampled - exact) <= band) >= 0.95


def test_sampled_is_thread_count_independent():
    rng = np.random.default_rng(24)
    X = rng.normal(size=(8, 4))
    spec = quantum("Z", 4, mode="sampled", shots=1024, seed=77)
    ref = build_gram(X, spec, workers=1)
    for w in (2, 8):
        assert np.array_equal(build_gram(X, spec, workers=w), ref)
    T = rng.normal(size=(3, 4))
    cref = build_cross(T, X, spec, workers=1)
    assert np.array_equal(build_cross(T, X, spec, workers=8), cref)


def test_sampled_seed_changes_matrix():
    X = np.random.default_rng(25).normal(size=(5, 3))
    a = build_gram(X, quantum("ZZ", 3, mode="sampled", shots=256, seed=1))
    b = build_gram(X, quantum("ZZ", 3, mode="sampled", shots=256, seed=2))
    assert not np.array_equal(a, b)


@given(st.lists(st.floats(-5, 5), min_size=3, max_size=3), st.lists(st.floats(-5, 5), min_size=3, max_size=3))
def test_pair_stream_is_symmetric(a, b):
    assert pair_stream(a, b) == pair_stream(b, a)
    assert 0 <= pair_stream(a, b) < 2**64


def test_train_test_matrices_share_definition():
    rng = np.random.default_rng(26)
    Xtr, Xte = rng.normal(size=(6, 3)), rng.normal(size=(4, 3))
    for spec in (quantum("ZZ", 3), quantum("Z", 3, mode="sampled", shots=300, seed=4), RBF(0.4)):
        G, C = train_test_matrices(Xtr, Xte, spec)
        assert np.array_equal(G, build_gram(Xtr, spec))
        assert np.array_equal(C, build_cross(Xte, Xtr, spec))


# -- descriptors and export -------------------------------------------------------


@pytest.mark.parametrize(
    "spec", [Linear(), Poly(2, 0.5), RBF(), RBF(0.1), quantum("PAULI", 15, mode="sampled", shots=100, seed=3)]
)
def test_descriptor_round_trip(spec):
    assert spec_from_dict(spec_to_dict(spec)) == spec


def test_descriptor_fills_width_and_rejects_junk():
    spec = spec_from_dict({"kind": "quantum", "feature_map": {"kind": "ZZ"}}, num_features=15)
    assert spec.feature_map.num_features == 15
    assert kernel_label(spec) == "ZZFeatureMap"
    with pytest.raises(ValidationError):
        spec_from_dict({"kind": "sigmoid"})
    with pytest.raises(ValidationError):
        spec_from_dict({"kind": "poly", "power": 2})
    with pytest.raises(ValidationError):
        RBF(gamma=-1)
    with pytest.raises(ValidationError):
        Poly(degree=0)
    with pytest.raises(ValidationError):
        quantum("Z", 2, mode="sampled", shots=0)


def test_kernel_csv_round_trip(tmp_path):
    K = build_gram(np.random.default_rng(27).normal(size=(5, 3)), quantum("PAULI", 3))
    path = tmp_path / "k.csv"
    write_kernel_csv(path, K)
    assert np.array_equal(read_kernel_csv(path), K)
    assert len(path.read_text().splitlines()) == 5
