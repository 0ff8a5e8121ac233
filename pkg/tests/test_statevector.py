import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qksvm import _backend
from qksvm.errors import CapacityError, ValidationError
from qksvm.statevector import (
    CNOT,
    RX,
    RY,
    RZ,
    Circuit,
    Gate,
    H,
    StateVector,
    apply_gate,
    bernoulli_fraction,
    fidelity,
    prob_all_zeros,
    run,
    sample_all_zeros,
    zero_state,
)

from oracles import dense_apply, gate_matrix

S2 = 1 / math.sqrt(2)


def random_state(rng, n):
    v = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return StateVector(v / np.linalg.norm(v))


def random_gate(rng, n):
    name = rng.choice(["H", "RX", "RY", "RZ", "CNOT"] if n > 1 else ["H", "RX", "RY", "RZ"])
    if name == "CNOT":
        c, t = rng.choice(n, size=2, replace=False)
        return CNOT(int(c), int(t))
    q = int(rng.integers(n))
    if name == "H":
        return H(q)
    return Gate(name, (q,), float(rng.uniform(-2 * np.pi, 2 * np.pi)))


def random_circuit(rng, n, max_gates=200):
    return Circuit(n, [random_gate(rng, n) for _ in range(int(rng.integers(0, max_gates + 1)))])


# -- hand cases ---------------------------------------------------------------


def test_zero_state():
    np.testing.assert_array_equal(zero_state(1).amplitudes, [1, 0])
    np.testing.assert_array_equal(zero_state(2).amplitudes, [1, 0, 0, 0])


@pytest.mark.parametrize("n", [0, 25, -1])
def test_zero_state_capacity(n):
    with pytest.raises(CapacityError):
        zero_state(n)


def test_hadamard_on_zero():
    np.testing.assert_allclose(apply_gate(zero_state(1), H(0)).amplitudes, [S2, S2], atol=1e-12)


def test_rz_pi_on_zero():
    np.testing.assert_allclose(apply_gate(zero_state(1), RZ(0, math.pi)).amplitudes, [-1j, 0], atol=1e-12)


def test_rx_ry_quarter_turn():
    np.testing.assert_allclose(
        apply_gate(zero_state(1), RX(0, math.pi / 2)).amplitudes, [S2, -1j * S2], atol=1e-12
    )
    np.testing.assert_allclose(
        apply_gate(zero_state(1), RY(0, math.pi / 2)).amplitudes, [S2, S2], atol=1e-12
    )


def test_cnot_makes_bell_state():
    # (|00> + |10>)/sqrt2 in ket order q1 q0 -> index 0 and 2; CNOT(0 -> 1) only acts on q0=1
    plus = StateVector([S2, S2, 0, 0])  # q0 in |+>, q1 = 0
    out = apply_gate(plus, CNOT(0, 1))
    np.testing.assert_allclose(out.amplitudes, [S2, 0, 0, S2], atol=1e-12)


def test_cnot_truth_table_little_endian():
    for idx, expect in [(0, 0), (1, 3), (2, 2), (3, 1)]:
        v = np.zeros(4)
        v[idx] = 1
        out = apply_gate(StateVector(v), CNOT(0, 1))
        assert np.argmax(np.abs(out.amplitudes)) == expect


def test_run_examples():
    np.testing.assert_array_equal(run(Circuit(3)).amplitudes, zero_state(3).amplitudes)
    np.testing.assert_allclose(run(Circuit(1, [H(0), H(0)])).amplitudes, [1, 0], atol=1e-12)
    # [DERIVED] 2x2 matrix product oracle
    expect = gate_matrix("RZ", math.pi / 2) @ gate_matrix("H") @ np.array([1, 0])
    got = run(Circuit(1, [H(0), RZ(0, math.pi / 2)])).amplitudes
    np.testing.assert_allclose(got, expect, atol=1e-12)
    np.testing.assert_allclose(
        got, [np.exp(-1j * math.pi / 4) * S2, np.exp(1j * math.pi / 4) * S2], atol=1e-12
    )


def test_fidelity_examples():
    one = StateVector([0, 1])
    plus = apply_gate(zero_state(1), H(0))
    assert fidelity(zero_state(1), zero_state(1)) == 1.0
    assert fidelity(zero_state(1), one) == 0.0
    assert fidelity(plus, zero_state(1)) == pytest.approx(0.5, abs=1e-15)
    with pytest.raises(ValidationError):
        fidelity(zero_state(1), zero_state(2))


def test_prob_all_zeros_examples():
    assert prob_all_zeros(zero_state(4)) == 1.0
    assert prob_all_zeros(apply_gate(zero_state(1), H(0))) == pytest.approx(0.5, abs=1e-15)
    assert prob_all_zeros(StateVector([0, 1])) == 0.0


def test_sample_examples():
    assert sample_all_zeros(zero_state(2), 100, 5) == 1.0
    assert sample_all_zeros(StateVector([0, 1]), 100, 5) == 0.0
    with pytest.raises(ValidationError):
        sample_all_zeros(zero_state(1), 0, 1)


# -- validation -----------------------------------------------------------------


def test_gate_validation():
    with pytest.raises(ValidationError):
        CNOT(1, 1)
    with pytest.raises(ValidationError):
        Gate("T", (0,))
    with pytest.raises(ValidationError):
        RZ(0, float("nan"))
    with pytest.raises(ValidationError):
        Circuit(2, [H(2)])
    with pytest.raises(ValidationError):
        apply_gate(zero_state(1), CNOT(0, 1))


def test_statevector_rejects_bad_amplitudes():
    with pytest.raises(ValidationError):
        StateVector([1, 0, 0])
    with pytest.raises(ValidationError):
        StateVector([1, 1])
    with pytest.raises(CapacityError):
        StateVector(np.zeros(2**25), check_norm=False)


def test_states_are_read_only():
    s = zero_state(2)
    with pytest.raises(ValueError):
        s.amplitudes[0] = 0


# -- properties -------------------------------------------------------------------


def test_norm_preserved_on_random_circuits():
    rng = np.random.default_rng(2024)
    for _ in range(100):
        psi = run(random_circuit(rng, 6))
        assert abs(psi.norm_squared() - 1.0) < 1e-10


@pytest.mark.parametrize("name", ["H", "RX", "RY", "RZ", "CNOT"])
def test_gate_then_adjoint_restores(name):
    rng = np.random.default_rng(hash(name) % 2**32)
    for _ in range(100):
        n = int(rng.integers(2, 5))
        psi = random_state(rng, n)
        if name == "CNOT":
            c, t = rng.choice(n, size=2, replace=False)
            g = CNOT(int(c), int(t))
        elif name == "H":
            g = H(int(rng.integers(n)))
        else:
            g = Gate(name, (int(rng.integers(n)),), float(rng.uniform(-7, 7)))
        back = apply_gate(apply_gate(psi, g), g.adjoint())
        assert np.max(np.abs(back.amplitudes - psi.amplitudes)) < 1e-12


def test_gates_match_dense_matrices():
    rng = np.random.default_rng(11)
    for _ in range(200):
        n = int(rng.integers(1, 5))
        psi = random_state(rng, n)
        g = random_gate(rng, n)
        got = apply_gate(psi, g).amplitudes
        want = dense_apply(psi.amplitudes, g.name, g.qubits, g.theta)
        assert np.max(np.abs(got - want)) < 1e-12


@given(st.integers(0, 2**32 - 1))
def test_fidelity_symmetric_and_reflexive(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 6))
    a, b = random_state(rng, n), random_state(rng, n)
    assert fidelity(a, b) == fidelity(b, a)
    assert abs(fidelity(a, a) - 1.0) < 1e-12
    assert 0.0 <= fidelity(a, b) <= 1.0


@given(st.integers(0, 2**32 - 1), st.floats(0, 2 * math.pi))
def test_fidelity_ignores_global_phase(seed, phi):
    rng = np.random.default_rng(seed)
    a, b = random_state(rng, 3), random_state(rng, 3)
    rotated = StateVector(np.exp(1j * phi) * a.amplitudes)
    assert fidelity(rotated, b) == pytest.approx(fidelity(a, b), abs=1e-12)


def test_compute_uncompute_self_test():
    rng = np.random.default_rng(99)
    for _ in range(50):
        c = random_circuit(rng, int(rng.integers(1, 7)))
        assert abs(prob_all_zeros(run(c + c.adjoint())) - 1.0) < 1e-10


def test_sampling_concentration():
    rng = np.random.default_rng(5)
    shots = 8192
    inside = 0
    for trial in range(100):
        p = float(rng.uniform())
        est = bernoulli_fraction(p, shots, seed=trial)
        inside += abs(est - p) <= 4 * math.sqrt(p * (1 - p) / shots)
    assert inside >= 99


def test_hadamard_sampling_band():
    # [DERIVED] binomial concentration: 3 sigma band holds with >= 99% probability
    plus = apply_gate(zero_state(1), H(0))
    band = 3 * math.sqrt(0.25 / 8192)
    hits = sum(abs(sample_all_zeros(plus, 8192, seed) - 0.5) <= band for seed in range(200))
    assert hits >= 195


def test_sampling_is_keyed_by_seed_and_stream():
    a = bernoulli_fraction(0.3, 1000, 7, stream=1)
    assert a == bernoulli_fraction(0.3, 1000, 7, stream=1)
    assert a != bernoulli_fraction(0.3, 1000, 7, stream=2) or a != bernoulli_fraction(0.3, 1000, 8, stream=1)
    # negative and oversized seeds wrap into 64 bits rather than failing
    assert bernoulli_fraction(0.3, 10, -1) == bernoulli_fraction(0.3, 10, 2**64 - 1)


# -- backends -------------------------------------------------------------------


@pytest.mark.parametrize("name", sorted(_backend.available()))
def test_each_backend_matches_dense_oracle(name):
    apply_ops = _backend.available()[name]
    rng = np.random.default_rng(3)
    for _ in range(30):
        n = int(rng.integers(1, 6))
        c = random_circuit(rng, n, 60)
        psi = np.zeros(2**n, dtype=complex)
        psi[0] = 1
        for g in c.gates:
            psi = dense_apply(psi, g.name, g.qubits, g.theta)
        assert np.max(np.abs(run(c, apply_ops).amplitudes - psi)) < 1e-12


def test_backends_agree():
    backends = _backend.available()
    if "cython" not in backends:
        pytest.skip("compiled extension not built")
    rng = np.random.default_rng(8)
    for _ in range(20):
        c = random_circuit(rng, int(rng.integers(1, 11)), 300)
        a = run(c, backends["cython"]).amplitudes
        b = run(c, backends["python"]).amplitudes
        assert np.max(np.abs(a - b)) < 1e-13
