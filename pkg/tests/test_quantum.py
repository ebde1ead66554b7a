import numpy as np
import pytest

from tempassume.errors import AttackInconclusive, NotSameReduction
from tempassume.quantum.attacks import (
    Certified,
    ToyCommitment,
    mayers_attack_demo,
    third_party_demo,
)
from tempassume.quantum.state import (
    H,
    X,
    DensityMatrix,
    QuantumState,
    Side,
    apply_gate,
    apply_local,
    basis_state,
    fidelity,
    from_terms,
    hjw_unitary,
    measure,
    partial_trace,
    project,
    schmidt_decompose,
    trace_distance,
)

BELL = from_terms({"00": 1, "11": 1}, alice_qubits=1)


def test_trace_distance_of_zero_and_plus():
    zero = DensityMatrix(np.array([[1, 0], [0, 0]]))
    plus = DensityMatrix(np.array([[0.5, 0.5], [0.5, 0.5]]))
    assert trace_distance(zero, plus) == pytest.approx(np.sqrt(0.5))
    assert trace_distance(zero, zero) == pytest.approx(0.0)


def test_invalid_states_are_rejected():
    with pytest.raises(ValueError):
        QuantumState(np.array([1.0, 1.0]), alice_qubits=0)
    with pytest.raises(ValueError):
        QuantumState(np.array([1.0, 0.0, 0.0]), alice_qubits=0)
    with pytest.raises(ValueError):
        DensityMatrix(np.eye(2))


def test_bell_state_reductions_are_maximally_mixed():
    for side in Side:
        assert np.allclose(partial_trace(BELL, side).entries, np.eye(2) / 2)
    coefficients, _, _ = schmidt_decompose(BELL)
    assert np.allclose(coefficients, [np.sqrt(0.5), np.sqrt(0.5)])


def test_product_state_has_one_schmidt_coefficient():
    coefficients, alice, bob = schmidt_decompose(basis_state("10", alice_qubits=1))
    assert np.allclose(coefficients, [1.0])
    assert alice.shape == (2, 1)
    assert bob.shape == (1, 2)


def test_apply_gate_addresses_qubits_big_endian():
    state = apply_gate(basis_state("00", alice_qubits=1), X, 1)
    assert abs(state.amplitudes[0b01]) == pytest.approx(1.0)


def test_project_and_measure():
    plus_zero = apply_gate(basis_state("00", alice_qubits=1), H, 0)
    prob, post = project(plus_zero, 0, 1)
    assert prob == pytest.approx(0.5)
    assert fidelity(post, basis_state("10", alice_qubits=1)) == pytest.approx(1.0)
    assert project(basis_state("00", alice_qubits=1), 0, 1) == (0.0, None)
    outcome, post = measure(basis_state("10", alice_qubits=1), 0, np.random.default_rng(0))
    assert outcome == 1


def test_hjw_unitary_maps_product_states():
    psi, phi = basis_state("00", alice_qubits=1), basis_state("10", alice_qubits=1)
    u = hjw_unitary(psi, phi)
    assert fidelity(apply_local(psi, u), phi) == pytest.approx(1.0)


def test_hjw_unitary_maps_entangled_states():
    phi = from_terms({"01": 1, "10": 1}, alice_qubits=1)
    u = hjw_unitary(BELL, phi)
    assert fidelity(apply_local(BELL, u), phi) == pytest.approx(1.0)
    assert fidelity(apply_local(phi, u.inverse()), BELL) == pytest.approx(1.0)


def test_hjw_unitary_with_larger_alice_register():
    rng = np.random.default_rng(11)
    amps = rng.normal(size=8) + 1j * rng.normal(size=8)
    psi = QuantumState(amps / np.linalg.norm(amps), alice_qubits=2)
    # any unitary on Alice's two qubits preserves Bob's reduction
    q, _ = np.linalg.qr(rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))
    phi = QuantumState((q @ psi.matrix()).reshape(-1), alice_qubits=2)
    u = hjw_unitary(psi, phi)
    assert fidelity(apply_local(psi, u), phi) == pytest.approx(1.0)


def test_hjw_unitary_requires_equal_reductions():
    with pytest.raises(NotSameReduction) as exc:
        hjw_unitary(basis_state("00", alice_qubits=1), basis_state("01", alice_qubits=1))
    assert exc.value.distance == pytest.approx(1.0)


def test_entangling_commitment_is_flippable():
    report = mayers_attack_demo("entangling")
    assert report.certified is Certified.FLIPPABLE
    assert report.trace_distance == pytest.approx(0.0, abs=1e-12)
    assert report.flip_fidelity == pytest.approx(1.0)


def test_revealing_commitment_is_distinguishable():
    report = mayers_attack_demo("revealing")
    assert report.certified is Certified.DISTINGUISHABLE
    assert report.trace_distance == pytest.approx(1.0)
    assert "certified: distinguishable" in report.lines()


def test_measure_then_flip_commitment():
    report = mayers_attack_demo("measure-then-flip")
    assert report.certified is Certified.FLIPPABLE
    assert report.outcome_probabilities[0] == pytest.approx((0.7, 0.7))
    assert report.outcome_probabilities[1] == pytest.approx((0.3, 0.3))


def test_bit_dependent_ancilla_is_inconclusive():
    def prepare(b):
        weights = (0.7, 0.3) if b == 0 else (0.3, 0.7)
        return from_terms(
            {f"{o}{p}": np.sqrt(w) for o, w in zip("01", weights) for p in ("00", "11")},
            alice_qubits=2,
        )

    with pytest.raises(AttackInconclusive):
        mayers_attack_demo(ToyCommitment("biased-ancilla", prepare, ancilla=0))


def test_third_party_breaks_whichever_side_it_joins():
    report = third_party_demo()
    assert report.joins_bob.certified is Certified.DISTINGUISHABLE
    assert report.joins_alice.certified is Certified.FLIPPABLE
    assert report.honest_bob_distance == pytest.approx(0.0, abs=1e-12)
    assert report.honest_alice_distance == pytest.approx(1.0)
