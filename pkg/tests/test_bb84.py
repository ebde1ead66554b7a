import numpy as np
import pytest
from scipy.stats import binomtest

from tempassume.commit import TrustedPartyCommitment
from tempassume.quantum.bb84 import (
    Attack,
    Bb84Verdict,
    bb84_ot,
    detection_probability,
    interleave,
    measure_qubits,
    prepare_qubits,
)


def test_measuring_in_the_preparation_basis_reads_the_bit():
    rng = np.random.default_rng(0)
    x = rng.integers(0, 2, size=64, dtype=np.uint8)
    theta = rng.integers(0, 2, size=64, dtype=np.uint8)
    assert np.array_equal(measure_qubits(prepare_qubits(x, theta), theta, rng), x)


def test_measuring_in_the_wrong_basis_is_a_coin_flip():
    rng = np.random.default_rng(1)
    x = np.zeros(4000, dtype=np.uint8)
    theta = np.zeros(4000, dtype=np.uint8)
    outcomes = measure_qubits(prepare_qubits(x, theta), np.ones(4000, dtype=np.uint8), rng)
    assert abs(outcomes.mean() - 0.5) < 0.05


def test_interleave():
    theta = np.array([1, 0, 1], dtype=np.uint8)
    y = np.array([0, 0, 1], dtype=np.uint8)
    assert interleave(theta, y).tolist() == [1, 0, 0, 0, 1, 1]


@pytest.mark.parametrize("c", [0, 1])
def test_honest_transfer_delivers_chosen_bit(c):
    for seed in range(10):
        session = bb84_ot(1, 0, c, backend=TrustedPartyCommitment(), seed=seed)
        assert session.verdict is Bb84Verdict.ACCEPT
        assert session.output == (1, 0)[c]
        assert len(session.test_set) == 64
        assert len(session.index_sets[0]) == len(session.index_sets[1])


def test_honest_transfer_over_secret_sharing_commitment():
    session = bb84_ot(0, 1, 1, n=64, alpha=0.25, seed=3, min_good=8)
    assert session.verdict is Bb84Verdict.ACCEPT
    assert session.commitment.committed
    assert session.output == 1


def test_delayed_measurement_is_caught_by_forcing():
    for seed in range(5):
        session = bb84_ot(1, 1, 0, backend=TrustedPartyCommitment(), attack=Attack.DELAYED, seed=seed)
        assert session.verdict is Bb84Verdict.ABORT_CHEAT_DETECTED
        assert session.mismatches > 0
        assert session.masked is None


def test_delayed_measurement_without_forcing_recovers_both_bits():
    for seed in range(5):
        session = bb84_ot(1, 0, 0, attack=Attack.DELAYED, seed=seed, forcing=False)
        assert session.verdict is Bb84Verdict.ACCEPT
        assert session.recovered == (1, 0)
        assert session.commitment is None


def test_too_few_good_positions_aborts():
    session = bb84_ot(1, 0, 1, n=32, alpha=0.5, backend=TrustedPartyCommitment(), min_good=16)
    assert session.verdict is Bb84Verdict.ABORT_TOO_FEW_GOOD
    assert session.output is None


def test_detection_probability():
    assert detection_probability(0) == 0.0
    assert detection_probability(8) == pytest.approx(1 - 0.75**8)


@pytest.mark.parametrize("n, alpha", [(16, 0.5), (128, 0.0), (128, 1.0)])
def test_parameter_bounds(n, alpha):
    with pytest.raises(ValueError):
        bb84_ot(0, 1, 0, n=n, alpha=alpha)


@pytest.mark.slow
@pytest.mark.parametrize("tested", [8, 16, 32])
def test_detection_frequency_matches_guessing_bound(tested):
    trials = 2000
    detected = sum(
        bb84_ot(0, 1, 0, alpha=tested / 128, backend=TrustedPartyCommitment(), attack=Attack.DELAYED, seed=s).verdict
        is Bb84Verdict.ABORT_CHEAT_DETECTED
        for s in range(trials)
    )
    # exact binomial test; at 32 positions misses are too rare for a normal band
    assert binomtest(detected, trials, detection_probability(tested)).pvalue > 1e-4
