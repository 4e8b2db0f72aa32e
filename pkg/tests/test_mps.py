"""Tests for the matrix-product-state backend."""

import math

import numpy as np
import pytest

from lossyboson import (
    CapacityError,
    CouplerGate,
    Layer,
    LayeredCircuit,
    apply_coupler,
    apply_phase,
    canonical_defect,
    canonicalize,
    coupler_fock_amplitudes,
    coupler_mpo,
    fock_output_distribution,
    init_input,
    lossy_input_sample,
    make_stream,
    outcome_probability,
    random_brickwork,
    sample,
    simulate_circuit,
    state_norm,
    transfer_matrix,
)

BS5050 = np.array([[1.0, 1.0], [-1.0, 1.0]]) / math.sqrt(2.0)


# ---------------------------------------------------------------------------
# initialization
# ---------------------------------------------------------------------------


def test_init_input_is_the_requested_product_state():
    st = init_input((1, 0, 2), d=2)
    assert st.modes == 3 and st.local_dim == 3
    assert outcome_probability(st, (1, 0, 2)) == pytest.approx(1.0)
    assert outcome_probability(st, (0, 1, 2)) == pytest.approx(0.0)
    assert state_norm(st) == pytest.approx(1.0, abs=1e-14)
    assert st.bond_dims == (1, 1)


def test_init_input_rejects_occupation_over_cutoff():
    with pytest.raises(ValueError):
        init_input((3, 0), d=2)


def test_init_input_rejects_empty_cutoff():
    with pytest.raises(ValueError):
        init_input((0, 0), d=0)


# ---------------------------------------------------------------------------
# coupler Fock tensors
# ---------------------------------------------------------------------------


def test_identity_coupler_amplitudes_are_kronecker():
    c = coupler_fock_amplitudes(np.eye(2), d=3)
    q = 4
    for n0 in range(q):
        for n1 in range(q):
            if n0 + n1 > 3:
                continue
            expected = np.zeros((q, q))
            expected[n0, n1] = 1.0
            assert np.allclose(c[:, :, n0, n1], expected, atol=1e-14)


def test_balanced_coupler_two_photon_amplitudes():
    """Two photons meeting on a balanced coupler bunch: the (1,1) output dies."""
    c = coupler_fock_amplitudes(BS5050, d=2)
    root_half = 1.0 / math.sqrt(2.0)
    assert c[2, 0, 1, 1] == pytest.approx(root_half, abs=1e-14)
    assert c[0, 2, 1, 1] == pytest.approx(-root_half, abs=1e-14)
    assert abs(c[1, 1, 1, 1]) < 1e-14
    # single photon splits by the first column's amplitudes
    assert c[1, 0, 1, 0] == pytest.approx(BS5050[0, 0], abs=1e-14)
    assert c[0, 1, 1, 0] == pytest.approx(BS5050[1, 0], abs=1e-14)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_coupler_amplitudes_unitary_per_photon_sector(d):
    rng = make_stream(50 + d)
    from lossyboson import haar_unitary

    block = haar_unitary(2, rng)
    c = coupler_fock_amplitudes(block, d)
    for total in range(d + 1):
        pairs = [(n0, total - n0) for n0 in range(total + 1)]
        mat = np.array([[c[p, s, n0, n1] for (n0, n1) in pairs] for (p, s) in pairs])
        assert np.allclose(mat @ mat.conj().T, np.eye(len(pairs)), atol=1e-12)


def test_coupler_mpo_recombines_exactly():
    rng = make_stream(55)
    from lossyboson import haar_unitary

    block = haar_unitary(2, rng)
    d = 3
    mpo = coupler_mpo(block, d)
    assert mpo.rank <= (d + 1) ** 2
    assert np.allclose(mpo.recombine(), coupler_fock_amplitudes(block, d), atol=1e-12)


# ---------------------------------------------------------------------------
# gate application
# ---------------------------------------------------------------------------


def test_single_photon_splits_by_column_law():
    theta = 0.7
    block = CouplerGate(0, theta).block
    st = init_input((1, 0), d=1)
    st = apply_coupler(st, 0, coupler_mpo(block, 1), max_bond=16)
    assert outcome_probability(st, (1, 0)) == pytest.approx(
        abs(block[0, 0]) ** 2, abs=1e-12
    )
    assert outcome_probability(st, (0, 1)) == pytest.approx(
        abs(block[1, 0]) ** 2, abs=1e-12
    )


def test_two_photon_interference_on_balanced_coupler():
    st = init_input((1, 1), d=2)
    st = apply_coupler(st, 0, coupler_mpo(BS5050, 2), max_bond=16)
    assert outcome_probability(st, (1, 1)) == pytest.approx(0.0, abs=1e-12)
    assert outcome_probability(st, (2, 0)) == pytest.approx(0.5, abs=1e-12)
    assert outcome_probability(st, (0, 2)) == pytest.approx(0.5, abs=1e-12)


def test_coupler_then_inverse_restores_product_state():
    rng = make_stream(60)
    from lossyboson import haar_unitary

    block = haar_unitary(2, rng)
    st = init_input((1, 1, 0), d=2)
    st = apply_coupler(st, 0, coupler_mpo(block, 2), max_bond=64)
    assert st.bond_dims[0] > 1
    st = apply_coupler(st, 0, coupler_mpo(block.conj().T, 2), max_bond=64)
    assert outcome_probability(st, (1, 1, 0)) == pytest.approx(1.0, abs=1e-10)
    # exact zeros reappear and are dropped, so the bond collapses back
    assert st.bond_dims[0] == 1


def test_apply_coupler_preserves_norm():
    rng = make_stream(61)
    from lossyboson import haar_unitary

    st = init_input((1, 1, 1, 0), d=3)
    for k in (0, 1, 2, 0, 1, 2):
        st = apply_coupler(st, k, coupler_mpo(haar_unitary(2, rng), 3), max_bond=1024)
    assert state_norm(st) == pytest.approx(1.0, abs=1e-10)


def test_apply_coupler_respects_bond_cap():
    rng = make_stream(62)
    from lossyboson import haar_unitary

    st = init_input((2, 2), d=4)
    with pytest.raises(CapacityError):
        apply_coupler(st, 0, coupler_mpo(haar_unitary(2, rng), 4), max_bond=1)


def test_apply_phase_rotates_amplitudes_only():
    st = init_input((1, 0), d=1)
    st = apply_coupler(st, 0, coupler_mpo(BS5050, 1), max_bond=4)
    before = [outcome_probability(st, o) for o in ((1, 0), (0, 1))]
    st = apply_phase(st, 0, 1.234)
    after = [outcome_probability(st, o) for o in ((1, 0), (0, 1))]
    assert np.allclose(before, after, atol=1e-14)
    assert state_norm(st) == pytest.approx(1.0, abs=1e-12)


def test_bond_growth_bounded_by_mpo_rank():
    rng = make_stream(63)
    from lossyboson import haar_unitary

    d = 2
    st = init_input((1, 1, 0, 0), d=d)
    for k in (0, 1, 2):
        mpo = coupler_mpo(haar_unitary(2, rng), d)
        before = max(st.bond_dims)
        st = apply_coupler(st, k, mpo, max_bond=4096)
        assert max(st.bond_dims) <= before * (d + 1) ** 2


# ---------------------------------------------------------------------------
# canonical form
# ---------------------------------------------------------------------------


def test_updates_keep_canonical_form():
    rng = make_stream(64)
    from lossyboson import haar_unitary

    st = init_input((1, 0, 1, 0), d=2)
    for k in (0, 2, 1, 0, 2):
        st = apply_coupler(st, k, coupler_mpo(haar_unitary(2, rng), 2), max_bond=1024)
    assert canonical_defect(st) < 1e-10


def test_canonicalize_restores_form_and_unit_norm():
    rng = make_stream(65)
    from lossyboson import haar_unitary

    st = init_input((1, 1, 0), d=2)
    for k in (0, 1, 0):
        st = apply_coupler(st, k, coupler_mpo(haar_unitary(2, rng), 2), max_bond=256)
    fixed = canonicalize(st)
    assert canonical_defect(fixed) < 1e-12
    assert state_norm(fixed) == pytest.approx(1.0, abs=1e-12)
    # probabilities unchanged by re-gauging (up to the overall norm)
    scale = state_norm(st)
    for outcome in ((1, 1, 0), (2, 0, 0), (0, 1, 1)):
        assert outcome_probability(fixed, outcome) == pytest.approx(
            outcome_probability(st, outcome) / scale, abs=1e-12
        )


# ---------------------------------------------------------------------------
# full-circuit simulation against the permanent oracle
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("seed", [0, 1, 2, 3])
def test_simulation_matches_permanent_oracle(seed):
    rng = make_stream(300 + seed)
    modes = int(rng.integers(2, 7))
    depth = int(rng.integers(1, 5))
    photons = int(rng.integers(1, min(modes, 3) + 1))
    circuit = random_brickwork(modes, depth, 1.0, rng)
    pattern = (1,) * photons + (0,) * (modes - photons)
    exact = fock_output_distribution(transfer_matrix(circuit), pattern)
    st = simulate_circuit(circuit, pattern)
    probs = np.array([outcome_probability(st, o) for o in exact.outcomes])
    assert 0.5 * np.abs(probs - exact.weights).sum() < 1e-10


def test_simulation_peak_bond_within_global_bound():
    rng = make_stream(70)
    d = 2
    for depth in (1, 2, 3):
        circuit = random_brickwork(6, depth, 1.0, rng)
        st = simulate_circuit(circuit, (1, 1, 0, 0, 0, 0), d=d)
        assert st.peak_bond <= (d + 1) ** (2 * depth)


def test_simulate_rejects_lossy_circuit():
    rng = make_stream(71)
    circuit = random_brickwork(4, 2, 0.9, rng)
    with pytest.raises(ValueError):
        simulate_circuit(circuit, (1, 0, 0, 0))


def test_simulate_rejects_insufficient_cutoff():
    rng = make_stream(72)
    circuit = random_brickwork(4, 1, 1.0, rng)
    with pytest.raises(ValueError):
        simulate_circuit(circuit, (1, 1, 0, 0), d=1)


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------


def test_chain_rule_samples_match_state_probabilities():
    rng = make_stream(80)
    circuit = random_brickwork(4, 2, 1.0, rng)
    st = canonicalize(simulate_circuit(circuit, (1, 1, 0, 0)))
    exact = fock_output_distribution(transfer_matrix(circuit), (1, 1, 0, 0)).as_dict()
    trials = 20000
    counts = {}
    for _ in range(trials):
        s = sample(st, rng)
        counts[s] = counts.get(s, 0) + 1
    assert set(counts) <= set(exact)
    tvd = 0.5 * sum(abs(counts.get(o, 0) / trials - p) for o, p in exact.items())
    assert tvd < 0.02


def test_sampling_is_deterministic_under_seed():
    rng = make_stream(81)
    circuit = random_brickwork(3, 2, 1.0, rng)
    st = canonicalize(simulate_circuit(circuit, (1, 0, 0)))
    s1 = [sample(st, make_stream(9)) for _ in range(5)]
    s2 = [sample(st, make_stream(9)) for _ in range(5)]
    assert s1 == s2


def test_lossy_input_thinning_statistics():
    rng = make_stream(82)
    mu = 0.37
    draws = np.concatenate([lossy_input_sample(10, mu, rng) for _ in range(2000)])
    assert set(np.unique(draws)) <= {0, 1}
    assert draws.mean() == pytest.approx(mu, abs=0.01)


def test_lossy_input_edge_rates():
    rng = make_stream(83)
    assert lossy_input_sample(5, 0.0, rng).sum() == 0
    assert lossy_input_sample(5, 1.0, rng).sum() == 5
