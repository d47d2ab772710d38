import math

import numpy as np
import pytest

from focklab.core import (
    TruncationPolicy,
    apply_annihilate,
    apply_create,
    lower_amplitudes,
    make_fock,
    photon_number_distribution,
    raise_amplitudes,
    state_from_amplitudes,
)
from focklab.exceptions import (
    AnnihilatedStateError,
    DimensionError,
    TruncationOverflowError,
)
from focklab.states import StateSpec, build_state


def test_make_fock_vacuum():
    s = make_fock(0, 4)
    assert np.allclose(s.amplitudes, [1, 0, 0, 0])
    assert s.tail_mass == 0.0


def test_make_fock_basis_vector():
    s = make_fock(2, 4)
    assert np.allclose(s.amplitudes, [0, 0, 1, 0])


def test_make_fock_out_of_range():
    with pytest.raises(DimensionError):
        make_fock(4, 4)


def test_create_on_vacuum():
    s, norm = apply_create(make_fock(0, 4))
    assert np.allclose(s.amplitudes[1], 1.0)
    assert norm == pytest.approx(1.0)


def test_create_sqrt_factor():
    s, norm = apply_create(make_fock(1, 4))
    assert norm == pytest.approx(math.sqrt(2.0))
    assert abs(s.amplitudes[2]) == pytest.approx(1.0)


def test_create_on_coherent_norm(tight_policy):
    # <a a†> = 1 + |alpha|^2, so the pre-normalization norm squared is 2 at alpha=1.
    coh = build_state(StateSpec("Coherent", alpha=1.0), tight_policy)
    _, norm = apply_create(coh)
    assert norm**2 == pytest.approx(2.0, abs=1e-10)


def test_annihilate_fock():
    s, norm = apply_annihilate(make_fock(1, 4))
    assert norm == pytest.approx(1.0)
    assert abs(s.amplitudes[0]) == pytest.approx(1.0)


def test_annihilate_vacuum_fails():
    with pytest.raises(AnnihilatedStateError):
        apply_annihilate(make_fock(0, 4))


def test_annihilate_twice_norm():
    s, norm = apply_annihilate(make_fock(3, 5), k=2)
    assert norm == pytest.approx(math.sqrt(6.0))
    assert abs(s.amplitudes[1]) == pytest.approx(1.0)


def test_create_then_annihilate_roundtrip_on_fock():
    # a a† |n> = (n+1)|n>, so number states come back exactly (up to phase).
    for n in range(6):
        s = make_fock(n, 12)
        up, _ = apply_create(s)
        down, _ = apply_annihilate(up)
        assert abs(s.overlap(down)) == pytest.approx(1.0, abs=1e-10)


def test_create_then_annihilate_reweights_by_number(rng):
    # On a general state the roundtrip yields (N+1)|s> normalized, with
    # overlap (<N>+1)/sqrt(<(N+1)^2>); 1 is reached only on number states.
    for _ in range(20):
        raw = rng.normal(size=24) + 1j * rng.normal(size=24)
        raw[-6:] = 0.0  # keep support away from the truncation edge
        s = state_from_amplitudes(raw)
        up, _ = apply_create(s)
        down, _ = apply_annihilate(up)
        n = np.arange(s.dim)
        p = s.probabilities()
        mean_np1 = float(np.dot(n + 1.0, p))
        mean_np1_sq = float(np.dot((n + 1.0) ** 2, p))
        expected = mean_np1 / math.sqrt(mean_np1_sq)
        assert abs(s.overlap(down)) == pytest.approx(expected, abs=1e-10)


def test_commutator_on_random_states(rng):
    for _ in range(20):
        raw = rng.normal(size=24) + 1j * rng.normal(size=24)
        raw[-4:] = 0.0
        s = state_from_amplitudes(raw)
        aa_dag = float(np.sum(np.abs(raise_amplitudes(s.amplitudes)) ** 2))
        a_dag_a = float(np.sum(np.abs(lower_amplitudes(s.amplitudes)) ** 2))
        assert aa_dag - a_dag_a == pytest.approx(1.0, abs=1e-10)


def test_create_norm_matches_mean_photon_number(rng):
    for _ in range(10):
        raw = rng.normal(size=20) + 1j * rng.normal(size=20)
        raw[-4:] = 0.0
        s = state_from_amplitudes(raw)
        _, norm = apply_create(s)
        p = photon_number_distribution(s)
        mean_n = float(np.dot(np.arange(s.dim), p))
        assert norm == pytest.approx(math.sqrt(mean_n + 1.0), abs=1e-10)


def test_photon_number_distribution_fock():
    p = photon_number_distribution(make_fock(2, 6))
    assert np.allclose(p, [0, 0, 1, 0, 0, 0])


def test_photon_number_distribution_coherent(tight_policy):
    s = build_state(StateSpec("Coherent", alpha=1.0), tight_policy)
    p = photon_number_distribution(s)
    expected = [math.exp(-1.0) / math.factorial(n) for n in range(6)]
    assert np.allclose(p[:6], expected, atol=1e-12)
    assert p.sum() == pytest.approx(1.0, abs=1e-12)


def test_paecs_vacuum_hole(tight_policy):
    s = build_state(StateSpec("PAECS", alpha=1.0), tight_policy)
    assert photon_number_distribution(s)[0] == 0.0


def test_create_overflow_at_cap():
    policy = TruncationPolicy(max_dim=4, tail_tolerance=1e-12)
    with pytest.raises(TruncationOverflowError):
        apply_create(make_fock(3, 4), policy=policy)


def test_global_phase_preserved_by_default():
    raw = np.array([1.0j, 1.0], dtype=complex)
    s = state_from_amplitudes(raw)
    assert s.amplitudes[0] == pytest.approx(1j / math.sqrt(2))
    fixed = state_from_amplitudes(raw, fix_global_phase=True)
    assert fixed.amplitudes[0].imag == pytest.approx(0.0)
    assert fixed.amplitudes[0].real > 0
