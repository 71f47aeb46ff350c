from __future__ import annotations

import numpy as np
import pytest

from steerclone import (
    VCoefficients,
    apply_cerf_operator,
    bell_ket,
    bell_weights,
    clone_pair,
    omega_state,
    primed,
    swap_bc,
)
from steerclone.cloning import BELL_KETS, bell_pair_ket
from steerclone.qmat import frob_dist, kron
from steerclone.quantum import PAULIS, identity

from conftest import random_v

SYMMETRIC = VCoefficients.from_iterable(
    [np.sqrt(3) / 2, 1 / (2 * np.sqrt(3)), 1 / (2 * np.sqrt(3)), 1 / (2 * np.sqrt(3))]
)


def test_vcoefficients_validation():
    with pytest.raises(ValueError, match="square-norm"):
        VCoefficients.from_iterable([1, 1, 0, 0])
    with pytest.raises(ValueError, match="4 amplitudes"):
        VCoefficients.from_iterable([1, 0, 0])
    v = VCoefficients.from_iterable([3, 4, 0, 0], normalize=True)
    assert abs(v.v0 - 0.6) < 1e-15


def test_vcoefficients_phase_canonicalization():
    v = VCoefficients.from_iterable(np.exp(1.3j) * np.array([0.6, 0.8j, 0, 0]))
    assert abs(v.v[0].imag) < 1e-15 and v.v0 > 0
    assert abs(v.v[1] - 0.8j) < 1e-14
    # v0 = 0 falls back to the first nonzero amplitude
    v = VCoefficients.from_iterable([0, 1j, 0, 0])
    assert abs(v.v[1] - 1.0) < 1e-15


def test_primed_of_identity_point():
    v = VCoefficients.from_iterable([1, 0, 0, 0])
    assert np.allclose(primed(v), [0.5, 0.5, 0.5, 0.5], atol=1e-15)


def test_primed_fixed_point():
    # v0' = (sqrt(3)/2 + 3/(2 sqrt(3)))/2 = sqrt(3)/2: the point maps to itself.
    assert np.allclose(primed(SYMMETRIC), SYMMETRIC.v, atol=1e-14)


def test_primed_is_an_involution_and_isometry():
    rng = np.random.default_rng(200)
    from steerclone.cloning import PRIME_MATRIX

    for _ in range(50):
        v = random_v(rng, complex_amplitudes=True)
        once = primed(v)
        assert abs(np.sum(np.abs(once) ** 2) - 1.0) < 1e-12
        assert np.max(np.abs(PRIME_MATRIX @ once - v.v)) < 1e-12


def test_omega_state_identity_point():
    v = VCoefficients.from_iterable([1, 0, 0, 0])
    assert np.allclose(omega_state(v).ket, np.kron(bell_ket("phi+"), bell_ket("phi+")), atol=1e-15)


def test_omega_state_normalized():
    rng = np.random.default_rng(210)
    for _ in range(20):
        v = random_v(rng, complex_amplitudes=True)
        assert abs(np.linalg.norm(omega_state(v).ket) - 1.0) < 1e-12


def test_omega_swap_bc_matches_primed():
    rng = np.random.default_rng(220)
    for _ in range(50):
        v = random_v(rng, complex_amplitudes=True)
        swapped = swap_bc(omega_state(v).ket)
        assert np.max(np.abs(swapped - bell_pair_ket(primed(v)))) < 1e-10


def test_apply_cerf_identity_point_leaves_input():
    v = VCoefficients.from_iterable([1, 0, 0, 0])
    inp = omega_state(v)
    out = apply_cerf_operator(v, inp)
    assert np.allclose(out.ket, inp.ket, atol=1e-15)


def test_apply_cerf_pure_sigma_x_point():
    # sigma_x on B of phi+_AB gives psi+, and likewise on C of phi+_CD.
    v = VCoefficients.from_iterable([0, 1, 0, 0])
    out = apply_cerf_operator(v, omega_state(VCoefficients.from_iterable([1, 0, 0, 0])))
    assert np.allclose(out.ket, np.kron(bell_ket("psi+"), bell_ket("psi+")), atol=1e-14)


def test_apply_cerf_matches_omega_random():
    rng = np.random.default_rng(230)
    inp = omega_state(VCoefficients.from_iterable([1, 0, 0, 0]))
    for _ in range(100):
        v = random_v(rng, complex_amplitudes=True)
        assert np.max(np.abs(apply_cerf_operator(v, inp).ket - omega_state(v).ket)) < 1e-12


def test_apply_cerf_rejects_other_inputs():
    v = VCoefficients.from_iterable([1, 0, 0, 0])
    other = omega_state(VCoefficients.from_iterable([0, 1, 0, 0]))
    with pytest.raises(ValueError, match="phi"):
        apply_cerf_operator(v, other)


def test_clone_pair_identity_point():
    rho_ab, rho_ac = clone_pair(VCoefficients.from_iterable([1, 0, 0, 0]))
    phi = bell_ket("phi+")
    assert frob_dist(rho_ab.matrix, np.outer(phi, phi.conj())) < 1e-12
    assert frob_dist(rho_ac.matrix, identity(4) / 4) < 1e-12


def test_clone_pair_symmetric_point_weights():
    rho_ab, rho_ac = clone_pair(SYMMETRIC)
    expected = np.array([0.75, 1 / 12, 1 / 12, 1 / 12])
    assert np.allclose(bell_weights(rho_ab), expected, atol=1e-12)
    assert np.allclose(bell_weights(rho_ac), expected, atol=1e-12)


def test_clone_pair_weights_match_moduli():
    rng = np.random.default_rng(240)
    for _ in range(50):
        v = random_v(rng, complex_amplitudes=True)
        rho_ab, rho_ac = clone_pair(v)
        assert np.allclose(bell_weights(rho_ab), np.abs(v.v) ** 2, atol=1e-10)
        assert np.allclose(bell_weights(rho_ac), np.abs(primed(v)) ** 2, atol=1e-10)


def test_clone_pair_swap_symmetry():
    rng = np.random.default_rng(250)
    for _ in range(20):
        v = random_v(rng, complex_amplitudes=True)
        rho_ac = clone_pair(v)[1]
        v_primed = VCoefficients.from_iterable(primed(v))
        rho_ab_primed = clone_pair(v_primed)[0]
        assert frob_dist(rho_ac.matrix, rho_ab_primed.matrix) < 1e-10


def test_clone_spectra_insensitive_to_tail_phases():
    rng = np.random.default_rng(260)
    for _ in range(20):
        v = random_v(rng)
        phases = np.exp(1j * rng.uniform(0, 2 * np.pi, 3))
        v_rot = VCoefficients.from_iterable(np.concatenate([[v.v[0]], v.v[1:] * phases]))
        w1 = bell_weights(clone_pair(v)[0])
        w2 = bell_weights(clone_pair(v_rot)[0])
        assert np.allclose(w1, w2, atol=1e-12)


def test_clone_pair_states_are_bell_diagonal():
    rng = np.random.default_rng(270)
    for _ in range(20):
        v = random_v(rng, complex_amplitudes=True)
        for rho in clone_pair(v):
            for sigma in PAULIS:
                ss = kron(sigma, sigma)
                assert frob_dist(ss @ rho.matrix, rho.matrix @ ss) < 1e-12


def test_bell_kets_module_order():
    kinds = ["phi+", "psi+", "psi-", "phi-"]
    for ket, kind in zip(BELL_KETS, kinds):
        assert np.allclose(ket, bell_ket(kind), atol=1e-15)
