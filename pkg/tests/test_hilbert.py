import math

import numpy as np
import pytest
from scipy.linalg import expm

from trispin.algebra import ControlParams, build_hamiltonian
from trispin.hilbert import (
    closure_check,
    cross_validate,
    expectation_trajectory,
    expectations,
    full_hilbert_trajectory,
    schrodinger_propagate,
)
from trispin.report import random_consistent_params

TAU_STAR = 0.25 * math.sqrt(3.0) * math.pi

FREE = ControlParams(k=0.0, omega_hat=1.0, b0=0.0, bz=0.0, omega_rf=0.0, theta0=0.0)


def test_constant_hamiltonian_is_exact():
    # b0 = 0 freezes H; stepping must reproduce exp(-i H tau)
    p = ControlParams(k=1.0, omega_hat=2.0, b0=0.0, bz=math.sqrt(2.0), omega_rf=0.7, theta0=0.3)
    ut = schrodinger_propagate(p, 1.5, 1e-3)
    exact = expm(-1j * 1.5 * build_hamiltonian(p, 0.0))
    assert np.max(np.abs(ut.unitaries[-1] - exact)) < 1e-10


def test_zero_duration_is_identity(rng):
    p = random_consistent_params(rng)
    ut = schrodinger_propagate(p, 0.0, 1e-3)
    assert len(ut.taus) == 1
    assert np.allclose(ut.unitaries[0], np.eye(8))


def test_unitarity_and_determinant(rng):
    p = random_consistent_params(rng)
    ut = schrodinger_propagate(p, 2.0, 1e-3)
    assert ut.unitarity_defect() <= 1e-9
    dets = np.abs(np.linalg.det(ut.unitaries))
    assert np.max(np.abs(dets - 1.0)) < 1e-9


def test_rejects_bad_step_and_scheme(rng):
    p = random_consistent_params(rng)
    with pytest.raises(ValueError):
        schrodinger_propagate(p, 1.0, -1e-3)
    with pytest.raises(ValueError, match="unknown scheme"):
        schrodinger_propagate(p, 1.0, 1e-3, scheme="euler")


def test_expectations_initial_state():
    x = expectations(np.eye(8, dtype=complex))
    assert np.allclose(x, np.eye(8)[0])


def test_expectations_unknown_label():
    with pytest.raises(ValueError, match="initial-state label"):
        expectations(np.eye(8, dtype=complex), rho0_label="sz2")


def test_expectations_free_precession():
    # matches the reduced closed form x1 = cos 2 tau
    ut = schrodinger_propagate(FREE, 2.0, 1e-3)
    xs = expectation_trajectory(ut)
    assert np.max(np.abs(xs[:, 0] - np.cos(2.0 * ut.taus))) < 1e-9
    assert np.max(np.abs(xs[:, 2] - np.sin(2.0 * ut.taus))) < 1e-9


def test_expectation_norm_bounded(rng):
    p = random_consistent_params(rng)
    ut = schrodinger_propagate(p, 2.0, 1e-3)
    xs = expectation_trajectory(ut)
    assert np.max(np.sum(xs**2, axis=1)) <= 1.0 + 1e-9


def test_closure_free_precession_row():
    res = closure_check(FREE, [0.0])
    assert res.max_residual <= 1e-14
    # the only row-1 coupling is to x3 with coefficient -2 (checked inside closure
    # via the generator); verify the generator row itself as the hand oracle
    from trispin.dynamics import build_M

    row = build_M(FREE, 0.0)[0]
    expected = np.zeros(8)
    expected[2] = -2.0
    assert np.allclose(row, expected)


def test_closure_random_parameters(rng):
    for _ in range(3):
        p = random_consistent_params(rng)
        res = closure_check(p, rng.uniform(0.0, 5.0, size=10))
        assert res.max_residual <= 1e-12


def test_closure_coefficient_matrix_skew(rng):
    # Hermiticity of H and the basis makes the projected coefficient matrix skew;
    # it equals the reduced generator, which is skew by construction
    from trispin.dynamics import build_M

    p = random_consistent_params(rng)
    m = build_M(p, 1.234)
    assert np.max(np.abs(m + m.T)) <= 1e-14


def test_cross_validate_free_case():
    assert cross_validate(FREE, 2.0, 1e-4) <= 1e-10


def test_cross_validate_consistent_params(rng):
    p = random_consistent_params(rng)
    assert cross_validate(p, TAU_STAR, 1e-4) <= 1e-8


def test_cross_validate_first_sample_identical(rng):
    p = random_consistent_params(rng)
    full = full_hilbert_trajectory(p, 0.2, 1e-3)
    assert np.max(np.abs(full.states[0] - np.eye(8)[0])) < 1e-14
    assert full.method == "full-hilbert"
