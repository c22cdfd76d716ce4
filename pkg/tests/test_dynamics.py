import numpy as np
import pytest

from waiterplan.dynamics import (
    RneaInputs,
    bias_torque,
    estimate_sigma_bounds,
    inverse_dynamics,
    mass_matrix,
    pz_rnea,
    rnea,
)
from waiterplan.errors import DimensionError, DomainError
from waiterplan.setops import PolyZonotope, parameter_id, pz_bounds
from waiterplan.verify import forward_dynamics


def test_resting_tray_carries_object_weight(planar_model):
    result = inverse_dynamics(planar_model, np.array([0.7, -0.3]), np.zeros(2), np.zeros(2))
    contact = result.wrench(planar_model.object_link)

    mass = planar_model.nominal[-1, 0]
    np.testing.assert_allclose(contact.f, [0.0, 0.0, mass * 9.81], atol=1e-12)
    np.testing.assert_allclose(contact.n, 0.0, atol=1e-12)
    # gravity is parallel to both joint axes
    np.testing.assert_allclose(result.torque, 0.0, atol=1e-12)


def test_rnea_splits_into_mass_matrix_and_bias(planar_model, rng):
    for _ in range(5):
        q, qd, qdd = rng.uniform(-1.0, 1.0, (3, 2))
        torque = inverse_dynamics(planar_model, q, qd, qdd).torque
        expected = mass_matrix(planar_model, q) @ qdd + bias_torque(planar_model, q, qd)
        np.testing.assert_allclose(torque, expected, atol=1e-10)


def test_rnea_accepts_batches(planar_model, rng):
    q, qd, qdd = rng.uniform(-1.0, 1.0, (3, 4, 2))
    batched = inverse_dynamics(planar_model, q, qd, qdd)

    assert batched.torque.shape == (4, 2)
    assert batched.forces.shape == (4, 3, 3)
    np.testing.assert_allclose(batched.torque[2], inverse_dynamics(planar_model, q[2], qd[2], qdd[2]).torque)


def test_rnea_rejects_wrong_dimension(planar_model):
    with pytest.raises(DimensionError):
        rnea(planar_model, RneaInputs.inverse_dynamics(np.zeros(3), np.zeros(3), np.zeros(3)))


def test_mass_matrix_is_symmetric_positive_definite(planar_model, rng):
    M = mass_matrix(planar_model, rng.uniform(-2.0, 2.0, (6, 2)))

    assert M.shape == (6, 2, 2)
    np.testing.assert_allclose(M, np.swapaxes(M, -1, -2), atol=1e-12)
    assert np.all(np.linalg.eigvalsh(M) > 0)


def test_forward_dynamics_inverts_rnea(planar_model, rng):
    q, qd, qdd = rng.uniform(-1.0, 1.0, (3, 2))
    u = inverse_dynamics(planar_model, q, qd, qdd).torque

    np.testing.assert_allclose(forward_dynamics(planar_model, q, qd, u), qdd, atol=1e-9)


def test_sigma_bounds_are_ordered(planar_model):
    sigma_m, sigma_M = estimate_sigma_bounds(planar_model, 200, seed=3)

    assert 0 < sigma_m <= sigma_M
    assert estimate_sigma_bounds(planar_model, 200, seed=3) == (sigma_m, sigma_M)
    with pytest.raises(DomainError):
        estimate_sigma_bounds(planar_model, 0)


def test_pz_rnea_encloses_pointwise_dynamics(planar_model, rng):
    center = np.array([0.4, -0.2])
    q = PolyZonotope.from_generators(
        center, [(np.array([0.05, 0.0]), parameter_id(0)), (np.array([0.0, 0.05]), parameter_id(1))]
    )
    qd, qdd = np.array([0.3, -0.1]), np.array([0.5, 0.2])
    inputs = RneaInputs(q, PolyZonotope.constant(qd), PolyZonotope.constant(qd), PolyZonotope.constant(qdd))

    torque, wrenches = pz_rnea(planar_model, inputs, planar_model.parameter_interval, max_terms=20, degree=4)
    torque_box = pz_bounds(torque)
    force_box, moment_box = (pz_bounds(x) for x in wrenches.contact)

    for _ in range(30):
        sample_q = center + 0.05 * rng.uniform(-1.0, 1.0, 2)
        params = planar_model.sample_parameters(rng)
        result = inverse_dynamics(planar_model, sample_q, qd, qdd, params)
        contact = result.wrench(planar_model.object_link)
        assert torque_box.contains(result.torque, slack=1e-9)
        assert force_box.contains(contact.f, slack=1e-9)
        assert moment_box.contains(contact.n, slack=1e-9)


@pytest.mark.slow
def test_bundled_mass_matrix_over_many_configurations(bundled, rng):
    model = bundled.model
    q = rng.uniform(-np.pi, np.pi, (10_000, model.n_q))
    qd, qdd = rng.uniform(-1.0, 1.0, (2, 10_000, model.n_q))

    M = mass_matrix(model, q)

    np.testing.assert_allclose(M, np.swapaxes(M, -1, -2), atol=1e-10)
    assert np.all(np.linalg.eigvalsh(M)[:, 0] > 0)
    expected = np.einsum("nij,nj->ni", M, qdd) + bias_torque(model, q, qd)
    np.testing.assert_allclose(inverse_dynamics(model, q, qd, qdd).torque, expected, atol=1e-9)


@pytest.mark.slow
def test_bundled_sigma_bounds_grow_with_samples(bundled):
    # the first 4096 draws are shared, so more samples can only widen the bounds
    few = estimate_sigma_bounds(bundled.model, 4096, seed=0)
    many = estimate_sigma_bounds(bundled.model, 5 * 4096, seed=0)

    assert 0 < many[0] <= few[0] <= few[1] <= many[1]
    assert estimate_sigma_bounds(bundled.model, 20_000, seed=0) == (bundled.controller.sigma_m,
                                                                    bundled.controller.sigma_M)
