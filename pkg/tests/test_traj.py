import numpy as np
import pytest

from waiterplan.errors import ConfigurationError, DomainError
from waiterplan.setops import parameter_id, pz_bounds, pz_evaluate, time_id
from waiterplan.traj import (
    InitialCondition,
    TrackingBoundsInflation,
    bernstein_from_ic,
    default_eta,
    eval_desired,
    inflate_tracking_error,
    pz_desired,
    time_partition,
)


def moving_ic():
    return InitialCondition(np.array([0.1, -0.2]), np.array([0.3, 0.0]), np.array([0.0, 0.5]))


def test_partition_counts_intervals():
    partition, pzs = time_partition(0.01, 1.0, 0.5)

    assert partition.n_intervals == 100
    assert len(pzs) == 100
    assert partition.locate(0.0) == 0
    assert partition.locate(1.0) == 99
    bounds = pz_bounds(pzs[3])
    assert float(bounds.lo) == pytest.approx(0.03)
    assert float(bounds.hi) == pytest.approx(0.04)


@pytest.mark.parametrize("dt, t_final, t_plan", [
    (0.03, 1.0, 0.5),
    (0.01, 1.0, 1.0),
    (0.01, 1.0, 0.0),
    (0.0, 1.0, 0.5),
])
def test_partition_rejects_bad_settings(dt, t_final, t_plan):
    with pytest.raises(ConfigurationError):
        time_partition(dt, t_final, t_plan)


def test_indeterminate_value_maps_interval_ends():
    partition, _ = time_partition(0.05, 2.0, 1.0)
    lo, hi = partition.bounds(7)

    assert partition.indeterminate_value(7, lo) == pytest.approx(-1.0)
    assert partition.indeterminate_value(7, hi) == pytest.approx(1.0)
    with pytest.raises(DomainError):
        partition.bounds(40)


def test_trajectory_matches_initial_condition_and_stops():
    ic = moving_ic()
    eta1, eta2 = default_eta(ic)
    k = np.array([0.5, -1.0])
    traj = bernstein_from_ic(ic, k, eta1, eta2, 2.0)

    q, qd, qdd = eval_desired(traj, 0.0)
    np.testing.assert_allclose(q, ic.q0, atol=1e-12)
    np.testing.assert_allclose(qd, ic.v0, atol=1e-12)
    np.testing.assert_allclose(qdd, ic.a0, atol=1e-12)

    q, qd, qdd = eval_desired(traj, 2.0)
    np.testing.assert_allclose(q, eta1 * k + eta2, atol=1e-12)
    np.testing.assert_allclose(qd, 0.0, atol=1e-12)
    np.testing.assert_allclose(qdd, 0.0, atol=1e-12)


def test_trajectory_rejects_parameters_outside_box():
    ic = moving_ic()
    eta1, eta2 = default_eta(ic)

    with pytest.raises(DomainError):
        bernstein_from_ic(ic, np.array([1.2, 0.0]), eta1, eta2, 2.0)
    traj = bernstein_from_ic(ic, np.zeros(2), eta1, eta2, 2.0)
    with pytest.raises(DomainError):
        eval_desired(traj, 2.5)


def test_desired_sets_reproduce_pointwise_trajectory():
    ic = moving_ic()
    eta1, eta2 = default_eta(ic)
    partition, _ = time_partition(0.05, 2.0, 1.0)
    reach = pz_desired(ic, eta1, eta2, partition, [7])[0]
    k = np.array([0.3, -0.8])
    traj = bernstein_from_ic(ic, k, eta1, eta2, partition.t_final)

    for t in (0.35, 0.37, 0.4):
        assignment = {time_id(7): partition.indeterminate_value(7, t), parameter_id(0): k[0], parameter_id(1): k[1]}
        expected = eval_desired(traj, t)
        for pz, value in zip(reach, expected):
            np.testing.assert_allclose(pz_evaluate(pz, assignment), value, atol=1e-10)


def test_inflation_widens_by_the_error_bounds():
    ic = moving_ic()
    eta1, eta2 = default_eta(ic)
    partition, _ = time_partition(0.05, 2.0, 1.0)
    desired = pz_desired(ic, eta1, eta2, partition, [0])[0]
    eps_p, eps_v = np.array([0.01, 0.02]), np.array([0.1, 0.1])

    tracked = inflate_tracking_error(desired, TrackingBoundsInflation(eps_p, eps_v), np.array([4.0, 4.0]))

    np.testing.assert_allclose(pz_bounds(tracked.q).hi - pz_bounds(desired.q).hi, eps_p)
    np.testing.assert_allclose(pz_bounds(tracked.qd).lo - pz_bounds(desired.qd).lo, -eps_v)
    np.testing.assert_allclose(pz_bounds(tracked.qd_aux).hi - pz_bounds(desired.qd).hi, 4.0 * eps_p)
    np.testing.assert_allclose(pz_bounds(tracked.qdd_aux).hi - pz_bounds(desired.qdd).hi, 4.0 * eps_v)


def test_inflation_rejects_negative_bounds():
    with pytest.raises(DomainError):
        TrackingBoundsInflation(np.array([-0.1]), np.array([0.1]))


def test_chained_trajectory_continues_from_plan_time():
    ic = moving_ic()
    eta1, eta2 = default_eta(ic)
    first = bernstein_from_ic(ic, np.array([0.5, -1.0]), eta1, eta2, 2.0)
    at_plan_time = eval_desired(first, 1.0)

    chained = InitialCondition(*at_plan_time)
    eta1, eta2 = default_eta(chained)
    second = bernstein_from_ic(chained, np.array([-0.3, 0.8]), eta1, eta2, 2.0)

    for joined, expected in zip(eval_desired(second, 0.0), at_plan_time):
        np.testing.assert_allclose(joined, expected, atol=1e-12)
    np.testing.assert_allclose(second.final_position, chained.q0 + eta1 * np.array([-0.3, 0.8]), atol=1e-12)
