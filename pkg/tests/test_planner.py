import numpy as np
import pytest

from waiterplan.errors import DimensionError, DomainError
from waiterplan.kinematics import Obstacle
from waiterplan.planner import (
    ConstraintKind,
    IterationProblem,
    ObstacleEvent,
    Outcome,
    PlanStatus,
    SolverParams,
    SupPolynomials,
    build_iteration,
    eval_k,
    hlp_waypoint,
    least_squares_target,
    receding_horizon,
    solve,
)
from waiterplan.setops import PolyZonotope, parameter_id, time_id
from waiterplan.traj import InitialCondition, default_eta, eval_desired, power_coefficients, time_partition

FAR_BOX = Obstacle.box([2.0, 2.0, 0.1], [0.2, 0.2, 0.2], name="far")


@pytest.fixture(scope="module")
def planar_problem(planar_scenario):
    ic = InitialCondition.at_rest(planar_scenario.start)
    return build_iteration(planar_scenario, ic, obstacles=[FAR_BOX], workers=1)


def unconstrained_problem(waypoint):
    ic = InitialCondition.at_rest([0.0, 0.5])
    eta1, eta2 = default_eta(ic)
    partition, _ = time_partition(0.5, 2.0, 1.0)
    a0, a1 = power_coefficients(ic, eta1, eta2, partition.t_final)
    powers = (partition.t_plan / partition.t_final) ** np.arange(a0.shape[1])
    k_ids = [parameter_id(0), parameter_id(1)]
    return IterationProblem(
        ic=ic, waypoint=np.asarray(waypoint, dtype=float), eta1=eta1, eta2=eta2, partition=partition,
        constraints=[], rows=SupPolynomials([], k_ids), row_owner=np.zeros(0, dtype=np.int64), reach=[],
        cost_offset=a0 @ powers, cost_slope=a1 @ powers,
    )


def test_hlp_waypoint_steps_towards_goal():
    np.testing.assert_allclose(hlp_waypoint([0.0, 0.0], [3.0, 4.0], 1.0), [0.6, 0.8])
    np.testing.assert_allclose(hlp_waypoint([0.0, 0.0], [0.3, 0.4], 1.0), [0.3, 0.4])
    with pytest.raises(DomainError):
        hlp_waypoint([0.0], [1.0], 0.0)


def test_sup_polynomials_values_and_subgradients():
    k, x = parameter_id(0), time_id(0)
    kk = PolyZonotope.from_generators(0.0, [(1.0, k)])
    xx = PolyZonotope.from_generators(0.0, [(1.0, x)])
    row = 0.5 + 2.0 * kk + (kk - 0.25) * xx
    rows = SupPolynomials([row], [k])

    values, grads = rows.evaluate(np.array([0.75]))
    assert values[0] == pytest.approx(2.5)
    assert grads[0, 0] == pytest.approx(3.0)

    values, grads = rows.evaluate(np.array([0.0]))
    assert values[0] == pytest.approx(0.75)
    assert grads[0, 0] == pytest.approx(1.0)


def test_sup_polynomials_need_scalar_rows():
    with pytest.raises(DimensionError):
        SupPolynomials([PolyZonotope.zeros((2,))], [parameter_id(0)])


def test_constraint_counts(planar_scenario, planar_problem):
    assert planar_problem.n_constraints == 24
    assert planar_scenario.constraint_count() == 12
    assert planar_scenario.constraint_count(1) == 24
    kinds = planar_problem.kinds()
    assert (kinds == ConstraintKind.OBSTACLE.value).sum() == 12
    assert (kinds == ConstraintKind.SLIP.value).sum() == 4


def test_bundled_constraint_count(bundled):
    assert bundled.partition.n_intervals == 40
    assert bundled.constraint_count() == 280


def test_eval_k_gradient_matches_finite_differences(planar_problem, rng):
    k = rng.uniform(-0.8, 0.8, 2)
    ev = eval_k(planar_problem, k)
    h = 1e-6

    for j in range(2):
        step = np.zeros(2)
        step[j] = h
        up, down = eval_k(planar_problem, k + step), eval_k(planar_problem, k - step)
        np.testing.assert_allclose((up.values - down.values) / (2 * h), ev.grads[:, j], rtol=1e-4, atol=1e-6)
        assert (up.cost - down.cost) / (2 * h) == pytest.approx(ev.cost_grad[j], rel=1e-4, abs=1e-8)


def test_far_obstacle_is_cleared(planar_problem):
    ev = eval_k(planar_problem, np.zeros(2))
    obstacle = planar_problem.kinds() == ConstraintKind.OBSTACLE.value

    assert np.all(ev.values[obstacle] < 0)


def test_eval_k_rejects_bad_parameters(planar_problem):
    with pytest.raises(DomainError):
        eval_k(planar_problem, np.array([1.2, 0.0]))
    with pytest.raises(DimensionError):
        eval_k(planar_problem, np.zeros(3))


def test_unconstrained_solve_hits_least_squares_target():
    problem = unconstrained_problem([0.01, 0.49])

    result = solve(problem, SolverParams(restarts=0))

    assert result.status == PlanStatus.FEASIBLE
    np.testing.assert_allclose(result.k, least_squares_target(problem))
    np.testing.assert_allclose(problem.position_at_plan_time(result.k), [0.01, 0.49], atol=1e-9)


def test_unreachable_waypoint_is_clamped():
    problem = unconstrained_problem([1.0, -1.0])

    result = solve(problem, SolverParams(restarts=0))

    assert result.feasible
    np.testing.assert_allclose(result.k, [1.0, -1.0])


def test_enforced_zero_budget_brakes():
    problem = unconstrained_problem([0.01, 0.49])

    result = solve(problem, SolverParams(time_budget=0.0, enforce_budget=True))

    assert result.status == PlanStatus.BRAKING
    assert result.k is None
    assert result.overrun


@pytest.mark.slow
def test_solved_plan_satisfies_its_constraints(planar_scenario, planar_problem):
    result = solve(planar_problem, planar_scenario.solver)

    assert result.feasible
    assert np.all(eval_k(planar_problem, result.k).values <= 0)
    assert set(result.constraint_max) == {"sep", "slip", "tip", "obs"}


@pytest.mark.slow
def test_nearby_goal_is_reached_in_one_iteration(planar_scenario):
    scn = planar_scenario.with_changes(goal=np.array([0.02, 0.49]))

    log = receding_horizon(scn)

    assert log.outcome == Outcome.GOAL_REACHED
    assert log.exit_code == 0
    assert len(log.records) == 1
    segment = log.records[0].segment
    assert (segment.t_start, segment.t_end) == (0.0, scn.t_final)
    np.testing.assert_allclose(log.final_desired(), scn.goal, atol=scn.goal_tolerance)


@pytest.mark.slow
def test_new_obstacle_around_the_arm_forces_a_safe_stop(planar_scenario):
    trap = Obstacle.box([0.25, 0.25, 0.1], [1.0, 1.0, 1.0], name="trap")
    scn = planar_scenario.with_changes(events=(ObstacleEvent(1, trap),))
    seen = []

    log = receding_horizon(scn, on_iteration=seen.append)

    assert log.outcome == Outcome.SAFE_STOP
    assert log.exit_code == 2
    assert len(seen) == 2
    assert seen[0].result.feasible and not seen[1].result.feasible
    tail = log.records[1].segment
    assert tail.braking
    assert (tail.t_start, tail.t_end) == (scn.t_plan, scn.t_final)
    _, qd, _ = eval_desired(tail.trajectory(), tail.t_end)
    np.testing.assert_allclose(qd, 0.0, atol=1e-12)


@pytest.mark.slow
def test_iteration_cap_brakes_the_last_plan(planar_scenario):
    log = receding_horizon(planar_scenario, max_iterations=1)

    assert log.outcome == Outcome.ITERATION_CAP
    assert log.exit_code == 2
    assert log.tail is not None and log.tail.braking
    assert [s.t_end for s in log.segments] == [planar_scenario.t_plan, planar_scenario.t_final]


def smooth_around(problem, k, h):
    """True when no |g_m| term changes sign and no obstacle changes its active row within h of k."""
    rows = problem.rows
    starts = np.searchsorted(problem.row_owner, np.arange(problem.n_constraints))

    def pattern(x):
        mono = np.prod(x[None, :] ** rows.kexp, axis=1)
        g = np.bincount(rows.groups, rows.coeffs * mono, minlength=rows.n_groups)
        values, _ = rows.evaluate(x, gradient=False)
        active = np.lexsort((np.arange(values.size), values, problem.row_owner))[starts]
        return np.sign(g[~rows.group_const]), active

    signs, active = pattern(k)
    for j in range(k.size):
        for direction in (-1.0, 1.0):
            step = np.zeros(k.size)
            step[j] = direction * h
            other_signs, other_active = pattern(k + step)
            if not (np.array_equal(signs, other_signs) and np.array_equal(active, other_active)):
                return False
    return True


@pytest.fixture(scope="module")
def bundled_problem(bundled):
    return build_iteration(bundled, InitialCondition.at_rest(bundled.start))


@pytest.mark.slow
def test_bundled_gradients_match_finite_differences(bundled_problem):
    rng = np.random.default_rng(0)
    h = 1e-6
    checked = 0

    for k in rng.uniform(-0.95, 0.95, (100, bundled_problem.n_k)):
        if not smooth_around(bundled_problem, k, h):
            continue
        ev = eval_k(bundled_problem, k)
        for j in range(bundled_problem.n_k):
            step = np.zeros(bundled_problem.n_k)
            step[j] = h
            up, down = eval_k(bundled_problem, k + step, False), eval_k(bundled_problem, k - step, False)
            np.testing.assert_allclose((up.values - down.values) / (2 * h), ev.grads[:, j], rtol=1e-5, atol=1e-6)
            assert (up.cost - down.cost) / (2 * h) == pytest.approx(ev.cost_grad[j], rel=1e-5, abs=1e-8)
        checked += 1

    assert checked >= 90


@pytest.mark.slow
def test_next_iteration_starts_from_the_desired_state_at_plan_time(planar_scenario):
    log = receding_horizon(planar_scenario, max_iterations=2)

    assert len(log.records) == 2
    first, second = log.records
    q, qd, qdd = eval_desired(first.segment.trajectory(), planar_scenario.t_plan)
    np.testing.assert_array_equal(second.ic.q0, q)
    np.testing.assert_array_equal(second.ic.v0, qd)
    np.testing.assert_array_equal(second.ic.a0, qdd)
