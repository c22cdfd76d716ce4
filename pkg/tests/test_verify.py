import numpy as np
import pytest

from waiterplan.dynamics import mass_matrix
from waiterplan.errors import DomainError
from waiterplan.kinematics import Obstacle
from waiterplan.planner import CommittedSegment, build_iteration, receding_horizon
from waiterplan.traj import InitialCondition
from waiterplan.verify import (
    STAGES,
    VerificationReport,
    audit_report,
    closed_loop_sim,
    containment_audit,
    forward_dynamics,
    random_trial_scenario,
    report_exit_code,
    rk4_step,
    segment_audit,
)

ETA1 = np.full(2, np.pi / 72)
NEAR_BOX = Obstacle.box([0.3, 0.4, 0.1], [0.05, 0.05, 0.05], name="near")


def segment(k=(0.25, -0.5), t_end=1.0):
    ic = InitialCondition.at_rest([0.0, 0.5])
    return CommittedSegment(0, ic, np.asarray(k, dtype=float), ETA1, ic.q0.copy(), 2.0, 0.0, t_end)


def free_motion(model):
    # both joint axes are parallel to gravity, so the unactuated arm coasts
    return lambda q, qd: (qd, forward_dynamics(model, q, qd, np.zeros(2)))


@pytest.fixture(scope="module")
def bundled_segments(bundled):
    return receding_horizon(bundled, max_iterations=1).segments


def test_sampled_points_lie_in_their_sets(planar_scenario):
    scn = planar_scenario.with_changes(obstacles=(NEAR_BOX,))

    report = containment_audit(scn, 40, seed=5)

    assert report.ok, audit_report([report])
    assert set(report.samples) == set(STAGES)
    assert report.samples["obstacle"] == 40 * scn.model.n_links


def test_obstacle_stage_catches_a_moved_obstacle(planar_scenario):
    scn = planar_scenario.with_changes(obstacles=(NEAR_BOX,))
    problem = build_iteration(scn, InitialCondition.at_rest(scn.start), obstacles=[NEAR_BOX], workers=1)
    moved = Obstacle.box([1.3, 0.4, 0.1], [0.05, 0.05, 0.05], name="moved")

    report = containment_audit(scn, 5, seed=2, stages=["obstacle"], problem=problem, obstacles=[moved])

    assert not report.ok
    assert {v.check for v in report.violations} == {"obstacle"}
    assert containment_audit(scn, 5, seed=2, stages=["obstacle"], problem=problem).ok
    with pytest.raises(DomainError):
        containment_audit(scn, 5, stages=["obstacle"], problem=problem, obstacles=[])


def test_containment_audit_stage_selection(planar_scenario):
    report = containment_audit(planar_scenario, 5, seed=1, stages=["trajectory", "fo"])

    assert set(report.samples) == {"trajectory", "fo"}
    with pytest.raises(DomainError):
        containment_audit(planar_scenario, 5, stages=["everything"])
    with pytest.raises(DomainError):
        containment_audit(planar_scenario, 0)


def test_slow_segment_keeps_contact_and_clearance(planar_scenario):
    scn = planar_scenario.with_changes(obstacles=(Obstacle.box([2.0, 2.0, 0.1], [0.2, 0.2, 0.2]),))

    report = segment_audit(scn, [segment()], 30, seed=2)

    assert report.ok, audit_report([report])
    assert report.samples["sep"] == 30
    assert report.samples["collision"] == 30 * scn.model.n_links


def test_segment_outside_parameter_box_is_reported(planar_scenario):
    report = segment_audit(planar_scenario, [segment(k=(1.5, 0.0))], 10)

    assert [v.check for v in report.violations] == ["parameter_box"]
    assert report.violations[0].margin == pytest.approx(-0.5)
    assert "sep" not in report.samples
    assert report_exit_code([report]) == 3
    with pytest.raises(DomainError):
        segment_audit(planar_scenario, [segment()], 0)


def test_closed_loop_run_logs_every_step(planar_scenario):
    trace, report = closed_loop_sim(planar_scenario, [segment(t_end=0.1)], dt_sim=0.01, seed=4)

    assert len(trace) == 11
    assert trace.q.shape == (11, 2)
    assert trace.residuals.shape == (11, 3)
    np.testing.assert_allclose(trace.e[0], 0.0, atol=1e-12)
    np.testing.assert_allclose(trace.t[-1], 0.1)
    assert report.samples["position_error"] == 11
    assert set(report.samples) == {"position_error", "velocity_error", "contact"}


def test_closed_loop_rejects_bad_inputs(planar_scenario):
    with pytest.raises(DomainError):
        closed_loop_sim(planar_scenario, [segment()], dt_sim=0.0)
    with pytest.raises(DomainError):
        closed_loop_sim(planar_scenario, [])
    with pytest.raises(DomainError):
        closed_loop_sim(planar_scenario, [segment()], params_true=planar_scenario.model.upper * 2.0)


def test_report_merge_and_summary():
    first = VerificationReport("a")
    first.record("contact", 0.1, seed=0, sample=0)
    second = VerificationReport("a")
    second.record("contact", -0.2, seed=7, sample=3, detail="t=0.5")

    merged = first.merge(second)

    assert merged.samples == {"contact": 2}
    assert merged.worst_margin["contact"] == pytest.approx(-0.2)
    assert not merged.ok
    text = audit_report([merged])
    assert "[a] 2 samples, 1 violations" in text
    assert "VIOLATION contact seed=7 sample=3" in text
    assert text.splitlines()[-1] == "total: 2 samples, 1 violations"
    assert audit_report([]) == ""
    assert report_exit_code([first]) == 0


def test_slack_tolerates_tiny_excursions():
    report = VerificationReport("r")
    report.record("fo", -1e-12, seed=0, sample=0, slack=1e-9)

    assert report.ok


def test_random_trial_scenario(bundled):
    scn = random_trial_scenario(11, base=bundled, n_obstacles=2, max_iterations=4)

    assert scn.name.endswith("trial11")
    assert len(scn.obstacles) == 2
    assert scn.max_iterations == 4
    assert scn.model.within_limits(scn.start) and scn.model.within_limits(scn.goal)
    again = random_trial_scenario(11, base=bundled, n_obstacles=2, max_iterations=4)
    np.testing.assert_array_equal(scn.start, again.start)


def test_rk4_step_is_fourth_order(planar_model):
    free = free_motion(planar_model)

    def final_state(n_steps):
        q, qd = np.array([0.0, 0.5]), np.array([1.0, -0.5])
        for _ in range(n_steps):
            q, qd = rk4_step(free, q, qd, 0.4 / n_steps)
        return np.concatenate([q, qd])

    coarse, medium, fine = final_state(10), final_state(20), final_state(40)

    ratio = np.linalg.norm(coarse - medium) / np.linalg.norm(medium - fine)
    assert 10.0 < ratio < 24.0


def test_free_motion_keeps_kinetic_energy(planar_model):
    free = free_motion(planar_model)
    q, qd = np.array([0.0, 0.5]), np.array([1.0, -0.5])

    def energy(q, qd):
        return 0.5 * qd @ mass_matrix(planar_model, q) @ qd

    start = energy(q, qd)
    for _ in range(1000):
        q, qd = rk4_step(free, q, qd, 1e-3)

    assert abs(energy(q, qd) - start) < 1e-6


def test_closed_loop_converges_as_the_step_shrinks(planar_scenario):
    run = [segment(t_end=0.2)]
    nominal = planar_scenario.model.nominal

    finals = [closed_loop_sim(planar_scenario, run, params_true=nominal, dt_sim=dt)[0].q[-1]
              for dt in (0.02, 0.01, 0.005)]

    # the input is held over each step, which limits the loop to first order
    first = np.linalg.norm(finals[0] - finals[1])
    second = np.linalg.norm(finals[1] - finals[2])
    assert 0.0 < second < 0.75 * first


@pytest.mark.slow
def test_bundled_sets_contain_sampled_points(bundled):
    report = containment_audit(bundled, bundled.verify_samples, seed=0)

    assert report.ok, audit_report([report])
    assert set(report.samples) == set(STAGES)


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(10))
def test_closed_loop_tracking_stays_within_bounds(bundled, bundled_segments, seed):
    assert bundled_segments
    params = bundled.model.sample_parameters(np.random.default_rng(seed))

    trace, report = closed_loop_sim(bundled, bundled_segments, params_true=params, seed=seed)

    assert report.ok, audit_report([report])
    assert np.all(trace.max_abs_error <= bundled.tracking.eps_p)
    assert np.all(trace.max_abs_velocity_error <= bundled.tracking.eps_v)


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(20))
def test_random_desk_trials_keep_contact_and_clearance(bundled, seed):
    scn = random_trial_scenario(seed, base=bundled, max_iterations=2)

    log = receding_horizon(scn)
    report = segment_audit(scn, log.segments, 200, seed=seed)

    assert report.ok, audit_report([report])
    if log.segments:
        assert report.samples["sep"] == 200 * len(log.segments)
        n_pairs = scn.model.n_links * len(scn.obstacles_at(0))
        assert report.samples.get("collision", 0) == 200 * len(log.segments) * n_pairs
