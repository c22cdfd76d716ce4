import numpy as np
import pytest

from waiterplan.errors import ModelError
from waiterplan.kinematics import ExtendedArmModel, JointKind, JointModel, Obstacle, fk, fo, pzfk, pzfo
from waiterplan.setops import PolyZonotope, Zonotope, parameter_id, pz_bounds, slice_many


def joint_set(center):
    return PolyZonotope.from_generators(
        np.asarray(center, dtype=float),
        [(np.array([0.1, 0.0]), parameter_id(0)), (np.array([0.0, 0.1]), parameter_id(1))],
    )


def test_planar_model_layout(planar_model):
    assert planar_model.n_q == 2
    assert planar_model.n_links == 3
    assert planar_model.object_link == 2
    assert planar_model.actuated == [0, 1]
    assert planar_model.coordinate_of == [0, 1, None]


def test_fk_positions(planar_model):
    frames = fk(planar_model, np.zeros(2))
    np.testing.assert_allclose(frames[1][1], [0.3, 0.0, 0.1])
    np.testing.assert_allclose(frames[2][1], [0.5, 0.0, 0.11])

    frames = fk(planar_model, np.array([np.pi / 2, 0.0]))
    np.testing.assert_allclose(frames[1][1], [0.0, 0.3, 0.1], atol=1e-12)
    np.testing.assert_allclose(frames[2][1], [0.0, 0.5, 0.11], atol=1e-12)


def test_fk_orientation_accumulates_joint_angles(planar_model):
    a, b = 0.4, -1.1
    R, _ = fk(planar_model, np.array([a, b]))[-1]
    c, s = np.cos(a + b), np.sin(a + b)

    np.testing.assert_allclose(R, [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]], atol=1e-12)


def test_fo_places_link_volumes(planar_model):
    occupancy = fo(planar_model, np.zeros(2))

    np.testing.assert_allclose(occupancy[0].center, [0.15, 0.0, 0.1])
    np.testing.assert_allclose(np.abs(occupancy[0].generators).sum(axis=0), [0.15, 0.02, 0.02])


def test_pzfk_contains_sampled_configurations(planar_model, rng):
    center = np.array([0.2, -0.4])
    frames = pzfk(planar_model, joint_set(center), max_terms=20, degree=4)

    for x in rng.uniform(-1.0, 1.0, (20, 2)):
        assignment = {parameter_id(0): x[0], parameter_id(1): x[1]}
        for (R_pz, p_pz), (R, p) in zip(frames, fk(planar_model, center + 0.1 * x)):
            assert pz_bounds(slice_many(R_pz, assignment)).contains(R, slack=1e-9)
            assert pz_bounds(slice_many(p_pz, assignment)).contains(p, slack=1e-9)


def test_pzfo_contains_sampled_link_points(planar_model, rng):
    center = np.array([-0.3, 0.9])
    occupancy = pzfo(planar_model, joint_set(center), max_terms=20, degree=4)

    for x in rng.uniform(-1.0, 1.0, (20, 2)):
        assignment = {parameter_id(0): x[0], parameter_id(1): x[1]}
        for fo_pz, link in zip(occupancy, fo(planar_model, center + 0.1 * x)):
            point = link.point(rng.uniform(-1.0, 1.0, link.n_generators))
            assert pz_bounds(slice_many(fo_pz, assignment)).contains(point, slack=1e-9)


def test_obstacle_box_halfspaces():
    box = Obstacle.box([0.0, 0.0, 0.0], [1.0, 1.0, 1.0], name="crate")

    assert box.A.shape == (6, 3)
    assert box.contains(np.zeros(3))
    assert not box.contains(np.array([1.5, 0.0, 0.0]))

    far = Zonotope(np.array([3.0, 0.0, 0.0]), 0.5 * np.eye(3))
    near = Zonotope(np.array([0.5, 0.0, 0.0]), 0.5 * np.eye(3))
    assert box.separation(far) == pytest.approx(-1.5)
    assert box.separation(near) == pytest.approx(1.0)


def test_flat_obstacle_is_inflated():
    sheet = Obstacle.from_zonotope(Zonotope(np.zeros(3), np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])))

    assert sheet.inflated
    assert sheet.contains(np.zeros(3))


def test_model_requires_fixed_object_joint(planar_model):
    joints = planar_model.joints[:-1] + (JointModel(JointKind.REVOLUTE),)

    with pytest.raises(ModelError):
        ExtendedArmModel(joints, planar_model.link_volumes, planar_model.nominal,
                         planar_model.lower, planar_model.upper)


def test_revolute_axis_must_be_unit():
    with pytest.raises(ModelError):
        JointModel(JointKind.REVOLUTE, axis=np.array([0.0, 0.0, 2.0]))
