import math

import numpy as np
import pytest

from waiterplan.errors import DimensionError, DomainError, IncompleteAssignmentError, ScenarioError
from waiterplan.setops import (
    IndeterminateTag,
    Interval,
    PolyZonotope,
    Zonotope,
    allocation_scope,
    decode_dump,
    encode_dump,
    fresh_remainder_id,
    interval_sin,
    load_dump,
    parameter_id,
    pz_analytic,
    pz_bounds,
    pz_cross,
    pz_differentiate,
    pz_evaluate,
    pz_reduce,
    pz_sin_cos,
    pz_slice,
    save_dump,
    slice_many,
    time_id,
)

X = parameter_id(0)
Y = time_id(0)


def scalar(ident, center=0.0, radius=1.0):
    return PolyZonotope.from_generators(center, [(radius, ident)])


def test_product_of_linear_factors_cancels_the_linear_term():
    x = scalar(X)
    p = (1 + x) * (1 - x)

    assert p.n_generators == 1
    assert float(pz_evaluate(p, {X: 0.5})) == pytest.approx(0.75)
    bounds = pz_bounds(p)
    assert float(bounds.lo) == pytest.approx(0.0)
    assert float(bounds.hi) == pytest.approx(2.0)


def test_bounds_of_affine_set():
    bounds = pz_bounds(scalar(X, center=3.0, radius=4.0))

    assert float(bounds.lo) == pytest.approx(-1.0)
    assert float(bounds.hi) == pytest.approx(7.0)


def test_reduce_keeps_enclosure_and_term_budget():
    p = PolyZonotope.from_generators(0.0, [(1.0, fresh_remainder_id()) for _ in range(100)])

    reduced = pz_reduce(p, 40)

    assert reduced.n_generators == 41
    bounds = pz_bounds(reduced)
    assert float(bounds.hi) == pytest.approx(100.0)
    assert float(bounds.lo) == pytest.approx(-100.0)
    assert pz_reduce(p, 200) is p


def test_reduce_rejects_empty_budget():
    with pytest.raises(DomainError):
        pz_reduce(scalar(X), 0)


def test_slice_is_a_subset():
    x, y = scalar(X), scalar(Y)
    p = x * y + x

    sliced = pz_slice(p, X, 0.5)

    assert pz_bounds(sliced).is_subset_of(pz_bounds(p))
    assert float(pz_bounds(sliced).lo) == pytest.approx(0.0)
    assert float(pz_bounds(sliced).hi) == pytest.approx(1.0)


def test_slice_outside_unit_box_is_rejected():
    with pytest.raises(DomainError):
        pz_slice(scalar(X), X, 1.5)


def test_slice_of_unused_indeterminate_returns_the_set():
    p = scalar(X)
    assert pz_slice(p, Y, 0.3) is p


def test_evaluate_needs_every_indeterminate():
    p = scalar(X) * scalar(Y)

    with pytest.raises(IncompleteAssignmentError):
        pz_evaluate(p, {X: 0.2})
    assert float(pz_evaluate(p, {X: 0.2, Y: -0.5})) == pytest.approx(-0.1)


def test_differentiate_polynomial():
    x = scalar(X)
    derivative = pz_differentiate(1 - x * x, X)

    assert float(pz_evaluate(derivative, {X: 0.5})) == pytest.approx(-1.0)
    assert pz_differentiate(x, Y).is_point


def test_sin_cos_enclose_the_functions():
    p = scalar(X, center=0.3, radius=0.4)
    sin_p, cos_p = pz_sin_cos(p, degree=4)

    for x in np.linspace(-1.0, 1.0, 41):
        angle = 0.3 + 0.4 * x
        assert pz_bounds(pz_slice(sin_p, X, x)).contains(math.sin(angle), slack=1e-12)
        assert pz_bounds(pz_slice(cos_p, X, x)).contains(math.cos(angle), slack=1e-12)


def test_matrix_vector_product_and_slicing():
    v = PolyZonotope.from_generators(np.array([1.0, 0.0]), [(np.array([0.0, 1.0]), X)])
    rotation = np.array([[0.0, -1.0], [1.0, 0.0]])

    rotated = rotation @ v

    assert rotated.shape == (2,)
    np.testing.assert_allclose(pz_evaluate(rotated, {X: 0.5}), [-0.5, 1.0])
    with pytest.raises(DimensionError):
        np.ones(3) @ v


def test_slice_many_ignores_absent_ids():
    p = scalar(X) + scalar(Y)
    sliced = slice_many(p, {X: 1.0, time_id(5): 0.0})

    assert sliced.ids == (Y,)
    assert float(sliced.center) == pytest.approx(1.0)


def test_allocation_scope_gives_reproducible_remainder_ids():
    with allocation_scope(3):
        first = [fresh_remainder_id() for _ in range(2)]
    with allocation_scope(3):
        second = [fresh_remainder_id() for _ in range(2)]

    assert first == second
    assert [i.index for i in first] == [0, 1]
    assert all(i.tag == IndeterminateTag.REMAINDER and i.scope == 3 for i in first)
    assert not first[0].sliceable


def test_interval_arithmetic():
    product = Interval(-1.0, 2.0) * Interval(3.0, 4.0)
    assert (float(product.lo), float(product.hi)) == (-4.0, 8.0)

    sine = interval_sin(Interval(0.0, math.pi))
    assert float(sine.hi) == 1.0
    assert float(sine.lo) == pytest.approx(0.0, abs=1e-12)

    with pytest.raises(DomainError):
        Interval(2.0, 1.0)


def test_zonotope_points_stay_inside_its_box(rng):
    z = Zonotope(np.array([1.0, 0.0, -1.0]), np.array([[0.1, 0.2, 0.0], [0.0, 0.1, 0.3]]))
    box = z.to_interval()

    for point in z.sample(rng, 50):
        assert box.contains(point, slack=1e-12)
    np.testing.assert_allclose(z.point(np.array([1.0, -1.0])), [1.1, 0.1, -1.3])


def test_dump_round_trip(tmp_path):
    x, y = scalar(X), scalar(Y)
    entries = {"q": PolyZonotope.from_generators(np.array([0.1, 0.2]), [(np.array([1.0, 0.5]), X)]),
               "sep": 1 - x * y}
    path = tmp_path / "reach.wpz"

    save_dump(path, entries)
    loaded = load_dump(path)

    assert list(loaded) == ["q", "sep"]
    for name, p in entries.items():
        assert loaded[name].ids == p.ids
        np.testing.assert_array_equal(loaded[name].expmat, p.expmat)
        np.testing.assert_array_equal(loaded[name].coeffs, p.coeffs)


def test_dump_rejects_bad_data():
    data = encode_dump({"x": scalar(X)})

    with pytest.raises(ScenarioError):
        decode_dump(data[:-3])
    with pytest.raises(ScenarioError):
        decode_dump(b"NOPE" + data[4:])


def linear_pz(rng, ids, shape=()):
    return PolyZonotope.from_generators(rng.normal(size=shape), [(rng.normal(size=shape), i) for i in ids])


def assert_same_polynomial(p, q):
    assert p.ids == q.ids
    np.testing.assert_array_equal(p.expmat, q.expmat)
    np.testing.assert_allclose(p.coeffs, q.coeffs, rtol=0.0, atol=1e-12)


def test_sum_and_product_are_associative_and_distributive(rng):
    Z = parameter_id(1)
    a, b, c = linear_pz(rng, [X, Y]), linear_pz(rng, [Y, Z]), linear_pz(rng, [X, Z])

    assert_same_polynomial((a + b) + c, a + (b + c))
    assert_same_polynomial((a * b) * c, a * (b * c))
    assert_same_polynomial(a * (b + c), a * b + a * c)
    for x in (-1.0, 0.25, 1.0):
        left = pz_slice((a * b) * c, X, x)
        right = pz_slice(a * (b * c), X, x)
        for y, z in rng.uniform(-1.0, 1.0, (5, 2)):
            assert float(pz_evaluate(left, {Y: y, Z: z})) == pytest.approx(float(pz_evaluate(right, {Y: y, Z: z})))


def test_cross_product_of_basis_vectors():
    e1, e2, e3 = (PolyZonotope.constant(v) for v in np.eye(3))

    np.testing.assert_allclose(pz_cross(e1, e2).center, [0.0, 0.0, 1.0])
    np.testing.assert_allclose(pz_cross(e2, e3).center, [1.0, 0.0, 0.0])
    np.testing.assert_allclose(pz_cross(e3, e1).center, [0.0, 1.0, 0.0])
    assert pz_cross(e1, e1).is_point
    np.testing.assert_allclose(pz_cross(e1, e1).center, 0.0)
    with pytest.raises(DimensionError):
        pz_cross(PolyZonotope.constant(np.ones(2)), e1)


def test_cross_product_contains_sampled_products(rng):
    Z = parameter_id(1)
    a, b = linear_pz(rng, [X, Y], (3,)), linear_pz(rng, [Z], (3,))
    product = pz_cross(a, b)
    box = pz_bounds(product)

    for x, y, z in rng.uniform(-1.0, 1.0, (1000, 3)):
        expected = np.cross(pz_evaluate(a, {X: x, Y: y}), pz_evaluate(b, {Z: z}))
        np.testing.assert_allclose(pz_evaluate(product, {X: x, Y: y, Z: z}), expected, atol=1e-12)
        assert box.contains(expected, slack=1e-12)


def sliced_ranges(p, ident, xs):
    """Bounds of p sliced at ident = x for each x, for a polynomial in ident plus linear independent terms."""
    center, radius = np.zeros_like(xs), np.zeros_like(xs)
    for coeff, powers in p.terms():
        if set(powers) <= {ident}:
            center += float(coeff) * xs ** powers.get(ident, 0)
        else:
            assert set(powers.values()) == {1} and len(powers) == 1
            radius += abs(float(coeff))
    return center - radius, center + radius


@pytest.mark.parametrize("center, radius", [(0.3, 0.2), (1.0, math.pi / 4)])
def test_sin_cos_enclosures_hold_at_dense_samples(center, radius, rng):
    p = scalar(X, center=center, radius=radius)
    xs = np.concatenate([[-1.0, 0.0, 1.0], rng.uniform(-1.0, 1.0, 100_000)])

    for f, exact in (("sin", np.sin), ("cos", np.cos)):
        lo, hi = sliced_ranges(pz_analytic(p, f, degree=6), X, xs)
        values = exact(center + radius * xs)
        assert np.all(values >= lo - 1e-12)
        assert np.all(values <= hi + 1e-12)


def test_reduce_keeps_dependent_terms_first():
    dependent = [(0.1 * (j + 1), parameter_id(j)) for j in range(3)]
    independent = [(1.0, fresh_remainder_id()) for _ in range(5)]
    p = PolyZonotope.from_generators(0.0, dependent + independent)

    reduced = pz_reduce(p, 3)

    assert reduced.n_generators == 4
    assert [i for i in reduced.ids if i.sliceable] == [parameter_id(j) for j in range(3)]
    assert float(pz_bounds(reduced).hi) == pytest.approx(5.6)
    sliced = pz_bounds(slice_many(reduced, {parameter_id(j): 1.0 for j in range(3)}))
    assert float(sliced.lo) == pytest.approx(0.6 - 5.0)
    assert float(sliced.hi) == pytest.approx(0.6 + 5.0)
