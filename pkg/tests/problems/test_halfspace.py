import numpy as np
import pytest

from scenopt.helpers import make_stream
from scenopt.problems.family import DimensionMismatchError
from scenopt.problems.halfspace import halfspace_problem, sampled_halfspace_family
from scenopt.scenario import ScenarioSet, draw_scenarios


def test_evaluate():
    family = sampled_halfspace_family(2)
    assert family.evaluate([2.0, 0.0], [1.0, 0.0, 1.0]) == 1.0
    assert family.evaluate([1.0, 5.0], [1.0, 0.0, 1.0]) == 0.0
    assert np.array_equal(family.subgradient([7.0, -3.0], [0.6, 0.8, 1.0]), np.array([0.6, 0.8]))


def test_affine_form():
    family = sampled_halfspace_family(2)
    normal, offset = family.affine_form([0.6, 0.8, 1.25])
    assert np.array_equal(normal, np.array([0.6, 0.8]))
    assert offset == 1.25
    assert family.is_affine()


def test_batched_evaluation_matches_single():
    problem = halfspace_problem([1.0, -1.0, 0.5])
    family = problem.get_family()
    samples = draw_scenarios(problem, 25, make_stream(9)).get_samples()
    theta = np.array([0.3, -1.2, 2.0])

    values = family.evaluate_many(theta, samples)
    gradients = family.subgradient_many(theta, samples)
    for index, q in enumerate(samples):
        assert abs(values[index] - family.evaluate(theta, q)) < 1e-12
        assert np.array_equal(gradients[index], family.subgradient(theta, q))
    assert family.evaluate_many(theta, np.zeros((0, 4))).shape == (0,)


def test_dimension_errors():
    family = sampled_halfspace_family(2)
    with pytest.raises(DimensionMismatchError):
        family.evaluate([1.0, 2.0], [1.0, 0.0])
    with pytest.raises(DimensionMismatchError):
        family.evaluate([1.0, 2.0, 3.0], [1.0, 0.0, 1.0])
    with pytest.raises(DimensionMismatchError):
        sampled_halfspace_family(0)


def test_halfspace_problem():
    problem = halfspace_problem([1.0, 1.0], half_width=4.0)
    assert problem.get_dimension() == 2
    assert np.array_equal(problem.get_domain().get_upper(), np.array([4.0, 4.0]))
    assert problem.objective_value([1.0, 2.0]) == 3.0

    samples = draw_scenarios(problem, 40, make_stream(1))
    assert all(problem.get_support().contains(q) for q in samples.get_samples())
    # positive offsets keep the origin feasible
    assert problem.max_violation(np.zeros(2), [samples]) == 0.0
    assert problem.max_violation([10.0, 0.0], [ScenarioSet(0, [[1.0, 0.0, 1.0]])]) == 9.0


def test_subgradient_inequality():
    rng = make_stream(17)
    problem = halfspace_problem([1.0, 0.0, 0.0])
    family = problem.get_family()
    samples = draw_scenarios(problem, 200, rng).get_samples()
    for q in samples:
        theta = rng.standard_normal(3)
        theta_prime = rng.standard_normal(3)
        lower = family.evaluate(theta, q) + family.subgradient(theta, q) @ (theta_prime - theta)
        assert family.evaluate(theta_prime, q) >= lower - 1e-9
