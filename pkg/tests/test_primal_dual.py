from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest

from scenopt.engine import Network
from scenopt.graph import Topology, complete, ring
from scenopt.helpers import make_stream
from scenopt.oracle import solve_lp_by_vertices
from scenopt.primal_dual import ConfigurationError, PDConfig, PDNodeState, ProtocolError, augmented_lagrangian, \
    g_eval, g_subgrad, local_disagreement, modified_multiplier, pd_round, penalty, primal_direction, round_terms
from scenopt.problems.domain import BallDomain, BoxDomain
from scenopt.problems.halfspace import halfspace_problem, sampled_halfspace_family
from scenopt.scenario import ScenarioSet, draw_scenarios
from scenopt.schedule import StepSchedule


def _empty_sets(count, dimension):
    return [ScenarioSet(j, np.zeros((0, dimension + 1))) for j in range(count)]


def test_local_disagreement():
    weights = np.array([[0.5, 0.5], [0.5, 0.5]])
    assert np.array_equal(local_disagreement(0, [1.0], {1: np.array([0.0])}, weights), np.array([0.5]))
    assert np.array_equal(local_disagreement(0, [2.0, 1.0], {1: np.array([2.0, 1.0])}, weights), np.zeros(2))


def test_disagreements_sum_to_zero_on_undirected_graphs():
    network = Network(ring(5))
    rng = make_stream(6)
    thetas = [rng.standard_normal(3) for _ in range(5)]
    inboxes = network.exchange(thetas)
    total = sum(local_disagreement(j, thetas[j], inboxes[j], network.get_matrix()) for j in range(5))
    assert np.allclose(total, 0.0, rtol=0.0, atol=1e-12)


def test_modified_multiplier():
    assert np.array_equal(modified_multiplier([0.0], [0.0], 1.0), np.array([0.0]))
    assert np.array_equal(modified_multiplier([1.0], [2.0], 0.5), np.array([2.0]))
    assert np.array_equal(modified_multiplier([1.0, -1.0], [3.0, 4.0], 0.0), np.array([1.0, -1.0]))


def test_g_eval():
    family = sampled_halfspace_family(2)
    box = BoxDomain.symmetric(2, 10.0)
    samples = np.array([[1.0, 0.0, 1.0], [0.0, 1.0, 2.0]])
    assert np.array_equal(g_eval([0.5, 0.5], box, family, samples), np.zeros(3))
    assert np.array_equal(g_eval([2.0, 0.0], BallDomain([0.0, 0.0], 1.0), family, np.zeros((0, 3))),
                          np.array([1.0]))
    assert np.array_equal(g_eval([3.0, 0.0], box, family, samples[:1]), np.array([0.0, 2.0]))


def test_g_subgrad():
    family = sampled_halfspace_family(2)
    box = BoxDomain.symmetric(2, 10.0)
    samples = np.array([[1.0, 0.0, 1.0], [0.0, 1.0, 2.0]])
    assert np.array_equal(g_subgrad([0.5, 0.5], box, family, samples), np.zeros((3, 2)))

    rows = g_subgrad([2.0, 0.0], BallDomain([0.0, 0.0], 1.0), family, samples)
    assert np.array_equal(rows[0], np.array([1.0, 0.0]))
    assert np.array_equal(rows[1], np.array([1.0, 0.0]))
    assert np.array_equal(rows[2], np.zeros(2))


def test_g_subgradient_inequality():
    rng = make_stream(12)
    problem = halfspace_problem([1.0, 1.0], half_width=1.0)
    samples = draw_scenarios(problem, 6, rng).get_samples()
    domain = problem.get_domain()
    family = problem.get_family()
    for _ in range(200):
        theta = 2.0 * rng.standard_normal(2)
        theta_prime = 2.0 * rng.standard_normal(2)
        lower = g_eval(theta, domain, family, samples) + g_subgrad(theta, domain, family, samples) @ (theta_prime - theta)
        assert np.all(g_eval(theta_prime, domain, family, samples) >= lower - 1e-9)


def test_primal_direction_at_feasible_consensus():
    problem = halfspace_problem([1.0, -2.0])
    network = Network(ring(3))
    states = [PDNodeState.initial(2, 4) for _ in range(3)]
    sets = [draw_scenarios(problem, 4, make_stream(0, j), j) for j in range(3)]
    for terms in round_terms(states, network, problem, sets, 1.0):
        assert np.array_equal(terms.get_direction(), np.array([1.0, -2.0]))
        assert np.array_equal(terms.get_residual(), np.zeros(5))

    single = Network(Topology(1))
    direction = round_terms([PDNodeState.initial(2, 0)], single, problem, _empty_sets(1, 2), 1.0)[0].get_direction()
    assert np.array_equal(direction, np.array([1.0, -2.0]))


def test_primal_direction_missing_message():
    column = np.array([0.5, -0.5])
    with pytest.raises(ProtocolError):
        primal_direction(0, [1.0], np.zeros((1, 1)), np.zeros(1), np.zeros(1), 1.0, {0: np.array([1.0])}, column)


def test_primal_direction_matches_finite_differences():
    rng = make_stream(31)
    problem = halfspace_problem([0.7, -0.4], half_width=10.0, offset_low=-0.5, offset_high=0.5)
    network = Network(complete(3))
    sets = [draw_scenarios(problem, 3, make_stream(1, j), j) for j in range(3)]
    rho = 0.8
    states = [PDNodeState(rng.standard_normal(2), rng.standard_normal(2), rng.random(4)) for _ in range(3)]

    directions = [terms.get_direction() for terms in round_terms(states, network, problem, sets, rho)]
    step = 1e-6
    for j in range(3):
        for coordinate in range(2):
            shifted = []
            for sign in (1.0, -1.0):
                theta = states[j].get_theta().copy()
                theta[coordinate] += sign * step
                moved = list(states)
                moved[j] = PDNodeState(theta, states[j].get_lambda(), states[j].get_gamma())
                shifted.append(augmented_lagrangian(moved, network, problem, sets, rho))
            estimate = (shifted[0] - shifted[1]) / (2.0 * step)
            assert abs(estimate - directions[j][coordinate]) < 1e-5


def test_round_uses_two_exchange_waves():
    problem = halfspace_problem([1.0, 0.0])
    network = Network(ring(4))
    sets = [draw_scenarios(problem, 3, make_stream(2, j), j) for j in range(4)]
    states = [PDNodeState.initial(2, 3) for _ in range(4)]
    config = PDConfig()
    for k in range(5):
        states = pd_round(states, network, config, k, problem, sets)
    assert network.get_wave_count() == 10


def test_round_rejects_directed_topology():
    problem = halfspace_problem([1.0, 0.0])
    with pytest.raises(ConfigurationError):
        pd_round([PDNodeState.initial(2, 0)] * 3, Network(ring(3, directed=True)), PDConfig(), 0, problem,
                 _empty_sets(3, 2))
    with pytest.raises(ConfigurationError):
        PDConfig(rho=0.0)


def test_step_size_without_clamp():
    problem = halfspace_problem([0.6, 0.0])
    states = pd_round([PDNodeState.initial(2, 0)], Network(Topology(1)), PDConfig(), 0, problem, _empty_sets(1, 2))
    assert states[0].get_alpha() == 1.0
    assert abs(states[0].get_direction_norm() - 0.6) < 1e-15
    assert np.allclose(states[0].get_theta(), [-0.6, 0.0], rtol=0.0, atol=1e-15)


def test_round_invariants():
    problem = halfspace_problem([1.0, 1.0], half_width=2.0)
    network = Network(ring(4))
    sets = [draw_scenarios(problem, 5, make_stream(3, j), j) for j in range(4)]
    config = PDConfig(rho=1.0, schedule=StepSchedule(2.0, 0.75))
    states = [PDNodeState.initial(2, 5) for _ in range(4)]
    for k in range(100):
        previous = states
        states = pd_round(states, network, config, k, problem, sets)
        zeta = config.get_schedule().step(k)
        for before, state in zip(previous, states):
            assert np.all(state.get_gamma() >= before.get_gamma())
            assert np.all(state.get_gamma() >= 0.0)
            assert state.get_alpha() * state.get_direction_norm() <= zeta * (1.0 + 1e-12)
            assert state.get_beta() * state.get_multiplier_norm() <= zeta * (1.0 + 1e-12)


def test_sequential_and_mapped_rounds_agree():
    problem = halfspace_problem([1.0, -1.0])
    network = Network(ring(5))
    sets = [draw_scenarios(problem, 4, make_stream(4, j), j) for j in range(5)]
    config = PDConfig()
    sequential = [PDNodeState.initial(2, 4) for _ in range(5)]
    threaded = list(sequential)
    with ThreadPoolExecutor(max_workers=3) as executor:
        for k in range(20):
            sequential = pd_round(sequential, network, config, k, problem, sets)
            threaded = pd_round(threaded, network, config, k, problem, sets, executor.map)
    for a, b in zip(sequential, threaded):
        assert np.array_equal(a.get_theta(), b.get_theta())
        assert np.array_equal(a.get_lambda(), b.get_lambda())
        assert np.array_equal(a.get_gamma(), b.get_gamma())


def test_augmented_lagrangian_at_feasible_consensus():
    problem = halfspace_problem([1.0, 2.0])
    network = Network(ring(3))
    sets = [draw_scenarios(problem, 4, make_stream(5, j), j) for j in range(3)]
    theta = np.array([0.1, -0.2])
    states = [PDNodeState(theta, np.zeros(2), np.zeros(5)) for _ in range(3)]
    assert penalty(states, network, problem, sets, 1.0) < 1e-20
    assert abs(augmented_lagrangian(states, network, problem, sets, 1.0) - 3.0 * (0.1 - 0.4)) < 1e-12

    rng = make_stream(5)
    scattered = [PDNodeState(5.0 * rng.standard_normal(2), np.zeros(2), np.zeros(5)) for _ in range(3)]
    assert penalty(scattered, network, problem, sets, 1.0) >= 0.0


def test_two_node_instance_reaches_lp_optimum():
    problem = halfspace_problem([1.0])
    sets = [ScenarioSet(0, [[-1.0, 0.8]]), ScenarioSet(1, [[-1.0, 1.2], [1.0, 1.0]])]
    expected = solve_lp_by_vertices(problem, sets)
    assert abs(expected.get_value() + 0.8) < 1e-12

    network = Network(ring(2))
    config = PDConfig(rho=1.0, schedule=StepSchedule(1.0, 0.6))
    states = [PDNodeState.initial(1, s.get_count()) for s in sets]
    for k in range(4000):
        states = pd_round(states, network, config, k, problem, sets)
    thetas = np.array([state.get_theta()[0] for state in states])
    assert abs(thetas.mean() - expected.get_theta_star()[0]) < 0.05
    assert abs(thetas[0] - thetas[1]) < 0.05


def test_iterates_keep_a_nonnegative_product_with_the_direction():
    # min -theta with theta <= 0.8 at node 0 and theta <= 1.2 at node 1; the saddle point
    # is theta = 0.8, lambda = (-1, 1) and a multiplier of 2 on the binding constraint
    problem = halfspace_problem([-1.0])
    sets = [ScenarioSet(0, [[1.0, 0.8]]), ScenarioSet(1, [[1.0, 1.2]])]
    theta_star = solve_lp_by_vertices(problem, sets).get_theta_star()
    assert abs(theta_star[0] - 0.8) < 1e-12
    lambda_star = [np.array([-1.0]), np.array([1.0])]
    gamma_star = [np.array([0.0, 2.0]), np.array([0.0, 0.0])]

    network = Network(ring(2))
    rho = 1.0
    config = PDConfig(rho=rho, schedule=StepSchedule(1.0, 0.6))
    states = [PDNodeState.initial(1, s.get_count()) for s in sets]
    for k in range(300):
        product = 0.0
        for j, terms in enumerate(round_terms(states, network, problem, sets, rho)):
            product += float((states[j].get_theta() - theta_star) @ terms.get_direction())
            product -= float((states[j].get_lambda() - lambda_star[j]) @ terms.get_disagreement())
            product -= float((states[j].get_gamma() - gamma_star[j]) @ terms.get_residual())
        assert product >= -1e-9
        states = pd_round(states, network, config, k, problem, sets)
