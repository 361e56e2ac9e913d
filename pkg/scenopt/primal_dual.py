# -*- coding: utf-8 -*-

# Python Scenario Optimizer
#
# This program is free software; you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation; either version 2 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# Further information about the license: http://www.gnu.org/licenses/gpl-2.0.html

"""
Networked primal-dual sub-gradient iteration over undirected graphs

Every node `j` keeps a copy `theta_j` of the decision, a consensus multiplier `lambda_j` and
an inequality multiplier `gamma_j` for the stacked residual

    g_j(theta_j) = [d(theta_j, Theta); f(theta_j, q_j1)_+; ...; f(theta_j, q_jn_j)_+]

A round runs two exchange waves. The first carries `theta_j` so that every node forms its
disagreement `b_j` and modified multiplier `lambda~_j = lambda_j + rho b_j`; the second
carries `lambda~_j`. All updates use the values from the start of the round.
"""

import logging

import numpy as np

from scenopt.helpers import as_vector, euclidean_norm, positive_part
from scenopt.schedule import StepSchedule

logger = logging.getLogger(__name__)

CHANNEL_THETA = "theta"
CHANNEL_MULTIPLIER = "lambda"


class ProtocolError(Exception):
    pass


class ConfigurationError(Exception):
    pass


class PDNodeState(object):
    """Iterates `(theta_j, lambda_j, gamma_j)` of one node

    The step sizes and direction norms of the round that produced the state are kept for
    diagnostics; they are `None` for an initial state.
    """

    def __init__(self, theta, lam, gamma, alpha=None, beta=None, direction_norm=None, multiplier_norm=None):
        self.__theta = as_vector(theta)
        self.__lambda = as_vector(lam, self.__theta.shape[0])
        self.__gamma = as_vector(gamma)
        self.__alpha = alpha
        self.__beta = beta
        self.__direction_norm = direction_norm
        self.__multiplier_norm = multiplier_norm

    @classmethod
    def initial(cls, dimension, sample_count):
        """Zero state with `sample_count + 1` inequality multipliers
        :rtype: PDNodeState
        """
        return cls(np.zeros(dimension), np.zeros(dimension), np.zeros(sample_count + 1))

    def get_theta(self):
        """:rtype: numpy.ndarray"""
        return self.__theta

    def get_lambda(self):
        """:rtype: numpy.ndarray"""
        return self.__lambda

    def get_gamma(self):
        """:rtype: numpy.ndarray"""
        return self.__gamma

    def get_alpha(self):
        """Returns the primal step size of the last round
        :rtype: float
        """
        return self.__alpha

    def get_beta(self):
        """Returns the dual step size of the last round
        :rtype: float
        """
        return self.__beta

    def get_direction_norm(self):
        """Returns `||T_j||` of the last round
        :rtype: float
        """
        return self.__direction_norm

    def get_multiplier_norm(self):
        """Returns `||(b_j, g_j)||` of the last round
        :rtype: float
        """
        return self.__multiplier_norm


class PDConfig(object):

    def __init__(self, rho=1.0, schedule=None):
        if not rho > 0:
            raise ConfigurationError("Penalty weight rho must be positive, got %r" % (rho,))
        self.__rho = float(rho)
        self.__schedule = StepSchedule() if schedule is None else schedule

    def get_rho(self):
        """:rtype: float"""
        return self.__rho

    def get_schedule(self):
        """:rtype: scenopt.schedule.StepSchedule"""
        return self.__schedule


def local_disagreement(j, theta_j, inbox, weights):
    """Returns `b_j = sum_i a_ji (theta_j - theta_i)` over the received states
    :type j: int
    :type inbox: dict
    :rtype: numpy.ndarray
    """
    matrix = np.asarray(weights, dtype=float)
    theta_j = as_vector(theta_j)
    disagreement = np.zeros(theta_j.shape[0])
    for i in sorted(inbox):
        if i != j:
            disagreement += matrix[j, i] * (theta_j - inbox[i])
    return disagreement


def modified_multiplier(lam, disagreement, rho):
    """Returns `lambda~_j = lambda_j + rho b_j`
    :rtype: numpy.ndarray
    """
    return as_vector(lam) + rho * as_vector(disagreement)


def g_eval(theta, domain, family, samples):
    """Returns `[d(theta, Theta); f(theta, q_1)_+; ...; f(theta, q_n_j)_+]`
    :type samples: numpy.ndarray
    :rtype: numpy.ndarray
    """
    theta = as_vector(theta)
    samples = np.asarray(samples, dtype=float)
    values = np.zeros(samples.shape[0] + 1)
    values[0] = domain.distance(theta)
    if samples.shape[0]:
        values[1:] = positive_part(family.evaluate_many(theta, samples))
    return values


def g_subgrad(theta, domain, family, samples):
    """Returns the `(n_j + 1, n)` matrix whose rows are sub-gradients of the entries of `g_j`
    :rtype: numpy.ndarray
    """
    theta = as_vector(theta)
    samples = np.asarray(samples, dtype=float)
    rows = np.zeros((samples.shape[0] + 1, theta.shape[0]))

    offset = theta - domain.project(theta)
    distance = euclidean_norm(offset)
    if distance > 0.0:
        rows[0] = offset / distance

    if samples.shape[0]:
        active = family.evaluate_many(theta, samples) > 0.0
        if np.any(active):
            rows[1:][active] = family.subgradient_many(theta, samples[active])
    return rows


def primal_direction(j, objective, subgradients, gamma, residual, rho, inbox, laplacian_column):
    """Returns `T_j = c + s_j' (gamma_j + rho g_j) + sum_i l_ij lambda~_i`

    The sum runs over every node with a nonzero Laplacian entry, `j` itself included;
    `inbox` maps those node indices to their modified multipliers.

    :rtype: numpy.ndarray
    """
    direction = as_vector(objective) + subgradients.T @ (gamma + rho * residual)
    column = np.asarray(laplacian_column, dtype=float)
    for i in range(column.shape[0]):
        if column[i] == 0.0:
            continue
        if i not in inbox:
            raise ProtocolError("Node %d is missing the modified multiplier of node %d" % (j, i))
        direction = direction + column[i] * inbox[i]
    return direction


class NodeTerms(object):
    """Round-k quantities of one node: disagreement `b_j`, residual `g_j`, the sub-gradient
    rows `s_j` and the primal direction `T_j`
    """

    def __init__(self, disagreement, residual, subgradients, direction):
        self.__disagreement = disagreement
        self.__residual = residual
        self.__subgradients = subgradients
        self.__direction = direction

    def get_disagreement(self):
        """:rtype: numpy.ndarray"""
        return self.__disagreement

    def get_residual(self):
        """:rtype: numpy.ndarray"""
        return self.__residual

    def get_subgradients(self):
        """:rtype: numpy.ndarray"""
        return self.__subgradients

    def get_direction(self):
        """:rtype: numpy.ndarray"""
        return self.__direction


def _exchange_multipliers(states, network, rho):
    thetas = [state.get_theta() for state in states]
    matrix = network.get_matrix()
    theta_inboxes = network.exchange(thetas, CHANNEL_THETA)
    disagreements = [local_disagreement(j, thetas[j], theta_inboxes[j], matrix) for j in range(len(states))]
    tilde = [modified_multiplier(states[j].get_lambda(), disagreements[j], rho) for j in range(len(states))]
    lambda_inboxes = network.exchange(tilde, CHANNEL_MULTIPLIER)
    for j, inbox in enumerate(lambda_inboxes):
        inbox[j] = tilde[j]
    return disagreements, lambda_inboxes


def round_terms(states, network, problem, scenario_sets, rho, mapper=map):
    """Runs both exchange waves of a round and returns the `NodeTerms` of every node
    :type states: list of PDNodeState
    :type problem: scenopt.problems.problem.ScenarioProblem
    :type scenario_sets: list of scenopt.scenario.ScenarioSet
    :rtype: list of NodeTerms
    """
    disagreements, inboxes = _exchange_multipliers(states, network, rho)
    laplacian_matrix = network.get_laplacian()
    domain = problem.get_domain()
    family = problem.get_family()

    def terms(j):
        theta = states[j].get_theta()
        samples = scenario_sets[j].get_samples()
        residual = g_eval(theta, domain, family, samples)
        subgradients = g_subgrad(theta, domain, family, samples)
        direction = primal_direction(j, problem.get_objective(), subgradients, states[j].get_gamma(), residual, rho,
                                     inboxes[j], laplacian_matrix[:, j])
        return NodeTerms(disagreements[j], residual, subgradients, direction)

    return list(mapper(terms, range(len(states))))


def pd_round(states, network, config, k, problem, scenario_sets, mapper=map):
    """Runs one synchronous round and returns the new states in node order

    :type states: list of PDNodeState
    :type config: PDConfig
    :type k: int
    :type problem: scenopt.problems.problem.ScenarioProblem
    :type scenario_sets: list of scenopt.scenario.ScenarioSet
    :param mapper: `map`-like callable used to run the node updates
    :rtype: list of PDNodeState
    """
    if network.get_topology().is_directed():
        raise ConfigurationError("The primal-dual iteration needs an undirected topology")

    zeta = config.get_schedule().step(k)
    all_terms = round_terms(states, network, problem, scenario_sets, config.get_rho(), mapper)

    updated = []
    for state, terms in zip(states, all_terms):
        direction_norm = euclidean_norm(terms.get_direction())
        multiplier_norm = euclidean_norm(np.concatenate([terms.get_disagreement(), terms.get_residual()]))
        alpha = zeta / max(1.0, direction_norm)
        beta = zeta / max(1.0, multiplier_norm)
        updated.append(PDNodeState(
            state.get_theta() - alpha * terms.get_direction(),
            state.get_lambda() + beta * terms.get_disagreement(),
            state.get_gamma() + beta * terms.get_residual(),
            alpha, beta, direction_norm, multiplier_norm
        ))
    logger.debug("Round %d: zeta %g, max |T| %g", k, zeta, max(s.get_direction_norm() for s in updated))
    return updated


def _stacked(states, network, problem, scenario_sets):
    thetas = np.array([state.get_theta() for state in states])
    couplings = network.get_laplacian() @ thetas
    residuals = [g_eval(state.get_theta(), problem.get_domain(), problem.get_family(),
                        scenario_sets[j].get_samples())
                 for j, state in enumerate(states)]
    return thetas, couplings, residuals


def penalty(states, network, problem, scenario_sets, rho):
    """Returns `h_rho = rho / 2 * sum_j (||(L_j x I) theta||^2 + ||g_j(theta_j)||^2)`
    :rtype: float
    """
    _, couplings, residuals = _stacked(states, network, problem, scenario_sets)
    return 0.5 * rho * float(np.sum(couplings ** 2) + sum(float(r @ r) for r in residuals))


def augmented_lagrangian(states, network, problem, scenario_sets, rho):
    """Returns the augmented Lagrangian at the iterates and multipliers of `states`
    :rtype: float
    """
    thetas, couplings, residuals = _stacked(states, network, problem, scenario_sets)
    objective = problem.get_objective()
    value = 0.0
    for j, state in enumerate(states):
        value += float(objective @ thetas[j])
        value += float(state.get_lambda() @ couplings[j])
        value += float(state.get_gamma() @ residuals[j])
    return value + penalty(states, network, problem, scenario_sets, rho)
