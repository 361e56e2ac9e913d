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
Networked random projection iteration over directed graphs

A round mixes the in-neighbor states with a gradient step on the objective,

    v_j = sum_i a_ji theta_i - zeta^k c

and then takes a Polyak step towards one scenario constraint drawn uniformly from the
node's own set, followed by the projection onto `Theta`.
"""

import logging

import numpy as np

from scenopt.helpers import as_vector
from scenopt.primal_dual import ConfigurationError
from scenopt.schedule import StepSchedule

logger = logging.getLogger(__name__)


class DegenerateSubgradientError(Exception):
    pass


class RPNodeState(object):

    def __init__(self, theta, selection=None):
        self.__theta = as_vector(theta)
        self.__selection = selection

    @classmethod
    def initial(cls, dimension):
        """:rtype: RPNodeState"""
        return cls(np.zeros(dimension))

    def get_theta(self):
        """:rtype: numpy.ndarray"""
        return self.__theta

    def get_selection(self):
        """Returns the index of the constraint drawn in the last round, `None` initially
        :rtype: int
        """
        return self.__selection


class RPConfig(object):
    """Relaxation `beta` in `(0, 2)`, step schedule and the fallback direction used when
    the drawn constraint is satisfied
    """

    def __init__(self, beta=1.0, schedule=None, fallback_direction=None):
        if not 0.0 < beta < 2.0:
            raise ConfigurationError("Relaxation beta must lie in (0, 2), got %r" % (beta,))
        if fallback_direction is not None:
            fallback_direction = as_vector(fallback_direction)
            if not np.any(fallback_direction):
                raise ConfigurationError("Fallback direction must be nonzero")
        self.__beta = float(beta)
        self.__schedule = StepSchedule() if schedule is None else schedule
        self.__fallback_direction = fallback_direction

    def get_beta(self):
        """:rtype: float"""
        return self.__beta

    def get_schedule(self):
        """:rtype: scenopt.schedule.StepSchedule"""
        return self.__schedule

    def get_fallback_direction(self, dimension):
        """Returns the configured fallback direction, the first unit vector by default
        :rtype: numpy.ndarray
        """
        if self.__fallback_direction is not None:
            return self.__fallback_direction
        direction = np.zeros(dimension)
        direction[0] = 1.0
        return direction


def mix(j, theta_j, inbox, weights, zeta, objective):
    """Returns `v_j = a_jj theta_j + sum_i a_ji theta_i - zeta c`
    :type inbox: dict
    :rtype: numpy.ndarray
    """
    matrix = np.asarray(weights, dtype=float)
    mixed = matrix[j, j] * as_vector(theta_j)
    for i in sorted(inbox):
        if i != j:
            mixed = mixed + matrix[j, i] * inbox[i]
    return mixed - zeta * as_vector(objective)


def polyak_step(v, samples, beta, domain, rng, fallback, family, index=None):
    """Polyak step from `v` towards a uniformly drawn scenario constraint, then the projection

    Returns the new iterate and the drawn index. Without scenarios the iterate is only
    projected.

    :type samples: numpy.ndarray
    :type rng: numpy.random.Generator
    :rtype: tuple
    """
    v = as_vector(v)
    samples = np.asarray(samples, dtype=float)
    if samples.shape[0] == 0:
        return domain.project(v), None
    if index is None:
        index = int(rng.integers(samples.shape[0]))

    q = samples[index]
    violation = max(0.0, family.evaluate(v, q))
    if violation > 0.0:
        direction = family.subgradient(v, q)
    else:
        direction = as_vector(fallback)
    squared_norm = float(direction @ direction)
    if squared_norm == 0.0:
        raise DegenerateSubgradientError(
            "Zero sub-gradient at a point violating constraint %d by %g" % (index, violation)
        )
    return domain.project(v - beta * (violation / squared_norm) * direction), index


def rp_round(states, network, config, k, problem, scenario_sets, streams, mapper=map):
    """Runs one synchronous round and returns the new states in node order

    Node `j` draws its constraint index from `streams[j]` only, so the result does not depend
    on the order in which nodes are updated.

    :type states: list of RPNodeState
    :type config: RPConfig
    :type streams: list of numpy.random.Generator
    :rtype: list of RPNodeState
    """
    zeta = config.get_schedule().step(k)
    thetas = [state.get_theta() for state in states]
    inboxes = network.exchange(thetas)
    matrix = network.get_matrix()
    objective = problem.get_objective()
    fallback = config.get_fallback_direction(problem.get_dimension())

    def update(j):
        mixed = mix(j, thetas[j], inboxes[j], matrix, zeta, objective)
        theta, selection = polyak_step(mixed, scenario_sets[j].get_samples(), config.get_beta(),
                                       problem.get_domain(), streams[j], fallback, problem.get_family())
        return RPNodeState(theta, selection)

    updated = list(mapper(update, range(len(states))))
    logger.debug("Round %d: zeta %g", k, zeta)
    return updated
