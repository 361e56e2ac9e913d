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
Centralized reference solvers and the empirical violation probability

`solve_lp_by_vertices()` is exact for small linear programs over a box.
`solve_centralized_subgradient()` runs the random projection iteration on a single node
holding every scenario.
"""

import itertools
import logging
import math

import numpy as np

import scenopt.tags
from scenopt.helpers import make_stream
from scenopt.problems.domain import InvalidDomainError
from scenopt.problems.family import DimensionMismatchError
from scenopt.schedule import StepSchedule

logger = logging.getLogger(__name__)

MAX_VERTEX_DIMENSION = 3
SINGULAR_TOLERANCE = 1e-12
FEASIBILITY_TOLERANCE = 1e-8

METHOD_VERTICES = "vertex_enumeration"
METHOD_SUBGRADIENT = "centralized_subgradient"


class InfeasibleProblemError(Exception):
    pass


class FeasibilityFailureError(Exception):
    pass


class OracleSolution(object):

    def __init__(self, theta_star, value, method, certificate):
        self.__theta_star = np.asarray(theta_star, dtype=float)
        self.__value = float(value)
        self.__method = method
        self.__certificate = float(certificate)

    def get_theta_star(self):
        """:rtype: numpy.ndarray"""
        return self.__theta_star

    def get_value(self):
        """:rtype: float"""
        return self.__value

    def get_method(self):
        """:rtype: str"""
        return self.__method

    def get_certificate(self):
        """Returns the largest constraint value at `theta_star`, floored at zero
        :rtype: float
        """
        return self.__certificate

    def __repr__(self):
        return "OracleSolution(value=%r, method=%s)" % (self.__value, self.__method)


def _all_samples(scenario_sets):
    samples = [scenario_set.get_samples() for scenario_set in scenario_sets if scenario_set.get_count()]
    if not samples:
        return None
    return np.vstack(samples)


def _inequalities(problem, scenario_sets):
    """Stacks `a' theta <= b` for every scenario and every box facet"""
    dimension = problem.get_dimension()
    family = problem.get_family()
    domain = problem.get_domain()
    normals = []
    offsets = []
    samples = _all_samples(scenario_sets)
    if samples is not None:
        for q in samples:
            normal, offset = family.affine_form(q)
            normals.append(normal)
            offsets.append(offset)
    constraint_count = len(normals)
    identity = np.eye(dimension)
    normals.extend(identity)
    offsets.extend(domain.get_upper())
    normals.extend(-identity)
    offsets.extend(-domain.get_lower())
    return np.array(normals), np.array(offsets), constraint_count


def solve_lp_by_vertices(problem, scenario_sets):
    """Solves a small linear program exactly by enumerating the vertices of its polytope

    Every choice of `n` linearly independent rows among the scenario constraints and the box
    facets gives a candidate vertex; the feasible candidate with the smallest objective wins.

    :type problem: scenopt.problems.problem.ScenarioProblem
    :type scenario_sets: list of scenopt.scenario.ScenarioSet
    :rtype: OracleSolution
    """
    dimension = problem.get_dimension()
    if dimension > MAX_VERTEX_DIMENSION:
        raise DimensionMismatchError("Vertex enumeration supports up to %d dimensions, got %d"
                                     % (MAX_VERTEX_DIMENSION, dimension))
    if problem.get_domain().get_kind() != scenopt.tags.DOMAIN_BOX:
        raise InvalidDomainError("Vertex enumeration needs a box domain, got %s" % problem.get_domain().get_kind())

    normals, offsets, constraint_count = _inequalities(problem, scenario_sets)
    combinations = np.array(list(itertools.combinations(range(normals.shape[0]), dimension)))
    systems = normals[combinations]
    regular = np.abs(np.linalg.det(systems)) > SINGULAR_TOLERANCE
    vertices = np.linalg.solve(systems[regular], offsets[combinations[regular]][..., None])[..., 0]

    slack = vertices @ normals.T - offsets
    feasible = np.all(slack <= 1e-9 * np.maximum(1.0, np.abs(offsets)), axis=1)
    if not np.any(feasible):
        raise InfeasibleProblemError("The sampled polytope is empty")

    candidates = vertices[feasible]
    values = candidates @ problem.get_objective()
    best = int(np.argmin(values))
    theta_star = problem.get_domain().project(candidates[best])
    certificate = max(0.0, float(np.max(slack[feasible][best, :constraint_count]))) if constraint_count else 0.0
    logger.debug("Vertex enumeration checked %d candidates, %d feasible", vertices.shape[0], candidates.shape[0])
    return OracleSolution(theta_star, values[best], METHOD_VERTICES, certificate)


def solve_centralized_subgradient(problem, scenario_sets, iterations=20000, schedule=None, beta=1.0, seed=0,
                                  max_sweeps=50, feasibility_tol=FEASIBILITY_TOLERANCE):
    """Runs the random projection iteration on one node that holds every scenario

    After the objective step, every violated constraint is visited in random order with a
    Polyak step, repeating until none is violated or `max_sweeps` passes were made. The best
    iterate whose violation is at most `feasibility_tol` is returned.

    :type iterations: int
    :type schedule: scenopt.schedule.StepSchedule
    :rtype: OracleSolution
    """
    schedule = StepSchedule() if schedule is None else schedule
    rng = make_stream(seed)
    family = problem.get_family()
    domain = problem.get_domain()
    objective = problem.get_objective()
    samples = _all_samples(scenario_sets)

    theta = np.zeros(problem.get_dimension())
    best_theta = None
    best_value = math.inf
    best_violation = 0.0

    for k in range(iterations):
        theta = theta - schedule.step(k) * objective
        violation = 0.0
        if samples is not None:
            for _ in range(max_sweeps):
                violated = np.flatnonzero(family.evaluate_many(theta, samples) > 0.0)
                if violated.shape[0] == 0:
                    break
                for index in rng.permutation(violated):
                    value = family.evaluate(theta, samples[index])
                    if value <= 0.0:
                        continue
                    direction = family.subgradient(theta, samples[index])
                    squared_norm = float(direction @ direction)
                    if squared_norm > 0.0:
                        theta = theta - beta * (value / squared_norm) * direction
        theta = domain.project(theta)
        if samples is not None:
            violation = max(0.0, float(np.max(family.evaluate_many(theta, samples))))

        value = float(objective @ theta)
        if violation <= feasibility_tol and value < best_value:
            best_theta, best_value, best_violation = theta.copy(), value, violation

    if best_theta is None:
        raise FeasibilityFailureError("No iterate within %g of feasibility after %d iterations"
                                      % (feasibility_tol, iterations))
    return OracleSolution(best_theta, best_value, METHOD_SUBGRADIENT, best_violation)


class ViolationEstimate(object):
    """Empirical violation probability with its binomial standard error"""

    def __init__(self, probability, standard_error, sample_count):
        self.__probability = float(probability)
        self.__standard_error = float(standard_error)
        self.__sample_count = int(sample_count)

    def get_probability(self):
        """:rtype: float"""
        return self.__probability

    def get_standard_error(self):
        """:rtype: float"""
        return self.__standard_error

    def get_sample_count(self):
        """:rtype: int"""
        return self.__sample_count


def estimate_violation(theta, problem, sample_count, rng, node_id=None):
    """Estimates `V(theta)` from `sample_count` fresh scenarios

    :type sample_count: int
    :type rng: numpy.random.Generator
    :rtype: ViolationEstimate
    """
    if sample_count < 1:
        raise ValueError("At least one validation sample is required, got %r" % (sample_count,))
    samples = problem.get_support(node_id).sample(rng, sample_count)
    violated = int(np.count_nonzero(problem.get_family().evaluate_many(theta, samples) > 0.0))
    probability = violated / float(sample_count)
    return ViolationEstimate(probability, math.sqrt(probability * (1.0 - probability) / sample_count), sample_count)
