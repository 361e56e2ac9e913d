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

"""Sampled halfspaces `f(theta, q) = q_a' theta - q_b` with `q = (q_a, q_b)`"""

import numpy as np

from scenopt.problems.domain import BoxDomain
from scenopt.problems.family import ConstraintFamily, DimensionMismatchError
from scenopt.problems.problem import ScenarioProblem
from scenopt.scenario import HalfspaceSupport


class SampledHalfspaceFamily(ConstraintFamily):

    def __init__(self, dimension, support=None):
        if dimension < 1:
            raise DimensionMismatchError("Halfspace dimension must be positive, got %r" % (dimension,))
        if support is None:
            support = HalfspaceSupport(dimension)
        ConstraintFamily.__init__(self, dimension, support)

    def __split(self, q):
        q = np.asarray(q, dtype=float).reshape(-1)
        if q.shape[0] != self.get_decision_dimension() + 1:
            raise DimensionMismatchError(
                "Halfspace sample has length %d, expected %d" % (q.shape[0], self.get_decision_dimension() + 1)
            )
        return q[:-1], q[-1]

    def evaluate(self, theta, q):
        normal, offset = self.__split(q)
        return float(normal @ self.check_decision(theta) - offset)

    def subgradient(self, theta, q):
        normal, _ = self.__split(q)
        return normal.copy()

    def evaluate_many(self, theta, samples):
        samples = np.asarray(samples, dtype=float)
        if samples.shape[0] == 0:
            return np.zeros(0)
        return samples[:, :-1] @ self.check_decision(theta) - samples[:, -1]

    def subgradient_many(self, theta, samples):
        samples = np.asarray(samples, dtype=float)
        return samples[:, :-1].copy().reshape(samples.shape[0], self.get_decision_dimension())

    def affine_form(self, q):
        normal, offset = self.__split(q)
        return normal.copy(), float(offset)

    def is_affine(self):
        return True


def sampled_halfspace_family(dimension):
    """:rtype: SampledHalfspaceFamily"""
    return SampledHalfspaceFamily(dimension)


def halfspace_problem(objective, half_width=10.0, offset_low=0.5, offset_high=1.5):
    """Linear program over sampled halfspaces inside the box `[-half_width, half_width]^n`

    Offsets are positive, so `theta = 0` is strictly feasible for every sample.

    :rtype: ScenarioProblem
    """
    objective = np.asarray(objective, dtype=float).reshape(-1)
    dimension = objective.shape[0]
    family = SampledHalfspaceFamily(dimension, HalfspaceSupport(dimension, offset_low, offset_high))
    return ScenarioProblem(family, objective, BoxDomain.symmetric(dimension, half_width))
