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

"""Scenario problem `min c' theta` over `theta` in `Theta` subject to `f(theta, q) <= 0`"""

import numpy as np

from scenopt.problems.family import DimensionMismatchError


class ScenarioProblem(object):
    """Linear objective, constraint family and domain of a robust convex program"""

    def __init__(self, family, objective, domain):
        objective = np.asarray(objective, dtype=float).reshape(-1)
        dimension = family.get_decision_dimension()
        if objective.shape[0] != dimension or domain.get_dimension() != dimension:
            raise DimensionMismatchError(
                "Objective (%d), domain (%d) and family (%d) dimensions differ"
                % (objective.shape[0], domain.get_dimension(), dimension)
            )
        objective.setflags(write=False)
        self.__family = family
        self.__objective = objective
        self.__domain = domain

    def get_family(self):
        """:rtype: scenopt.problems.family.ConstraintFamily"""
        return self.__family

    def get_objective(self):
        """Returns the cost vector `c`
        :rtype: numpy.ndarray
        """
        return self.__objective

    def get_domain(self):
        """:rtype: scenopt.problems.domain.DomainSet"""
        return self.__domain

    def get_dimension(self):
        """:rtype: int"""
        return self.__family.get_decision_dimension()

    def get_support(self, node_id=None):
        """:rtype: scenopt.scenario.Support"""
        return self.__family.get_support(node_id)

    def objective_value(self, theta):
        """:rtype: float"""
        return float(self.__objective @ np.asarray(theta, dtype=float))

    def max_violation(self, theta, scenario_sets):
        """Returns the largest constraint value over every sample, floored at zero
        :rtype: float
        """
        worst = 0.0
        for scenario_set in scenario_sets:
            if scenario_set.get_count():
                worst = max(worst, float(np.max(self.__family.evaluate_many(theta, scenario_set.get_samples()))))
        return worst
