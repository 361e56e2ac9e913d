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
Epigraph form of distributed robust optimization

Minimizing `sum_j max_q f_j(theta, q)` becomes minimizing `sum_j t_j` over the augmented
decision `(theta, t_1, ..., t_m)` subject to `f_j(theta, q) - t_j <= 0`. Samples carry the
owning node index in their first entry, so the constraints of node `j` only touch
`(theta, t_j)`.
"""

import numpy as np

from scenopt.problems.family import ConstraintFamily, DimensionMismatchError
from scenopt.problems.problem import ScenarioProblem
from scenopt.scenario import TaggedSupport


class LinearFamily(ConstraintFamily):
    """`f(theta, q) = q' theta`"""

    def evaluate(self, theta, q):
        return float(np.asarray(q, dtype=float) @ self.check_decision(theta))

    def subgradient(self, theta, q):
        return np.array(q, dtype=float)

    def affine_form(self, q):
        return np.array(q, dtype=float), 0.0

    def is_affine(self):
        return True


class SquaredDistanceFamily(ConstraintFamily):
    """`f(theta, q) = ||theta - q||^2`"""

    def evaluate(self, theta, q):
        difference = self.check_decision(theta) - np.asarray(q, dtype=float)
        return float(difference @ difference)

    def subgradient(self, theta, q):
        return 2.0 * (self.check_decision(theta) - np.asarray(q, dtype=float))


class EpigraphFamily(ConstraintFamily):

    def __init__(self, local_families):
        if not local_families:
            raise DimensionMismatchError("At least one local family is required")
        dimension = local_families[0].get_decision_dimension()
        if any(family.get_decision_dimension() != dimension for family in local_families):
            raise DimensionMismatchError("Local families must share the decision dimension")
        ConstraintFamily.__init__(self, dimension + len(local_families))
        self.__local_families = list(local_families)
        self.__base_dimension = dimension

    def get_base_dimension(self):
        """Returns the dimension of `theta` without the epigraph variables
        :rtype: int
        """
        return self.__base_dimension

    def get_node_count(self):
        """:rtype: int"""
        return len(self.__local_families)

    def get_support(self, node_id=None):
        if node_id is None:
            raise DimensionMismatchError("Epigraph scenarios are drawn per node; pass a node id")
        return TaggedSupport(node_id, self.__local_families[node_id].get_support())

    def __split(self, z, q):
        z = self.check_decision(z)
        q = np.asarray(q, dtype=float).reshape(-1)
        node = int(q[0])
        if not 0 <= node < len(self.__local_families):
            raise DimensionMismatchError("Sample refers to node %d outside the family" % node)
        return z[:self.__base_dimension], z[self.__base_dimension + node], node, q[1:]

    def evaluate(self, z, q):
        theta, t, node, local_q = self.__split(z, q)
        return self.__local_families[node].evaluate(theta, local_q) - t

    def subgradient(self, z, q):
        theta, _, node, local_q = self.__split(z, q)
        result = np.zeros(self.get_decision_dimension())
        result[:self.__base_dimension] = self.__local_families[node].subgradient(theta, local_q)
        result[self.__base_dimension + node] = -1.0
        return result

    def affine_form(self, q):
        q = np.asarray(q, dtype=float).reshape(-1)
        node = int(q[0])
        local_normal, local_offset = self.__local_families[node].affine_form(q[1:])
        normal = np.zeros(self.get_decision_dimension())
        normal[:self.__base_dimension] = local_normal
        normal[self.__base_dimension + node] = -1.0
        return normal, local_offset

    def is_affine(self):
        return all(family.is_affine() for family in self.__local_families)


def epigraph_family(local_families):
    """:rtype: EpigraphFamily"""
    return EpigraphFamily(local_families)


def epigraph_problem(local_families, domain):
    """Problem `min sum_j t_j` over `(theta, t_1, ..., t_m)` in `domain`
    :rtype: ScenarioProblem
    """
    family = EpigraphFamily(local_families)
    objective = np.zeros(family.get_decision_dimension())
    objective[family.get_base_dimension():] = 1.0
    return ScenarioProblem(family, objective, domain)
