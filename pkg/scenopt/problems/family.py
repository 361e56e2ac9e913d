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
Base constraint family

A constraint family is a function `f(theta, q)` convex in `theta` for every fixed
uncertainty value `q`, together with a sub-gradient oracle and the support `Q` from which
scenarios are drawn. A decision `theta` satisfies scenario `q` when `f(theta, q) <= 0`.
"""

import numpy as np


class DimensionMismatchError(Exception):
    pass


class NotAffineError(Exception):
    pass


class ConstraintFamily(object):
    """Constraint family `f(theta, q)`

    Subclasses implement `evaluate()` and `subgradient()`; the batched variants loop over the
    samples unless a subclass vectorizes them.
    """

    def __init__(self, decision_dimension, support=None):
        self.__decision_dimension = int(decision_dimension)
        self.__support = support

    def get_decision_dimension(self):
        """:rtype: int"""
        return self.__decision_dimension

    def get_support(self, node_id=None):
        """Returns the support scenarios of node `node_id` are drawn from
        :rtype: scenopt.scenario.Support
        """
        return self.__support

    def check_decision(self, theta):
        """Returns `theta` as a float vector of the decision dimension
        :rtype: numpy.ndarray
        """
        theta = np.asarray(theta, dtype=float).reshape(-1)
        if theta.shape[0] != self.__decision_dimension:
            raise DimensionMismatchError(
                "Decision has dimension %d, expected %d" % (theta.shape[0], self.__decision_dimension)
            )
        return theta

    def evaluate(self, theta, q):
        """Returns `f(theta, q)`
        :rtype: float
        """
        raise NotImplementedError

    def subgradient(self, theta, q):
        """Returns an element of the sub-differential of `f(., q)` at `theta`
        :rtype: numpy.ndarray
        """
        raise NotImplementedError

    def evaluate_many(self, theta, samples):
        """Returns `f(theta, q_i)` for every row `q_i` of `samples`
        :rtype: numpy.ndarray
        """
        return np.array([self.evaluate(theta, q) for q in samples], dtype=float)

    def subgradient_many(self, theta, samples):
        """Returns the sub-gradients for every row of `samples` as a `(count, n)` array
        :rtype: numpy.ndarray
        """
        result = np.zeros((len(samples), self.__decision_dimension))
        for index, q in enumerate(samples):
            result[index] = self.subgradient(theta, q)
        return result

    def affine_form(self, q):
        """Returns `(a, b)` with `f(theta, q) = a' theta - b` for affine families
        :rtype: tuple
        """
        raise NotAffineError("%s is not an affine constraint family" % type(self).__name__)

    def is_affine(self):
        """:rtype: bool"""
        return False
