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
Robust least squares identification of a finite impulse response

The output `y` of a system driven by input `u` is `y = U theta` with `U` the lower-triangular
Toeplitz matrix of `u`. Both signals are perturbed by `q = (du, dy)` with `||q|| <= rho`, and
the robust estimate solves

    min t  subject to  ||(y + dy) - (U + dU) theta|| <= t  for every sampled q

over the augmented decision `(theta, t)`.
"""

import numpy as np
import scipy.linalg

from scenopt.problems.domain import BoxDomain
from scenopt.problems.family import ConstraintFamily, DimensionMismatchError
from scenopt.problems.problem import ScenarioProblem
from scenopt.scenario import BallSupport, InvalidParameterError

DEFAULT_HALF_WIDTH = 1e3


def toeplitz_from(u):
    """Lower-triangular Toeplitz matrix whose first column is `u`
    :type u: numpy.ndarray
    :rtype: numpy.ndarray
    """
    u = np.atleast_1d(np.asarray(u, dtype=float))
    return scipy.linalg.toeplitz(u, np.zeros(u.shape[0]))


class IdentificationFamily(ConstraintFamily):
    """`f((theta, t), (du, dy)) = ||(y + dy) - (U + dU) theta|| - t`"""

    def __init__(self, u, y, support=None):
        u = np.atleast_1d(np.asarray(u, dtype=float))
        y = np.atleast_1d(np.asarray(y, dtype=float))
        if u.shape != y.shape:
            raise DimensionMismatchError("Input has length %d but output has length %d" % (u.shape[0], y.shape[0]))
        ConstraintFamily.__init__(self, u.shape[0] + 1, support)
        self.__u = u
        self.__y = y
        self.__matrix = toeplitz_from(u)

    def get_u(self):
        """:rtype: numpy.ndarray"""
        return self.__u.copy()

    def get_y(self):
        """:rtype: numpy.ndarray"""
        return self.__y.copy()

    def get_matrix(self):
        """Returns the nominal Toeplitz matrix `U`
        :rtype: numpy.ndarray
        """
        return self.__matrix.copy()

    def __perturbed(self, q):
        length = self.__u.shape[0]
        q = np.asarray(q, dtype=float).reshape(-1)
        if q.shape[0] != 2 * length:
            raise DimensionMismatchError("Perturbation has length %d, expected %d" % (q.shape[0], 2 * length))
        return self.__matrix + toeplitz_from(q[:length]), self.__y + q[length:]

    def residual(self, theta, q):
        """Returns `(y + dy) - (U + dU) theta` for the plain parameter vector `theta`
        :rtype: numpy.ndarray
        """
        matrix, output = self.__perturbed(q)
        return output - matrix @ np.asarray(theta, dtype=float)

    def evaluate(self, z, q):
        z = self.check_decision(z)
        return float(np.linalg.norm(self.residual(z[:-1], q))) - z[-1]

    def subgradient(self, z, q):
        z = self.check_decision(z)
        matrix, output = self.__perturbed(q)
        residual = output - matrix @ z[:-1]
        norm = float(np.linalg.norm(residual))
        result = np.zeros(z.shape[0])
        # zero is in the sub-differential of the norm at the origin
        if norm > 0.0:
            result[:-1] = -(matrix.T @ residual) / norm
        result[-1] = -1.0
        return result

    def __batch(self, samples):
        length = self.__u.shape[0]
        samples = np.asarray(samples, dtype=float).reshape(-1, 2 * length)
        rows, columns = np.indices((length, length))
        lower = rows >= columns
        # dU[s, i, k] = du[s, i - k] below the diagonal
        perturbations = np.where(lower, samples[:, :length][:, np.clip(rows - columns, 0, None)], 0.0)
        return self.__matrix + perturbations, self.__y + samples[:, length:]

    def __batch_residuals(self, z, samples):
        matrices, outputs = self.__batch(samples)
        return matrices, outputs - np.einsum("sik,k->si", matrices, z[:-1])

    def evaluate_many(self, z, samples):
        z = self.check_decision(z)
        if len(samples) == 0:
            return np.zeros(0)
        _, residuals = self.__batch_residuals(z, samples)
        return np.linalg.norm(residuals, axis=1) - z[-1]

    def subgradient_many(self, z, samples):
        z = self.check_decision(z)
        result = np.zeros((len(samples), z.shape[0]))
        if len(samples) == 0:
            return result
        matrices, residuals = self.__batch_residuals(z, samples)
        norms = np.linalg.norm(residuals, axis=1)
        nonzero = norms > 0.0
        gradients = -np.einsum("sik,si->sk", matrices, residuals)
        result[nonzero, :-1] = gradients[nonzero] / norms[nonzero, None]
        result[:, -1] = -1.0
        return result


def ident_constraint(u, y, z, q):
    """Evaluates the robust identification constraint at the augmented decision `z = (theta, t)`
    :rtype: float
    """
    return IdentificationFamily(u, y).evaluate(z, q)


class RobustIdentProblem(ScenarioProblem):
    """Robust identification with the perturbation ball `||(du, dy)|| <= rho`"""

    def __init__(self, u, y, rho, half_width=DEFAULT_HALF_WIDTH):
        if rho < 0:
            raise InvalidParameterError("Uncertainty radius must be nonnegative, got %r" % (rho,))
        u = np.atleast_1d(np.asarray(u, dtype=float))
        family = IdentificationFamily(u, y, BallSupport(2 * u.shape[0], rho))
        dimension = family.get_decision_dimension()
        lower = np.full(dimension, -float(half_width))
        lower[-1] = 0.0
        objective = np.zeros(dimension)
        objective[-1] = 1.0
        ScenarioProblem.__init__(self, family, objective, BoxDomain(lower, np.full(dimension, float(half_width))))
        self.__rho = float(rho)

    def get_rho(self):
        """:rtype: float"""
        return self.__rho

    def get_matrix(self):
        """:rtype: numpy.ndarray"""
        return self.get_family().get_matrix()

    def least_squares_solution(self):
        """Returns the nominal estimate `theta_ls = U^-1 y`
        :rtype: numpy.ndarray
        """
        family = self.get_family()
        return scipy.linalg.solve_triangular(family.get_matrix(), family.get_y(), lower=True)

    def max_residual(self, theta, scenario_sets):
        """Returns `r(theta, rho)`, the largest residual over every sampled perturbation

        `theta` is the plain parameter vector, without the epigraph variable.

        :rtype: float
        """
        family = self.get_family()
        samples = [s for scenario_set in scenario_sets for s in scenario_set.get_samples()]
        if not samples:
            raise InvalidParameterError("Maximum residual needs at least one scenario")
        return max(float(np.linalg.norm(family.residual(theta, q))) for q in samples)
