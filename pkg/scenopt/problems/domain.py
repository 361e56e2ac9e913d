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

"""Closed convex domains `Theta` with their Euclidean projections"""

import numpy as np

import scenopt.tags


class InvalidDomainError(Exception):
    pass


class DomainSet(object):
    """Closed convex set with nonempty interior

    Subclasses provide `project()`; distance and membership follow from it.
    """

    def __init__(self, dimension):
        self.__dimension = int(dimension)

    def get_kind(self):
        """:rtype: str"""
        raise NotImplementedError

    def get_dimension(self):
        """:rtype: int"""
        return self.__dimension

    def project(self, x):
        """Returns the nearest point of the set to `x`
        :rtype: numpy.ndarray
        """
        raise NotImplementedError

    def distance(self, x):
        """Returns `d(x, Theta) = ||x - project(x)||`
        :rtype: float
        """
        x = np.asarray(x, dtype=float)
        return float(np.linalg.norm(x - self.project(x)))

    def contains(self, x, tolerance=0.0):
        """:rtype: bool"""
        return self.distance(x) <= tolerance


class BoxDomain(DomainSet):

    def __init__(self, lower, upper):
        lower = np.atleast_1d(np.asarray(lower, dtype=float))
        upper = np.atleast_1d(np.asarray(upper, dtype=float))
        if lower.shape != upper.shape or np.any(lower >= upper):
            raise InvalidDomainError("Box needs lower < upper in every coordinate, got %r and %r" % (lower, upper))
        DomainSet.__init__(self, lower.shape[0])
        self.__lower = lower
        self.__upper = upper

    @classmethod
    def symmetric(cls, dimension, half_width):
        """Box `[-half_width, half_width]^dimension`
        :rtype: BoxDomain
        """
        return cls(np.full(dimension, -float(half_width)), np.full(dimension, float(half_width)))

    def get_kind(self):
        return scenopt.tags.DOMAIN_BOX

    def get_lower(self):
        """:rtype: numpy.ndarray"""
        return self.__lower.copy()

    def get_upper(self):
        """:rtype: numpy.ndarray"""
        return self.__upper.copy()

    def project(self, x):
        return np.clip(np.asarray(x, dtype=float), self.__lower, self.__upper)


class BallDomain(DomainSet):

    def __init__(self, center, radius):
        center = np.atleast_1d(np.asarray(center, dtype=float))
        if not radius > 0:
            raise InvalidDomainError("Ball radius must be positive, got %r" % (radius,))
        DomainSet.__init__(self, center.shape[0])
        self.__center = center
        self.__radius = float(radius)

    def get_kind(self):
        return scenopt.tags.DOMAIN_BALL

    def get_center(self):
        """:rtype: numpy.ndarray"""
        return self.__center.copy()

    def get_radius(self):
        """:rtype: float"""
        return self.__radius

    def project(self, x):
        x = np.asarray(x, dtype=float)
        offset = x - self.__center
        norm = float(np.linalg.norm(offset))
        if norm <= self.__radius:
            return x.copy()
        return self.__center + offset * (self.__radius / norm)


class WholeSpace(DomainSet):

    def get_kind(self):
        return scenopt.tags.DOMAIN_WHOLE

    def project(self, x):
        return np.array(x, dtype=float)


def project(domain, x):
    """Euclidean projection of `x` onto `domain`
    :type domain: DomainSet
    :rtype: numpy.ndarray
    """
    return domain.project(x)
