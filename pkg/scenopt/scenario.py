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
Sample complexity of the scenario problem, scenario drawing and the partition of
scenarios across the nodes of the network.

The closed-form bound

    N_bin = ceil( e / (epsilon (e - 1)) * (ln(1/delta) + n - 1) )

is sufficient for the binomial tail condition

    sum_{i=0}^{n-1} C(N, i) epsilon^i (1 - epsilon)^(N - i) <= delta

which `binomial_tail_holds()` evaluates in log-space.
"""

import logging
import math

import numpy as np
from scipy.special import gammaln, logsumexp

import scenopt.tags

logger = logging.getLogger(__name__)

LOG_SPACE_SLACK = 1e-12


class InvalidParameterError(Exception):
    pass


class InsufficientCapacityError(Exception):
    pass


class UnsupportedDistributionError(Exception):
    pass


class SampleComplexityParams(object):
    """Violation level `epsilon`, confidence level `delta` and decision dimension `n`"""

    def __init__(self, epsilon, delta, n):
        if not 0.0 < epsilon < 1.0:
            raise InvalidParameterError("epsilon must lie in (0, 1), got %r" % (epsilon,))
        if not 0.0 < delta < 1.0:
            raise InvalidParameterError("delta must lie in (0, 1), got %r" % (delta,))
        if int(n) != n or n < 1:
            raise InvalidParameterError("n must be a positive integer, got %r" % (n,))
        self.__epsilon = float(epsilon)
        self.__delta = float(delta)
        self.__n = int(n)

    def get_epsilon(self):
        """:rtype: float"""
        return self.__epsilon

    def get_delta(self):
        """:rtype: float"""
        return self.__delta

    def get_n(self):
        """:rtype: int"""
        return self.__n

    def __repr__(self):
        return "SampleComplexityParams(epsilon=%r, delta=%r, n=%r)" % (self.__epsilon, self.__delta, self.__n)


def sample_complexity(params):
    """Returns the smallest integer satisfying the closed-form sample bound
    :type params: SampleComplexityParams
    :rtype: int
    """
    e = math.e
    factor = e / (params.get_epsilon() * (e - 1.0))
    return int(math.ceil(factor * (math.log(1.0 / params.get_delta()) + params.get_n() - 1)))


def log_binomial_tail(sample_count, params):
    """Returns the natural logarithm of `sum_{i<n} C(N,i) eps^i (1-eps)^(N-i)`
    :type sample_count: int
    :type params: SampleComplexityParams
    :rtype: float
    """
    if int(sample_count) != sample_count or sample_count < 1:
        raise InvalidParameterError("N must be a positive integer, got %r" % (sample_count,))
    big_n = int(sample_count)
    epsilon = params.get_epsilon()
    i = np.arange(min(params.get_n() - 1, big_n) + 1, dtype=float)
    log_terms = (gammaln(big_n + 1.0) - gammaln(i + 1.0) - gammaln(big_n - i + 1.0)
                 + i * math.log(epsilon) + (big_n - i) * math.log1p(-epsilon))
    return float(logsumexp(log_terms))


def binomial_tail_holds(sample_count, params):
    """Checks whether `sample_count` scenarios satisfy the binomial tail condition
    :type sample_count: int
    :type params: SampleComplexityParams
    :rtype: bool
    """
    return log_binomial_tail(sample_count, params) <= math.log(params.get_delta()) + LOG_SPACE_SLACK


def minimal_complexity_by_search(params):
    """Returns the smallest `N` for which `binomial_tail_holds()` is true

    The predicate is monotone in `N`, so a binary search below the closed-form bound suffices.

    :type params: SampleComplexityParams
    :rtype: int
    """
    high = sample_complexity(params)
    while not binomial_tail_holds(high, params):
        high *= 2
    low = 1
    while low < high:
        middle = (low + high) // 2
        if binomial_tail_holds(middle, params):
            high = middle
        else:
            low = middle + 1
    return low


class Partition(object):
    """Number of scenarios `n_j` assigned to every node"""

    def __init__(self, counts):
        counts = [int(count) for count in counts]
        if any(count < 0 for count in counts):
            raise InvalidParameterError("Scenario counts must be nonnegative, got %r" % (counts,))
        self.__counts = counts

    def get_counts(self):
        """:rtype: list of int"""
        return list(self.__counts)

    def get_total(self):
        """:rtype: int"""
        return sum(self.__counts)

    def get_node_count(self):
        """:rtype: int"""
        return len(self.__counts)


def partition_samples(n_bin, capacities, trim=False):
    """Splits `n_bin` scenarios across nodes according to their capacities

    By default every node draws up to its full capacity; oversampling only strengthens the
    guarantee. With `trim` each node takes `ceil(n_bin * capacity_j / sum(capacities))`.

    :type n_bin: int
    :type capacities: list of int
    :type trim: bool
    :rtype: Partition
    """
    if n_bin < 1:
        raise InvalidParameterError("N_bin must be positive, got %r" % (n_bin,))
    if not capacities or any(capacity < 1 for capacity in capacities):
        raise InvalidParameterError("Capacities must be positive integers, got %r" % (capacities,))
    total = sum(capacities)
    if total < n_bin:
        raise InsufficientCapacityError(
            "Total capacity %d is below the required %d scenarios" % (total, n_bin)
        )
    if not trim:
        return Partition(capacities)
    # integer ceiling keeps the rule exact
    counts = [min(capacity, -(-n_bin * capacity // total)) for capacity in capacities]
    return Partition(counts)


# Supports of the uncertainty

class Support(object):
    """Support `Q` of the uncertainty together with its sampling rule"""

    def get_kind(self):
        """:rtype: str"""
        raise NotImplementedError

    def get_dimension(self):
        """:rtype: int"""
        raise NotImplementedError

    def contains(self, sample, tolerance=1e-9):
        """:rtype: bool"""
        raise NotImplementedError

    def sample(self, rng, count):
        """Returns `count` i.i.d. samples as a `(count, dimension)` array
        :type rng: numpy.random.Generator
        :type count: int
        :rtype: numpy.ndarray
        """
        raise NotImplementedError


class BallSupport(Support):
    """Uniform distribution on `{q : ||q - center|| <= radius}`"""

    def __init__(self, dimension, radius, center=None):
        if radius < 0:
            raise InvalidParameterError("Ball radius must be nonnegative, got %r" % (radius,))
        self.__dimension = int(dimension)
        self.__radius = float(radius)
        self.__center = np.zeros(self.__dimension) if center is None else np.asarray(center, dtype=float)

    def get_kind(self):
        return scenopt.tags.SUPPORT_BALL

    def get_dimension(self):
        return self.__dimension

    def get_radius(self):
        """:rtype: float"""
        return self.__radius

    def contains(self, sample, tolerance=1e-9):
        return float(np.linalg.norm(np.asarray(sample) - self.__center)) <= self.__radius + tolerance

    def sample(self, rng, count):
        directions = rng.standard_normal((count, self.__dimension))
        norms = np.linalg.norm(directions, axis=1, keepdims=True)
        norms[norms == 0.0] = 1.0
        radii = self.__radius * rng.random((count, 1)) ** (1.0 / self.__dimension)
        return self.__center + directions / norms * radii


class BoxSupport(Support):
    """Uniform distribution on the box `[low, high]`"""

    def __init__(self, low, high):
        self.__low = np.atleast_1d(np.asarray(low, dtype=float))
        self.__high = np.atleast_1d(np.asarray(high, dtype=float))
        if self.__low.shape != self.__high.shape or np.any(self.__low > self.__high):
            raise InvalidParameterError("Invalid box bounds %r, %r" % (low, high))

    def get_kind(self):
        return scenopt.tags.SUPPORT_BOX

    def get_dimension(self):
        return self.__low.shape[0]

    def contains(self, sample, tolerance=1e-9):
        sample = np.asarray(sample)
        return bool(np.all(sample >= self.__low - tolerance) and np.all(sample <= self.__high + tolerance))

    def sample(self, rng, count):
        return self.__low + (self.__high - self.__low) * rng.random((count, self.get_dimension()))


class HalfspaceSupport(Support):
    """Samples `q = (a, b)` with `a` uniform on the unit sphere and `b` uniform on `[low, high]`"""

    def __init__(self, dimension, offset_low=0.5, offset_high=1.5):
        if offset_low > offset_high:
            raise InvalidParameterError("Invalid offset interval [%r, %r]" % (offset_low, offset_high))
        self.__dimension = int(dimension)
        self.__offset_low = float(offset_low)
        self.__offset_high = float(offset_high)

    def get_kind(self):
        return scenopt.tags.SUPPORT_HALFSPACE

    def get_dimension(self):
        return self.__dimension + 1

    def contains(self, sample, tolerance=1e-9):
        sample = np.asarray(sample)
        return (abs(float(np.linalg.norm(sample[:-1])) - 1.0) <= tolerance
                and self.__offset_low - tolerance <= sample[-1] <= self.__offset_high + tolerance)

    def sample(self, rng, count):
        normals = rng.standard_normal((count, self.__dimension))
        norms = np.linalg.norm(normals, axis=1, keepdims=True)
        norms[norms == 0.0] = 1.0
        offsets = rng.uniform(self.__offset_low, self.__offset_high, (count, 1))
        return np.hstack([normals / norms, offsets])


class TaggedSupport(Support):
    """Samples of another support prefixed with the owning node index"""

    def __init__(self, node_id, inner):
        self.__node_id = int(node_id)
        self.__inner = inner

    def get_kind(self):
        return scenopt.tags.SUPPORT_TAGGED

    def get_dimension(self):
        return self.__inner.get_dimension() + 1

    def contains(self, sample, tolerance=1e-9):
        return int(sample[0]) == self.__node_id and self.__inner.contains(sample[1:], tolerance)

    def sample(self, rng, count):
        inner = self.__inner.sample(rng, count)
        return np.hstack([np.full((count, 1), float(self.__node_id)), inner])


class ScenarioSet(object):
    """Scenarios owned by a single node. Samples are never shared between nodes."""

    def __init__(self, node_id, samples):
        samples = np.array(samples, dtype=float)
        if samples.ndim != 2:
            raise InvalidParameterError("Samples must form a two dimensional array")
        self.__node_id = int(node_id)
        self.__samples = samples
        self.__samples.setflags(write=False)

    def get_node_id(self):
        """:rtype: int"""
        return self.__node_id

    def get_samples(self):
        """:rtype: numpy.ndarray"""
        return self.__samples

    def get_count(self):
        """:rtype: int"""
        return self.__samples.shape[0]


def draw_scenarios(problem, count, rng, node_id=0):
    """Draws `count` i.i.d. scenarios from the support the problem declares for node `node_id`

    :type count: int
    :type rng: numpy.random.Generator
    :type node_id: int
    :rtype: ScenarioSet
    """
    support = problem.get_support(node_id)
    if support.get_kind() not in scenopt.tags.SUPPORT_KINDS:
        raise UnsupportedDistributionError("Unsupported uncertainty distribution %r" % (support.get_kind(),))
    if count < 0:
        raise InvalidParameterError("Scenario count must be nonnegative, got %r" % (count,))
    samples = support.sample(rng, count).reshape(count, support.get_dimension())
    logger.debug("Node %d drew %d scenarios from a %s support", node_id, count, support.get_kind())
    return ScenarioSet(node_id, samples)


def draw_partition(problem, partition, streams):
    """Draws every node's scenario set from its own stream
    :type partition: Partition
    :type streams: list of numpy.random.Generator
    :rtype: list of ScenarioSet
    """
    return [draw_scenarios(problem, count, streams[node_id], node_id)
            for node_id, count in enumerate(partition.get_counts())]
