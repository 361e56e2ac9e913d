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
Helper methods.
"""

import numpy as np

STREAM_SCENARIOS = 1
STREAM_SELECTION = 2
STREAM_GRAPH = 3
STREAM_TOPOLOGY = 4


def make_stream(seed, *keys):
    """Returns a random generator derived from a master seed and a sequence of integer keys

    Equal `(seed, keys)` always give the same stream; different keys give independent streams.

    :type seed: int
    :rtype: numpy.random.Generator
    """
    entropy = [int(seed)] + [int(key) for key in keys]
    return np.random.default_rng(np.random.SeedSequence(entropy))


def node_streams(seed, node_count, purpose):
    """Returns one independent stream per node for the given purpose
    :type seed: int
    :type node_count: int
    :type purpose: int
    :rtype: list of numpy.random.Generator
    """
    return [make_stream(seed, purpose, node_id) for node_id in range(node_count)]


def as_vector(value, dimension=None):
    """Converts `value` to a one dimensional float array, optionally checking its length
    :rtype: numpy.ndarray
    """
    vector = np.asarray(value, dtype=float).reshape(-1)
    if dimension is not None and vector.shape[0] != dimension:
        raise ValueError("Expected a vector of length %d, got %d" % (dimension, vector.shape[0]))
    return vector


def positive_part(values):
    """Element-wise `max{0, value}`
    :rtype: numpy.ndarray
    """
    return np.maximum(values, 0.0)


def euclidean_norm(vector):
    """:rtype: float"""
    return float(np.linalg.norm(vector))
