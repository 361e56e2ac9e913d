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
Communication topologies, row-stochastic weights and the spectral quantities governing
consensus.

An edge `(i, j)` means that node `i` receives from node `j`, so row `i` of the weight
matrix mixes the states of the in-neighbors of `i`.
"""

import logging
import math

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

import scenopt.tags

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-12
DEFAULT_MAX_ITERATIONS = 10 ** 6


class InvalidTopologyError(Exception):
    pass


class ConvergenceError(Exception):
    pass


class Topology(object):
    """Node count, edge set and orientation of a communication graph

    Self-loops are never stored; the self-weight is implicit. Undirected topologies keep a
    symmetric edge set.
    """

    def __init__(self, node_count, edges=(), directed=True):
        if int(node_count) != node_count or node_count < 1:
            raise InvalidTopologyError("Node count must be a positive integer, got %r" % (node_count,))
        self.__node_count = int(node_count)
        self.__directed = bool(directed)

        edge_set = set()
        for (i, j) in edges:
            i, j = int(i), int(j)
            if not (0 <= i < node_count and 0 <= j < node_count):
                raise InvalidTopologyError("Edge (%d, %d) refers to a node outside 0..%d" % (i, j, node_count - 1))
            if i == j:
                logger.debug("Dropping self-loop on node %d", i)
                continue
            edge_set.add((i, j))
            if not directed:
                edge_set.add((j, i))
        self.__edges = frozenset(edge_set)

        self.__in_neighbors = [[] for _ in range(self.__node_count)]
        self.__out_neighbors = [[] for _ in range(self.__node_count)]
        for (i, j) in sorted(self.__edges):
            self.__in_neighbors[i].append(j)
            self.__out_neighbors[j].append(i)

    def get_node_count(self):
        """:rtype: int"""
        return self.__node_count

    def get_edges(self):
        """Returns the ordered pairs `(i, j)`, node `i` receiving from node `j`
        :rtype: frozenset of tuple
        """
        return self.__edges

    def is_directed(self):
        """:rtype: bool"""
        return self.__directed

    def get_in_neighbors(self, node):
        """Returns the sorted nodes that `node` receives from
        :rtype: list of int
        """
        return list(self.__in_neighbors[node])

    def get_out_neighbors(self, node):
        """Returns the sorted nodes that receive from `node`
        :rtype: list of int
        """
        return list(self.__out_neighbors[node])

    def get_in_degree(self, node):
        """:rtype: int"""
        return len(self.__in_neighbors[node])

    def get_adjacency(self):
        """Returns the 0/1 matrix with entry `(i, j)` set when `i` receives from `j`
        :rtype: numpy.ndarray
        """
        adjacency = np.zeros((self.__node_count, self.__node_count))
        for (i, j) in self.__edges:
            adjacency[i, j] = 1.0
        return adjacency

    def __eq__(self, other):
        return (isinstance(other, Topology)
                and self.__node_count == other.get_node_count()
                and self.__directed == other.is_directed()
                and self.__edges == other.get_edges())

    def __hash__(self):
        return hash((self.__node_count, self.__directed, self.__edges))

    def __repr__(self):
        return "Topology(m=%d, edges=%d, %s)" % (
            self.__node_count, len(self.__edges), "directed" if self.__directed else "undirected"
        )


class WeightMatrix(object):
    """Row-stochastic weights `a_ij` adapted to a topology"""

    def __init__(self, matrix, symmetric=False):
        matrix = np.array(matrix, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise InvalidTopologyError("Weights must form a square matrix")
        if np.any(matrix < 0.0):
            raise InvalidTopologyError("Weights must be nonnegative")
        if not np.allclose(matrix.sum(axis=1), 1.0, rtol=0.0, atol=1e-12):
            raise InvalidTopologyError("Weights must be row-stochastic")
        if symmetric and not np.array_equal(matrix, matrix.T):
            raise InvalidTopologyError("Weights of an undirected topology must be symmetric")
        matrix.setflags(write=False)
        self.__matrix = matrix
        self.__symmetric = symmetric

    def get_array(self):
        """:rtype: numpy.ndarray"""
        return self.__matrix

    def get_node_count(self):
        """:rtype: int"""
        return self.__matrix.shape[0]

    def is_symmetric(self):
        """:rtype: bool"""
        return self.__symmetric

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.__matrix.copy()
        return self.__matrix.astype(dtype)


class PerronVector(object):
    """Normalized positive left eigenvector `pi` of a row-stochastic matrix"""

    def __init__(self, pi, residual):
        self.__pi = np.asarray(pi, dtype=float)
        self.__residual = float(residual)

    def get_pi(self):
        """:rtype: numpy.ndarray"""
        return self.__pi

    def get_residual(self):
        """Returns `||pi' A - pi'||_inf`
        :rtype: float
        """
        return self.__residual


def build_weights(topology, rule=None):
    """Returns row-stochastic weights adapted to `topology`

    The Metropolis rule (default for undirected topologies) gives `1 / (1 + max(deg_i, deg_j))`
    on every edge. The in-degree rule (default for directed topologies) gives
    `1 / (|N_i^in| + 1)` to every in-neighbor of `i`. The diagonal absorbs the remainder.

    :type topology: Topology
    :type rule: str
    :rtype: WeightMatrix
    """
    if rule is None:
        rule = scenopt.tags.WEIGHT_RULE_IN_DEGREE if topology.is_directed() else scenopt.tags.WEIGHT_RULE_METROPOLIS

    m = topology.get_node_count()
    matrix = np.zeros((m, m))

    if rule == scenopt.tags.WEIGHT_RULE_METROPOLIS:
        if topology.is_directed():
            raise InvalidTopologyError("The Metropolis rule needs an undirected topology")
        for (i, j) in topology.get_edges():
            matrix[i, j] = 1.0 / (1.0 + max(topology.get_in_degree(i), topology.get_in_degree(j)))
    elif rule == scenopt.tags.WEIGHT_RULE_IN_DEGREE:
        for i in range(m):
            neighbors = topology.get_in_neighbors(i)
            for j in neighbors:
                matrix[i, j] = 1.0 / (len(neighbors) + 1.0)
    else:
        raise InvalidTopologyError("Unknown weight rule %r" % (rule,))

    # sum in a fixed order so that symmetric rows give the same diagonal bitwise
    for i in range(m):
        matrix[i, i] = 1.0 - math.fsum(matrix[i, j] for j in range(m) if j != i)

    return WeightMatrix(matrix, symmetric=not topology.is_directed())


def laplacian(weights):
    """Returns `L = I - A`
    :rtype: numpy.ndarray
    """
    matrix = np.asarray(weights, dtype=float)
    return np.eye(matrix.shape[0]) - matrix


def is_strongly_connected(topology):
    """Checks whether every node reaches every other node along directed paths
    :type topology: Topology
    :rtype: bool
    """
    if topology.get_node_count() == 1:
        return True
    component_count, _ = connected_components(csr_matrix(topology.get_adjacency()),
                                              directed=True, connection='strong')
    return component_count == 1


def left_eigenvector(weights, tol=DEFAULT_TOLERANCE, max_iterations=DEFAULT_MAX_ITERATIONS):
    """Returns the normalized left eigenvector `pi' A = pi'` with `sum(pi) = 1`

    Runs the lazy power iteration `pi <- (pi + pi A) / 2`, which shares its fixed point with
    `A` and converges for every irreducible row-stochastic matrix.

    :type tol: float
    :type max_iterations: int
    :rtype: PerronVector
    """
    matrix = np.asarray(weights, dtype=float)
    m = matrix.shape[0]
    pi = np.full(m, 1.0 / m)

    for iteration in range(max_iterations):
        residual = float(np.max(np.abs(pi @ matrix - pi)))
        if residual <= tol:
            break
        pi = 0.5 * (pi + pi @ matrix)
        pi = pi / pi.sum()
    else:
        raise ConvergenceError(
            "Left eigenvector did not converge within %d iterations (residual %g)" % (max_iterations, residual)
        )

    if np.any(pi <= 0.0):
        raise ConvergenceError("Left eigenvector has non-positive entries; the weights are likely reducible")

    logger.debug("Left eigenvector converged after %d iterations", iteration)
    return PerronVector(pi, residual)


def consensus_contraction_factor(weights, pi, tol=1e-9, max_doublings=40):
    """Returns an estimate of the spectral radius of `A - 1 pi'`

    Uses `||B^k||^(1/k)` with `k = 1, 2, 4, ...` obtained by repeated squaring of the
    rescaled matrix.

    :type pi: PerronVector
    :rtype: float
    """
    matrix = np.asarray(weights, dtype=float)
    pi_vector = pi.get_pi() if isinstance(pi, PerronVector) else np.asarray(pi, dtype=float)
    power_matrix = matrix - np.outer(np.ones(matrix.shape[0]), pi_vector)

    log_scale = 0.0
    power = 1
    estimate = None
    for _ in range(max_doublings):
        norm = float(np.linalg.norm(power_matrix, 2))
        if norm == 0.0:
            return 0.0
        previous = estimate
        estimate = math.exp((log_scale + math.log(norm)) / power)
        if previous is not None and abs(estimate - previous) <= tol:
            break
        log_scale = 2.0 * (log_scale + math.log(norm))
        power_matrix = power_matrix / norm
        power_matrix = power_matrix @ power_matrix
        power *= 2
    return estimate


def sample_time_varying(base, activation_prob, rng):
    """Keeps every edge of `base` independently with probability `activation_prob`

    Undirected edges are kept or dropped as a pair so that the sample stays undirected.

    :type base: Topology
    :type activation_prob: float
    :type rng: numpy.random.Generator
    :rtype: Topology
    """
    if not 0.0 < activation_prob <= 1.0:
        raise InvalidTopologyError("Activation probability must lie in (0, 1], got %r" % (activation_prob,))
    if activation_prob == 1.0:
        return base

    if base.is_directed():
        candidates = sorted(base.get_edges())
    else:
        candidates = sorted((i, j) for (i, j) in base.get_edges() if i < j)
    keep = rng.random(len(candidates)) < activation_prob
    kept = [edge for edge, flag in zip(candidates, keep) if flag]
    return Topology(base.get_node_count(), kept, directed=base.is_directed())


# Topology generators

def ring(node_count, directed=False):
    """Ring `i <-> i + 1`; the directed ring sends clockwise, node `i + 1` receiving from `i`
    :rtype: Topology
    """
    edges = [((i + 1) % node_count, i) for i in range(node_count)] if node_count > 1 else []
    return Topology(node_count, edges, directed=directed)


def chain(node_count, directed=True):
    """Path `0 -> 1 -> ... -> m - 1`
    :rtype: Topology
    """
    return Topology(node_count, [(i + 1, i) for i in range(node_count - 1)], directed=directed)


def complete(node_count, directed=False):
    """:rtype: Topology"""
    edges = [(i, j) for i in range(node_count) for j in range(node_count) if i != j]
    return Topology(node_count, edges, directed=directed)


def ring_with_chords(node_count, chord_probability, rng, directed=False):
    """Ring plus a chord between every non-adjacent pair with probability `chord_probability`

    The directed variant orients the ring clockwise and every chord in a direction chosen
    with equal probability. Chords are drawn before any orientation, so both variants built
    from equally seeded streams link the same pairs.

    :type rng: numpy.random.Generator
    :rtype: Topology
    """
    edges = list(ring(node_count, directed=True).get_edges())
    pairs = [(i, j) for i in range(node_count) for j in range(i + 2, node_count)
             if not (i == 0 and j == node_count - 1)]
    chords = [pair for pair, draw in zip(pairs, rng.random(len(pairs))) if draw < chord_probability]
    if directed:
        flips = rng.random(len(chords)) < 0.5
        edges.extend((i, j) if flip else (j, i) for (i, j), flip in zip(chords, flips))
    else:
        edges.extend((j, i) for (i, j) in chords)
    return Topology(node_count, edges, directed=directed)
