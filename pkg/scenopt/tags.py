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
Tags used throughout the package: algorithm names, weight rules, domain and support
kinds, problem kinds, file columns and CLI exit codes.
"""

ALGORITHM_PRIMAL_DUAL = "primal_dual"
"""Value: `primal_dual`

Networked primal-dual sub-gradient iteration. Requires an undirected topology."""

ALGORITHM_RAND_PROJ = "rand_proj"
"""Value: `rand_proj`

Networked two-stage random projection iteration. Works on directed topologies."""

ALGORITHMS = (ALGORITHM_PRIMAL_DUAL, ALGORITHM_RAND_PROJ)

WEIGHT_RULE_METROPOLIS = "metropolis"
"""Value: `metropolis`

Symmetric weights `a_ij = 1 / (1 + max(deg_i, deg_j))` for undirected graphs."""

WEIGHT_RULE_IN_DEGREE = "in_degree"
"""Value: `in_degree`

Row-stochastic weights `a_ji = 1 / (|N_j^in| + 1)` for directed graphs."""

DOMAIN_BOX = "box"
"""Value: `box`

Axis-aligned box, projection by clamping."""

DOMAIN_BALL = "ball"
"""Value: `ball`

Euclidean ball, projection by radial scaling."""

DOMAIN_WHOLE = "whole"
"""Value: `whole`

The whole space, projection is the identity."""

SUPPORT_BALL = "ball"
"""Value: `ball`

Uniform distribution over a Euclidean ball."""

SUPPORT_BOX = "box"
"""Value: `box`

Uniform distribution over an axis-aligned box."""

SUPPORT_HALFSPACE = "halfspace"
"""Value: `halfspace`

Unit normal uniform on the sphere followed by an offset uniform on an interval."""

SUPPORT_TAGGED = "tagged"
"""Value: `tagged`

Another support whose samples are prefixed with the owning node index."""

SUPPORT_KINDS = (SUPPORT_BALL, SUPPORT_BOX, SUPPORT_HALFSPACE, SUPPORT_TAGGED)

PROBLEM_HALFSPACE = "halfspace"
"""Value: `halfspace`

Linear objective over randomly sampled halfspaces inside a box."""

PROBLEM_IDENT = "ident"
"""Value: `ident`

Robust least-squares identification of an impulse response."""

GRAPH_RING = "ring"
GRAPH_CHAIN = "chain"
GRAPH_COMPLETE = "complete"
GRAPH_RING_CHORDS = "ring_chords"
GRAPH_FILE = "file"

STATUS_CONVERGED = "converged"
"""Value: `converged`

The final metrics record meets every requested tolerance."""

STATUS_COMPLETED = "completed"
"""Value: `completed`

The round budget was used and no tolerance was requested."""

STATUS_BUDGET_EXHAUSTED = "budget_exhausted"
"""Value: `budget_exhausted`

The round budget was used without meeting the requested tolerances."""

TRACE_COLUMNS = ("k", "consensus_spread", "feasibility", "objective", "zeta_sum", "wall_time_ms")
"""Header of the metrics trace file."""

RESIDUAL_COLUMNS = ("rho", "r_ls", "r_sc_pd", "r_sc_rp")
"""Header of the identification residual table. Version 1."""

RESIDUAL_TABLE_VERSION = 1

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CONFIGURATION = 3
EXIT_CONNECTIVITY = 4
EXIT_BUDGET_EXHAUSTED = 5
EXIT_CHECKPOINT = 6
EXIT_NUMERICAL = 7
