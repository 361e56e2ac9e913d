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
Synchronous round-based simulator

The engine owns every node state between rounds. A round exchanges messages along the
edges of the (possibly resampled) topology, updates all nodes from the values of the
previous round and appends a `MetricsRecord` to the trace.
"""

import csv
import hashlib
import io
import json
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

import scenopt.tags
from scenopt.graph import WeightMatrix, build_weights, is_strongly_connected, laplacian, left_eigenvector, \
    sample_time_varying
from scenopt.helpers import STREAM_SCENARIOS, STREAM_SELECTION, STREAM_TOPOLOGY, make_stream, node_streams
from scenopt.primal_dual import ConfigurationError, PDConfig, PDNodeState, g_eval, pd_round
from scenopt.rand_proj import RPConfig, RPNodeState, rp_round
from scenopt.scenario import draw_partition
from scenopt.schedule import StepSchedule

logger = logging.getLogger(__name__)

CHECKPOINT_MAGIC = b"SCENOPT-CHECKPOINT\n"
CHECKPOINT_VERSION = 1


class ConnectivityError(Exception):
    pass


class CheckpointError(Exception):
    pass


def exchange(values, topology):
    """Delivers `values[i]` to every out-neighbor of `i`

    Returns one inbox per node mapping the sending node to a copy of its value.

    :type values: list of numpy.ndarray
    :type topology: scenopt.graph.Topology
    :rtype: list of dict
    """
    return [{i: np.array(values[i], copy=True) for i in topology.get_in_neighbors(j)}
            for j in range(topology.get_node_count())]


class Network(object):
    """Topology with its weights and Laplacian, counting the exchange waves it carries"""

    def __init__(self, topology, weight_rule=None):
        self.__topology = topology
        self.__weights = build_weights(topology, weight_rule)
        self.__laplacian = laplacian(self.__weights)
        self.__wave_count = 0

    def get_topology(self):
        """:rtype: scenopt.graph.Topology"""
        return self.__topology

    def get_weights(self):
        """:rtype: scenopt.graph.WeightMatrix"""
        return self.__weights

    def get_matrix(self):
        """:rtype: numpy.ndarray"""
        return self.__weights.get_array()

    def get_laplacian(self):
        """:rtype: numpy.ndarray"""
        return self.__laplacian

    def get_node_count(self):
        """:rtype: int"""
        return self.__topology.get_node_count()

    def get_wave_count(self):
        """Returns the number of exchange waves carried so far
        :rtype: int
        """
        return self.__wave_count

    def exchange(self, values, channel=None):
        """Delivers one wave; every channel shares the same links
        :rtype: list of dict
        """
        self.__wave_count += 1
        return exchange(values, self.__topology)


def mean_weights(weights, activation_probability):
    """Returns `p A + (1 - p) I`, the expected weights when every link of `A` is active with
    probability `p` and a silent link's weight stays on the diagonal

    :type weights: scenopt.graph.WeightMatrix
    :rtype: scenopt.graph.WeightMatrix
    """
    matrix = activation_probability * np.array(weights.get_array())
    m = matrix.shape[0]
    for i in range(m):
        matrix[i, i] = 1.0 - math.fsum(matrix[i, j] for j in range(m) if j != i)
    return WeightMatrix(matrix, symmetric=weights.is_symmetric())


class MeanGraphNetwork(object):
    """Stochastically time-varying network coupled through its mean weights

    Messages travel only along the links active in the current round. Every node keeps, per
    channel, the last value received from each neighbor of the base topology and uses its own
    value for a neighbor it has not heard from yet. The couplings are the mean weights
    `p A + (1 - p) I` of the base weights `A`.
    """

    def __init__(self, topology, activation_probability, weight_rule=None):
        self.__topology = topology
        self.__active = topology
        self.__weights = mean_weights(build_weights(topology, weight_rule), activation_probability)
        self.__laplacian = laplacian(self.__weights)
        self.__caches = {}
        self.__wave_count = 0

    def get_topology(self):
        """Returns the base topology
        :rtype: scenopt.graph.Topology
        """
        return self.__topology

    def get_active_topology(self):
        """Returns the links active in the current round
        :rtype: scenopt.graph.Topology
        """
        return self.__active

    def activate(self, topology):
        """Sets the links active in the next waves
        :type topology: scenopt.graph.Topology
        """
        self.__active = topology

    def get_weights(self):
        """:rtype: scenopt.graph.WeightMatrix"""
        return self.__weights

    def get_matrix(self):
        """:rtype: numpy.ndarray"""
        return self.__weights.get_array()

    def get_laplacian(self):
        """:rtype: numpy.ndarray"""
        return self.__laplacian

    def get_node_count(self):
        """:rtype: int"""
        return self.__topology.get_node_count()

    def get_wave_count(self):
        """:rtype: int"""
        return self.__wave_count

    def exchange(self, values, channel=None):
        """Delivers `values` along the active links and returns, for every node, the latest
        value known from each base neighbor
        :rtype: list of dict
        """
        self.__wave_count += 1
        cache = self.__caches.setdefault(channel, {})
        delivered = exchange(values, self.__active)
        inboxes = []
        for j in range(self.__topology.get_node_count()):
            for i, value in delivered[j].items():
                cache[(j, i)] = value
            inboxes.append({i: np.array(cache[(j, i)] if (j, i) in cache else values[j], dtype=float, copy=True)
                            for i in self.__topology.get_in_neighbors(j)})
        return inboxes

    def get_cache_arrays(self):
        """Returns the received values as arrays keyed `cache_<channel>` with the matching
        `known_<channel>` masks
        :rtype: dict
        """
        arrays = {}
        m = self.__topology.get_node_count()
        for channel in sorted(self.__caches):
            cache = self.__caches[channel]
            if not cache:
                continue
            dimension = next(iter(cache.values())).shape[0]
            values = np.zeros((m, m, dimension))
            known = np.zeros((m, m), dtype=bool)
            for (j, i), value in cache.items():
                values[j, i] = value
                known[j, i] = True
            arrays["cache_%s" % channel] = values
            arrays["known_%s" % channel] = known
        return arrays

    def restore_cache_arrays(self, arrays):
        """Restores the received values written by `get_cache_arrays()`"""
        self.__caches = {}
        for name in arrays:
            if not name.startswith("cache_"):
                continue
            channel = name[len("cache_"):]
            values = arrays[name]
            known = arrays["known_%s" % channel]
            self.__caches[channel] = {(int(j), int(i)): np.array(values[j, i], copy=True)
                                      for j, i in zip(*np.nonzero(known))}


class MetricsRecord(object):
    """Diagnostics of one round

    Equality ignores the wall time, so traces of equal runs compare equal.
    """

    def __init__(self, round_index, consensus_spread, feasibility, objective, zeta_sum, wall_time):
        self.__round = int(round_index)
        self.__consensus_spread = float(consensus_spread)
        self.__feasibility = float(feasibility)
        self.__objective = float(objective)
        self.__zeta_sum = float(zeta_sum)
        self.__wall_time = float(wall_time)

    def get_round(self):
        """:rtype: int"""
        return self.__round

    def get_consensus_spread(self):
        """Returns `max_j ||theta_j - theta_bar||`
        :rtype: float
        """
        return self.__consensus_spread

    def get_feasibility(self):
        """Returns `max_j max g_j(theta_j)`
        :rtype: float
        """
        return self.__feasibility

    def get_objective(self):
        """Returns `c' theta_bar`
        :rtype: float
        """
        return self.__objective

    def get_zeta_sum(self):
        """:rtype: float"""
        return self.__zeta_sum

    def get_wall_time(self):
        """Returns the duration of the round in milliseconds
        :rtype: float
        """
        return self.__wall_time

    def to_row(self):
        """:rtype: list"""
        return [self.__round, self.__consensus_spread, self.__feasibility, self.__objective,
                self.__zeta_sum, self.__wall_time]

    def __eq__(self, other):
        return isinstance(other, MetricsRecord) and self.to_row()[:-1] == other.to_row()[:-1]

    def __repr__(self):
        return "MetricsRecord(k=%d, spread=%g, feasibility=%g, objective=%g)" % (
            self.__round, self.__consensus_spread, self.__feasibility, self.__objective
        )


class StoppingRule(object):
    """Round budget plus optional thresholds

    A run stops before `max_rounds` only when every given threshold holds and the objective
    moved by at most `objective_tol * max(1, |objective|)` over the last `window` rounds.
    """

    def __init__(self, max_rounds, consensus_tol=None, feasibility_tol=None, objective_tol=1e-6, window=100):
        if int(max_rounds) != max_rounds or max_rounds < 1:
            raise ConfigurationError("max_rounds must be a positive integer, got %r" % (max_rounds,))
        if window < 1:
            raise ConfigurationError("Stagnation window must be positive, got %r" % (window,))
        self.__max_rounds = int(max_rounds)
        self.__consensus_tol = consensus_tol
        self.__feasibility_tol = feasibility_tol
        self.__objective_tol = objective_tol
        self.__window = int(window)

    def get_max_rounds(self):
        """:rtype: int"""
        return self.__max_rounds

    def get_consensus_tol(self):
        return self.__consensus_tol

    def get_feasibility_tol(self):
        return self.__feasibility_tol

    def get_objective_tol(self):
        return self.__objective_tol

    def get_window(self):
        """:rtype: int"""
        return self.__window

    def has_thresholds(self):
        """:rtype: bool"""
        return self.__consensus_tol is not None or self.__feasibility_tol is not None

    def is_met(self, record):
        """Checks the consensus and feasibility thresholds on a single record
        :type record: MetricsRecord
        :rtype: bool
        """
        if self.__consensus_tol is not None and record.get_consensus_spread() > self.__consensus_tol:
            return False
        if self.__feasibility_tol is not None and record.get_feasibility() > self.__feasibility_tol:
            return False
        return True

    def should_stop(self, trace):
        """:type trace: list of MetricsRecord
        :rtype: bool
        """
        if not trace:
            return False
        if len(trace) >= self.__max_rounds:
            return True
        if not self.has_thresholds() or not self.is_met(trace[-1]) or len(trace) <= self.__window:
            return False
        if self.__objective_tol is None:
            return True
        current = trace[-1].get_objective()
        change = abs(current - trace[-1 - self.__window].get_objective())
        return change <= self.__objective_tol * max(1.0, abs(current))

    def status(self, trace):
        """Returns the status tag of a finished run
        :rtype: str
        """
        if not self.has_thresholds():
            return scenopt.tags.STATUS_COMPLETED
        if trace and self.is_met(trace[-1]):
            return scenopt.tags.STATUS_CONVERGED
        return scenopt.tags.STATUS_BUDGET_EXHAUSTED


class RunConfig(object):
    """Everything a run needs: algorithm, topology, problem, partition, schedule and
    stopping rule, with the master seed every random stream is derived from
    """

    def __init__(self, algorithm, topology, problem, partition, stopping_rule, schedule=None, seed=0,
                 rho=1.0, beta=1.0, activation_probability=None, weight_rule=None, workers=1):
        if algorithm not in scenopt.tags.ALGORITHMS:
            raise ConfigurationError("Unknown algorithm %r" % (algorithm,))
        if algorithm == scenopt.tags.ALGORITHM_PRIMAL_DUAL and topology.is_directed():
            raise ConfigurationError("The primal-dual iteration needs an undirected topology")
        if partition.get_node_count() != topology.get_node_count():
            raise ConfigurationError("Partition covers %d nodes but the topology has %d"
                                     % (partition.get_node_count(), topology.get_node_count()))
        if activation_probability is not None and not 0.0 < activation_probability <= 1.0:
            raise ConfigurationError("Activation probability must lie in (0, 1], got %r"
                                     % (activation_probability,))
        if int(workers) != workers or workers < 1:
            raise ConfigurationError("workers must be a positive integer, got %r" % (workers,))
        self.__algorithm = algorithm
        self.__topology = topology
        self.__problem = problem
        self.__partition = partition
        self.__stopping_rule = stopping_rule
        self.__schedule = StepSchedule() if schedule is None else schedule
        self.__seed = int(seed)
        self.__activation_probability = activation_probability
        self.__weight_rule = weight_rule
        self.__workers = int(workers)
        if algorithm == scenopt.tags.ALGORITHM_PRIMAL_DUAL:
            self.__algorithm_config = PDConfig(rho, self.__schedule)
        else:
            self.__algorithm_config = RPConfig(beta, self.__schedule)

    def get_algorithm(self):
        """:rtype: str"""
        return self.__algorithm

    def get_topology(self):
        """:rtype: scenopt.graph.Topology"""
        return self.__topology

    def get_problem(self):
        """:rtype: scenopt.problems.problem.ScenarioProblem"""
        return self.__problem

    def get_partition(self):
        """:rtype: scenopt.scenario.Partition"""
        return self.__partition

    def get_stopping_rule(self):
        """:rtype: StoppingRule"""
        return self.__stopping_rule

    def get_schedule(self):
        """:rtype: scenopt.schedule.StepSchedule"""
        return self.__schedule

    def get_seed(self):
        """:rtype: int"""
        return self.__seed

    def get_activation_probability(self):
        return self.__activation_probability

    def get_weight_rule(self):
        return self.__weight_rule

    def get_workers(self):
        """:rtype: int"""
        return self.__workers

    def get_algorithm_config(self):
        """Returns the `PDConfig` or `RPConfig` of the selected algorithm"""
        return self.__algorithm_config


class RunResult(object):

    def __init__(self, states, trace, status):
        self.__states = states
        self.__trace = trace
        self.__status = status

    def get_states(self):
        """:rtype: list"""
        return self.__states

    def get_trace(self):
        """:rtype: list of MetricsRecord"""
        return self.__trace

    def get_status(self):
        """:rtype: str"""
        return self.__status

    def get_final_record(self):
        """:rtype: MetricsRecord"""
        return self.__trace[-1] if self.__trace else None


class Engine(object):
    """Runs the configured algorithm round by round

    :type config: RunConfig
    :param scenario_sets: per-node scenario sets; drawn from the master seed when omitted
    """

    def __init__(self, config, scenario_sets=None):
        topology = config.get_topology()
        if not is_strongly_connected(topology):
            raise ConnectivityError("The communication graph %r is not strongly connected" % (topology,))

        self.__config = config
        self.__base_network = Network(topology, config.get_weight_rule())
        self.__node_count = topology.get_node_count()
        problem = config.get_problem()

        if scenario_sets is None:
            scenario_sets = draw_partition(problem, config.get_partition(),
                                           node_streams(config.get_seed(), self.__node_count, STREAM_SCENARIOS))
        if len(scenario_sets) != self.__node_count:
            raise ConfigurationError("Got %d scenario sets for %d nodes" % (len(scenario_sets), self.__node_count))
        self.__scenario_sets = list(scenario_sets)

        if topology.is_directed():
            self.__average_weights = left_eigenvector(self.__base_network.get_weights()).get_pi()
        else:
            self.__average_weights = np.full(self.__node_count, 1.0 / self.__node_count)

        self.__selection_streams = node_streams(config.get_seed(), self.__node_count, STREAM_SELECTION)
        self.__topology_stream = make_stream(config.get_seed(), STREAM_TOPOLOGY)
        self.__network = self.__base_network
        self.__mean_network = None
        probability = config.get_activation_probability()
        if config.get_algorithm() == scenopt.tags.ALGORITHM_PRIMAL_DUAL and probability is not None \
                and probability < 1.0:
            self.__mean_network = MeanGraphNetwork(topology, probability, config.get_weight_rule())

        dimension = problem.get_dimension()
        if config.get_algorithm() == scenopt.tags.ALGORITHM_PRIMAL_DUAL:
            self.__states = [PDNodeState.initial(dimension, s.get_count()) for s in self.__scenario_sets]
        else:
            self.__states = [RPNodeState.initial(dimension) for _ in range(self.__node_count)]

        self.__round = 0
        self.__zeta_sum = 0.0
        self.__trace = []
        self.__executor = None

    def get_config(self):
        """:rtype: RunConfig"""
        return self.__config

    def get_states(self):
        """:rtype: list"""
        return list(self.__states)

    def get_trace(self):
        """:rtype: list of MetricsRecord"""
        return list(self.__trace)

    def get_round(self):
        """Returns the number of completed rounds
        :rtype: int
        """
        return self.__round

    def get_scenario_sets(self):
        """:rtype: list of scenopt.scenario.ScenarioSet"""
        return list(self.__scenario_sets)

    def get_network(self):
        """Returns the network used by the last round
        :rtype: Network
        """
        return self.__network

    def get_average_weights(self):
        """Returns the weights of the network average: `pi` for directed, uniform otherwise
        :rtype: numpy.ndarray
        """
        return self.__average_weights.copy()

    def average(self):
        """Returns `theta_bar`, the weighted average of the node iterates
        :rtype: numpy.ndarray
        """
        thetas = np.array([state.get_theta() for state in self.__states])
        return self.__average_weights @ thetas

    def __mapper(self):
        if self.__config.get_workers() == 1:
            return map
        if self.__executor is None:
            self.__executor = ThreadPoolExecutor(max_workers=self.__config.get_workers())
        return self.__executor.map

    def __next_network(self):
        probability = self.__config.get_activation_probability()
        if probability is None or probability == 1.0:
            return self.__base_network
        topology = sample_time_varying(self.__base_network.get_topology(), probability, self.__topology_stream)
        if self.__mean_network is not None:
            self.__mean_network.activate(topology)
            return self.__mean_network
        return Network(topology, self.__config.get_weight_rule())

    def __metrics(self, wall_time):
        problem = self.__config.get_problem()
        average = self.average()
        spread = max(float(np.linalg.norm(state.get_theta() - average)) for state in self.__states)
        feasibility = max(
            float(np.max(g_eval(state.get_theta(), problem.get_domain(), problem.get_family(),
                                self.__scenario_sets[j].get_samples())))
            for j, state in enumerate(self.__states)
        )
        return MetricsRecord(self.__round, spread, feasibility, problem.objective_value(average),
                             self.__zeta_sum, wall_time)

    def step(self):
        """Runs a single round and returns its metrics
        :rtype: MetricsRecord
        """
        started = time.perf_counter()
        config = self.__config
        self.__network = self.__next_network()
        if config.get_algorithm() == scenopt.tags.ALGORITHM_PRIMAL_DUAL:
            self.__states = pd_round(self.__states, self.__network, config.get_algorithm_config(), self.__round,
                                     config.get_problem(), self.__scenario_sets, self.__mapper())
        else:
            self.__states = rp_round(self.__states, self.__network, config.get_algorithm_config(), self.__round,
                                     config.get_problem(), self.__scenario_sets, self.__selection_streams,
                                     self.__mapper())
        self.__zeta_sum += config.get_schedule().step(self.__round)
        record = self.__metrics(1000.0 * (time.perf_counter() - started))
        self.__round += 1
        self.__trace.append(record)
        return record

    def run(self, checkpoint_path=None, checkpoint_every=None):
        """Runs rounds until the stopping rule fires

        With `checkpoint_path` and `checkpoint_every` a checkpoint is written every
        `checkpoint_every` rounds and once more at the end.

        :rtype: RunResult
        """
        rule = self.__config.get_stopping_rule()
        logger.info("Starting %s run on %r at round %d", self.__config.get_algorithm(),
                    self.__base_network.get_topology(), self.__round)
        try:
            while not rule.should_stop(self.__trace) and self.__round < rule.get_max_rounds():
                self.step()
                if checkpoint_path is not None and checkpoint_every and self.__round % checkpoint_every == 0:
                    self.save_checkpoint(checkpoint_path)
        finally:
            self.close()
        if checkpoint_path is not None:
            self.save_checkpoint(checkpoint_path)

        status = rule.status(self.__trace)
        if status == scenopt.tags.STATUS_BUDGET_EXHAUSTED:
            logger.warning("Round budget of %d exhausted before the tolerances were met", rule.get_max_rounds())
        logger.info("Run finished after %d rounds with status %s", self.__round, status)
        return RunResult(self.get_states(), self.get_trace(), status)

    def close(self):
        """Shuts the worker pool down"""
        if self.__executor is not None:
            self.__executor.shutdown()
            self.__executor = None

    def save_checkpoint(self, path):
        """Writes the complete engine state to `path`

        The file holds a magic line, a JSON header line (version, round, random stream states,
        trace and the SHA-256 digest of the payload) and a numpy archive with the node states.
        """
        arrays = {"theta": np.array([state.get_theta() for state in self.__states])}
        if self.__config.get_algorithm() == scenopt.tags.ALGORITHM_PRIMAL_DUAL:
            arrays["lambda"] = np.array([state.get_lambda() for state in self.__states])
            for j, state in enumerate(self.__states):
                arrays["gamma_%d" % j] = state.get_gamma()
        if self.__mean_network is not None:
            arrays.update(self.__mean_network.get_cache_arrays())
        payload = io.BytesIO()
        np.savez(payload, **arrays)
        payload = payload.getvalue()

        header = {
            "version": CHECKPOINT_VERSION,
            "algorithm": self.__config.get_algorithm(),
            "seed": self.__config.get_seed(),
            "node_count": self.__node_count,
            "round": self.__round,
            "zeta_sum": self.__zeta_sum,
            "topology_stream": self.__topology_stream.bit_generator.state,
            "selection_streams": [stream.bit_generator.state for stream in self.__selection_streams],
            "trace": [record.to_row() for record in self.__trace],
            "payload_size": len(payload),
            "sha256": hashlib.sha256(payload).hexdigest(),
        }
        with open(path, "wb") as checkpoint_file:
            checkpoint_file.write(CHECKPOINT_MAGIC)
            checkpoint_file.write(json.dumps(header).encode("utf-8") + b"\n")
            checkpoint_file.write(payload)
        logger.info("Wrote checkpoint at round %d to %s", self.__round, path)

    def __restore(self, header, arrays):
        if header["algorithm"] != self.__config.get_algorithm() or header["seed"] != self.__config.get_seed() \
                or header["node_count"] != self.__node_count:
            raise CheckpointError("Checkpoint was written by a different run configuration")
        thetas = arrays["theta"]
        if self.__config.get_algorithm() == scenopt.tags.ALGORITHM_PRIMAL_DUAL:
            self.__states = [PDNodeState(thetas[j], arrays["lambda"][j], arrays["gamma_%d" % j])
                             for j in range(self.__node_count)]
        else:
            self.__states = [RPNodeState(thetas[j]) for j in range(self.__node_count)]
        if self.__mean_network is not None:
            self.__mean_network.restore_cache_arrays(arrays)
        self.__round = int(header["round"])
        self.__zeta_sum = float(header["zeta_sum"])
        self.__topology_stream.bit_generator.state = header["topology_stream"]
        for stream, state in zip(self.__selection_streams, header["selection_streams"]):
            stream.bit_generator.state = state
        self.__trace = [MetricsRecord(*row) for row in header["trace"]]

    @classmethod
    def resume(cls, path, config, scenario_sets=None):
        """Rebuilds an engine from `config` and restores the checkpoint at `path`
        :rtype: Engine
        """
        header, arrays = read_checkpoint(path)
        engine = cls(config, scenario_sets)
        engine.__restore(header, arrays)
        logger.info("Resumed from %s at round %d", path, engine.get_round())
        return engine


def read_checkpoint(path):
    """Reads and verifies a checkpoint, returning its header and arrays
    :rtype: tuple
    """
    try:
        with open(path, "rb") as checkpoint_file:
            magic = checkpoint_file.readline()
            header_line = checkpoint_file.readline()
            payload = checkpoint_file.read()
    except OSError as error:
        raise CheckpointError("Cannot read checkpoint %s: %s" % (path, error))

    if magic != CHECKPOINT_MAGIC:
        raise CheckpointError("%s is not a checkpoint file" % path)
    try:
        header = json.loads(header_line.decode("utf-8"))
    except ValueError:
        raise CheckpointError("Checkpoint header of %s is corrupted" % path)
    if header.get("version") != CHECKPOINT_VERSION:
        raise CheckpointError("Checkpoint version %r is not supported (expected %d)"
                              % (header.get("version"), CHECKPOINT_VERSION))
    if len(payload) != header.get("payload_size") or hashlib.sha256(payload).hexdigest() != header.get("sha256"):
        raise CheckpointError("Checkpoint payload of %s fails its integrity check" % path)

    with np.load(io.BytesIO(payload)) as archive:
        arrays = {name: archive[name] for name in archive.files}
    return header, arrays


def run(config, scenario_sets=None):
    """Runs `config` to completion
    :type config: RunConfig
    :rtype: RunResult
    """
    return Engine(config, scenario_sets).run()


def write_trace(trace, stream):
    """Writes the trace as comma separated text with a header line

    Floats are written with `repr` so that a trace read back compares equal.

    :type trace: list of MetricsRecord
    """
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(scenopt.tags.TRACE_COLUMNS)
    for record in trace:
        writer.writerow([repr(value) for value in record.to_row()])


def read_trace(stream):
    """Reads a trace written by `write_trace()`
    :rtype: list of MetricsRecord
    """
    reader = csv.reader(stream)
    header = next(reader, None)
    if header is None or tuple(header) != scenopt.tags.TRACE_COLUMNS:
        raise ValueError("Not a metrics trace: unexpected header %r" % (header,))
    return [MetricsRecord(int(row[0]), *[float(value) for value in row[1:]]) for row in reader if row]
