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
Command line front end

    scenopt complexity --eps 0.002 --delta 1e-4 --n 3
    scenopt solve experiment.cfg --output runs/lp
    scenopt ident --rho 0,1,2,3 --nodes 10 --samples 30
    scenopt report runs/lp/trace.csv

Every tabular output is comma separated text starting with a header line. The exit codes
are declared in `scenopt.tags`.
"""

import argparse
import configparser
import csv
import logging
import os
import sys

import scenopt.tags
from scenopt.engine import CheckpointError, ConnectivityError, Engine, RunConfig, StoppingRule, read_trace, \
    write_trace
from scenopt.graph import ConvergenceError, InvalidTopologyError, chain, complete, ring, ring_with_chords
from scenopt.helpers import STREAM_GRAPH, STREAM_SCENARIOS, make_stream
from scenopt.oracle import FeasibilityFailureError, InfeasibleProblemError
from scenopt.parser import FormatViolationError, Parser
from scenopt.primal_dual import ConfigurationError
from scenopt.problems.domain import InvalidDomainError
from scenopt.problems.family import DimensionMismatchError
from scenopt.problems.halfspace import halfspace_problem
from scenopt.problems.identification import DEFAULT_HALF_WIDTH, RobustIdentProblem
from scenopt.rand_proj import DegenerateSubgradientError
from scenopt.scenario import InsufficientCapacityError, InvalidParameterError, Partition, \
    SampleComplexityParams, UnsupportedDistributionError, binomial_tail_holds, draw_scenarios, \
    minimal_complexity_by_search, partition_samples, sample_complexity
from scenopt.schedule import InvalidScheduleError, StepSchedule

logger = logging.getLogger(__name__)

IDENT_INPUT = (1.0, 2.0, 3.0)
IDENT_OUTPUT = (4.0, 5.0, 6.0)
IDENT_CHORD_PROBABILITY = 0.05

CONFIGURATION_ERRORS = (ConfigurationError, InvalidTopologyError, FormatViolationError, InvalidParameterError,
                        InsufficientCapacityError, InvalidScheduleError, InvalidDomainError, DimensionMismatchError,
                        UnsupportedDistributionError)
NUMERICAL_ERRORS = (ConvergenceError, DegenerateSubgradientError, FeasibilityFailureError, InfeasibleProblemError)

DEFAULTS = {
    "engine": {
        "algorithm": scenopt.tags.ALGORITHM_PRIMAL_DUAL,
        "max_rounds": "10000",
        "objective_tol": "1e-6",
        "window": "100",
        "seed": "0",
        "workers": "1",
    },
    "graph": {
        "kind": scenopt.tags.GRAPH_RING,
        "nodes": "4",
        "directed": "false",
        "chord_probability": "0.05",
    },
    "problem": {"kind": scenopt.tags.PROBLEM_HALFSPACE},
    "scenario": {},
    "primal_dual": {"rho": "1.0"},
    "rand_proj": {"beta": "1.0"},
    "schedule": {"zeta0": "1.0", "exponent": "1.0"},
    "output": {"directory": ".", "trace": "trace.csv", "states": "states.csv"},
}


def parse_floats(text):
    """Parses a comma separated list of numbers
    :type text: str
    :rtype: list of float
    """
    return [float(part) for part in text.split(",") if part.strip()]


def rho_grid(start=0.0, stop=3.0, step=0.2):
    """Returns the uncertainty levels `start, start + step, ..., stop`
    :rtype: list of float
    """
    count = int(round((stop - start) / step)) + 1
    return [round(start + index * step, 10) for index in range(count)]


class ExperimentSpec(object):
    """Experiment description read from sectioned `key = value` text

    Relative paths are resolved against `base_directory`, the directory of the configuration
    file when it was read from disk.
    """

    def __init__(self, parser, base_directory="."):
        self.__parser = parser
        self.__base_directory = base_directory

    @classmethod
    def from_string(cls, text, base_directory="."):
        """:rtype: ExperimentSpec"""
        parser = configparser.ConfigParser(interpolation=None)
        try:
            parser.read_string(text)
        except configparser.Error as error:
            raise ConfigurationError("Malformed configuration: %s" % error)
        for section in parser.sections():
            if section not in DEFAULTS:
                raise ConfigurationError("Unknown configuration section [%s]" % section)
        return cls(parser, base_directory)

    @classmethod
    def from_file(cls, path):
        """:rtype: ExperimentSpec"""
        with open(path, "r", encoding="utf-8") as config_file:
            return cls.from_string(config_file.read(), os.path.dirname(os.path.abspath(path)))

    def to_string(self):
        """:rtype: str"""
        lines = []
        for section in self.__parser.sections():
            lines.append("[%s]" % section)
            lines.extend("%s = %s" % (key, value) for key, value in self.__parser.items(section))
            lines.append("")
        return "\n".join(lines)

    def as_dict(self):
        """:rtype: dict"""
        return {section: dict(self.__parser.items(section)) for section in self.__parser.sections()}

    def __eq__(self, other):
        return isinstance(other, ExperimentSpec) and self.as_dict() == other.as_dict()

    def get(self, section, key, fallback=None):
        """Returns a raw value, falling back to the built-in default
        :rtype: str
        """
        default = DEFAULTS.get(section, {}).get(key, fallback)
        if not self.__parser.has_section(section):
            return default
        return self.__parser.get(section, key, fallback=default)

    def __number(self, convert, section, key, fallback=None):
        value = self.get(section, key)
        if value is None:
            return fallback
        try:
            return convert(value)
        except ValueError:
            raise ConfigurationError("[%s] %s must be a number, got %r" % (section, key, value))

    def __flag(self, section, key):
        value = self.get(section, key, "false").strip().lower()
        if value not in configparser.ConfigParser.BOOLEAN_STATES:
            raise ConfigurationError("[%s] %s must be a boolean, got %r" % (section, key, value))
        return configparser.ConfigParser.BOOLEAN_STATES[value]

    def __path(self, value):
        return value if os.path.isabs(value) else os.path.join(self.__base_directory, value)

    def get_output_directory(self):
        """:rtype: str"""
        return self.__path(self.get("output", "directory"))

    def get_trace_path(self):
        """:rtype: str"""
        return os.path.join(self.get_output_directory(), self.get("output", "trace"))

    def get_states_path(self):
        """:rtype: str"""
        return os.path.join(self.get_output_directory(), self.get("output", "states"))

    def build_topology(self):
        """:rtype: scenopt.graph.Topology"""
        kind = self.get("graph", "kind")
        if kind == scenopt.tags.GRAPH_FILE:
            path = self.get("graph", "path")
            if path is None:
                raise ConfigurationError("[graph] kind = file needs a path")
            return Parser().parse_file(self.__path(path))
        nodes = self.__number(int, "graph", "nodes")
        directed = self.__flag("graph", "directed")
        if kind == scenopt.tags.GRAPH_RING:
            return ring(nodes, directed)
        if kind == scenopt.tags.GRAPH_CHAIN:
            return chain(nodes, directed)
        if kind == scenopt.tags.GRAPH_COMPLETE:
            return complete(nodes, directed)
        if kind == scenopt.tags.GRAPH_RING_CHORDS:
            rng = make_stream(self.__number(int, "engine", "seed"), STREAM_GRAPH)
            return ring_with_chords(nodes, self.__number(float, "graph", "chord_probability"), rng, directed)
        raise ConfigurationError("Unknown graph kind %r" % (kind,))

    def build_problem(self):
        """:rtype: scenopt.problems.problem.ScenarioProblem"""
        kind = self.get("problem", "kind")
        try:
            if kind == scenopt.tags.PROBLEM_HALFSPACE:
                objective = parse_floats(self.get("problem", "objective", "1, 1"))
                return halfspace_problem(objective, self.__number(float, "problem", "half_width", 10.0),
                                         self.__number(float, "problem", "offset_low", 0.5),
                                         self.__number(float, "problem", "offset_high", 1.5))
            if kind == scenopt.tags.PROBLEM_IDENT:
                return RobustIdentProblem(parse_floats(self.get("problem", "u", "1, 2, 3")),
                                          parse_floats(self.get("problem", "y", "4, 5, 6")),
                                          self.__number(float, "problem", "rho", 0.0),
                                          self.__number(float, "problem", "half_width", DEFAULT_HALF_WIDTH))
        except ValueError:
            raise ConfigurationError("Malformed vector in [problem]")
        raise ConfigurationError("Unknown problem kind %r" % (kind,))

    def build_partition(self, node_count):
        """Fixed `samples_per_node`, or the sample complexity of `epsilon`, `delta`, `n` spread
        over the nodes
        :rtype: scenopt.scenario.Partition
        """
        samples = self.__number(int, "scenario", "samples_per_node")
        if samples is not None:
            if samples < 0:
                raise ConfigurationError("samples_per_node must be nonnegative, got %r" % (samples,))
            return Partition([samples] * node_count)
        epsilon = self.__number(float, "scenario", "epsilon")
        delta = self.__number(float, "scenario", "delta")
        dimension = self.__number(int, "scenario", "n")
        if epsilon is None or delta is None or dimension is None:
            raise ConfigurationError("[scenario] needs samples_per_node or epsilon, delta and n")
        n_bin = sample_complexity(SampleComplexityParams(epsilon, delta, dimension))
        capacity = self.__number(int, "scenario", "capacity", -(-n_bin // node_count))
        return partition_samples(n_bin, [capacity] * node_count)

    def build_stopping_rule(self):
        """:rtype: scenopt.engine.StoppingRule"""
        return StoppingRule(self.__number(int, "engine", "max_rounds"),
                            self.__number(float, "engine", "consensus_tol"),
                            self.__number(float, "engine", "feasibility_tol"),
                            self.__number(float, "engine", "objective_tol"),
                            self.__number(int, "engine", "window"))

    def build_run_config(self, workers=None):
        """:rtype: scenopt.engine.RunConfig"""
        topology = self.build_topology()
        activation = self.__number(float, "graph", "activation_probability")
        return RunConfig(
            self.get("engine", "algorithm"),
            topology,
            self.build_problem(),
            self.build_partition(topology.get_node_count()),
            self.build_stopping_rule(),
            StepSchedule(self.__number(float, "schedule", "zeta0"), self.__number(float, "schedule", "exponent")),
            seed=self.__number(int, "engine", "seed"),
            rho=self.__number(float, "primal_dual", "rho"),
            beta=self.__number(float, "rand_proj", "beta"),
            activation_probability=activation,
            weight_rule=self.get("graph", "weight_rule"),
            workers=self.__number(int, "engine", "workers") if workers is None else workers,
        )


def _writer(stream):
    return csv.writer(stream, lineterminator="\n")


def cmd_complexity(args, stream):
    """Prints the closed-form sample complexity, the smallest `N` meeting the binomial tail
    condition, and whether the condition holds at the closed-form value
    """
    try:
        params = SampleComplexityParams(args.eps, args.delta, args.n)
    except InvalidParameterError as error:
        logger.error("%s", error)
        return scenopt.tags.EXIT_USAGE
    n_bin = sample_complexity(params)
    writer = _writer(stream)
    writer.writerow(["epsilon", "delta", "n", "n_bin", "n_min", "tail_holds"])
    writer.writerow([repr(args.eps), repr(args.delta), args.n, n_bin, minimal_complexity_by_search(params),
                     str(binomial_tail_holds(n_bin, params)).lower()])
    return scenopt.tags.EXIT_OK


def write_states(states, stream):
    """Writes the final node iterates, one row per node"""
    dimension = states[0].get_theta().shape[0]
    writer = _writer(stream)
    writer.writerow(["node"] + ["theta_%d" % index for index in range(dimension)])
    for node, state in enumerate(states):
        writer.writerow([node] + [repr(float(value)) for value in state.get_theta()])


def cmd_solve(args, stream):
    """Runs the experiment of a configuration file and writes its trace and final states"""
    try:
        spec = ExperimentSpec.from_file(args.config)
    except OSError as error:
        logger.error("Cannot read configuration %s: %s", args.config, error)
        return scenopt.tags.EXIT_USAGE
    config = spec.build_run_config(args.workers)
    if args.resume:
        engine = Engine.resume(args.resume, config)
    else:
        engine = Engine(config)
    result = engine.run(args.checkpoint, args.checkpoint_every)

    directory = args.output if args.output is not None else spec.get_output_directory()
    os.makedirs(directory, exist_ok=True)
    with open(os.path.join(directory, spec.get("output", "trace")), "w", encoding="utf-8") as trace_file:
        write_trace(result.get_trace(), trace_file)
    with open(os.path.join(directory, spec.get("output", "states")), "w", encoding="utf-8") as states_file:
        write_states(result.get_states(), states_file)

    final = result.get_final_record()
    writer = _writer(stream)
    writer.writerow(["status", "rounds", "consensus_spread", "feasibility", "objective"])
    writer.writerow([result.get_status(), engine.get_round(), repr(final.get_consensus_spread()),
                     repr(final.get_feasibility()), repr(final.get_objective())])
    if result.get_status() == scenopt.tags.STATUS_BUDGET_EXHAUSTED:
        return scenopt.tags.EXIT_BUDGET_EXHAUSTED
    return scenopt.tags.EXIT_OK


def identification_topologies(node_count, chord_probability, seed):
    """Returns the undirected ring with chords used by the primal-dual run and its oriented copy
    used by the random projection run
    :rtype: tuple of scenopt.graph.Topology
    """
    return tuple(ring_with_chords(node_count, chord_probability, make_stream(seed, STREAM_GRAPH), directed)
                 for directed in (False, True))


def identification_row(rho, rho_index, args):
    """Solves the robust identification problem at one uncertainty level with both algorithms
    :rtype: list
    """
    problem = RobustIdentProblem(args.u, args.y, rho)
    scenario_sets = [draw_scenarios(problem, args.samples, make_stream(args.seed, STREAM_SCENARIOS, rho_index, node),
                                    node)
                     for node in range(args.nodes)]
    theta_ls = problem.least_squares_solution()
    dimension = theta_ls.shape[0]
    partition = Partition([args.samples] * args.nodes)
    schedule = StepSchedule(args.zeta0, args.exponent)

    residuals = []
    topologies = identification_topologies(args.nodes, args.chord_probability, args.seed)
    for algorithm, topology in zip((scenopt.tags.ALGORITHM_PRIMAL_DUAL, scenopt.tags.ALGORITHM_RAND_PROJ), topologies):
        config = RunConfig(algorithm, topology, problem, partition, StoppingRule(args.rounds), schedule,
                           seed=args.seed)
        engine = Engine(config, scenario_sets)
        engine.run()
        residuals.append(problem.max_residual(engine.average()[:dimension], scenario_sets))
        logger.info("rho %g, %s: r_sc %g", rho, algorithm, residuals[-1])

    return [rho, problem.max_residual(theta_ls, scenario_sets)] + residuals


def cmd_ident(args, stream):
    """Prints the residual table `rho, r_ls, r_sc_pd, r_sc_rp`"""
    grid = rho_grid() if args.full_grid else args.rho
    if any(rho < 0 for rho in grid):
        logger.error("Uncertainty levels must be nonnegative, got %r", grid)
        return scenopt.tags.EXIT_USAGE
    if not 0.0 <= args.chord_probability <= 1.0:
        logger.error("Chord probability must lie in [0, 1], got %r", args.chord_probability)
        return scenopt.tags.EXIT_USAGE
    rows = [identification_row(rho, index, args) for index, rho in enumerate(grid)]

    if args.output is not None:
        with open(args.output, "w", encoding="utf-8") as table_file:
            write_residual_table(rows, table_file)
    else:
        write_residual_table(rows, stream)
    return scenopt.tags.EXIT_OK


def write_residual_table(rows, stream):
    """Writes a versioned residual table"""
    stream.write("# residual table version %d\n" % scenopt.tags.RESIDUAL_TABLE_VERSION)
    writer = _writer(stream)
    writer.writerow(scenopt.tags.RESIDUAL_COLUMNS)
    for row in rows:
        writer.writerow([repr(float(value)) for value in row])


def read_residual_table(stream):
    """:rtype: list of list of float"""
    rows = [row for row in csv.reader(line for line in stream if not line.startswith("#")) if row]
    if not rows or tuple(rows[0]) != scenopt.tags.RESIDUAL_COLUMNS:
        raise ValueError("Not a residual table")
    return [[float(value) for value in row] for row in rows[1:]]


def cmd_report(args, stream):
    """Summarizes a metrics trace

    The best objective is taken over the records within the feasibility tolerance and is
    `nan` when no record qualifies.
    """
    try:
        with open(args.trace, "r", encoding="utf-8") as trace_file:
            trace = read_trace(trace_file)
    except (OSError, ValueError) as error:
        logger.error("Cannot read trace %s: %s", args.trace, error)
        return scenopt.tags.EXIT_USAGE
    if not trace:
        logger.error("Trace %s has no records", args.trace)
        return scenopt.tags.EXIT_USAGE

    final = trace[-1]
    feasible = [record.get_objective() for record in trace if record.get_feasibility() <= args.feasibility_tol]
    best_objective = min(feasible) if feasible else float("nan")
    met = final.get_consensus_spread() <= args.consensus_tol and final.get_feasibility() <= args.feasibility_tol
    writer = _writer(stream)
    writer.writerow(["rounds", "consensus_spread", "feasibility", "objective", "best_objective", "zeta_sum",
                     "tolerances_met"])
    writer.writerow([len(trace), repr(final.get_consensus_spread()), repr(final.get_feasibility()),
                     repr(final.get_objective()), repr(best_objective), repr(final.get_zeta_sum()),
                     str(met).lower()])
    return scenopt.tags.EXIT_OK


def build_parser():
    """:rtype: argparse.ArgumentParser"""
    parser = argparse.ArgumentParser(prog="scenopt",
                                     description="Scenario-based robust convex optimization over networks")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="more logging, repeatable")
    parser.add_argument("-q", "--quiet", action="store_true", help="only log errors")
    subparsers = parser.add_subparsers(dest="command")
    subparsers.required = True

    complexity = subparsers.add_parser("complexity", help="scenario sample complexity")
    complexity.add_argument("--eps", type=float, required=True, help="violation level in (0, 1)")
    complexity.add_argument("--delta", type=float, required=True, help="confidence level in (0, 1)")
    complexity.add_argument("--n", type=int, required=True, help="decision dimension")
    complexity.set_defaults(handler=cmd_complexity)

    solve = subparsers.add_parser("solve", help="run an experiment configuration")
    solve.add_argument("config", help="configuration file")
    solve.add_argument("--output", help="output directory, overrides [output] directory")
    solve.add_argument("--checkpoint", help="checkpoint file written during the run")
    solve.add_argument("--checkpoint-every", type=int, help="rounds between checkpoints")
    solve.add_argument("--resume", help="checkpoint file to resume from")
    solve.add_argument("--workers", type=int, help="worker threads, overrides [engine] workers")
    solve.set_defaults(handler=cmd_solve)

    ident = subparsers.add_parser("ident", help="robust identification residual table")
    grid = ident.add_mutually_exclusive_group()
    grid.add_argument("--rho", type=parse_floats, default=[0.0, 1.0, 2.0, 3.0], help="comma separated levels")
    grid.add_argument("--full-grid", action="store_true", help="levels 0 to 3 in steps of 0.2")
    ident.add_argument("--u", type=parse_floats, default=list(IDENT_INPUT), help="input signal")
    ident.add_argument("--y", type=parse_floats, default=list(IDENT_OUTPUT), help="output signal")
    ident.add_argument("--nodes", type=int, default=10)
    ident.add_argument("--samples", type=int, default=30, help="scenarios per node")
    ident.add_argument("--chord-probability", type=float, default=IDENT_CHORD_PROBABILITY,
                       help="probability of a link between non-adjacent ring nodes")
    ident.add_argument("--seed", type=int, default=0)
    ident.add_argument("--rounds", type=int, default=5000)
    ident.add_argument("--zeta0", type=float, default=1.0)
    ident.add_argument("--exponent", type=float, default=0.6)
    ident.add_argument("--output", help="table file, standard output by default")
    ident.set_defaults(handler=cmd_ident)

    report = subparsers.add_parser("report", help="summarize a metrics trace")
    report.add_argument("trace", help="trace file written by solve")
    report.add_argument("--consensus-tol", type=float, default=1e-3)
    report.add_argument("--feasibility-tol", type=float, default=1e-3)
    report.set_defaults(handler=cmd_report)
    return parser


def configure_logging(verbose, quiet):
    if quiet:
        level = logging.ERROR
    elif verbose >= 2:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = logging.WARNING
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def main(argv=None, stream=None):
    """Runs the command line and returns its exit code
    :type argv: list of str
    :rtype: int
    """
    stream = sys.stdout if stream is None else stream
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exit_request:
        return scenopt.tags.EXIT_OK if not exit_request.code else scenopt.tags.EXIT_USAGE
    configure_logging(args.verbose, args.quiet)

    try:
        return args.handler(args, stream)
    except CONFIGURATION_ERRORS as error:
        logger.error("Configuration error: %s", error)
        return scenopt.tags.EXIT_CONFIGURATION
    except ConnectivityError as error:
        logger.error("Connectivity error: %s", error)
        return scenopt.tags.EXIT_CONNECTIVITY
    except CheckpointError as error:
        logger.error("Checkpoint error: %s", error)
        return scenopt.tags.EXIT_CHECKPOINT
    except NUMERICAL_ERRORS as error:
        logger.error("Numerical error: %s", error)
        return scenopt.tags.EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
