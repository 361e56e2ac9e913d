import io
import math

import pytest

import scenopt.tags
from scenopt.cli import ExperimentSpec, identification_topologies, main, parse_floats, read_residual_table, rho_grid
from scenopt.engine import MetricsRecord, write_trace
from scenopt.primal_dual import ConfigurationError


def _run(argv):
    stream = io.StringIO()
    code = main(argv, stream)
    return code, stream.getvalue().splitlines()


def test_complexity():
    code, lines = _run(["complexity", "--eps", "0.002", "--delta", "1e-4", "--n", "3"])
    assert code == scenopt.tags.EXIT_OK
    assert lines[0] == "epsilon,delta,n,n_bin,n_min,tail_holds"
    fields = lines[1].split(",")
    assert fields[:4] == ["0.002", "0.0001", "3", "8868"]
    assert int(fields[4]) <= 8868
    assert fields[5] == "true"

    code, lines = _run(["complexity", "--eps", "0.001", "--delta", "1e-6", "--n", "32"])
    assert lines[1].split(",")[3] == "70898"


def test_complexity_usage_errors():
    assert _run(["complexity", "--eps", "2", "--delta", "0.1", "--n", "3"])[0] == scenopt.tags.EXIT_USAGE
    assert _run(["complexity", "--eps", "0.1"])[0] == scenopt.tags.EXIT_USAGE
    assert _run([])[0] == scenopt.tags.EXIT_USAGE


def test_solve_and_report(tmp_path):
    code, lines = _run(["solve", "tests/files/lp_fixture.cfg", "--output", str(tmp_path)])
    assert code == scenopt.tags.EXIT_OK
    assert lines[0] == "status,rounds,consensus_spread,feasibility,objective"
    assert lines[1].startswith("completed,200,")

    with open(str(tmp_path / "trace.csv"), "r", encoding="utf-8") as trace_file:
        trace_lines = trace_file.read().splitlines()
    assert len(trace_lines) == 201
    with open(str(tmp_path / "states.csv"), "r", encoding="utf-8") as states_file:
        assert states_file.readline().strip() == "node,theta_0,theta_1"

    code, lines = _run(["report", str(tmp_path / "trace.csv")])
    assert code == scenopt.tags.EXIT_OK
    assert lines[0].startswith("rounds,consensus_spread")
    assert lines[1].startswith("200,")


def test_solve_with_checkpoint_and_resume(tmp_path):
    checkpoint = str(tmp_path / "run.ckpt")
    first = tmp_path / "first"
    second = tmp_path / "second"
    code, _ = _run(["solve", "tests/files/lp_fixture.cfg", "--output", str(first),
                    "--checkpoint", checkpoint, "--checkpoint-every", "50"])
    assert code == scenopt.tags.EXIT_OK

    code, _ = _run(["solve", "tests/files/lp_fixture.cfg", "--output", str(second), "--resume", checkpoint,
                    "--workers", "2"])
    assert code == scenopt.tags.EXIT_OK
    assert (first / "states.csv").read_text() == (second / "states.csv").read_text()


def test_solve_error_codes(tmp_path):
    output = str(tmp_path)
    assert _run(["solve", "tests/files/missing.cfg"])[0] == scenopt.tags.EXIT_USAGE
    assert _run(["solve", "tests/files/directed_pd.cfg", "--output", output])[0] == scenopt.tags.EXIT_CONFIGURATION
    assert _run(["solve", "tests/files/chain_rp.cfg", "--output", output])[0] == scenopt.tags.EXIT_CONNECTIVITY
    assert _run(["solve", "tests/files/budget.cfg", "--output", output])[0] == scenopt.tags.EXIT_BUDGET_EXHAUSTED
    assert _run(["solve", "tests/files/lp_fixture.cfg", "--output", output,
                 "--resume", str(tmp_path / "none.ckpt")])[0] == scenopt.tags.EXIT_CHECKPOINT


def test_report_errors(tmp_path):
    assert _run(["report", str(tmp_path / "missing.csv")])[0] == scenopt.tags.EXIT_USAGE
    empty = tmp_path / "empty.csv"
    empty.write_text(",".join(scenopt.tags.TRACE_COLUMNS) + "\n")
    assert _run(["report", str(empty)])[0] == scenopt.tags.EXIT_USAGE


def test_ident_table(tmp_path):
    code, lines = _run(["ident", "--rho", "0,0.5", "--nodes", "3", "--samples", "4", "--rounds", "30"])
    assert code == scenopt.tags.EXIT_OK
    assert lines[0] == "# residual table version 1"
    rows = read_residual_table(lines)
    assert len(rows) == 2
    assert rows[0][0] == 0.0
    assert rows[0][1] == 0.0
    assert rows[1][0] == 0.5
    assert all(value >= 0.0 for row in rows for value in row)

    output = tmp_path / "table.csv"
    code, lines = _run(["ident", "--rho", "1", "--nodes", "3", "--samples", "2", "--rounds", "10",
                        "--output", str(output)])
    assert code == scenopt.tags.EXIT_OK
    assert lines == []
    with open(str(output), "r", encoding="utf-8") as table_file:
        assert len(read_residual_table(table_file)) == 1

    assert _run(["ident", "--rho", "-1"])[0] == scenopt.tags.EXIT_USAGE
    assert _run(["ident", "--rho", "1", "--full-grid"])[0] == scenopt.tags.EXIT_USAGE


def test_rho_grid_and_float_lists():
    grid = rho_grid()
    assert len(grid) == 16
    assert grid[0] == 0.0
    assert grid[1] == 0.2
    assert grid[-1] == 3.0
    assert parse_floats("1, 2.5,") == [1.0, 2.5]


def test_experiment_spec_round_trip():
    spec = ExperimentSpec.from_file("tests/files/lp_fixture.cfg")
    again = ExperimentSpec.from_string(spec.to_string())
    assert again == spec
    assert spec.get("engine", "algorithm") == scenopt.tags.ALGORITHM_RAND_PROJ
    assert spec.get("engine", "workers") == "1"
    assert spec.get_trace_path().endswith("trace.csv")

    topology = spec.build_topology()
    assert topology.get_node_count() == 4
    assert not topology.is_directed()


def test_experiment_spec_partitions():
    spec = ExperimentSpec.from_string("[scenario]\nepsilon = 0.002\ndelta = 1e-4\nn = 3\n")
    assert spec.build_partition(100).get_counts() == [89] * 100

    with pytest.raises(ConfigurationError):
        ExperimentSpec.from_string("[scenario]\nepsilon = 0.002\n").build_partition(10)
    with pytest.raises(ConfigurationError):
        ExperimentSpec.from_string("[scenario]\nsamples_per_node = many\n").build_partition(10)


def test_experiment_spec_errors():
    with pytest.raises(ConfigurationError):
        ExperimentSpec.from_string("no section header")
    with pytest.raises(ConfigurationError):
        ExperimentSpec.from_string("[telemetry]\nlevel = 3\n")
    with pytest.raises(ConfigurationError):
        ExperimentSpec.from_string("[graph]\nkind = star\n").build_topology()
    with pytest.raises(ConfigurationError):
        ExperimentSpec.from_string("[problem]\nkind = portfolio\n").build_problem()
    with pytest.raises(ConfigurationError):
        ExperimentSpec.from_string("[graph]\ndirected = maybe\n").build_topology()


def test_identification_problem_from_experiment_file():
    spec = ExperimentSpec.from_string("[problem]\nkind = ident\nrho = 0.5\n")
    problem = spec.build_problem()
    assert problem.get_dimension() == 4
    assert problem.get_rho() == 0.5


def test_report_best_objective_ignores_infeasible_records(tmp_path):
    path = tmp_path / "trace.csv"
    trace = [MetricsRecord(0, 0.5, 0.9, -5.0, 1.0, 0.1),
             MetricsRecord(1, 1e-4, 1e-4, -0.6, 1.5, 0.1),
             MetricsRecord(2, 1e-4, 2e-4, -0.55, 1.8, 0.1)]
    with open(str(path), "w", encoding="utf-8") as trace_file:
        write_trace(trace, trace_file)
    code, lines = _run(["report", str(path)])
    assert code == scenopt.tags.EXIT_OK
    header = lines[0].split(",")
    fields = dict(zip(header, lines[1].split(",")))
    assert float(fields["best_objective"]) == -0.6
    assert fields["tolerances_met"] == "true"

    code, lines = _run(["report", str(path), "--feasibility-tol", "1e-6"])
    assert code == scenopt.tags.EXIT_OK
    fields = dict(zip(header, lines[1].split(",")))
    assert math.isnan(float(fields["best_objective"]))
    assert fields["tolerances_met"] == "false"


def test_ident_runs_both_algorithms_on_the_same_links():
    undirected, directed = identification_topologies(10, 0.3, 0)
    assert not undirected.is_directed()
    assert directed.is_directed()
    assert {frozenset(edge) for edge in directed.get_edges()} == {frozenset(edge) for edge in undirected.get_edges()}
    assert _run(["ident", "--rho", "1", "--chord-probability", "1.5"])[0] == scenopt.tags.EXIT_USAGE


def test_robust_estimates_beat_least_squares_under_perturbation():
    code, lines = _run(["ident", "--rho", "0,1,2,3", "--nodes", "10", "--samples", "30"])
    assert code == scenopt.tags.EXIT_OK
    rows = read_residual_table(lines)
    assert [row[0] for row in rows] == [0.0, 1.0, 2.0, 3.0]
    assert rows[0][1] == 0.0
    for rho, r_ls, r_sc_pd, r_sc_rp in rows[1:]:
        assert r_sc_pd <= r_ls
        assert r_sc_rp <= r_ls
