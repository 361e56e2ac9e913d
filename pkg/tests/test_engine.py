import io
import math

import numpy as np
import pytest

import scenopt.tags
from scenopt.engine import CHECKPOINT_MAGIC, CheckpointError, ConnectivityError, Engine, MeanGraphNetwork, \
    MetricsRecord, Network, RunConfig, StoppingRule, exchange, mean_weights, read_checkpoint, read_trace, run, \
    write_trace
from scenopt.graph import Topology, build_weights, chain, left_eigenvector, ring, ring_with_chords
from scenopt.helpers import make_stream
from scenopt.oracle import solve_lp_by_vertices
from scenopt.primal_dual import ConfigurationError
from scenopt.problems.halfspace import halfspace_problem
from scenopt.scenario import Partition
from scenopt.schedule import StepSchedule


def _config(algorithm=scenopt.tags.ALGORITHM_RAND_PROJ, topology=None, max_rounds=30, **kwargs):
    if topology is None:
        directed = algorithm == scenopt.tags.ALGORITHM_RAND_PROJ
        topology = ring(4, directed=directed)
    problem = halfspace_problem([1.0, 0.5])
    partition = Partition([5] * topology.get_node_count())
    return RunConfig(algorithm, topology, problem, partition, StoppingRule(max_rounds),
                     StepSchedule(1.0, 0.75), **kwargs)


def _assert_same_states(first, second):
    assert len(first) == len(second)
    for a, b in zip(first, second):
        assert np.array_equal(a.get_theta(), b.get_theta())


def test_exchange_delivers_copies_to_out_neighbors():
    topology = ring(4)
    values = [np.array([float(j)]) for j in range(4)]
    inboxes = exchange(values, topology)
    assert [sorted(inbox) for inbox in inboxes] == [[1, 3], [0, 2], [1, 3], [0, 2]]
    values[1][0] = 42.0
    assert inboxes[0][1][0] == 1.0

    inboxes = exchange(values, ring(4, directed=True))
    assert [sorted(inbox) for inbox in inboxes] == [[3], [0], [1], [2]]


def test_network_counts_waves():
    network = Network(ring(3))
    assert network.get_wave_count() == 0
    network.exchange([np.zeros(1)] * 3)
    network.exchange([np.zeros(1)] * 3)
    assert network.get_wave_count() == 2
    assert np.allclose(network.get_laplacian() @ np.ones(3), 0.0, atol=1e-12)


def test_metrics_record_equality_ignores_wall_time():
    first = MetricsRecord(3, 0.1, 0.2, -1.5, 2.0, 12.0)
    second = MetricsRecord(3, 0.1, 0.2, -1.5, 2.0, 99.0)
    assert first == second
    assert first != MetricsRecord(4, 0.1, 0.2, -1.5, 2.0, 12.0)
    assert first.to_row() == [3, 0.1, 0.2, -1.5, 2.0, 12.0]


def test_stopping_rule():
    records = [MetricsRecord(k, 0.0, 0.0, -1.0, 0.0, 0.0) for k in range(6)]
    assert not StoppingRule(10).should_stop([])
    assert StoppingRule(6).should_stop(records)
    assert not StoppingRule(10).should_stop(records)

    rule = StoppingRule(10, consensus_tol=1e-3, feasibility_tol=1e-3, window=3)
    assert rule.should_stop(records)
    assert not StoppingRule(10, consensus_tol=1e-3, window=6).should_stop(records)

    moving = records[:-1] + [MetricsRecord(5, 0.0, 0.0, -2.0, 0.0, 0.0)]
    assert not rule.should_stop(moving)

    assert StoppingRule(10).status(records) == scenopt.tags.STATUS_COMPLETED
    assert rule.status(records) == scenopt.tags.STATUS_CONVERGED
    failing = records + [MetricsRecord(6, 1.0, 0.0, -1.0, 0.0, 0.0)]
    assert rule.status(failing) == scenopt.tags.STATUS_BUDGET_EXHAUSTED

    with pytest.raises(ConfigurationError):
        StoppingRule(0)
    with pytest.raises(ConfigurationError):
        StoppingRule(10, window=0)


def test_run_config_errors():
    problem = halfspace_problem([1.0, 0.0])
    partition = Partition([1, 1, 1])
    rule = StoppingRule(5)
    with pytest.raises(ConfigurationError):
        RunConfig("gossip", ring(3), problem, partition, rule)
    with pytest.raises(ConfigurationError):
        RunConfig(scenopt.tags.ALGORITHM_PRIMAL_DUAL, ring(3, directed=True), problem, partition, rule)
    with pytest.raises(ConfigurationError):
        RunConfig(scenopt.tags.ALGORITHM_RAND_PROJ, ring(4), problem, partition, rule)
    with pytest.raises(ConfigurationError):
        RunConfig(scenopt.tags.ALGORITHM_RAND_PROJ, ring(3), problem, partition, rule, activation_probability=0.0)
    with pytest.raises(ConfigurationError):
        RunConfig(scenopt.tags.ALGORITHM_RAND_PROJ, ring(3), problem, partition, rule, workers=0)
    with pytest.raises(ConfigurationError):
        RunConfig(scenopt.tags.ALGORITHM_RAND_PROJ, ring(3), problem, partition, rule, beta=2.5)


def test_engine_rejects_disconnected_topology():
    with pytest.raises(ConnectivityError):
        Engine(_config(topology=chain(3)))


def test_average_weights():
    engine = Engine(_config())
    assert np.allclose(engine.get_average_weights(), 0.25, rtol=0.0, atol=1e-12)

    topology = ring_with_chords(6, 0.4, make_stream(5), directed=True)
    engine = Engine(_config(topology=topology))
    expected = left_eigenvector(engine.get_network().get_weights()).get_pi()
    assert np.array_equal(engine.get_average_weights(), expected)


def test_run_records_one_metric_per_round():
    result = run(_config(max_rounds=12))
    trace = result.get_trace()
    assert [record.get_round() for record in trace] == list(range(12))
    assert result.get_status() == scenopt.tags.STATUS_COMPLETED
    assert result.get_final_record() is trace[-1]
    zeta_sum = StepSchedule(1.0, 0.75).cumulative(11)
    assert abs(trace[-1].get_zeta_sum() - zeta_sum) < 1e-12
    assert all(record.get_feasibility() >= 0.0 for record in trace)


def test_runs_are_deterministic():
    for algorithm in scenopt.tags.ALGORITHMS:
        first = run(_config(algorithm, seed=11))
        second = run(_config(algorithm, seed=11))
        assert first.get_trace() == second.get_trace()
        _assert_same_states(first.get_states(), second.get_states())


def test_worker_pool_matches_sequential_run():
    for algorithm in scenopt.tags.ALGORITHMS:
        sequential = run(_config(algorithm, seed=3))
        pooled = run(_config(algorithm, seed=3, workers=3))
        assert sequential.get_trace() == pooled.get_trace()
        _assert_same_states(sequential.get_states(), pooled.get_states())


def test_time_varying_runs_are_deterministic():
    config = _config(topology=ring_with_chords(6, 0.5, make_stream(1)), activation_probability=0.6, seed=2)
    first = run(config)
    second = run(config)
    assert first.get_trace() == second.get_trace()


def test_primal_dual_gamma_stays_nonnegative():
    result = run(_config(scenopt.tags.ALGORITHM_PRIMAL_DUAL, max_rounds=40))
    for state in result.get_states():
        assert np.all(state.get_gamma() >= 0.0)
        assert state.get_gamma().shape == (6,)


def test_checkpoint_at_round_zero(tmp_path):
    path = str(tmp_path / "start.ckpt")
    config = _config(scenopt.tags.ALGORITHM_PRIMAL_DUAL, seed=4)
    Engine(config).save_checkpoint(path)
    resumed = Engine.resume(path, config)
    assert resumed.get_round() == 0
    result = resumed.run()
    expected = run(config)
    assert result.get_trace() == expected.get_trace()
    _assert_same_states(result.get_states(), expected.get_states())


def test_resume_mid_run_matches_uninterrupted_run(tmp_path):
    for algorithm, topology in [(scenopt.tags.ALGORITHM_RAND_PROJ, ring(5, directed=True)),
                                (scenopt.tags.ALGORITHM_PRIMAL_DUAL, ring(5))]:
        path = str(tmp_path / ("%s.ckpt" % algorithm))
        config = _config(algorithm, topology=topology, seed=9, activation_probability=0.8)
        engine = Engine(config)
        for _ in range(13):
            engine.step()
        engine.save_checkpoint(path)

        resumed = Engine.resume(path, config)
        assert resumed.get_round() == 13
        assert resumed.get_trace() == engine.get_trace()
        result = resumed.run()
        expected = run(config)
        assert result.get_trace() == expected.get_trace()
        _assert_same_states(result.get_states(), expected.get_states())


def test_periodic_checkpoints(tmp_path):
    path = str(tmp_path / "periodic.ckpt")
    config = _config(max_rounds=10)
    Engine(config).run(checkpoint_path=path, checkpoint_every=4)
    header, arrays = read_checkpoint(path)
    assert header["round"] == 10
    assert arrays["theta"].shape == (4, 2)
    assert len(header["trace"]) == 10


def test_corrupted_checkpoints(tmp_path):
    path = tmp_path / "run.ckpt"
    config = _config()
    Engine(config).save_checkpoint(str(path))

    content = bytearray(path.read_bytes())
    content[-10] ^= 0xFF
    path.write_bytes(bytes(content))
    with pytest.raises(CheckpointError):
        Engine.resume(str(path), config)

    path.write_bytes(b"NOT-A-CHECKPOINT\n{}\n")
    with pytest.raises(CheckpointError):
        read_checkpoint(str(path))

    path.write_bytes(CHECKPOINT_MAGIC + b"{broken\n")
    with pytest.raises(CheckpointError):
        read_checkpoint(str(path))

    with pytest.raises(CheckpointError):
        read_checkpoint(str(tmp_path / "missing.ckpt"))


def test_checkpoint_from_other_configuration(tmp_path):
    path = str(tmp_path / "other.ckpt")
    Engine(_config(seed=1)).save_checkpoint(path)
    with pytest.raises(CheckpointError):
        Engine.resume(path, _config(seed=2))


def test_trace_round_trip():
    trace = run(_config(max_rounds=8)).get_trace()
    stream = io.StringIO()
    write_trace(trace, stream)
    lines = stream.getvalue().splitlines()
    assert lines[0] == ",".join(scenopt.tags.TRACE_COLUMNS)
    assert len(lines) == 9

    stream.seek(0)
    assert read_trace(stream) == trace
    with pytest.raises(ValueError):
        read_trace(io.StringIO("a,b\n1,2\n"))


def _fixture_config(algorithm, topology, seed, stopping_rule, **kwargs):
    problem = halfspace_problem([1.0, 0.5])
    partition = Partition([10] * topology.get_node_count())
    return RunConfig(algorithm, topology, problem, partition, stopping_rule, StepSchedule(1.0, 0.6), seed=seed,
                     **kwargs)


def _best_objective(trace, tolerance):
    objectives = [record.get_objective() for record in trace
                  if record.get_consensus_spread() < tolerance and record.get_feasibility() < tolerance]
    return min(objectives) if objectives else float("nan")


def test_mean_weights():
    weights = build_weights(ring(4))
    mean = mean_weights(weights, 0.5)
    assert mean.is_symmetric()
    assert np.allclose(mean.get_array(), 0.5 * weights.get_array() + 0.5 * np.eye(4), rtol=0.0, atol=1e-15)
    assert np.array_equal(mean_weights(weights, 1.0).get_array(), weights.get_array())


def test_mean_network_keeps_the_last_received_values():
    network = MeanGraphNetwork(ring(3), 0.5)
    silent = Topology(3, directed=False)
    network.activate(silent)
    inboxes = network.exchange([np.array([float(j)]) for j in range(3)], "theta")
    assert sorted(inboxes[0]) == [1, 2]
    assert inboxes[0][1][0] == 0.0
    assert inboxes[0][2][0] == 0.0
    assert inboxes[1][0][0] == 1.0

    network.activate(ring(3))
    network.exchange([np.array([10.0 + j]) for j in range(3)], "theta")
    network.activate(silent)
    inboxes = network.exchange([np.array([20.0 + j]) for j in range(3)], "theta")
    assert inboxes[0][1][0] == 11.0
    assert inboxes[0][2][0] == 12.0
    assert inboxes[2][1][0] == 11.0

    inboxes = network.exchange([np.array([30.0 + j]) for j in range(3)], "lambda")
    assert inboxes[0][1][0] == 30.0
    assert network.get_wave_count() == 4
    assert network.get_topology() == ring(3)
    assert network.get_active_topology() == silent

    restored = MeanGraphNetwork(ring(3), 0.5)
    restored.restore_cache_arrays(network.get_cache_arrays())
    restored.activate(silent)
    inboxes = restored.exchange([np.array([40.0 + j]) for j in range(3)], "theta")
    assert inboxes[1][0][0] == 10.0
    assert inboxes[1][2][0] == 12.0


def test_time_varying_primal_dual_couples_through_mean_weights():
    engine = Engine(_config(scenopt.tags.ALGORITHM_PRIMAL_DUAL, topology=ring(4), activation_probability=0.5))
    engine.step()
    network = engine.get_network()
    assert isinstance(network, MeanGraphNetwork)
    assert network.get_topology() == ring(4)
    assert np.array_equal(network.get_matrix(), mean_weights(build_weights(ring(4)), 0.5).get_array())

    engine = Engine(_config(topology=ring(4, directed=True), activation_probability=0.5))
    engine.step()
    assert isinstance(engine.get_network(), Network)


def test_fixtures_reach_the_vertex_optimum():
    for seed in range(10):
        for algorithm, topology in [(scenopt.tags.ALGORITHM_PRIMAL_DUAL, ring(4)),
                                    (scenopt.tags.ALGORITHM_RAND_PROJ, ring(4, directed=True))]:
            config = _fixture_config(algorithm, topology, seed, StoppingRule(50000, 1e-3, 1e-3))
            engine = Engine(config)
            result = engine.run()
            expected = solve_lp_by_vertices(config.get_problem(), engine.get_scenario_sets()).get_value()
            assert len(result.get_trace()) <= 50000
            assert abs(_best_objective(result.get_trace(), 1e-3) - expected) <= 1e-2 * abs(expected)


def test_time_varying_primal_dual_reaches_consensus():
    config = _fixture_config(scenopt.tags.ALGORITHM_PRIMAL_DUAL, ring(4), 0,
                             StoppingRule(100000, 5e-2, 5e-2, objective_tol=None, window=1000),
                             activation_probability=0.5)
    engine = Engine(config)
    result = engine.run()
    assert result.get_status() == scenopt.tags.STATUS_CONVERGED
    final = result.get_final_record()
    assert final.get_consensus_spread() < 5e-2
    assert final.get_feasibility() < 5e-2
    expected = solve_lp_by_vertices(config.get_problem(), engine.get_scenario_sets()).get_value()
    assert _best_objective(result.get_trace(), 5e-2) <= expected + 0.1 * abs(expected)


def test_running_gap_times_step_sum_stays_bounded():
    config = _fixture_config(scenopt.tags.ALGORITHM_PRIMAL_DUAL, ring(4), 1, StoppingRule(3000))
    engine = Engine(config)
    trace = engine.run().get_trace()
    expected = solve_lp_by_vertices(config.get_problem(), engine.get_scenario_sets()).get_value()
    running = float("inf")
    values = []
    for record in trace:
        running = min(running, abs(record.get_objective() - expected))
        values.append(running * record.get_zeta_sum())
    assert all(value <= 10.0 * values[100] + 1e-12 for value in values[100:])


def test_step_sum_grows_at_least_logarithmically():
    for schedule in [StepSchedule(1.0, 0.6), StepSchedule(2.0, 1.0)]:
        config = RunConfig(scenopt.tags.ALGORITHM_RAND_PROJ, ring(3, directed=True), halfspace_problem([1.0]),
                           Partition([2] * 3), StoppingRule(200), schedule)
        for k, record in enumerate(run(config).get_trace()):
            assert record.get_zeta_sum() >= schedule.get_zeta0() * math.log(k + 1)
