import numpy as np
import pytest

from rpqaoa.errors import ConfigError, InvalidInputError
from rpqaoa.graph6 import write_graph6
from rpqaoa.metrics import record_json_line, write_records_jsonl, read_records_jsonl
from rpqaoa.problems import is_connected
from rpqaoa.sweep import (
    SweepConfig,
    build_tasks,
    counterexample_search,
    depth_scan,
    fit_records,
    generate_graph_corpus,
    generate_instances,
    make_instance,
    run_sweep,
    summarize_records,
    write_summary_csv,
)
from rpqaoa.enumeration import canonical_code, code_from_graph


class TestSweepConfig:
    def test_analytic_requires_depth_one(self):
        config = SweepConfig(source="enumerate", n=4, method="analytic_eq5", p=2)
        with pytest.raises(ConfigError):
            config.validate()

    def test_mc_requires_samples(self):
        config = SweepConfig(source="enumerate", n=4, method="mc_average", samples=1)
        with pytest.raises(ConfigError):
            config.validate()

    def test_enumerate_gates_at_seven(self):
        with pytest.raises(ConfigError, match="graph6"):
            SweepConfig(source="enumerate", n=8).validate()

    def test_ensemble_needs_family_and_count(self):
        with pytest.raises(ConfigError):
            SweepConfig(source="ensemble", n=5).validate()

    def test_unknown_source(self):
        with pytest.raises(ConfigError):
            SweepConfig(source="mystery").validate()

    def test_json_round_trip(self):
        config = SweepConfig(source="ensemble", family="maxcut", n=6, count=3, master_seed=9)
        assert SweepConfig.from_json_dict(config.to_json_dict()) == config

    def test_unknown_field_rejected(self):
        with pytest.raises(ConfigError):
            SweepConfig.from_json_dict({"source": "enumerate", "n": 4, "shots": 100})


class TestBuildTasks:
    def test_enumerate_counts(self):
        tasks = build_tasks(SweepConfig(source="enumerate", n=4))
        assert len(tasks) == 6
        assert [t.instance_id for t in tasks][:2] == ["enum4-00000", "enum4-00001"]
        assert all(t.seed is None for t in tasks)

    def test_ensemble_is_deterministic(self):
        config = SweepConfig(source="ensemble", family="qubo_weighted", n=5, count=4, master_seed=3)
        assert build_tasks(config) == build_tasks(config)

    def test_graph6_source(self, tmp_path):
        from rpqaoa.problems import random_connected_graph

        path = tmp_path / "corpus.g6"
        write_graph6(path, [random_connected_graph(5, seed=s) for s in range(3)])
        tasks = build_tasks(SweepConfig(source="graph6", graph6_path=str(path)))
        assert len(tasks) == 3
        assert all(t.instance.kind == "maxcut_unweighted" for t in tasks)

    def test_missing_graph6_file_is_io_error(self, tmp_path):
        config = SweepConfig(source="graph6", graph6_path=str(tmp_path / "absent.g6"))
        with pytest.raises(OSError):
            build_tasks(config)


class TestRunSweep:
    def test_rerun_is_byte_identical(self):
        config = SweepConfig(source="ensemble", family="maxcut", n=5, count=5, master_seed=11)
        lines_a = [record_json_line(r) for r in run_sweep(config)]
        lines_b = [record_json_line(r) for r in run_sweep(config)]
        assert lines_a == lines_b

    def test_parallel_matches_serial(self):
        config = SweepConfig(source="ensemble", family="qubo_unweighted", n=5, count=6, master_seed=2)
        serial = [record_json_line(r) for r in run_sweep(config)]
        parallel = [
            record_json_line(r)
            for r in run_sweep(SweepConfig(**{**config.to_json_dict(), "jobs": 2}))
        ]
        assert serial == parallel

    def test_mc_method_records_seed_and_depth(self):
        config = SweepConfig(
            source="enumerate", n=4, method="mc_average", p=2, samples=16, master_seed=5
        )
        records = run_sweep(config)
        assert all(r.method == "mc_average" and r.p == 2 for r in records)
        assert all(r.seed is not None for r in records)

    def test_jsonl_file_round_trip(self, tmp_path):
        config = SweepConfig(source="ensemble", family="maxcut", n=4, count=3, master_seed=1)
        records = run_sweep(config)
        path = tmp_path / "records.jsonl"
        write_records_jsonl(path, records)
        back = read_records_jsonl(path)
        assert [record_json_line(r) for r in back] == [record_json_line(r) for r in records]


class TestSummaries:
    def test_summary_reproduces_known_n4_stats(self):
        records = run_sweep(SweepConfig(source="enumerate", n=4))
        rows = summarize_records(records)
        assert len(rows) == 1
        row = rows[0]
        assert row["n"] == 4 and row["count"] == 6
        assert abs(row["delta_s_min"] - 0.046) <= 0.001
        assert abs(row["delta_s_avg"] - 0.145) <= 0.001
        assert abs(row["delta_s_max"] - 0.295) <= 0.001

    def test_order_invariance(self):
        records = run_sweep(
            SweepConfig(source="ensemble", family="qubo_weighted", n=5, count=6, master_seed=4)
        )
        assert summarize_records(records) == summarize_records(records[::-1])

    def test_csv_write(self, tmp_path):
        records = run_sweep(SweepConfig(source="enumerate", n=4))
        path = tmp_path / "summary.csv"
        write_summary_csv(path, summarize_records(records))
        header = path.read_text().splitlines()[0]
        assert header.split(",")[:5] == ["n", "count", "delta_s_min", "delta_s_avg", "delta_s_max"]
        assert "qmp_min_median" in header


class TestDepthScan:
    def test_rows_per_depth(self):
        tasks = build_tasks(
            SweepConfig(source="ensemble", family="maxcut", n=5, count=4, master_seed=8)
        )
        rows = depth_scan(tasks, [1, 2], samples=24, master_seed=8)
        assert [row["p"] for row in rows] == [1, 2]
        assert all(row["count"] == 4 for row in rows)
        assert all(row["qmp_min_q1"] <= row["qmp_min_median"] <= row["qmp_min_q3"] for row in rows)

    def test_empty_depth_list_rejected(self):
        with pytest.raises(ConfigError):
            depth_scan([], [], samples=16, master_seed=0)

    def test_deterministic(self):
        tasks = build_tasks(
            SweepConfig(source="ensemble", family="maxcut", n=4, count=3, master_seed=6)
        )
        assert depth_scan(tasks, [1, 3], 16, 6) == depth_scan(tasks, [1, 3], 16, 6)


class TestFitRecords:
    def test_needs_three_sizes(self):
        records = run_sweep(SweepConfig(source="enumerate", n=4))
        with pytest.raises(ConfigError):
            fit_records(records)

    def test_fit_over_three_sizes(self):
        from rpqaoa.metrics import fit_exponent

        records = []
        for n in (4, 5, 6):
            records.extend(
                run_sweep(
                    SweepConfig(source="ensemble", family="maxcut", n=n, count=10, master_seed=21)
                )
            )
        report = fit_records(records, goal=0.9)
        assert [row["n"] for row in report["per_n"]] == [4, 5, 6]
        assert len(report["instances"]) == 30
        # slope must agree with fitting the median points directly
        slope, intercept = fit_exponent([(r["n"], r["median_t"]) for r in report["per_n"]])
        assert report["slope"] == slope and report["intercept"] == intercept
        assert all(inst["shots_to_goal"] > 0 for inst in report["instances"])
        assert all(0 < inst["p_min"] < 1 for inst in report["instances"])

    def test_goal_validated(self):
        records = []
        for n in (4, 5, 6):
            records.extend(
                run_sweep(
                    SweepConfig(source="ensemble", family="maxcut", n=n, count=3, master_seed=1)
                )
            )
        from rpqaoa.errors import DomainError

        with pytest.raises(DomainError):
            fit_records(records, goal=1.5)


class TestCounterexampleSearch:
    def test_unweighted_maxcut_exhausts(self):
        result = counterexample_search("maxcut", 4, 6, budget=40, seed=5, mc_samples=200)
        assert result["found"] is False
        assert result["trials"] == 40
        assert result["min_delta_s_seen"] > 0

    def test_weighted_12_maxcut_finds_verified_hit(self):
        result = counterexample_search("maxcut_w12", 4, 8, budget=2000, seed=1, mc_samples=4000)
        assert result["found"] is True
        assert result["delta_s"] < 0
        assert result["verified"] is True
        assert result["instance"]["kind"] == "maxcut_weighted"
        weights = {s for _, _, s in result["instance"]["couplings"]}
        assert weights <= {1, 2}

    def test_weighted_qubo_finds_hit(self):
        result = counterexample_search("qubo_weighted", 4, 8, budget=2000, seed=2, mc_samples=4000)
        assert result["found"] is True and result["verified"] is True

    def test_deterministic_trajectory(self):
        a = counterexample_search("maxcut_w12", 4, 7, budget=500, seed=9, mc_samples=500)
        b = counterexample_search("maxcut_w12", 4, 7, budget=500, seed=9, mc_samples=500)
        assert a["trials"] == b["trials"]
        assert a["instance"] == b["instance"]

    def test_budget_validated(self):
        with pytest.raises(InvalidInputError):
            counterexample_search("maxcut", 4, 6, budget=0, seed=0)


class TestGenerators:
    def test_instances_deterministic(self):
        a = generate_instances("qubo_unweighted", 5, 4, master_seed=3)
        assert a == generate_instances("qubo_unweighted", 5, 4, master_seed=3)
        assert [t.instance_id for t in a][0] == "qubo_unweighted-n5-00000"

    def test_graph_corpus_connected_and_distinct(self):
        graphs = generate_graph_corpus(6, 12, master_seed=4, dedup=True)
        assert len(graphs) == 12
        assert all(is_connected(g) for g in graphs)
        codes = {canonical_code(code_from_graph(g), 6) for g in graphs}
        assert len(codes) == 12

    def test_graph_corpus_deterministic(self):
        assert generate_graph_corpus(5, 6, 7) == generate_graph_corpus(5, 6, 7)

    def test_make_instance_families(self):
        assert make_instance("maxcut", 5, 1).kind == "maxcut_unweighted"
        assert make_instance("maxcut_w12", 5, 1).kind == "maxcut_weighted"
        assert make_instance("qubo_unweighted", 5, 1).kind == "qubo_unweighted"
        assert make_instance("qubo_weighted", 5, 1).kind == "qubo_weighted"
        with pytest.raises(InvalidInputError):
            make_instance("bogus", 5, 1)

    def test_w12_weights_restricted(self):
        inst = make_instance("maxcut_w12", 6, 11)
        assert {s for _, _, s in inst.couplings} <= {1, 2}
