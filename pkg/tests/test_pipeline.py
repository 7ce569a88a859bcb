import json

import pytest

from netcent import NothingToEmit
from netcent.cli import main
from netcent.pipeline import (RunConfig, emit_plot_data, load_config_file,
                              run_pipeline)
from test_ranking import TRADITIONAL_IDS, fixture_rankings
from netcent.ranking import overlap_report


INTERACTIONS = """\
actor,target,kind,timestamp,weight
u1,u2,retweet,,
u2,u3,retweet,,
u3,u1,mention,,
u4,u2,retweet,,
u5,u2,retweet,,
u5,u6,reply,,
u6,u7,retweet,,
u7,u8,retweet,,
u8,u9,share,,
u9,u5,retweet,,
u1,u9,mention,,
"""


@pytest.fixture
def interactions_csv(tmp_path):
    path = tmp_path / "interactions.csv"
    path.write_text(INTERACTIONS)
    return path


def run_cli(*argv):
    return main([str(a) for a in argv])


class TestRunPipeline:
    def test_single_metric_run_has_no_overlap_section(self, interactions_csv,
                                                      tmp_path):
        out = tmp_path / "out"
        cfg = RunConfig(input=str(interactions_csv), metrics=("degree_total",),
                        out=str(out), k=3)
        report = run_pipeline(cfg)
        assert list(report.metrics) == ["degree_total"]
        assert report.overlap is None
        data = json.loads((out / "report.json").read_text())
        assert data["overlap"] is None
        assert not (out / "overlap.json").exists()

    def test_all_seven_metrics_deterministic_across_runs(self, interactions_csv,
                                                         tmp_path):
        out = tmp_path / "out"
        args = ["run", "--input", interactions_csv, "--out", out,
                "--seed", "7", "--k", "5", "--simulate",
                "--sim-random-seeds", "2", "--ic-trials", "150"]
        assert run_cli(*args) == 0
        first = (out / "report.json").read_bytes()
        assert run_cli(*args) == 0
        assert (out / "report.json").read_bytes() == first
        data = json.loads(first)
        assert sorted(data["metrics"]) == ["betweenness", "closeness",
                                           "degree_total", "dic",
                                           "eigenvector", "mvc", "pc"]
        assert len(data["overlap"]["regions"]) >= 1
        assert len(data["interventions"]) == 3

    def test_worker_count_changes_nothing(self, interactions_csv, tmp_path):
        out = tmp_path / "out"
        base = ["run", "--input", interactions_csv, "--out", out, "--seed", "3",
                "--simulate", "--sim-random-seeds", "2", "--ic-trials", "120"]
        assert run_cli(*base, "--workers", "1") == 0
        one = (out / "report.json").read_bytes()
        assert run_cli(*base, "--workers", "4") == 0
        assert (out / "report.json").read_bytes() == one

    def test_config_echo_round_trips(self, interactions_csv, tmp_path):
        out = tmp_path / "out"
        cfg = RunConfig(input=str(interactions_csv), out=str(out), k=4, seed=11,
                        metrics=("degree_total", "pc", "dic"))
        run_pipeline(cfg)
        first = (out / "report.json").read_bytes()
        echoed = json.loads(first)["config"]
        run_pipeline(RunConfig.from_dict(echoed))
        assert (out / "report.json").read_bytes() == first

    def test_missing_input_names_path(self, tmp_path, capsys):
        rc = run_cli("run", "--input", tmp_path / "absent.csv",
                     "--out", tmp_path / "o")
        assert rc == 2
        assert "absent.csv" in capsys.readouterr().err

    def test_unknown_metric_is_usage_error(self, interactions_csv, tmp_path,
                                           capsys):
        rc = run_cli("run", "--input", interactions_csv,
                     "--out", tmp_path / "o", "--metrics", "katz")
        assert rc == 1
        assert "katz" in capsys.readouterr().err

    def test_correlation_stage(self, interactions_csv, tmp_path):
        attrs = tmp_path / "attrs.csv"
        attrs.write_text("node,retweet_count\n" + "\n".join(
            f"u{i},{i * 10}" for i in range(1, 10)) + "\n")
        out = tmp_path / "out"
        cfg = RunConfig(input=str(interactions_csv), out=str(out),
                        metrics=("pc", "dic"), attributes=str(attrs),
                        correlate=("pc:retweet_count",), seed=1)
        report = run_pipeline(cfg)
        assert len(report.correlations) == 1
        entry = report.correlations[0]
        assert entry["metric"] == "pc" and entry["n_effective"] == 9
        assert -1.0 <= entry["rho"] <= 1.0


class TestConfigFile:
    def test_file_values_and_flag_override(self, interactions_csv, tmp_path):
        ini = tmp_path / "run.ini"
        ini.write_text(f"""\
[run]
input = {interactions_csv}
metrics = degree_total, pc
k = 4
seed = 9
out = {tmp_path / 'from_file'}

[pc]
damping = 0.7
""")
        assert run_cli("run", "--config", ini) == 0
        data = json.loads((tmp_path / "from_file" / "report.json").read_text())
        assert data["config"]["k"] == 4
        assert data["config"]["pc_damping"] == 0.7

        assert run_cli("run", "--config", ini, "--k", "2",
                       "--out", tmp_path / "flags_win") == 0
        data = json.loads((tmp_path / "flags_win" / "report.json").read_text())
        assert data["config"]["k"] == 2
        assert data["config"]["pc_damping"] == 0.7

    def test_unknown_key_rejected(self, tmp_path):
        ini = tmp_path / "bad.ini"
        ini.write_text("[run]\nmystery = 1\n")
        with pytest.raises(Exception):
            load_config_file(ini)


class TestEmitPlots:
    def make_report_dict(self):
        overlap = overlap_report(fixture_rankings(), TRADITIONAL_IDS)
        return {"version": "x", "config": {}, "graph": {},
                "metrics": {"degree_total": {"top": [
                    {"rank": 1, "node": "26", "score": 10.0}]}},
                "overlap": overlap.to_dict(), "correlations": [],
                "interventions": []}

    def test_region_rows_match_overlap(self, tmp_path):
        paths = emit_plot_data(self.make_report_dict(), tmp_path)
        venn = (tmp_path / "venn_regions.csv").read_text().splitlines()
        assert venn[0] == "metrics,count"
        assert "betweenness&degree_total&eigenvector,2" in venn
        assert "closeness,10" in venn
        assert len(venn) == 1 + 7
        bars = (tmp_path / "topk_bars.csv").read_text().splitlines()
        assert bars[1] == "degree_total,1,26,10.0"
        assert len(paths) == 2

    def test_no_overlap_section(self, tmp_path):
        with pytest.raises(NothingToEmit):
            emit_plot_data({"metrics": {}, "overlap": None}, tmp_path)

    def test_cli_round_trip(self, interactions_csv, tmp_path, capsys):
        out = tmp_path / "out"
        assert run_cli("run", "--input", interactions_csv, "--out", out,
                       "--metrics", "degree_total,pc", "--seed", "1") == 0
        plots = tmp_path / "plots"
        assert run_cli("emit-plots", "--report", out / "report.json",
                       "--out", plots) == 0
        assert (plots / "venn_regions.csv").exists()
        assert (plots / "topk_bars.csv").exists()


class TestStandaloneCommands:
    def test_ingest_writes_canonical_edges(self, interactions_csv, tmp_path,
                                           capsys):
        out = tmp_path / "edges.csv"
        assert run_cli("ingest", "--input", interactions_csv,
                       "--direction", "endorsement", "--out", out) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "src,dst,weight"
        assert any(ln.startswith("u1,u2,") for ln in lines)

    def test_compute_then_compare(self, interactions_csv, tmp_path, capsys):
        out = tmp_path / "scores"
        assert run_cli("compute", "--input", interactions_csv, "--out", out,
                       "--metrics", "degree_total,pc,dic", "--seed", "2") == 0
        overlap_path = tmp_path / "overlap.json"
        assert run_cli("compare",
                       "--scores", out / "degree_total.scores.csv",
                       out / "pc.scores.csv", out / "dic.scores.csv",
                       "--k", "4", "--out", overlap_path) == 0
        payload = json.loads(overlap_path.read_text())
        assert payload["union_traditional"]
        assert payload["coverage_gain_pct"] >= 0.0
        seen = {n for region in payload["regions"] for n in region["nodes"]}
        assert seen == set(payload["union_all"])

    def test_compare_requires_two_rankings(self, interactions_csv, tmp_path,
                                           capsys):
        out = tmp_path / "scores"
        run_cli("compute", "--input", interactions_csv, "--out", out,
                "--metrics", "degree_total", "--seed", "2")
        rc = run_cli("compare", "--scores", out / "degree_total.scores.csv")
        assert rc == 1

    def test_correlate_standalone(self, interactions_csv, tmp_path, capsys):
        out = tmp_path / "scores"
        run_cli("compute", "--input", interactions_csv, "--out", out,
                "--metrics", "pc", "--seed", "2")
        attrs = tmp_path / "attrs.csv"
        attrs.write_text("node,retweet_count\n" + "\n".join(
            f"u{i},{i}" for i in range(1, 10)) + "\n")
        capsys.readouterr()
        assert run_cli("correlate", "--scores", out / "pc.scores.csv",
                       "--attributes", attrs, "--proxy", "retweet_count") == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["proxy"] == "retweet_count"

    def test_simulate_standalone(self, interactions_csv, tmp_path, capsys):
        result_path = tmp_path / "sim.json"
        assert run_cli("simulate", "--input", interactions_csv,
                       "--seeds", "u1", "--model", "reachability",
                       "--remove", "u2", "--out", result_path) == 0
        payload = json.loads(result_path.read_text())
        assert payload["removed"] == ["u2"]
        assert payload["baseline_volume"] >= payload["treated_volume"]

    def test_simulate_random_strategy_needs_no_scores(self, interactions_csv,
                                                      tmp_path, capsys):
        result_path = tmp_path / "sim.json"
        assert run_cli("simulate", "--input", interactions_csv,
                       "--seeds", "u1,u5", "--model", "reachability",
                       "--strategy", "random", "--budget", "3",
                       "--seed", "9", "--out", result_path) == 0
        payload = json.loads(result_path.read_text())
        assert len(payload["removed"]) == 3

    def test_usage_error_exit_code(self, capsys):
        assert run_cli("compute", "--nope") == 1

    def test_missing_subcommand_is_usage_error(self, capsys):
        assert main([]) == 1

    def test_missing_report_file_is_data_error(self, tmp_path, capsys):
        assert run_cli("emit-plots", "--report", tmp_path / "gone.json",
                       "--out", tmp_path) == 2
        assert "gone.json" in capsys.readouterr().err


class TestRunConfigValidation:
    def test_bad_values_rejected(self):
        from netcent import InvalidParameter
        for kwargs in ({"format": "parquet"}, {"direction": "sideways"},
                       {"k": 0}, {"workers": 0}, {"sim_budget": "uneven"},
                       {"metrics": ("katz",)}):
            with pytest.raises(InvalidParameter):
                RunConfig(input="x", **kwargs)

    def test_degree_alias_and_dedup(self):
        cfg = RunConfig(input="x", metrics=("degree", "degree_total", "pc"))
        assert cfg.metrics == ("degree_total", "pc")

    def test_single_metric_strategy_in_pipeline(self, interactions_csv,
                                                tmp_path):
        out = tmp_path / "out"
        cfg = RunConfig(input=str(interactions_csv), out=str(out), seed=2,
                        metrics=("degree_total", "pc"), simulate=True,
                        sim_model="reachability", sim_seeds=("u1", "u4"),
                        sim_strategies=("single:pc", "random"))
        report = run_pipeline(cfg)
        assert [e["strategy"] for e in report.interventions] \
            == ["single:pc", "random"]
