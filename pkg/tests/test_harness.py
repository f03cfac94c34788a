"""Scenario loading, campaign determinism, report emission and the CLI."""
import json
import math

import pytest

import cstar_jensen as cj
from cstar_jensen import catalog, harness
from cstar_jensen.cli import cli_main
from cstar_jensen.errors import ParseError, ValidationError
from cstar_jensen.jsonutil import canonical_dumps

SCALAR = cj.AlgebraShape((1,))


def minimal_obj():
    one = cj.unit(SCALAR)
    linear = {
        "kind": "linear",
        "coeffs": [[cj.scale(one, 2.0).to_obj()], [one.to_obj()]],
    }
    return {
        "algebra": [1],
        "coefficient": {**cj.scale(one, 0.5).to_obj(), "strict_order": True},
        "spaces": {"F": 1, "E": 2, "G": 1},
        "pair": None,
        "mappings": [{"label": "f", "map": linear}],
        "checks": ["eq-1.1"],
        "samples": 5,
        "seed": 3,
        "tol": 1e-9,
    }


def write_scenario(tmp_path, obj, name="scenario.json"):
    path = tmp_path / name
    path.write_text(canonical_dumps(obj))
    return path


class TestScenarioLoading:
    def test_minimal_loads_and_passes(self, tmp_path):
        path = write_scenario(tmp_path, minimal_obj())
        scenario = harness.load_scenario(path)
        assert scenario.checks == ("eq-1.1",)
        report = harness.run_suite(scenario)
        assert report.overall_pass

    def test_coefficient_one_rejected(self, tmp_path):
        obj = minimal_obj()
        obj["coefficient"] = {**cj.unit(SCALAR).to_obj(), "strict_order": False}
        path = write_scenario(tmp_path, obj)
        with pytest.raises(cj.NearSingular):
            harness.load_scenario(path)

    def test_unknown_check_id_named(self, tmp_path):
        obj = minimal_obj()
        obj["checks"] = ["lemma9"]
        path = write_scenario(tmp_path, obj)
        with pytest.raises(ValidationError, match="lemma9"):
            harness.load_scenario(path)

    def test_no_mappings_rejected(self, tmp_path):
        obj = minimal_obj()
        obj["mappings"] = []
        with pytest.raises(ValidationError):
            harness.load_scenario(write_scenario(tmp_path, obj))

    def test_no_checks_rejected(self, tmp_path):
        obj = minimal_obj()
        obj["checks"] = []
        with pytest.raises(ValidationError):
            harness.load_scenario(write_scenario(tmp_path, obj))

    def test_duplicate_labels_rejected(self, tmp_path):
        obj = minimal_obj()
        obj["mappings"] = obj["mappings"] * 2
        with pytest.raises(ValidationError):
            harness.load_scenario(write_scenario(tmp_path, obj))

    def test_missing_field_rejected(self, tmp_path):
        obj = minimal_obj()
        del obj["coefficient"]
        with pytest.raises(ValidationError, match="coefficient"):
            harness.load_scenario(write_scenario(tmp_path, obj))

    def test_parse_error_carries_position(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{\n  oops\n}")
        with pytest.raises(ParseError, match="line 2"):
            harness.load_scenario(path)

    def test_missing_file_is_io_error(self, tmp_path):
        with pytest.raises(cj.IoError):
            harness.load_scenario(tmp_path / "nope.json")

    def test_seed_resolution_order(self, tmp_path, monkeypatch):
        obj = minimal_obj()
        path = write_scenario(tmp_path, obj)
        monkeypatch.setenv(harness.SEED_ENV_VAR, "123")
        assert harness.load_scenario(path).seed == 3  # scenario field wins env
        assert harness.load_scenario(path, seed=9).seed == 9  # override wins all
        del obj["seed"]
        path2 = write_scenario(tmp_path, obj, "noseed.json")
        assert harness.load_scenario(path2).seed == 123  # env fallback
        monkeypatch.delenv(harness.SEED_ENV_VAR)
        assert harness.load_scenario(path2).seed == 0

    def test_overrides_change_digest(self, tmp_path):
        path = write_scenario(tmp_path, minimal_obj())
        plain = harness.load_scenario(path)
        seeded = harness.load_scenario(path, seed=5)
        assert plain.digest != seeded.digest
        again = harness.load_scenario(path)
        assert plain.digest == again.digest


class TestRunSuite:
    def test_repeat_runs_identical(self, tmp_path):
        path = write_scenario(tmp_path, minimal_obj())
        first = harness.run_suite(harness.load_scenario(path))
        second = harness.run_suite(harness.load_scenario(path))
        dump = lambda r: canonical_dumps([
            {"label": label, **entry.to_obj()} for label, entry in r.results
        ])
        assert dump(first) == dump(second)

    def test_checker_errors_become_failures(self, tmp_path):
        obj = minimal_obj()
        obj["checks"] = ["eq-1.1", "lemma2.2"]  # lemma2.2 needs a pair
        path = write_scenario(tmp_path, obj)
        report = harness.run_suite(harness.load_scenario(path))
        entries = {e.identity_id: e for _, e in report.results}
        assert entries["eq-1.1"].passed
        bad = entries["lemma2.2"]
        assert not bad.passed
        assert math.isinf(bad.max_residual)
        assert "error" in bad.worst_input
        assert not report.overall_pass

    def test_results_sorted_by_label_then_id(self, tmp_path):
        obj = minimal_obj()
        obj["checks"] = ["lemma2.1-ii", "eq-1.1", "lemma2.1-i"]
        obj["mappings"] = [
            {"label": "zeta", "map": obj["mappings"][0]["map"]},
            {"label": "alpha", "map": obj["mappings"][0]["map"]},
        ]
        report = harness.run_suite(harness.load_scenario(write_scenario(tmp_path, obj)))
        keys = [(label, e.identity_id) for label, e in report.results]
        assert keys == sorted(keys)


class TestReports:
    def test_emit_then_reload(self, tmp_path):
        path = write_scenario(tmp_path, minimal_obj())
        report = harness.run_suite(harness.load_scenario(path))
        out = tmp_path / "report.json"
        harness.emit_report(report, out)
        loaded = json.loads(out.read_text())
        assert loaded == report.to_obj()
        assert loaded["overall_pass"] is True
        assert loaded["tool_version"] == harness.TOOL_VERSION

    def test_failing_campaign_report_shape(self, tmp_path):
        obj = minimal_obj()
        quad = {
            "kind": "quad_diag",
            "g": cj.ModuleSpace(SCALAR, 1).basis_vector(0).to_obj(),
            "scale": 1.0,
        }
        obj["mappings"] = [{"label": "quad", "map": quad}]
        report = harness.run_suite(harness.load_scenario(write_scenario(tmp_path, obj)))
        assert not report.overall_pass
        assert any(not e.passed for _, e in report.results)

    def test_unwritable_report_path(self, tmp_path):
        report = harness.run_suite(
            harness.load_scenario(write_scenario(tmp_path, minimal_obj()))
        )
        with pytest.raises(cj.IoError):
            harness.emit_report(report, tmp_path / "missing" / "report.json")


class TestBundledScenarios:
    def test_catalog_files_match_builders(self, tmp_path):
        regenerated = catalog.write_all(tmp_path)
        for path in regenerated:
            name = path.split("/")[-1]
            bundled = catalog.bundled_scenario_path(name)
            with open(bundled, "rb") as fh:
                want = fh.read()
            with open(path, "rb") as fh:
                got = fh.read()
            assert got == want, name

    def test_every_bundled_scenario_loads(self):
        for name in catalog.SCENARIO_NAMES:
            scenario = harness.load_scenario(catalog.bundled_scenario_path(name))
            assert scenario.mappings

    def test_affine_roundtrip_passes_everything(self):
        scenario = harness.load_scenario(
            catalog.bundled_scenario_path("affine_roundtrip")
        )
        assert set(scenario.checks) == set(cj.CHECK_IDS)
        report = harness.run_suite(scenario)
        assert report.overall_pass

    def test_quad_negative_pinpoints_the_broken_hypothesis(self):
        scenario = harness.load_scenario(
            catalog.bundled_scenario_path("quad_negative")
        )
        report = harness.run_suite(scenario)
        entries = {e.identity_id: e for _, e in report.results}
        assert not report.overall_pass
        assert not entries["eq-1.1"].passed
        assert entries["eq-1.1"].max_residual > 1e-3
        assert entries["thm2.7-B-symmetric"].passed
        assert entries["thm2.7-B-orth-preserving"].passed
        assert entries["thm2.7-B-biadditive"].passed
        assert not entries["thm2.7-B-a-biadditive"].passed

    def test_perturb_negative_detected_via_forced_sampler(self):
        scenario = harness.load_scenario(
            catalog.bundled_scenario_path("perturb_negative")
        )
        report = harness.run_suite(scenario)
        assert not report.overall_pass
        worst = max(e.max_residual for _, e in report.results)
        assert worst > 1e-3


class TestCli:
    def test_verify_pass_exit_zero(self):
        assert cli_main(["verify", "--scenario", "affine_roundtrip"]) == 0

    def test_verify_failure_exit_one(self):
        assert cli_main(["verify", "--scenario", "quad_negative"]) == 1

    def test_unknown_scenario_exit_two(self):
        assert cli_main(["verify", "--scenario", "definitely_not_there"]) == 2

    def test_usage_error_exit_two(self):
        assert cli_main(["verify"]) == 2

    def test_list_checks_prints_all_ids(self, capsys):
        assert cli_main(["list-checks"]) == 0
        out = capsys.readouterr().out.split()
        assert out == list(cj.CHECK_IDS)

    def test_example_l2(self, capsys):
        assert cli_main(["example-l2", "--p", "0.5", "--n", "8"]) == 0
        assert "pass" in capsys.readouterr().out

    def test_example_l2_bad_p_exit_two(self):
        assert cli_main(["example-l2", "--p", "1.5", "--n", "8"]) == 2

    def test_solve_kernel_probe(self, capsys):
        assert cli_main(["solve-kernel", "--scenario", "kernel_probe"]) == 0
        assert "kernel dimension: 4" in capsys.readouterr().out

    def test_solve_kernel_scalar_zero(self, capsys):
        assert cli_main(["solve-kernel", "--scenario", "interleave_p050"]) == 0
        assert "kernel dimension: 0" in capsys.readouterr().out

    def test_decompose_writes_report(self, tmp_path):
        out = tmp_path / "dec.json"
        code = cli_main(
            [
                "decompose",
                "--scenario",
                "affine_roundtrip",
                "--mapping",
                "affine",
                "--report",
                str(out),
            ]
        )
        assert code == 0
        loaded = json.loads(out.read_text())
        assert loaded["overall_pass"] is True
        ids = [entry["id"] for entry in loaded["results"]]
        assert "thm2.7-reconstruct" in ids

    def test_decompose_unknown_label_exit_two(self, tmp_path):
        code = cli_main(
            [
                "decompose",
                "--scenario",
                "affine_roundtrip",
                "--mapping",
                "nope",
                "--report",
                str(tmp_path / "r.json"),
            ]
        )
        assert code == 2

    def test_verify_report_determinism(self, tmp_path):
        r1, r2 = tmp_path / "a.json", tmp_path / "b.json"
        assert (
            cli_main(
                ["verify", "--scenario", "morphism_shift", "--report", str(r1)]
            )
            == 0
        )
        assert (
            cli_main(
                ["verify", "--scenario", "morphism_shift", "--report", str(r2)]
            )
            == 0
        )
        a = json.loads(r1.read_text())
        b = json.loads(r2.read_text())
        assert canonical_dumps(a["results"]) == canonical_dumps(b["results"])
        assert a["scenario_digest"] == b["scenario_digest"]

    def test_seed_override_changes_results(self, tmp_path):
        r1, r2 = tmp_path / "a.json", tmp_path / "b.json"
        cli_main(
            ["verify", "--scenario", "morphism_shift", "--seed", "1", "--report", str(r1)]
        )
        cli_main(
            ["verify", "--scenario", "morphism_shift", "--seed", "2", "--report", str(r2)]
        )
        a = json.loads(r1.read_text())
        b = json.loads(r2.read_text())
        assert a["scenario_digest"] != b["scenario_digest"]
