"""Command-line behavior: pipelines, exit codes, determinism."""
import json

import pytest
from click.testing import CliRunner

from quasicone.cli import main

runner = CliRunner()


def run(*args):
    return runner.invoke(main, [str(a) for a in args])


@pytest.fixture
def slack_file(tmp_path):
    """Instance of the slack metric on [0,2] step 1/4 with a query above the grid."""
    path = tmp_path / "slack.json"
    result = run("example", "example4", "--grid", "0:2:1/4", "--alpha", "1",
                 "--beta", "5", "--out", path)
    assert result.exit_code == 0, result.output
    return path


@pytest.fixture
def broken_metric_file(tmp_path):
    doc = {
        "space": {"dimension": 2, "rows": [["1", "0"], ["0", "1"]]},
        "points": ["a", "b"],
        "metric": {
            "kind": "table",
            "entries": [
                ["a", "a", ["0", "0"]],
                ["a", "b", ["0", "0"]],
                ["b", "a", ["1", "1"]],
                ["b", "b", ["0", "0"]],
            ],
        },
        "queries": [{"q": "a"}],
    }
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(doc))
    return path


class TestPipeline:
    def test_example_generates_expected_instance(self, slack_file):
        doc = json.loads(slack_file.read_text())
        assert doc["metric"] == {"kind": "example4", "alpha": "1"}
        assert {"label": "5", "coordinate": "5"} in doc["points"]
        assert doc["queries"][0]["q"] == "5"
        assert len(doc["queries"][0]["candidates"]) == 9

    def test_verify_passes(self, slack_file):
        result = run("verify", slack_file)
        assert result.exit_code == 0
        doc = json.loads(result.stdout)
        assert doc["passed"]
        assert doc["metric_axioms"]["checks"][2]["checks"] == 10 ** 3

    def test_approx_reproduces_regime(self, slack_file):
        result = run("approx", slack_file)
        assert result.exit_code == 0
        doc = json.loads(result.stdout)
        assert doc["results"][0]["best"] == ["2"]
        assert doc["results"][0]["common_distance"] == ["3", "3"]

    def test_direction_override(self, slack_file):
        result = run("approx", slack_file, "--direction", "backward")
        doc = json.loads(result.stdout)
        # below-the-query candidates all sit at distance (1, 1) going backward
        assert doc["results"][0]["best"] == sorted(doc["results"][0]["candidates"])

    def test_classify_holds_for_singleton_family(self, slack_file):
        result = run("classify", slack_file)
        assert result.exit_code == 0
        doc = json.loads(result.stdout)
        assert doc["chebyshev"]["holds"] and doc["quasi"]["holds"]

    def test_example3_whole_set_regime(self, tmp_path):
        path = tmp_path / "dir.json"
        assert run("example", "example3", "--grid", "-5:-1:1/2", "--beta", "2",
                   "--out", path).exit_code == 0
        doc = json.loads(path.read_text())
        assert doc["queries"][0]["q"] == "4"
        result = run("approx", path)
        out = json.loads(result.stdout)
        assert out["results"][0]["best"] == out["results"][0]["candidates"]


class TestWitnessCommand:
    def test_emit_then_check_holds(self, slack_file, tmp_path):
        wpath = tmp_path / "w.json"
        emit = run("witness", slack_file, "--mode", "emit", "--witness-path", wpath)
        assert emit.exit_code == 0
        check = run("witness", slack_file, "--mode", "check", "--witness-path", wpath)
        assert check.exit_code == 0
        doc = json.loads(check.stdout)
        assert doc["verdict"]["holds"]
        assert doc["certified"] == ["2"]

    def test_check_explicit_members(self, slack_file, tmp_path):
        wpath = tmp_path / "w.json"
        run("witness", slack_file, "--mode", "emit", "--witness-path", wpath)
        good = run("witness", slack_file, "--mode", "check", "--witness-path", wpath,
                   "--members", "2")
        assert good.exit_code == 0
        bad = run("witness", slack_file, "--mode", "check", "--witness-path", wpath,
                  "--members", "1")
        assert bad.exit_code == 5
        doc = json.loads(bad.stdout)
        assert doc["verdict"]["failed_condition"] == "f-shift-not-in-cone"

    def test_corrupted_witness_fails(self, slack_file, tmp_path):
        wpath = tmp_path / "w.json"
        run("witness", slack_file, "--mode", "emit", "--witness-path", wpath)
        doc = json.loads(wpath.read_text())
        doc["f"] = [[label, ["99", "99"]] for label, _ in doc["f"]]
        wpath.write_text(json.dumps(doc))
        result = run("witness", slack_file, "--mode", "check", "--witness-path", wpath)
        assert result.exit_code == 5

    def test_check_requires_witness_path(self, slack_file):
        assert run("witness", slack_file, "--mode", "check").exit_code == 3


class TestExitCodes:
    def test_parse_error_is_2(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        assert run("verify", path).exit_code == 2

    def test_unknown_query_label_is_3(self, tmp_path):
        doc = {
            "points": [{"label": "0", "coordinate": "0"}, {"label": "1", "coordinate": "1"}],
            "metric": {"kind": "example3"},
            "queries": [{"q": "ghost"}],
        }
        path = tmp_path / "inst.json"
        path.write_text(json.dumps(doc))
        assert run("approx", path).exit_code == 3

    def test_missing_query_selector_is_3(self, slack_file):
        assert run("approx", slack_file, "--query", "7").exit_code == 3
        assert run("approx", slack_file, "--query", "zzz").exit_code == 3

    def test_pseudo_without_embedding_is_3(self, slack_file):
        assert run("classify", slack_file, "--pseudo").exit_code == 3

    def test_axiom_failure_is_4(self, broken_metric_file):
        result = run("verify", broken_metric_file)
        assert result.exit_code == 4
        doc = json.loads(result.stdout)
        assert not doc["metric_axioms"]["checks"][1]["passed"]

    def test_classification_failure_is_5(self, tmp_path):
        path = tmp_path / "tied.json"
        run("example", "example4", "--grid", "0:2:1/4", "--beta", "-1", "--out", path)
        result = run("classify", path)
        assert result.exit_code == 5
        doc = json.loads(result.stdout)
        assert not doc["chebyshev"]["holds"]
        assert doc["chebyshev"]["counterexamples"][0]["q"] == "-1"

    def test_bad_grid_spec_is_3(self):
        assert run("example", "example4", "--grid", "0..2").exit_code == 3
        assert run("example", "example4", "--grid", "0:2:0").exit_code == 3


class TestDeterminism:
    @pytest.mark.parametrize("command", [["verify", "--seed", "7"], ["approx"], ["classify"]])
    def test_reports_byte_identical(self, slack_file, tmp_path, command):
        out1 = tmp_path / "r1.json"
        out2 = tmp_path / "r2.json"
        assert run(*command, slack_file, "--out", out1).exit_code == 0
        assert run(*command, slack_file, "--out", out2).exit_code == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_identical_stdout_runs(self, slack_file):
        a = run("approx", slack_file)
        b = run("approx", slack_file)
        assert a.stdout == b.stdout


class TestPrettyMode:
    def test_approx_pretty_uses_order_notation(self, slack_file):
        result = run("approx", slack_file, "--pretty")
        assert result.exit_code == 0
        assert "P_{H_f}(q=5) = {2}" in result.stdout

    def test_verify_pretty(self, slack_file):
        result = run("verify", slack_file, "--pretty")
        assert "QCM3 ok (1000 checks)" in result.stdout

    def test_classify_pretty(self, slack_file):
        result = run("classify", slack_file, "--pretty")
        assert "Chebyshev: holds" in result.stdout

    def test_empty_best_pretty_symbol(self, tmp_path):
        doc = {
            "space": {"dimension": 2, "rows": [["1", "0"], ["0", "1"]]},
            "points": ["h1", "h2", "q"],
            "metric": {
                "kind": "table",
                "entries": [
                    [r, s, ["0", "0"] if r == s else v]
                    for r, s, v in [
                        ("q", "h1", ["1", "0"]),
                        ("q", "h2", ["0", "1"]),
                        ("h1", "q", ["1", "1"]),
                        ("h2", "q", ["1", "1"]),
                        ("h1", "h2", ["1", "1"]),
                        ("h2", "h1", ["1", "1"]),
                        ("q", "q", None),
                        ("h1", "h1", None),
                        ("h2", "h2", None),
                    ]
                ],
            },
            "queries": [{"q": "q", "candidates": ["h1", "h2"]}],
        }
        path = tmp_path / "empty.json"
        path.write_text(json.dumps(doc))
        result = run("approx", path, "--pretty")
        assert "∅" in result.stdout
