import io
import json

import pytest

from kansim.cli import (
    EXIT_BUDGET,
    EXIT_DEGRADED,
    EXIT_INPUT,
    EXIT_OK,
    EXIT_VALIDATION,
    builtin_names,
    build_parser,
    run,
)


def invoke(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, out, err)
    return code, out.getvalue(), err.getvalue()


def payload(stdout_text):
    return json.loads(stdout_text)


class TestValidateCommand:
    def test_builtin_ok(self):
        code, out, _ = invoke(["validate", "builtin:delta-2"])
        assert code == EXIT_OK
        assert payload(out)["result"]["ok"] is True

    def test_broken_identity_exits_2(self, tmp_path):
        from kansim.constructors import standard_simplex
        from kansim.core import dumps

        doc = json.loads(dumps(standard_simplex(1, 1)))
        pos = doc["levels"][1].index("0.0")
        doc["faces"][0][0][pos] = "1"
        path = tmp_path / "broken.json"
        path.write_text(json.dumps(doc))
        code, out, _ = invoke(["validate", str(path)])
        assert code == EXIT_VALIDATION
        report = payload(out)
        assert any(
            "d_i s_i = id" in v["rule"] for v in report["result"]["violations"]
        )

    def test_missing_file_exits_1(self):
        code, _, err = invoke(["validate", "/nonexistent/file.json"])
        assert code == EXIT_INPUT

    def test_all_builtins_valid(self):
        for name in builtin_names():
            code, out, _ = invoke(["validate", f"builtin:{name}"])
            assert code == EXIT_OK, name


class TestBuildCommand:
    def test_em_space_level_sizes(self, tmp_path):
        out_path = tmp_path / "em.json"
        code, out, _ = invoke(
            ["build", "em-space", "--group", "Z/2", "--n", "1", "--cap", "3",
             "-o", str(out_path)]
        )
        assert code == EXIT_OK
        assert payload(out)["result"]["level_sizes"] == [1, 2, 4, 8]
        code2, out2, _ = invoke(["validate", str(out_path)])
        assert code2 == EXIT_OK

    def test_product_with_point(self, tmp_path):
        out_path = tmp_path / "prod.json"
        code, out, _ = invoke(
            ["build", "product", "builtin:point", "builtin:delta-1",
             "--cap", "1", "-o", str(out_path)]
        )
        assert code == EXIT_OK
        assert payload(out)["result"]["level_sizes"] == [2, 3]

    def test_complete_non_kan_skeleton_warns(self, tmp_path):
        d1_path = tmp_path / "d1.json"
        invoke(["build", "standard-simplex", "1", "--cap", "1", "-o", str(d1_path)])
        out_path = tmp_path / "completed.json"
        code, out, _ = invoke(
            ["build", "complete", str(d1_path), "--cap", "2", "-o", str(out_path)]
        )
        assert code == EXIT_OK
        report = payload(out)
        assert any("kan_skeleton_check failed" in w for w in report["warnings"])

    def test_budget_exceeded_exits_3(self, tmp_path):
        code, _, err = invoke(
            ["build", "em-space", "--group", "Z/2", "--n", "1", "--cap", "4",
             "--level-budget", "100", "-o", str(tmp_path / "x.json")]
        )
        assert code == EXIT_BUDGET
        assert "dimension 4" in err

    def test_quotient_of_builtin(self, tmp_path):
        out_path = tmp_path / "q.json"
        code, out, _ = invoke(
            ["build", "quotient", "builtin:delta-2", "--subcomplex", "boundary",
             "-o", str(out_path)]
        )
        assert code == EXIT_OK


class TestAnalyzeCommand:
    def test_kan_horn_fails_with_counterexample(self):
        code, out, _ = invoke(["analyze", "kan", "builtin:horn-2-1", "--up-to", "1"])
        assert code == EXIT_OK
        result = payload(out)["result"]
        assert result["passed"] is False
        assert "counterexample" in result

    def test_kan_point_passes(self):
        code, out, _ = invoke(["analyze", "kan", "builtin:point", "--up-to", "2"])
        assert payload(out)["result"]["passed"] is True

    def test_homology_sphere(self):
        code, out, _ = invoke(
            ["analyze", "homology", "builtin:boundary-3", "--coeff", "Z", "--dim", "2"]
        )
        assert code == EXIT_OK
        assert payload(out)["result"] == {"free_rank": 1, "torsion": []}

    def test_compare_sim_spec(self):
        code, out, _ = invoke(
            ["analyze", "compare-sim-spec", "builtin:boundary-2",
             "--coeff", "Z/2", "--n", "1"]
        )
        assert code == EXIT_OK
        result = payload(out)["result"]
        assert result["isomorphic"] is True
        assert result["h_spec"] == result["h_sim"] == {"free_rank": 0, "torsion": [2]}

    def test_homotopy_group_on_non_kan_degrades(self):
        code, out, _ = invoke(
            ["analyze", "homotopy-group", "builtin:delta-2", "--dim", "1",
             "--basepoint", "0"]
        )
        assert code == EXIT_DEGRADED
        assert payload(out)["warnings"]

    def test_exactness_on_em(self, tmp_path):
        em_path = tmp_path / "em.json"
        invoke(["build", "em-space", "--group", "Z/2", "--n", "1", "--cap", "3",
                "-o", str(em_path)])
        code, out, _ = invoke(
            ["analyze", "exactness", str(em_path), "--up-to", "2"]
        )
        assert code == EXIT_OK
        assert payload(out)["result"]["passed"] is True

    def test_hurewicz_on_em(self, tmp_path):
        em_path = tmp_path / "em.json"
        invoke(["build", "em-space", "--group", "Z/3", "--n", "1", "--cap", "3",
                "-o", str(em_path)])
        code, out, _ = invoke(["analyze", "hurewicz", str(em_path), "--dim", "1"])
        assert code == EXIT_OK
        assert payload(out)["result"]["passed"] is True

    def test_spec_cohomology(self):
        code, out, _ = invoke(
            ["analyze", "spec-cohomology", "builtin:boundary-2",
             "--coeff", "Z/3", "--n", "1"]
        )
        assert code == EXIT_OK
        result = payload(out)["result"]
        assert result["h_spec"] == {"free_rank": 0, "torsion": [3]}
        assert result["methods_agree"] is True

    def test_bad_coeff_exits_1(self):
        code, _, err = invoke(
            ["analyze", "homology", "builtin:point", "--coeff", "Q", "--dim", "0"]
        )
        assert code == EXIT_INPUT


class TestDeterminism:
    COMMANDS = [
        ["validate", "builtin:delta-2"],
        ["analyze", "kan", "builtin:boundary-2", "--up-to", "1"],
        ["analyze", "homology", "builtin:boundary-3", "--coeff", "Z/6", "--dim", "2"],
        ["analyze", "compare-sim-spec", "builtin:delta-2", "--coeff", "Z/2", "--n", "1"],
    ]

    @pytest.mark.parametrize("argv", COMMANDS, ids=[" ".join(c) for c in COMMANDS])
    def test_repeat_runs_byte_identical(self, argv):
        _, out1, _ = invoke(argv)
        _, out2, _ = invoke(argv)
        assert out1 == out2

    @pytest.mark.parametrize("argv", COMMANDS, ids=[" ".join(c) for c in COMMANDS])
    def test_thread_flag_is_invisible(self, argv):
        _, base, _ = invoke(argv)
        _, threaded, _ = invoke(["--threads", "4"] + argv)
        assert base == threaded

    def test_wall_time_on_stderr_not_stdout(self):
        code, out, err = invoke(["validate", "builtin:point"])
        assert "wall_time" not in out
        assert "wall_time_ms=" in err

    def test_help_lists_builtins(self):
        parser = build_parser()
        text = parser.format_help()
        for name in builtin_names():
            assert f"builtin:{name}" in text
