import json

import numpy as np
import pytest

from mesoc.cli import (
    EXIT_DIMENSION,
    EXIT_NONCONVERGENCE,
    EXIT_OK,
    EXIT_PARSE,
    EXIT_VIOLATION,
    format_json,
    main,
    parse_vector,
)


def run_cli(capsys, argv):
    """Invoke the entry point and return (exit code, parsed stdout, stderr)."""
    code = main(argv)
    captured = capsys.readouterr()
    payload = json.loads(captured.out) if captured.out.strip() else None
    return code, payload, captured.err


class TestWireFormat:
    def test_parse_vector_commas(self):
        np.testing.assert_array_equal(parse_vector("1, 2,3"), [1.0, 2.0, 3.0])

    def test_parse_vector_newlines(self):
        np.testing.assert_array_equal(parse_vector("1\n2\n3"), [1.0, 2.0, 3.0])

    def test_format_json_round_trips_doubles(self):
        x = 1.0 / 3.0
        text = format_json({"x": x, "xs": [x, 1e-300]})
        back = json.loads(text)
        assert back["x"] == x
        assert back["xs"] == [x, 1e-300]

    def test_format_json_rejects_non_finite(self):
        with pytest.raises(ValueError):
            format_json(float("inf"))


class TestProject:
    def test_lorentz_fixture(self, capsys):
        code, out, _ = run_cli(
            capsys, ["project", "--p", "1", "--q", "2", "--inline", "1,2,0"]
        )
        assert code == EXIT_OK
        assert out["case"] == "Interior"
        np.testing.assert_allclose(out["primal"], [1.5, 1.5, 0.0], atol=1e-12)

    def test_q_zero_uses_monotone_nonneg(self, capsys):
        code, out, _ = run_cli(
            capsys, ["project", "--p", "2", "--q", "0", "--inline", "1,2"]
        )
        assert code == EXIT_OK
        np.testing.assert_allclose(out["primal"], [1.5, 1.5], atol=1e-12)

    def test_dual_cone_projection(self, capsys):
        # leading-dash vectors need the = form or argparse reads them as flags
        code, out, _ = run_cli(
            capsys,
            ["project", "--cone", "mesoc-dual", "--p", "2", "--q", "1", "--inline=-1,2,0.5"],
        )
        assert code == EXIT_OK
        assert out["violation"] <= 1e-9
        assert len(out["projection"]) == 3

    def test_vector_cone_projection(self, capsys):
        code, out, _ = run_cli(
            capsys, ["project", "--cone", "monotone", "--p", "3", "--inline", "1,3,2"]
        )
        assert code == EXIT_OK
        np.testing.assert_allclose(out["projection"], [2.0, 2.0, 2.0], atol=1e-12)

    def test_vector_cone_rejects_norm_block(self, capsys):
        code, _, err = run_cli(
            capsys,
            ["project", "--cone", "monotone", "--p", "2", "--q", "1", "--inline", "1,2,3"],
        )
        assert code == EXIT_DIMENSION
        assert "error:" in err

    def test_malformed_number_exits_2(self, capsys):
        code, _, err = run_cli(
            capsys, ["project", "--p", "1", "--q", "1", "--inline", "1,zebra"]
        )
        assert code == EXIT_PARSE
        assert "malformed" in err

    def test_length_mismatch_exits_3(self, capsys):
        code, _, _ = run_cli(
            capsys, ["project", "--p", "2", "--q", "2", "--inline", "1,2,3"]
        )
        assert code == EXIT_DIMENSION

    def test_inline_and_file_conflict(self, capsys, tmp_path):
        path = tmp_path / "v.txt"
        path.write_text("1,2")
        code, _, _ = run_cli(
            capsys,
            ["project", "--p", "2", "--inline", "1,2", "--file", str(path)],
        )
        assert code == EXIT_PARSE

    def test_neither_input_source(self, capsys):
        code, _, _ = run_cli(capsys, ["project", "--p", "2"])
        assert code == EXIT_PARSE

    def test_file_input(self, capsys, tmp_path):
        path = tmp_path / "v.txt"
        path.write_text("3\n1\n2\n")
        code, out, _ = run_cli(
            capsys, ["project", "--cone", "monotone", "--p", "3", "--file", str(path)]
        )
        assert code == EXIT_OK
        np.testing.assert_allclose(out["projection"], [3.0, 1.5, 1.5], atol=1e-12)

    def test_missing_file_exits_2(self, capsys, tmp_path):
        code, _, _ = run_cli(
            capsys, ["project", "--p", "2", "--file", str(tmp_path / "absent.txt")]
        )
        assert code == EXIT_PARSE

    def test_output_is_deterministic(self, capsys):
        argv = ["project", "--p", "3", "--q", "2", "--inline", "0.3,-1.7,2.2,0.9,-0.4"]
        main(argv)
        first = capsys.readouterr().out
        main(argv)
        second = capsys.readouterr().out
        assert first == second


class TestCheck:
    def test_member_exits_0(self, capsys):
        code, out, _ = run_cli(
            capsys, ["check", "--p", "2", "--q", "1", "--inline", "2,1,1"]
        )
        assert code == EXIT_OK
        assert out["member"] is True

    def test_non_member_exits_1(self, capsys):
        code, out, _ = run_cli(
            capsys, ["check", "--p", "2", "--q", "1", "--inline", "0,1,0"]
        )
        assert code == EXIT_VIOLATION
        assert out["member"] is False
        assert out["violation"] > 0

    def test_vector_cone_check(self, capsys):
        code, out, _ = run_cli(
            capsys, ["check", "--cone", "monotone-dual", "--p", "2", "--inline", "1,-1"]
        )
        assert code == EXIT_OK
        assert out["member"] is True

    def test_round_trip_project_then_check(self, capsys):
        # the emitted primal and dual factors must pass membership at the same tol
        rng = np.random.default_rng(7)
        vec = rng.standard_normal(7)
        inline = ",".join(format(v, ".17g") for v in vec)
        code, cert, _ = run_cli(
            capsys, ["project", "--p", "4", "--q", "3", "--inline", inline]
        )
        assert code == EXIT_OK
        primal = ",".join(format(v, ".17g") for v in cert["primal"])
        dual = ",".join(format(v, ".17g") for v in cert["dual_of_neg"])
        code, _, _ = run_cli(
            capsys, ["check", "--p", "4", "--q", "3", "--inline", primal]
        )
        assert code == EXIT_OK
        code, _, _ = run_cli(
            capsys,
            ["check", "--cone", "mesoc-dual", "--p", "4", "--q", "3", "--inline", dual],
        )
        assert code == EXIT_OK


class TestOracleCompare:
    def test_small_run_is_clean(self, capsys):
        code, out, _ = run_cli(
            capsys,
            ["oracle-compare", "--p", "3", "--q", "2", "--count", "5", "--seed", "1"],
        )
        assert code == EXIT_OK
        assert len(out["rows"]) == 5
        assert out["max_deviation"] <= out["tol"]
        assert all(row["converged"] for row in out["rows"])

    def test_count_zero_empty_table(self, capsys):
        code, out, _ = run_cli(capsys, ["oracle-compare", "--count", "0"])
        assert code == EXIT_OK
        assert out["rows"] == []
        assert out["max_deviation"] == 0.0

    def test_seed_determinism(self, capsys):
        argv = ["oracle-compare", "--p", "2", "--q", "2", "--count", "4", "--seed", "9"]
        main(argv)
        first = capsys.readouterr().out
        main(argv)
        second = capsys.readouterr().out
        assert first == second

    def test_dimension_cap(self, capsys):
        code, _, err = run_cli(capsys, ["oracle-compare", "--p", "9", "--q", "2"])
        assert code == EXIT_DIMENSION
        assert "capped" in err

    def test_unreachable_tol_exits_1(self, capsys):
        code, out, _ = run_cli(
            capsys,
            ["oracle-compare", "--p", "3", "--q", "3", "--count", "3", "--tol", "1e-18"],
        )
        assert code == EXIT_VIOLATION
        assert out["max_deviation"] > 1e-18


class TestSolvePortfolio:
    def write_csv(self, tmp_path, with_probs=False):
        path = tmp_path / "returns.csv"
        if with_probs:
            path.write_text("0.5,0.5,0.0\n0.25,0.0,0.25\n0.25,0.25,0.5\n")
        else:
            path.write_text("0.5,0.0\n0.0,0.25\n0.25,0.5\n")
        return str(path)

    def test_solves_csv(self, capsys, tmp_path):
        code, out, _ = run_cli(
            capsys, ["solve-portfolio", "--file", self.write_csv(tmp_path)]
        )
        assert code == EXIT_OK
        w = np.asarray(out["w"])
        assert w.shape == (2,)
        assert abs(w.sum() - 1.0) <= 1e-9
        assert out["converged"] is True
        assert out["residuals"]["sum_u"] <= 1e-7
        assert out["residuals"]["cone"] <= 1e-7

    def test_probabilities_column(self, capsys, tmp_path):
        code, out, _ = run_cli(
            capsys,
            [
                "solve-portfolio",
                "--file", self.write_csv(tmp_path, with_probs=True),
                "--probabilities-column", "0",
            ],
        )
        assert code == EXIT_OK
        assert len(out["w"]) == 2

    def test_missing_file_flag(self, capsys):
        code, _, err = run_cli(capsys, ["solve-portfolio"])
        assert code == EXIT_PARSE
        assert "--file" in err

    def test_non_numeric_cell_exits_2(self, capsys, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("0.1,0.2\nx,0.4\n")
        code, _, _ = run_cli(capsys, ["solve-portfolio", "--file", str(path)])
        assert code == EXIT_PARSE

    def test_ragged_rows_exit_3(self, capsys, tmp_path):
        path = tmp_path / "ragged.csv"
        path.write_text("0.1,0.2\n0.3\n")
        code, _, _ = run_cli(capsys, ["solve-portfolio", "--file", str(path)])
        assert code == EXIT_DIMENSION

    def test_impossible_tolerance_exits_4(self, capsys, tmp_path):
        # non-dyadic returns leave a rounding residual ~1e-16 that can never
        # meet the requested tolerance, so the solver must report failure
        path = tmp_path / "r.csv"
        path.write_text("0.3,0.1\n0.0,0.4\n0.2,0.7\n")
        code, out, _ = run_cli(
            capsys, ["solve-portfolio", "--file", str(path), "--tol", "1e-30"]
        )
        assert code == EXIT_NONCONVERGENCE
        assert out["converged"] is False


class TestBench:
    def test_reports_medians(self, capsys):
        code, out, _ = run_cli(
            capsys, ["bench", "--p", "10", "--q", "10", "--count", "3"]
        )
        assert code == EXIT_OK
        assert out["reps"] == 3
        (row,) = out["rows"]
        assert row["p"] == 10 and row["q"] == 10
        assert row["median_random_ms"] >= 0.0
        assert row["median_ascending_ms"] >= 0.0

    def test_grid_of_dims(self, capsys):
        code, out, _ = run_cli(
            capsys, ["bench", "--p", "8,16", "--q", "4,8", "--count", "2"]
        )
        assert code == EXIT_OK
        assert [(r["p"], r["q"]) for r in out["rows"]] == [
            (8, 4), (8, 8), (16, 4), (16, 8),
        ]

    def test_doubling_p_stays_in_band(self, capsys):
        # near-linear scaling; band kept loose to tolerate timer noise
        code, out, _ = run_cli(
            capsys, ["bench", "--p", "50000,100000", "--q", "1", "--count", "7"]
        )
        assert code == EXIT_OK
        small, large = (r["median_random_ms"] for r in out["rows"])
        assert large <= 4.0 * max(small, 1e-3)

    def test_zero_reps_exits_2(self, capsys):
        code, _, _ = run_cli(capsys, ["bench", "--count", "0"])
        assert code == EXIT_PARSE

    def test_malformed_dim_list_exits_2(self, capsys):
        code, _, _ = run_cli(capsys, ["bench", "--p", "10,oops"])
        assert code == EXIT_PARSE

    def test_nonpositive_dim_exits_3(self, capsys):
        code, _, _ = run_cli(capsys, ["bench", "--p", "0"])
        assert code == EXIT_DIMENSION
