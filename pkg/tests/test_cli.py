import json

import pytest

from toptrees import read_bp, read_tdag
from toptrees.cli import main
from toptrees.reporting import (CSV_HEADER, read_comparison_csv,
                                validate_report_json)


def run(*args):
    return main(list(args))


class TestGen:
    def test_tk_small(self, tmp_path, capsys):
        out = tmp_path / "t.bp"
        assert run("gen", "--family", "tk", "--k", "1", "--sigma", "2",
                   "--m", "2", "-o", str(out)) == 0
        assert read_bp(out).n == 27
        assert "n=27" in capsys.readouterr().out

    def test_ternary(self, tmp_path):
        out = tmp_path / "s.bp"
        assert run("gen", "--family", "ternary", "--k", "2", "-o", str(out)) == 0
        assert read_bp(out).n == 13

    def test_word_budget_exceeded(self, tmp_path, capsys):
        rc = run("gen", "--family", "tk", "--k", "1", "--sigma", "2",
                 "--m", "300", "-o", str(tmp_path / "x.bp"))
        assert rc == 2
        assert "error" in capsys.readouterr().err

    def test_random_requires_n(self, tmp_path):
        assert run("gen", "--family", "random", "-o", str(tmp_path / "x.bp")) == 2
        assert run("gen", "--family", "random", "--n", "50", "--sigma", "4",
                   "--seed", "3", "-o", str(tmp_path / "r.bp")) == 0


class TestCompress:
    def test_single_edge_report(self, tmp_path):
        bp = tmp_path / "t.bp"
        bp.write_text("a(b)\n")
        report = tmp_path / "r.json"
        assert run("compress", str(bp), "--algo", "original",
                   "-o", str(tmp_path / "t.tdag"), "--report", str(report)) == 0
        data = validate_report_json(json.loads(report.read_text()))
        assert data["dag"]["dag_nodes"] == 1
        assert data["algo"] == "original" and data["alpha"] == "10/9"

    def test_p1_trace_reaches_single_cluster_at_three(self, tmp_path):
        bp = tmp_path / "p1.bp"
        assert run("gen", "--family", "path", "--k", "1", "-o", str(bp)) == 0
        trace_path = tmp_path / "trace.json"
        assert run("compress", str(bp), "--algo", "original",
                   "-o", str(tmp_path / "p1.tdag"), "--trace", str(trace_path)) == 0
        trace = json.loads(trace_path.read_text())
        assert trace[-1]["t"] == 3 and trace[-1]["clusters_after"] == 1
        assert set(trace[0]) == {"t", "m", "p", "q", "applied", "clusters_after"}

    def test_deterministic_tdag_bytes(self, tmp_path):
        bp = tmp_path / "t.bp"
        assert run("gen", "--family", "tk", "--k", "1", "--sigma", "2",
                   "--m", "4", "-o", str(bp)) == 0
        out1, out2 = tmp_path / "a.tdag", tmp_path / "b.tdag"
        for out in (out1, out2):
            assert run("compress", str(bp), "--algo", "modified",
                       "--alpha", "10/9", "-o", str(out)) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_parse_failure_exit_code(self, tmp_path):
        bad = tmp_path / "bad.bp"
        bad.write_text("a(b,c(")
        assert run("compress", str(bad), "-o", str(tmp_path / "x.tdag")) == 2

    def test_single_node_rejected(self, tmp_path):
        bp = tmp_path / "one.bp"
        bp.write_text("a\n")
        assert run("compress", str(bp), "-o", str(tmp_path / "x.tdag")) == 2

    def test_bad_alpha(self, tmp_path):
        bp = tmp_path / "t.bp"
        bp.write_text("a(b)\n")
        assert run("compress", str(bp), "--alpha", "nope",
                   "-o", str(tmp_path / "x.tdag")) == 2
        assert run("compress", str(bp), "--alpha", "1/2",
                   "-o", str(tmp_path / "x.tdag")) == 2


class TestVerify:
    @pytest.mark.parametrize("algo", ["original", "modified"])
    def test_family_tree_passes(self, tmp_path, capsys, algo):
        bp = tmp_path / "t.bp"
        assert run("gen", "--family", "tk", "--k", "1", "--sigma", "2",
                   "--m", "4", "-o", str(bp)) == 0
        assert run("verify", str(bp), "--algo", algo) == 0
        out = capsys.readouterr().out
        assert "roundtrip equality" in out and "FAIL" not in out

    def test_modified_prints_lemma_checks(self, tmp_path, capsys):
        bp = tmp_path / "t.bp"
        assert run("gen", "--family", "random", "--n", "120", "--sigma", "2",
                   "--seed", "5", "-o", str(bp)) == 0
        assert run("verify", str(bp), "--algo", "modified") == 0
        out = capsys.readouterr().out
        assert "ceil(7m/8)+q" in out
        assert "113*n/alpha^(t+1)" in out

    def test_tdag_expansion_path(self, tmp_path, capsys):
        bp = tmp_path / "t.bp"
        tdag = tmp_path / "t.tdag"
        assert run("gen", "--family", "gadget", "--k", "1", "--word-index", "3",
                   "-o", str(bp)) == 0
        assert run("compress", str(bp), "-o", str(tdag)) == 0
        assert run("verify", str(tdag), "--expect", str(bp)) == 0

    def test_corrupted_tdag_fails(self, tmp_path, capsys):
        tdag = tmp_path / "bad.tdag"
        tdag.write_text("L a b\nL x c\nI VB 0 1\n2\n")
        assert run("verify", str(tdag)) == 1
        err = capsys.readouterr().err
        assert "FAIL expansion path" in err


class TestCompare:
    def test_rows_and_path_counts(self, tmp_path, capsys):
        csv_path = tmp_path / "cmp.csv"
        report = tmp_path / "paths.json"
        assert run("compare", "--k", "1", "2", "--sigma", "2", "--m", "8",
                   "-o", str(csv_path), "--report", str(report)) == 0
        rows = read_comparison_csv(csv_path)
        assert [r.k for r in rows] == [1, 2]
        assert all(r.N == 1 + r.m * g for r, g in zip(rows, (13, 104)))
        header = csv_path.read_text().splitlines()[0]
        assert header == ",".join(CSV_HEADER)
        details = json.loads(report.read_text())
        assert len(details[0]["per_gadget"]) == 8
        assert "distinct_path_clusters" in capsys.readouterr().out

    def test_single_gadget_run(self, tmp_path):
        csv_path = tmp_path / "cmp.csv"
        assert run("compare", "--k", "1", "--m", "1", "-o", str(csv_path)) == 0
        assert len(read_comparison_csv(csv_path)) == 1

    def test_empty_k_range_rejected(self, tmp_path):
        with pytest.raises(SystemExit) as ei:
            run("compare", "--k", "-o", str(tmp_path / "x.csv"))
        assert ei.value.code == 2


class TestBoundCheckCmd:
    def test_passes_for_sigma_two(self, capsys):
        assert run("bound-check", "--x-max", "3", "--sigma", "2") == 0
        out = capsys.readouterr().out
        assert "distinct=3816" in out and "FAIL" not in out

    def test_infeasible(self, capsys):
        assert run("bound-check", "--x-max", "4", "--sigma", "2") == 2
