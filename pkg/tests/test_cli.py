import pytest

from substreetution.cli import main
from substreetution.engine import BBAB, fixed_point_prefix
from substreetution.systems import build_orbit_graph, nomeasure_tree
from substreetution.trees import dump_patch, parse_patch


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestWordCommands:
    def test_chi(self, capsys):
        code, out, _ = run(capsys, "chi", "--word", "10", "--pow", "1")
        assert code == 0 and out.strip() == "0010"

    def test_proportion(self, capsys):
        code, out, _ = run(capsys, "proportion", "--n", "4")
        assert code == 0 and out.strip() == "8463/65536"

    def test_source(self, capsys):
        code, out, _ = run(capsys, "source", "--addr", "ba", "--sub", "builtin:bbab")
        assert code == 0 and out.strip() == "a"
        code, out, _ = run(capsys, "source", "--addr", "", "--sub", "builtin:bbab")
        assert out.strip() == "e"

    def test_theta(self, capsys):
        code, out, _ = run(capsys, "theta", "--addr", "b", "--sub", "builtin:bbab")
        assert code == 0 and out.split() == ["aa", "ab", "bb"]


class TestPatchCommands:
    def test_fixpoint_and_line(self, capsys, tmp_path):
        out_file = tmp_path / "j.patch"
        code, _, _ = run(
            capsys,
            "fixpoint", "--sub", "builtin:bbab", "--root", "0",
            "--depth", "6", "--out", str(out_file),
        )
        assert code == 0
        assert parse_patch(out_file.read_text()) == fixed_point_prefix(BBAB, 0, 6)
        code, out, _ = run(capsys, "line", "--patch", str(out_file), "--level", "2")
        assert code == 0 and out.strip() == "0010"

    def test_type(self, capsys, tmp_path):
        f = tmp_path / "j.patch"
        f.write_text(dump_patch(fixed_point_prefix(BBAB, 0, 8)))
        code, out, _ = run(capsys, "type", "--patch", str(f))
        assert code == 0 and "inf-consistent" in out

    def test_unsub(self, capsys, tmp_path):
        f = tmp_path / "j9.patch"
        f.write_text(dump_patch(fixed_point_prefix(BBAB, 0, 9)))
        code, out, _ = run(capsys, "unsub", "--patch", str(f), "--times", "1")
        assert code == 0
        assert parse_patch(out) == fixed_point_prefix(BBAB, 0, 4)

    def test_brother(self, capsys, tmp_path):
        j = fixed_point_prefix(BBAB, 0, 9)
        f = tmp_path / "b.patch"
        f.write_text(dump_patch(j.subtree("b")))
        code, out, _ = run(capsys, "brother", "--patch", str(f))
        assert code == 0
        got = parse_patch(out)
        actual = j.subtree("a")
        assert got.truncate(got.depth) == actual.truncate(got.depth)

    def test_complexity(self, capsys, tmp_path):
        f = tmp_path / "j.patch"
        f.write_text(dump_patch(fixed_point_prefix(BBAB, 0, 6)))
        code, out, _ = run(capsys, "complexity", "--patch", str(f), "--max-n", "1")
        assert code == 0
        assert out.splitlines() == ["0 2", "1 4"]

    def test_preimages_bruteforce(self, capsys, tmp_path):
        jp = tmp_path / "jp.patch"
        jp.write_text(dump_patch(fixed_point_prefix(BBAB, 0, 10)))
        target = tmp_path / "ones.patch"
        target.write_text("depth 1\n1\n11\n")
        code, out, _ = run(
            capsys, "preimages", "--patch", str(target), "--jprefix", str(jp)
        )
        assert code == 0 and "count=0" in out

    def test_verify_renorm(self, capsys):
        code, out, _ = run(
            capsys,
            "verify-renorm", "--sub", "builtin:abba", "--depth", "7",
            "--maxlen", "4", "--random", "3",
        )
        assert code == 0 and out.startswith("pass")


class TestGraphCommands:
    def test_orbit_and_measure(self, capsys, tmp_path):
        gfile = tmp_path / "orbit.graph"
        code, _, _ = run(
            capsys,
            "orbit-graph", "--example", "nomeasure", "--depth", "6",
            "--out", str(gfile),
        )
        assert code == 0
        code, out, _ = run(capsys, "measure-check", "--graph", str(gfile))
        assert code == 0 and out.strip() == "infeasible"

    def test_measure_feasible(self, capsys, tmp_path):
        gfile = tmp_path / "loop.graph"
        gfile.write_text("state s0\nedge s0 a s0\nedge s0 b s0\n")
        code, out, _ = run(capsys, "measure-check", "--graph", str(gfile))
        assert code == 0
        assert out.splitlines() == ["feasible", "mu s0 1"]


class TestRenderCommands:
    def test_render_tree(self, capsys, tmp_path):
        f = tmp_path / "j.patch"
        f.write_text(dump_patch(fixed_point_prefix(BBAB, 0, 4)))
        out_file = tmp_path / "tree.svg"
        code, _, _ = run(capsys, "render-tree", "--patch", str(f), "--out", str(out_file))
        assert code == 0 and out_file.read_text().startswith("<svg")

    def test_render_tiling_threads_flag(self, capsys, tmp_path):
        f = tmp_path / "j.patch"
        f.write_text(dump_patch(fixed_point_prefix(BBAB, 0, 3)))
        outs = []
        for threads in ("1", "4"):
            out_file = tmp_path / f"tiling{threads}.svg"
            code, _, _ = run(
                capsys,
                "--threads", threads,
                "render-tiling", "--patch", str(f), "--depth", "1",
                "--res", "48", "--out", str(out_file),
            )
            assert code == 0
            outs.append(out_file.read_bytes())
        assert outs[0] == outs[1]


class TestExitCodes:
    def test_usage_error(self, capsys):
        assert run(capsys, "no-such-command")[0] == 1
        assert run(capsys)[0] == 1

    def test_operation_error(self, capsys, tmp_path):
        f = tmp_path / "bad.patch"
        f.write_text("depth 1\n0\n")
        assert run(capsys, "line", "--patch", str(f), "--level", "0")[0] == 2

    def test_missing_file(self, capsys):
        assert run(capsys, "line", "--patch", "/nonexistent", "--level", "0")[0] == 2
