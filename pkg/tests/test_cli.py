import io
import subprocess
import sys
from pathlib import Path

import pytest

from semisat.cli import ParseError, format_document, parse, run

SAMPLES = Path(__file__).resolve().parent.parent / "samples"
HEADER = "version 1\nvertex v\nedge e v v\nedge f v v\n"


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def write(tmp_path, text, name="doc.gpd"):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


# -- parsing -----------------------------------------------------------------------

def test_sample_documents_parse():
    doc = parse((SAMPLES / "full2shift.gpd").read_text())
    assert doc.action.generators == ("a", "b")
    assert doc.dr is None
    golden = parse((SAMPLES / "golden.gpd").read_text())
    assert golden.action is None and len(golden.dr.pieces) == 3


def test_rule_with_longer_target_is_valid():
    doc = parse(HEADER + "gen a\nrule a : e -> f.e\n")
    assert repr(doc.action.maps[0]) == "{e -> f.e}"


@pytest.mark.parametrize("name", ["full2shift", "full3shift", "golden", "two_points"])
def test_print_parse_roundtrip(name):
    doc = parse((SAMPLES / f"{name}.gpd").read_text())
    text = format_document(doc)
    again = parse(text)
    assert again == doc
    assert format_document(again) == text


ERRORS = [
    # (document, line, column, message fragment)
    ("vertex v\n", 1, 1, "must start with 'version 1'"),
    ("", 1, 1, "empty document"),
    ("version 2\n", 1, 9, "unsupported version"),
    ("version 1\nversion 1\n", 2, 1, "duplicate version"),
    ("version 1\n# nothing\n", 2, 1, "no vertices"),
    ("version 1\nvertex\n", 2, 1, "at least one name"),
    ("version 1\nvertex v v\n", 2, 10, "duplicate name 'v'"),
    ("version 1\nvertex v-1\n", 2, 8, "invalid vertex name"),
    (HEADER + "edge e v v\n", 5, 6, "duplicate name 'e'"),
    (HEADER + "edge g v\n", 5, 1, "expected 'edge NAME RANGE SOURCE'"),
    ("version 1\nvertex v w\nedge e v x\n", 3, 10, "unknown vertex 'x'"),
    ("version 1\nvertex v w\nedge e x w\n", 3, 8, "unknown vertex 'x'"),
    (HEADER + "frob x\n", 5, 1, "unknown declaration 'frob'"),
    (HEADER + "gen\n", 5, 1, "gen needs at least one name"),
    (HEADER + "gen a a\n", 5, 7, "duplicate generator"),
    (HEADER + "gen a^-1\n", 5, 5, "invalid generator name"),
    (HEADER + "gen a\nrule b v -> e\n", 6, 6, "unknown generator 'b'"),
    (HEADER + "gen a\nrule\n", 6, 1, "expected 'rule GEN SRC -> DST'"),
    (HEADER + "gen a\nrule a v e\n", 6, 8, "expected 'SRC -> DST'"),
    (HEADER + "gen a\nrule a v => e\n", 6, 8, "expected 'SRC -> DST'"),
    (HEADER + "gen a\nrule a v -> e.g\n", 6, 13, "unknown edge 'g'"),
    (HEADER + "gen a\nrule a w -> e\n", 6, 8, "unknown edge 'w'"),
    ("version 1\nvertex v w\nedge e v w\nedge g v v\ngen a\nrule a w -> e.g\n", 6, 13,
     "not composable"),
    ("version 1\nvertex v w\nedge e v w\ngen a\nrule a v -> e\n", 5, 8, "source ends at v"),
    (HEADER + "gen a\nrule a : v -> e\nrule a : e -> f\n", 7, 10, "rule source e overlaps v"),
    (HEADER + "gen a\nrule a e -> v\nrule a f -> e.e\n", 7, 13, "rule target e.e overlaps v"),
    (HEADER + "maprule e -> v\nmaprule e.f -> v\n", 6, 9, "maprule source e.f overlaps e"),
    (HEADER + "maprule e v\n", 5, 9, "expected 'SRC -> DST'"),
    (HEADER + "maprule e -> q\n", 5, 14, "unknown edge 'q'"),
    (HEADER + "gen a\nmaprule e -> v\n", 6, 1, "both rules and maprules"),
]


@pytest.mark.parametrize("text,line,col,fragment", ERRORS)
def test_parse_error_corpus(text, line, col, fragment):
    with pytest.raises(ParseError) as info:
        parse(text)
    err = info.value
    assert fragment in err.message
    assert (err.line, err.column) == (line, col)
    assert str(err).startswith(f"line {line}, column {col}: ")


def test_parse_errors_reach_stderr_with_exit_2(tmp_path):
    p = write(tmp_path, HEADER + "gen a\nrule a : v -> e\nrule a : e -> f\n")
    code, out, err = cli("homology", p)
    assert code == 2 and out == ""
    assert f"{p}:7:10: error: rule source e overlaps v" in err


def test_missing_file_exit_2(tmp_path):
    code, out, err = cli("verify", tmp_path / "nope.gpd")
    assert code == 2 and "error" in err and out == ""


# -- commands ----------------------------------------------------------------------

def test_homology_full2shift():
    code, out, _ = cli("homology", SAMPLES / "full2shift.gpd")
    lines = out.splitlines()
    assert code == 0
    assert lines[:3] == ["H0 = 0", "H1 = 0", "Hn = 0 for n >= 2"]
    assert "stabilized at level 1" in out
    assert lines[lines.index("tower:") + 1].startswith("  level 1: 2 -> 2")


def test_homology_full3shift_and_levels():
    code, out, _ = cli("homology", SAMPLES / "full3shift.gpd", "--max-level", "1",
                       "--window", "1")
    assert code == 0
    assert out.splitlines()[0] == "H0 = Z/2"
    assert "approximate up to level 1" in out


def test_homology_on_map_document():
    code, out, _ = cli("homology", SAMPLES / "golden.gpd")
    assert code == 0 and out.startswith("H0 = 0\nH1 = 0\n")


def test_bad_max_level_exit_2():
    code, _, err = cli("homology", SAMPLES / "full2shift.gpd", "--max-level", "0")
    assert code == 2 and "below the base level" in err


def test_cohomology_two_points():
    code, out, _ = cli("cohomology", SAMPLES / "two_points.gpd")
    assert code == 0
    assert out.splitlines()[:3] == ["H^0 = Z^2", "H^1 = Z^2", "H^n = 0 for n >= 2"]


def test_verify_full2shift():
    code, out, _ = cli("verify", SAMPLES / "full2shift.gpd", "--samples", "200", "--seed", "7")
    assert code == 0
    assert out.splitlines()[0] == "PASS r*s0=id (200/200)"
    assert out.splitlines()[-1] == "PASS"


def test_verify_failure_exit_1(monkeypatch):
    import semisat.resolution as res
    from semisat.resolution import P1Element
    monkeypatch.setattr(res, "s1", lambda x: P1Element.zero(x.action))
    code, out, _ = cli("verify", SAMPLES / "full2shift.gpd", "--samples", "20")
    assert code == 1 and out.splitlines()[-1] == "FAIL"


def test_word_command():
    code, out, _ = cli("word", SAMPLES / "full2shift.gpd", "a.b^-1")
    assert code == 0
    assert out.splitlines() == ["word: a.b^-1", "rules: {f -> e}", "domain: {f}", "range: {e}"]
    code, out, _ = cli("word", SAMPLES / "full2shift.gpd", "a.b.b^-1")
    assert code == 0 and "rules: {v -> e}" in out
    code, _, err = cli("word", SAMPLES / "full2shift.gpd", "a.b.b^-1", "--strict")
    assert code == 2 and "not freely reduced" in err
    code, _, err = cli("word", SAMPLES / "full2shift.gpd", "a.z")
    assert code == 2 and "unknown generator" in err


def test_graph_oracle_command(tmp_path):
    code, out, _ = cli("graph-oracle", SAMPLES / "full3shift.gpd")
    assert code == 0 and out.splitlines()[:2] == ["H0 = Z/2", "H1 = 0"]
    p = write(tmp_path, "version 1\nvertex v t\nedge e v t\n")
    code, _, err = cli("graph-oracle", p)
    assert code == 2 and "receive an edge" in err


def test_dr_check_command():
    code, out, _ = cli("dr-check", SAMPLES / "golden.gpd")
    assert code == 0 and "routes agree: yes" in out
    code, _, err = cli("dr-check", SAMPLES / "full2shift.gpd")
    assert code == 2 and "maprule" in err


def test_dr_check_disagreement_exit_1(monkeypatch):
    import semisat.homology as hom
    real = hom.dr_level

    def broken(sys, n):
        lm = real(sys, n)
        lm.columns = [{i: 2 * x for i, x in c.items()} for c in lm.columns]
        return lm

    monkeypatch.setattr(hom, "dr_level", broken)
    code, out, _ = cli("dr-check", SAMPLES / "golden.gpd")
    assert code == 1 and "routes agree: no" in out


def test_reports_are_deterministic():
    for argv in (("homology", SAMPLES / "full3shift.gpd"),
                 ("verify", SAMPLES / "full3shift.gpd", "--seed", "3", "--samples", "30")):
        assert cli(*argv) == cli(*argv)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "semisat", "homology",
                           str(SAMPLES / "full2shift.gpd")], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("H0 = 0")
