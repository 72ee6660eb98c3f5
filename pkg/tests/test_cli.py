import io
import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gkzrank.cli import (
    ParseError,
    format_beta,
    format_box,
    format_matrix,
    parse_beta,
    parse_box,
    parse_generators,
    parse_matrix,
    run,
)

from conftest import EXAMPLES


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def mat(tmp_path):
    def write(key_or_rows, name="a.txt"):
        rows = EXAMPLES[key_or_rows] if isinstance(key_or_rows, str) else key_or_rows
        p = tmp_path / name
        p.write_text(format_matrix(rows))
        return str(p)
    return write


@given(st.lists(st.lists(st.integers(-50, 50), min_size=3, max_size=3), min_size=1, max_size=4))
def test_matrix_round_trip(rows):
    assert parse_matrix(format_matrix(rows)) == tuple(tuple(r) for r in rows)


@given(st.lists(st.fractions(max_denominator=20), min_size=1, max_size=5))
def test_beta_round_trip(beta):
    assert parse_beta(format_beta(beta)) == tuple(beta)


def test_box_round_trip():
    box = ((-1, 2), (0, 0), (3, 5))
    assert parse_box(format_box(box), 3) == box


@pytest.mark.parametrize("text", ["2 2\n1 0\n", "x 2\n1 0\n0 1\n", "2 2\n1 0\n0 1 1\n", "", "2 2\n1 a\n0 1\n"])
def test_bad_matrices(text):
    with pytest.raises(ParseError):
        parse_matrix(text)


@pytest.mark.parametrize("text", ["1,2", "1/0,0,0", "1.5,0,0", "a,0,0", "", "1,,2"])
def test_bad_parameters(text):
    with pytest.raises(ParseError):
        parse_beta(text, 3)


def test_rationals_parsed_exactly():
    assert parse_beta("1/3,-2/4,7", 3) == (Fraction(1, 3), Fraction(-1, 2), Fraction(7))


@pytest.mark.parametrize("text", ["0:1,0:1", "1:0,0:1,0:1", "0-1,0:1,0:1"])
def test_bad_boxes(text):
    with pytest.raises(ParseError):
        parse_box(text, 3)


def test_bad_generators():
    with pytest.raises(ParseError):
        parse_generators("1 0\n", 3)
    with pytest.raises(ParseError):
        parse_generators("\n", 3)
    assert parse_generators("1,0,0\n0 1 1\n", 3) == ((1, 0, 0), (0, 1, 1))


def test_rank_example(mat):
    code, out, _ = call("rank", "--matrix", mat("hidden"), "--beta", "1,0,0")
    assert code == 0
    res = json.loads(out)
    assert res["schema_version"] == 1
    assert (res["j"], res["rank"], res["vol_A"]) == (1, 16, 15)


def test_rank_second_example(mat):
    code, out, _ = call("rank", "--matrix", mat("four_lines"), "--beta", "0,0,-1")
    res = json.loads(out)
    assert code == 0 and (res["j"], res["rank"]) == (2, 18)
    assert all("chi_table" in c and "first_page" in c for c in res["classes"])


def test_faces(mat):
    code, out, _ = call("faces", "--matrix", mat("nonconstant"))
    res = json.loads(out)
    assert code == 0 and res["vol_A"] == 185
    facets = [f for f in res["faces"] if f["codim"] == 1]
    assert facets and all("support_function" in f for f in facets)
    assert any(f["columns"] == [] and f["vol"] == 1 for f in res["faces"])


def test_scan_strata_and_jobs(mat):
    path = mat("four_lines")
    code1, out1, _ = call("scan", "--matrix", path, "--box=-1:2,-1:2,-1:2", "--jobs", "1")
    code2, out2, _ = call("scan", "--matrix", path, "--box=-1:2,-1:2,-1:2", "--jobs", "2")
    assert code1 == code2 == 0
    assert out1 == out2
    res = json.loads(out1)
    assert len(res["rows"]) == 64
    jumps = {tuple(r["beta"]): r["j"] for r in res["rows"]}
    assert jumps[("1", "0", "0")] == 3 and jumps[("0", "1", "0")] == 3
    assert jumps[("1", "1", "0")] == 5 and jumps[("0", "0", "-1")] == 2
    assert all(len(s["j"]) == 1 for s in res["strata"])
    assert sum(s["count"] for s in res["strata"]) == 64


def test_scan_csv(mat):
    code, out, _ = call("scan", "--matrix", mat("intro"), "--box", "0:2,0:3", "--format", "csv")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "beta,signature,j"
    assert len(lines) == 1 + 12
    assert any(ln.startswith('"1,2",') and ln.endswith(",1") for ln in lines)


def test_csv_rejected_for_rank(mat):
    code, _, err = call("rank", "--matrix", mat("hidden"), "--beta", "1,0,0", "--format", "csv")
    assert code == 2 and "csv" in err


def test_isom(mat):
    path = mat("hidden")
    code, out, _ = call("isom", "--matrix", path, "--beta", "1,0,0", "--beta-prime", "1,2,0")
    res = json.loads(out)
    assert code == 0 and res["isomorphic"] is True and res["witness_face"] is None
    code, out, _ = call("isom", "--matrix", path, "--beta", "1,0,0", "--beta-prime", "2,0,0")
    res = json.loads(out)
    assert code == 0 and res["isomorphic"] is False and res["witness_face"] is not None
    code, out, _ = call("isom", "--matrix", path, "--beta", "1/2,0,0", "--beta-prime", "0,0,0")
    assert json.loads(out)["witness_face"] == list(range(7))


def test_isom_rejects_generators(mat, tmp_path):
    g = tmp_path / "g.txt"
    g.write_text("0 0 0\n1 0 0\n")
    code, _, err = call("isom", "--matrix", mat("hidden"), "--generators", str(g),
                        "--beta", "0,0,0", "--beta-prime", "1,0,0")
    assert code == 2


def test_generators_change_the_answer(mat, tmp_path):
    g = tmp_path / "g.txt"
    g.write_text("0 0\n1 2\n")
    code, out, _ = call("rank", "--matrix", mat("intro"), "--generators", str(g), "--beta", "1,2")
    assert code == 0 and json.loads(out)["j"] == 0


def test_exit_codes(mat, tmp_path):
    assert call("rank", "--matrix", mat("hidden"))[0] == 2
    assert call("bogus")[0] == 2
    assert call("rank", "--matrix", str(tmp_path / "missing"), "--beta", "0,0,0")[0] == 2
    assert call("rank", "--matrix", mat("hidden"), "--beta", "0,0")[0] == 2
    assert call("scan", "--matrix", mat("hidden"), "--box", "0:1,0:1,0:1", "--jobs", "0")[0] == 2
    # not pointed, and not spanning Z^2
    assert call("faces", "--matrix", mat([[1, -1, 0], [0, 0, 1]], "np.txt"))[0] == 3
    assert call("faces", "--matrix", mat([[2, 0], [0, 2]], "nf.txt"))[0] == 3
