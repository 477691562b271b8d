import json
from pathlib import Path

import pytest

from polyconvex.harness import FuzzConfig, fuzz, main, parse_dims

DATA = Path(__file__).parent / "data"


def lines_of(path):
    return [json.loads(s) for s in Path(path).read_text().splitlines()]


def test_check_golden_pass(tmp_path, capsys):
    out = tmp_path / "r.jsonl"
    assert main(["check", str(DATA / "halfplanes_normal_intersection.json"), "--out", str(out)]) == 0
    (rep,) = lines_of(out)
    assert rep["verdict"] == "pass"
    assert rep["id"] == "halfplanes-normal-intersection"
    assert "pass" in capsys.readouterr().out


def test_check_linear_map_instance(capsys):
    assert main(["check", str(DATA / "linear_map_show.json")]) == 0
    rep = json.loads(capsys.readouterr().out.splitlines()[0])
    assert rep["kind"] == "cod_sum" and rep["verdict"] == "pass"


def test_bad_rational_is_input_error(capsys):
    assert main(["check", str(DATA / "bad_rational.json")]) == 2
    assert "ParseError" in capsys.readouterr().err


def test_missing_file_is_input_error():
    assert main(["check", str(DATA / "no_such_file.json")]) == 2


def test_probe_outside_set_is_skipped(capsys):
    assert main(["check", str(DATA / "halfplanes_outside_probe.json")]) == 0
    rep = json.loads(capsys.readouterr().out.splitlines()[0])
    assert rep["verdict"] == "skip" and "NotInSet" in rep["reason"]


def test_fuzz_zero_count(tmp_path):
    out = tmp_path / "r.jsonl"
    assert main(["fuzz", "--kind", "support_intersection", "--count", "0", "--out", str(out)]) == 0
    assert out.read_text() == ""


@pytest.mark.parametrize("dims", ["0..2", "3..2", "1..7", "x..y"])
def test_fuzz_bad_dims(dims):
    with pytest.raises(SystemExit) as exc:
        code = main(["fuzz", "--kind", "extremal", "--dims", dims])
        raise SystemExit(code)
    assert exc.value.code == 2


def test_fuzz_unknown_kind():
    assert main(["fuzz", "--kind", "nope"]) == 2


def test_parse_dims():
    assert parse_dims("2..4") == (2, 4)
    assert parse_dims("3") == (3, 3)


def test_fuzz_is_byte_reproducible(tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    argv = ["fuzz", "--kind", "all", "--seed", "5", "--count", "2", "--dims", "1..2"]
    assert main(argv + ["--out", str(a)]) == 0
    assert main(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert len(lines_of(a)) == 32


def test_timing_field_is_opt_in(tmp_path):
    plain = fuzz_lines(tmp_path / "p.jsonl", False)
    timed = fuzz_lines(tmp_path / "t.jsonl", True)
    assert "wall_seconds" not in plain[0] and "wall_seconds" in timed[0]


def fuzz_lines(path, timing):
    with open(path, "w") as fh:
        fuzz(FuzzConfig("biconjugate", count=1, timing=timing), fh)
    return lines_of(path)


def test_show_box(capsys):
    assert main(["show", str(DATA / "box_show.json")]) == 0
    text = capsys.readouterr().out
    box, plane = text.split("\nomega2:")
    assert sorted(l.strip() for l in box.splitlines() if "vertex (" in l) == [
        "vertex (0, 0)", "vertex (0, 1)", "vertex (1, 0)", "vertex (1, 1)"]
    assert "line (0, 1)" in plane and "support value +inf" in plane


def test_show_abs(capsys):
    assert main(["show", str(DATA / "abs_show.json")]) == 0
    text = capsys.readouterr().out
    assert "vertex (0, 0)" in text
    assert "ray (1, 1)" in text and "ray (-1, 1)" in text
