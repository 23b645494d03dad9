import io
import json
import sys

import pytest

from cyclic6j.cli import main
from cyclic6j.fixtures import boundary4simplex_document, boundary4simplex_scene
from cyclic6j.triangulation import scene_document

FIXTURE = "fixtures/boundary4simplex.json"


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("level,trials", [
    ("algebra", "8"), ("operators", "4"), ("sixj", "1"), ("moves", "1"),
])
def test_verify_suites_pass(level, trials, capsys):
    code, out, _ = run(["verify", "--level", level, "--trials", trials],
                       capsys)
    assert code == 0
    assert out.splitlines()[0].startswith(f"verify level={level} N=3 seed=0")
    assert "PASS" in out.splitlines()[-1]
    assert "FAIL" not in out


def test_verify_output_is_stable(capsys):
    args = ["verify", "--level", "operators", "--trials", "3", "--seed", "7"]
    first = run(args, capsys)
    second = run(args, capsys)
    assert first == second


def test_verify_reports_failures_with_exit_1(capsys):
    code, out, _ = run(["verify", "--level", "algebra", "--trials", "2",
                        "--tol", "1e-30", "--tol-strict", "1e-32"], capsys)
    assert code == 1
    assert "FAIL" in out.splitlines()[-1]


def test_even_order_rejected():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--level", "algebra", "--N", "4"])
    assert exc.value.code == 2


def test_missing_file_is_input_error(capsys):
    code, _, err = run(["invariant", "no_such_file.json"], capsys)
    assert code == 2
    assert err.startswith("error:")


def test_malformed_json_is_input_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(["invariant", str(bad)], capsys)
    assert code == 2
    assert err.startswith("error:")


def test_invariant_record_output(capsys):
    code, out, _ = run(["invariant", FIXTURE], capsys)
    assert code == 0
    rec = json.loads(out)
    assert rec["N"] == 3
    assert rec["value"][0] == pytest.approx(1.0 / 9.0, abs=1e-9)
    assert rec["value"][1] == pytest.approx(0.0, abs=1e-9)


def test_invariant_reads_stdin(monkeypatch, capsys):
    doc = json.dumps(boundary4simplex_document())
    monkeypatch.setattr(sys, "stdin", io.StringIO(doc))
    code, out, _ = run(["invariant", "-"], capsys)
    assert code == 0
    assert json.loads(out)["value"][0] == pytest.approx(1.0 / 9.0,
                                                       abs=1e-9)


def test_missing_charge_needs_flag(tmp_path, capsys):
    doc = boundary4simplex_document()
    del doc["charge"]
    path = tmp_path / "nocharge.json"
    path.write_text(json.dumps(doc))
    code, _, err = run(["invariant", str(path)], capsys)
    assert code == 2
    assert "--find-charge" in err
    code, out, _ = run(["invariant", str(path), "--find-charge"], capsys)
    assert code == 0
    assert json.loads(out)["value"][0] == pytest.approx(1.0 / 9.0,
                                                       abs=1e-9)


def test_move_then_baseline_comparison(tmp_path, capsys):
    moved = tmp_path / "moved.json"
    code, _, _ = run(["move", FIXTURE, "--kind", "pachner+",
                      "--target", "0,0", "--out", str(moved)], capsys)
    assert code == 0
    assert len(json.loads(moved.read_text())["tetrahedra"]) == 6

    base = tmp_path / "base.json"
    code, out, _ = run(["invariant", FIXTURE], capsys)
    base.write_text(out)
    code, out, _ = run(["invariant", str(moved), "--baseline", str(base)],
                       capsys)
    assert code == 0
    assert "equal mod qtilde, k=" in out

    # a scaled baseline must be flagged as different
    rec = json.loads(base.read_text())
    rec["value"][0] *= 2.0
    base.write_text(json.dumps(rec))
    code, out, _ = run(["invariant", str(moved), "--baseline", str(base)],
                       capsys)
    assert code == 1
    assert "NOT equal" in out


def test_move_bad_target_is_input_error(capsys):
    code, _, err = run(["move", FIXTURE, "--kind", "bubble-",
                        "--target", "99"], capsys)
    assert code == 2
    assert "out of range" in err


def test_move_not_applicable_is_input_error(tmp_path, capsys):
    # every interior edge of the fixture has degree 3, but edge slot 0 of
    # tet 0 lies on the link, which pachner- refuses to collapse
    code, _, err = run(["move", FIXTURE, "--kind", "pachner-",
                        "--target", "0,0"], capsys)
    assert code == 2
    assert err.startswith("error:")


def test_find_charge_roundtrip(tmp_path, capsys):
    doc = boundary4simplex_document()
    del doc["charge"]
    src = tmp_path / "nocharge.json"
    src.write_text(json.dumps(doc))
    out_path = tmp_path / "charged.json"
    code, _, _ = run(["find-charge", str(src), "--out", str(out_path)],
                     capsys)
    assert code == 0
    assert "charge" in json.loads(out_path.read_text())


def test_gauge_preserves_invariant(tmp_path, capsys):
    gauged = tmp_path / "gauged.json"
    code, _, _ = run(["gauge", FIXTURE, "--seed", "5", "--out", str(gauged)],
                     capsys)
    assert code == 0
    code, out, _ = run(["invariant", str(gauged)], capsys)
    assert code == 0
    assert json.loads(out)["value"][0] == pytest.approx(1.0 / 9.0,
                                                       abs=1e-9)


def test_canonical_from_triangulation_and_result(tmp_path, capsys):
    code, out, _ = run(["canonical", FIXTURE], capsys)
    assert code == 0
    direct = json.loads(out)
    res = tmp_path / "record.json"
    code, out, _ = run(["invariant", FIXTURE], capsys)
    res.write_text(out)
    code, out, _ = run(["canonical", str(res)], capsys)
    assert code == 0
    assert json.loads(out) == direct
    assert direct["modulus"] == pytest.approx(1.0 / 9.0, abs=1e-9)


def test_fixture_file_matches_builder():
    with open(FIXTURE) as fh:
        on_disk = json.load(fh)
    assert on_disk == boundary4simplex_document()
    assert scene_document(boundary4simplex_scene()) == on_disk
