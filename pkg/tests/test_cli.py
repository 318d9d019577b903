import csv
import io
import json

import numpy as np
import pytest

from proxgroupoid import RasterImage, save_pgm
from proxgroupoid.cli import main

from synth import four_tiles, mosaic, random_image


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def four(tmp_path):
    path = tmp_path / "four.pgm"
    save_pgm(four_tiles(), path)
    return path


def test_analyze_four_tiles(capsys, four):
    code, out, _ = run(capsys, "analyze", four, "--tile", "2x2")
    assert code == 0
    doc = json.loads(out)
    assert doc["schema_version"] == 1
    assert doc["config"]["tile"] == "2x2" and doc["config"]["op"] == "min"
    sizes = sorted(p["size"] for p in doc["patterns"])
    assert sizes == [1, 3]
    (big,) = [p for p in doc["patterns"] if p["size"] == 3]
    assert sorted(big["members"]) == [0, 1, 2]
    assert big["generators"] == [0, 1, 2]
    t0 = doc["tiles"][0]
    assert t0["carrier"] == [10, 11, 12, 83]
    assert t0["regular"] and t0["total"] and t0["regular_count"] == 4
    assert t0["histogram"] == {"10": 1, "11": 1, "12": 1, "83": 1}


def test_analyze_constant_image(capsys, tmp_path):
    path = tmp_path / "flat.pgm"
    save_pgm(RasterImage(np.full((6, 6), 0.4)), path)
    code, out, _ = run(capsys, "analyze", path, "--tile", "3x3", "--stride", "1x1")
    doc = json.loads(out)
    assert code == 0
    n = len(doc["tiles"])
    assert n == 16
    assert all(t["pattern_size"] == n for t in doc["tiles"])
    assert len(doc["patterns"]) == 1


def test_analyze_image_smaller_than_tile(capsys, four):
    code, out, err = run(capsys, "analyze", four, "--tile", "8x8")
    assert code == 2 and out == ""
    assert "larger than image" in err


def test_analyze_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "analyze", tmp_path / "missing.pgm")
    assert code == 2 and "no such file" in err


def test_bad_flag_values(capsys, four):
    assert run(capsys, "analyze", four, "--precision", "9")[0] == 2
    assert run(capsys, "classify", four, four, "--threshold", "2")[0] == 2
    assert run(capsys, "analyze", four, "--tolerance", "-1")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["analyze", str(four), "--op", "nope"])
    assert exc.value.code == 2


def test_analyze_csv(capsys, four, tmp_path):
    out_path = tmp_path / "r.csv"
    code, out, _ = run(capsys, "analyze", four, "--tile", "2x2", "--format", "csv", "-o", out_path)
    assert code == 0 and out == ""
    rows = list(csv.DictReader(io.StringIO(out_path.read_text())))
    assert [r["pattern_size"] for r in rows] == ["3", "3", "3", "1"]
    assert rows[3]["row"] == "2" and rows[3]["col"] == "2"


def test_analyze_is_deterministic(capsys, four, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "analyze", four, "--tile", "2x2", "-o", a)
    run(capsys, "analyze", four, "--tile", "2x2", "-o", b)
    assert a.read_bytes() == b.read_bytes()


def test_classify_self(capsys, tmp_path, rng):
    path = tmp_path / "x.pgm"
    save_pgm(random_image(rng, (16, 16)), path)
    code, out, _ = run(capsys, "classify", path, path, "--tile", "8x8")
    doc = json.loads(out)
    assert code == 0
    assert doc["matched"] and doc["score"]["fraction"] == 1.0


def test_classify_salient_tile_at_threshold_one(capsys, tmp_path):
    # the candidate's first tile only uses levels that also occur in the reference
    x = mosaic([[[[0.10, 0.20], [0.30, 0.83]], [[0.40, 0.41], [0.42, 0.43]]]])
    y = mosaic([[[[0.83, 0.30], [0.30, 0.10]], [[0.90, 0.91], [0.92, 0.93]]]])
    save_pgm(x, tmp_path / "x.pgm")
    save_pgm(y, tmp_path / "y.pgm")
    code, out, _ = run(capsys, "classify", tmp_path / "x.pgm", tmp_path / "y.pgm", "--tile", "2x2", "--threshold", "1.0")
    doc = json.loads(out)
    assert code == 0 and doc["matched"]
    assert doc["witness"]["candidate"]["generator"] == 0
    assert doc["score"] == {"matched": 3, "total": 3, "fraction": 1.0, "threshold": 1.0, "salient": True}


def test_classify_disjoint(capsys, tmp_path, rng):
    save_pgm(random_image(rng, (16, 16), 0, 100), tmp_path / "x.pgm")
    save_pgm(random_image(rng, (16, 16), 155, 255), tmp_path / "y.pgm")
    code, out, _ = run(capsys, "classify", tmp_path / "x.pgm", tmp_path / "y.pgm", "--tile", "8x8", "--format", "csv")
    assert code == 1
    (row,) = list(csv.DictReader(io.StringIO(out)))
    assert row["matched"] == "False" and row["fraction"] == ""


def test_axioms_default(capsys):
    code, out, _ = run(capsys, "axioms")
    doc = json.loads(out)
    assert code == 0
    assert (doc["passed"], doc["total"]) == (10, 10)
    assert doc["spaces"] == 205


def test_axioms_break_symmetry(capsys):
    code, out, _ = run(capsys, "axioms", "--break-symmetry", "--spaces", "10", "--large-spaces", "0")
    doc = json.loads(out)
    assert code == 1
    p1 = next(r for r in doc["results"] if r["axiom"] == "P1")
    assert p1["verdict"] == "fail" and p1["witness"] is not None


def test_axioms_exhaustive_size_six(capsys):
    code, out, _ = run(capsys, "axioms", "--size", "6", "--exhaustive", "--spaces", "4", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert len(rows) == 10
    # 2^6 subsets give 64^3 triples per space for P3/P4
    assert {r["checked"] for r in rows if r["axiom"].endswith("P4")} == {str(4 * 64**3)}
