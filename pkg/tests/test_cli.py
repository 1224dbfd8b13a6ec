import csv
import io
import json
import math
import subprocess
import sys

import pytest

from floquet_baxter.cli import ALPHA_COLUMNS, CSV_SCHEMA, SWEEP_COLUMNS, main, parse_complex, parse_grid


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def _csv(text):
    lines = text.splitlines()
    assert lines[0].startswith(f"# {CSV_SCHEMA}")
    return list(csv.DictReader(io.StringIO("\n".join(lines[1:]))))


@pytest.mark.parametrize("text,val", [
    ("0+0.5i", 0.5j), ("0.5i", 0.5j), ("0.7", 0.7), ("-1-2i", -1 - 2j),
    ("5pi/9i", 5j * math.pi / 9), ("0+pi/3i", 1j * math.pi / 3), ("i", 1j), ("1e-1i", 0.1j),
])
def test_parse_complex(text, val):
    assert parse_complex(text) == pytest.approx(val)


@pytest.mark.parametrize("bad", ["", "abc", "1+", "0 + 1i", "1+2j", "pi/i3"])
def test_parse_complex_rejects(bad):
    import argparse
    with pytest.raises(argparse.ArgumentTypeError):
        parse_complex(bad)


def test_parse_grid():
    assert parse_grid("0:1:3") == [0.0, 0.5, 1.0]
    assert parse_grid("0.1,0.3") == [0.1, 0.3]
    import argparse
    for bad in ("0:1:0", "", "a:b:c"):
        with pytest.raises(argparse.ArgumentTypeError):
            parse_grid(bad)


def test_verify_passes(capsys):
    code, out, _ = _run(capsys, "verify")
    assert code == 0
    assert out.count("PASS") == 12 and "FAIL" not in out


def test_verify_perturbed_gate_fails(capsys):
    code, out, _ = _run(capsys, "verify", "--perturb-gate", "1e-3")
    assert code == 1
    assert "first failing check: ybe_residual" in out


def test_invalid_eta_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["spectrum-sweep", "--eta", "banana", "--T", "0.3"])
    assert exc.value.code == 2


def test_empty_grid_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["spectrum-sweep", "--T-grid", "0:1:0"])
    assert exc.value.code == 2


def test_missing_T_exit_2(capsys):
    code, _, err = _run(capsys, "spectrum-sweep")
    assert code == 2 and "--T" in err


def test_sweep_csv_and_flip(capsys):
    code, out, _ = _run(capsys, "spectrum-sweep", "--L", "6", "--T-grid", "1.20,1.25")
    assert code == 0
    rows = _csv(out)
    assert tuple(rows[0].keys()) == SWEEP_COLUMNS
    assert len(rows) == 2 * 64
    dev = {T: max(abs(float(r["abs_mu"]) - 1) for r in rows if float(r["T"]) == T) for T in (1.20, 1.25)}
    assert dev[1.20] < 1e-9 and dev[1.25] > 1e-3
    assert {r["regime"] for r in rows} == {"I", "II"}
    # deterministic
    assert _run(capsys, "spectrum-sweep", "--L", "6", "--T-grid", "1.20,1.25")[1] == out


def test_sweep_easy_axis_unimodular(capsys, tmp_path):
    path = tmp_path / "s.csv"
    code, _, _ = _run(capsys, "spectrum-sweep", "--eta", "0.7", "--L", "4", "--T", "2.5", "--out", str(path))
    assert code == 0
    rows = _csv(path.read_text())
    assert max(abs(float(r["abs_mu"]) - 1) for r in rows) < 1e-12
    assert all(r["regime"] == "easy_axis" for r in rows)


def test_sweep_open_boundary(capsys):
    code, out, _ = _run(capsys, "spectrum-sweep", "--boundary", "open", "--L", "4", "--T", "0.3")
    assert code == 0
    assert max(abs(float(r["abs_mu"]) - 1) for r in _csv(out)) < 1e-9


def test_sweep_rejects_depth(capsys):
    assert _run(capsys, "spectrum-sweep", "--n", "3", "--T", "0.3")[0] == 2


def test_alpha_curve_flags_boundaries(capsys):
    code, out, _ = _run(capsys, "alpha-curve", "--eta", "pi/3i", "--steps", "50")
    assert code == 0
    rows = _csv(out)
    assert tuple(rows[0].keys()) == ALPHA_COLUMNS
    flagged = [float(r["beta_T"]) for r in rows if r["diverges"] == "1"]
    assert len(flagged) == 2
    assert flagged[0] == pytest.approx(math.pi / 3, abs=1e-12)
    assert flagged[1] == pytest.approx(5 * math.pi / 3, abs=1e-12)
    first = rows[0]
    assert float(first["T"]) == 0 and float(first["re_alpha"]) == pytest.approx(0, abs=1e-15)


def test_alpha_curve_needs_easy_plane(capsys):
    assert _run(capsys, "alpha-curve", "--eta", "0.7")[0] == 2


def test_roots_census_json(capsys):
    code, out, _ = _run(capsys, "roots-census", "--eta", "pi/3i", "--L", "6")
    assert code == 0
    rep = json.loads(out)
    assert rep["passed"] and rep["all_occupied"] and rep["order"] == 9
    code, out, _ = _run(capsys, "roots-census", "--eta", "5pi/9i", "--L", "8", "--sign", "-1")
    rep = json.loads(out)
    assert code == 0 and rep["strict_subset"] and rep["mirror_axes"] == [8]


def test_roots_census_rejects_generic_eta(capsys):
    assert _run(capsys, "roots-census", "--eta", "0.5i")[0] == 2


@pytest.mark.parametrize("bound,count", [(0, 1), (1, None), (3, None)])
def test_styb(capsys, bound, count):
    code, out, _ = _run(capsys, "styb", "--bound", str(bound))
    assert code == 0
    assert f"{(2 * bound + 1) ** 4} maps analyzed" in out
    assert "outliers: 0" in out and "mismatches: 0" in out and "failures: 0" in out
    if count is not None:
        assert f"{count} solutions" in out


def test_styb_negative_bound(capsys):
    assert _run(capsys, "styb", "--bound", "-1")[0] == 2


def test_config_file_and_override(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"eta": "0.7", "L": 4, "T": 0.3}))
    code, out, _ = _run(capsys, "--config", str(cfg), "spectrum-sweep")
    assert code == 0 and "eta=(0.7+0j) L=4" in out and len(_csv(out)) == 16
    code, out, _ = _run(capsys, "--config", str(cfg), "spectrum-sweep", "--L", "6")
    assert len(_csv(out)) == 64


def test_config_unknown_key(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"colour": 1}))
    with pytest.raises(SystemExit) as exc:
        main(["--config", str(cfg), "styb"])
    assert exc.value.code == 2


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "floquet_baxter", "styb", "--bound", "0"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "1 solutions" in r.stdout


def test_figures_from_csv(tmp_path, capsys):
    pytest.importorskip("matplotlib")
    from floquet_baxter import figures
    src = tmp_path / "a.csv"
    main(["alpha-curve", "--eta", "0.5i", "--steps", "20", "--out", str(src)])
    png = tmp_path / "a.png"
    assert figures.main([str(src), str(png)]) in (0, None)
    assert png.stat().st_size > 0
