import json
import math

import numpy as np
import pytest

from bandphase.cli import main
from bandphase.io import read_measurements, read_signal
from bandphase.signals import dist_up_to_sign, fourier, norm


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def signal_file(tmp_path, capsys):
    p = tmp_path / "f.json"
    assert run(capsys, "gen", "--seed", 5, "--out", p)[0] == 0
    return p


def _csv_columns(text):
    lines = text.strip().splitlines()
    return lines[0].split(","), np.array([[float(v) for v in r.split(",")] for r in lines[1:]])


def test_gen_is_deterministic(capsys):
    a = run(capsys, "gen", "--seed", 9)
    b = run(capsys, "--seed", 9, "gen")
    c = run(capsys, "gen", "--seed", 10)
    assert a[0] == b[0] == 0
    assert a[1] == b[1] != c[1]
    doc = json.loads(a[1])
    assert doc["is_real"] and len(doc["coeffs"]) == 3 + 8


def test_gen_analytic_has_no_negative_frequencies(tmp_path, capsys):
    p = tmp_path / "a.json"
    assert run(capsys, "gen", "--kind", "analytic", "--n-coeffs", 4, "--out", p)[0] == 0
    f = read_signal(p)
    xi = np.linspace(0.05, 0.95, 19)
    assert np.max(np.abs(fourier(f, -xi))) <= 1e-6 * np.max(np.abs(fourier(f, xi)))


def test_cwt_rows(signal_file, tmp_path, capsys):
    out = tmp_path / "m.csv"
    code, _, _ = run(capsys, "cwt", signal_file, "--out", out, "--complex")
    assert code == 0
    meas = read_measurements(out)
    f = read_signal(signal_file)
    assert meas.m_min == 4 * f.m_min - 64 and meas.m_max == 4 * f.m_max + 64
    assert meas.scales.size == 7 and meas.phases is not None
    assert len(out.read_text().splitlines()) == 2 + meas.values.size


def test_cwt_of_zero_signal(tmp_path, capsys):
    p = tmp_path / "z.json"
    p.write_text('{"omega": 1.0, "m_min": 0, "coeffs": [[0.0, 0.0]], "is_real": true}')
    code, out, _ = run(capsys, "cwt", p)
    assert code == 0
    rows = [r.split(",") for r in out.splitlines()[2:]]
    assert rows and all(float(r[2]) == 0.0 for r in rows)


def test_retrieve_round_trip(signal_file, tmp_path, capsys):
    meas = tmp_path / "m.csv"
    cand = tmp_path / "g.json"
    assert run(capsys, "cwt", signal_file, "--out", meas)[0] == 0
    assert run(capsys, "retrieve", meas, "--out", cand, "--quiet")[0] == 0
    f, g = read_signal(signal_file), read_signal(cand)
    assert dist_up_to_sign(f, g) <= 1e-3 * norm(f)
    diag = json.loads((tmp_path / "g.json.diagnostics.json").read_text())
    assert diag["ell"] == 1 and diag["residual_meas"] < 1e-2


def test_retrieve_coarse_scales_exit_3(signal_file, tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"scales": [1.0, 0.5, 0.25]}))
    meas = tmp_path / "m.csv"
    assert run(capsys, "cwt", signal_file, "--config", cfg, "--out", meas)[0] == 0
    code, _, err = run(capsys, "retrieve", meas)
    assert code == 3 and "scale extrapolation" in err


def test_retrieve_progressive_exit_3(signal_file, tmp_path, capsys):
    meas = tmp_path / "m.csv"
    assert run(capsys, "cwt", signal_file, "--wavelet", '{"kind": "cauchy", "p": 2}', "--out", meas)[0] == 0
    assert run(capsys, "retrieve", meas)[0] == 3


def test_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("not a header\n")
    assert run(capsys, "retrieve", bad)[0] == 64
    assert run(capsys, "retrieve", tmp_path / "missing.csv")[0] == 74
    assert run(capsys, "frobnicate")[0] == 64
    assert run(capsys, "gen", "--seed", "x")[0] == 64
    assert run(capsys, "cwt", tmp_path / "missing.json")[0] == 74
    assert run(capsys, "probe", "--wavelet", "{")[0] == 64


def test_verify_suite(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "signals", "--quiet")
    doc = json.loads(out)
    assert code == 0 and doc["passed"] and doc["suite"] == "signals"
    assert all(c["passed"] for c in doc["checks"])


def test_plotdata_morlet_peak(capsys):
    code, out, _ = run(capsys, "plotdata", "fourier", "--range", 0, 10, "--points", 101)
    head, data = _csv_columns(out)
    assert code == 0 and head == ["xi", "re", "im"] and data.shape == (101, 3)
    k = int(np.argmax(data[:, 1]))
    assert data[k, 0] == pytest.approx(5.0)
    assert data[k, 1] == pytest.approx(math.pi ** -0.25, rel=1e-6)


def test_plotdata_cauchy_peak(capsys):
    code, out, _ = run(capsys, "plotdata", "fourier", "--wavelet", '{"kind": "cauchy", "p": 2}',
                       "--range", 0, 8, "--points", 81)
    _, data = _csv_columns(out)
    k = int(np.argmax(data[:, 1]))
    assert data[k, 0] == pytest.approx(2.0)
    assert data[k, 1] == pytest.approx(4 * math.exp(-2), rel=1e-12)


def test_plotdata_time_and_decay(capsys):
    code, out, _ = run(capsys, "plotdata", "time", "--wavelet", '{"kind": "gauss"}', "--points", 11)
    _, data = _csv_columns(out)
    assert code == 0
    np.testing.assert_allclose(data[:, 1], np.exp(-math.pi * data[:, 0] ** 2), atol=1e-12)
    code, out, _ = run(capsys, "plotdata", "decay")
    head, data = _csv_columns(out)
    assert code == 0 and head == ["a", "E"] and data.shape == (7, 2)
    assert data[-1, 1] < data[0, 1]


def test_plotdata_overlay(signal_file, capsys):
    code, out, _ = run(capsys, "plotdata", "overlay")
    assert code == 0 and out == "x\n"
    code, out, _ = run(capsys, "plotdata", "overlay", signal_file, signal_file, "--points", 5)
    head, data = _csv_columns(out)
    assert head == ["x", "s0", "s1"] and data.shape == (5, 3)
    assert np.array_equal(data[:, 1], data[:, 2])


def test_plotdata_validation(capsys):
    assert run(capsys, "plotdata", "fourier", "--points", 1)[0] == 64


def test_probe(capsys):
    code, out, _ = run(capsys, "probe", "--wavelet", '{"kind": "gauss"}')
    doc = json.loads(out)
    assert code == 0 and doc["ell"] == 0
    assert doc["c"][0] == pytest.approx(1.0, rel=1e-6)
    code, _, err = run(capsys, "probe", "--wavelet", '{"kind": "cauchy", "p": 2}')
    assert code == 3 and "moment probe" in err
