import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from bandphase.corpus import random_analytic, rng_for
from bandphase.cwt import measure
from bandphase.io import (FormatError, atomic_write, diagnostics_to_json, measurements_from_csv,
                          measurements_to_csv, read_measurements, read_signal, signal_from_json,
                          signal_to_json, write_measurements, write_signal)
from bandphase.signals import BandlimitedSignal, l2_distance, norm
from bandphase.wavelets import morlet

finite = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)


@given(st.lists(finite, min_size=1, max_size=12), st.integers(-50, 50),
       st.floats(0.1, 10.0, allow_nan=False))
def test_real_signal_round_trip_is_exact(values, m_min, omega):
    f = BandlimitedSignal(omega, values, m_min)
    g = signal_from_json(signal_to_json(f))
    assert g.omega == f.omega and g.m_min == f.m_min and g.is_real
    assert np.array_equal(g.coeffs, f.coeffs)


def test_factored_signal_is_realized():
    f = random_analytic(rng_for(2), 3)
    g = signal_from_json(signal_to_json(f))
    assert not g.is_real
    assert l2_distance(g, f) <= 1e-8 * norm(f)


@pytest.mark.parametrize("text", [
    "", "{}", "[1, 2]", '{"omega": 1, "m_min": 0, "coeffs": []}',
    '{"omega": 1, "m_min": 0, "coeffs": [[1, 2]], "is_real": true}',
    '{"omega": "x", "m_min": 0, "coeffs": [[1, 0]]}',
])
def test_malformed_signal(text):
    with pytest.raises(FormatError):
        signal_from_json(text)


def test_file_round_trip(tmp_path, real_signal):
    p = tmp_path / "s.json"
    write_signal(p, real_signal)
    assert np.array_equal(read_signal(p).coeffs, real_signal.coeffs)
    assert [q.name for q in tmp_path.iterdir()] == ["s.json"]


def test_atomic_write_leaves_no_temp_on_failure(tmp_path):
    with pytest.raises(OSError):
        atomic_write(tmp_path / "missing" / "x.txt", "data")
    assert list(tmp_path.iterdir()) == []


@pytest.fixture(scope="module")
def meas():
    f = BandlimitedSignal(1.0, [0.3, -1.0, 0.7], -1)
    return measure(f, morlet(5.0), (-6, 6), [0.5, 0.25, 0.125], keep_phase=True)


def test_measurement_csv_layout(meas):
    text = measurements_to_csv(meas)
    lines = text.splitlines()
    assert lines[0] == '# omega=1 wavelet={"kind":"morlet","xi0":5.0} ell=1'
    assert lines[1] == "m,a_k,magnitude"
    assert len(lines) == 2 + 13 * 3
    assert lines[2].startswith("-6,0.5,")
    assert lines[3].startswith("-6,0.25,")


@pytest.mark.parametrize("complex_values", [False, True])
def test_measurement_round_trip_is_exact(meas, complex_values):
    back = measurements_from_csv(measurements_to_csv(meas, complex_values))
    assert back.same_grid(meas)
    assert np.array_equal(back.values, meas.values)
    assert back.wavelet == meas.wavelet and back.ell == meas.ell
    if complex_values:
        assert np.array_equal(back.phases, meas.phases)
    else:
        assert back.phases is None


def test_measurement_file_round_trip(tmp_path, meas):
    p = tmp_path / "m.csv"
    write_measurements(p, meas)
    assert np.array_equal(read_measurements(p).values, meas.values)


def test_complex_columns_need_phases(meas):
    with pytest.raises(ValueError):
        measurements_to_csv(meas.scaled(1.0), complex_values=True)


@pytest.mark.parametrize("mutate", [
    lambda L: [],
    lambda L: ["# omega=1"] + L[1:],
    lambda L: ["# omega=-1 wavelet=null ell=none"] + L[1:],
    lambda L: [L[0], "m,a,b"] + L[2:],
    lambda L: L[:2],
    lambda L: L[:-1],
    lambda L: L[:2] + [L[3], L[2]] + L[4:],
    lambda L: L[:2] + ["-6,0.5,abc"] + L[3:],
    lambda L: L[:2] + ["-6,0.5,-1"] + L[3:],
], ids=["empty", "header", "omega", "columns", "no-rows", "ragged", "order", "number", "negative"])
def test_malformed_measurements(meas, mutate):
    lines = measurements_to_csv(meas).splitlines()
    with pytest.raises(FormatError):
        measurements_from_csv("\n".join(mutate(lines)) + "\n")


def test_diagnostics_json():
    doc = json.loads(diagnostics_to_json(1.5e-6, 1, ["truncation"], {"spread": 0.25, "bad": float("nan")}))
    assert doc == {"residual_meas": 1.5e-6, "ell": 1, "flags": ["truncation"],
                   "diagnostics": {"spread": 0.25, "bad": None}}
    assert json.loads(diagnostics_to_json(float("nan"), 0, []))["residual_meas"] is None
