"""Signal JSON, measurement CSV and diagnostics JSON, with atomic writes."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import re
import tempfile

import numpy as np

from .cwt import MagnitudeMeasurements
from .errors import BandphaseError
from .signals import BandlimitedSignal, realize


class FormatError(BandphaseError, ValueError):
    """A file does not follow the expected layout."""


def _g17(v: float) -> str:
    return format(float(v), ".17g")


def atomic_write(path, text: str) -> None:
    """Write ``text`` to ``path`` through a temporary file and a rename, so
    readers never see a partial file."""
    path = os.fspath(path)
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# signals -------------------------------------------------------------------------

def _number(v: float) -> float:
    # json writes the shortest repr that round-trips, i.e. full double precision
    return float(v)


def signal_to_json(f: BandlimitedSignal) -> str:
    """Serialize ``f``; factored signals are realized as Nyquist samples first."""
    g = realize(f)
    doc = {
        "omega": _number(g.omega),
        "m_min": int(g.m_min),
        "coeffs": [[_number(c.real), _number(c.imag)] for c in g.coeffs],
        "is_real": bool(g.is_real),
    }
    return json.dumps(doc, indent=1) + "\n"


def signal_from_json(text: str) -> BandlimitedSignal:
    try:
        doc = json.loads(text)
        omega = float(doc["omega"])
        m_min = int(doc["m_min"])
        coeffs = np.array([complex(float(re_), float(im_)) for re_, im_ in doc["coeffs"]])
    except (ValueError, KeyError, TypeError) as e:
        raise FormatError(f"malformed signal file: {e}") from None
    if coeffs.size == 0:
        raise FormatError("signal file holds no coefficients")
    if doc.get("is_real") and np.any(coeffs.imag != 0):
        raise FormatError("signal marked real has nonzero imaginary parts")
    return BandlimitedSignal(omega, coeffs, m_min)


def write_signal(path, f: BandlimitedSignal) -> None:
    atomic_write(path, signal_to_json(f))


def read_signal(path) -> BandlimitedSignal:
    with open(path, encoding="utf-8") as fh:
        return signal_from_json(fh.read())


# measurements ---------------------------------------------------------------------

_HEADER = re.compile(r"^# omega=(?P<omega>\S+) wavelet=(?P<wavelet>\S+) ell=(?P<ell>\S+)$")
_COLUMNS = ["m", "a_k", "magnitude"]
_COMPLEX_COLUMNS = _COLUMNS + ["re", "im"]


def measurements_to_csv(meas: MagnitudeMeasurements, complex_values: bool = False) -> str:
    """One row per (m, a_k), m-major, scales in stored order."""
    if complex_values and meas.phases is None:
        raise ValueError("measurements carry no complex values")
    wav = json.dumps(meas.wavelet, separators=(",", ":"), sort_keys=True) if meas.wavelet else "null"
    ell = "none" if meas.ell is None else str(int(meas.ell))
    buf = io.StringIO()
    buf.write(f"# omega={_g17(meas.omega)} wavelet={wav} ell={ell}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(_COMPLEX_COLUMNS if complex_values else _COLUMNS)
    for i, m in enumerate(meas.indices):
        for k, a in enumerate(meas.scales):
            row = [str(int(m)), _g17(a), _g17(meas.values[i, k])]
            if complex_values:
                z = meas.phases[i, k]
                row += [_g17(z.real), _g17(z.imag)]
            w.writerow(row)
    return buf.getvalue()


def measurements_from_csv(text: str) -> MagnitudeMeasurements:
    lines = text.splitlines()
    if not lines:
        raise FormatError("empty measurement file")
    head = _HEADER.match(lines[0].strip())
    if head is None:
        raise FormatError(f"bad header line {lines[0]!r}; expected '# omega=<v> wavelet=<json> ell=<v>'")
    try:
        omega = float(head["omega"])
        wavelet = json.loads(head["wavelet"])
        ell = None if head["ell"] == "none" else int(head["ell"])
    except ValueError as e:
        raise FormatError(f"bad header field: {e}") from None
    if not (math.isfinite(omega) and omega > 0):
        raise FormatError("omega must be positive")
    rows = list(csv.reader(lines[1:]))
    if not rows or rows[0] not in (_COLUMNS, _COMPLEX_COLUMNS):
        raise FormatError(f"expected column header {','.join(_COLUMNS)}[,re,im]")
    has_complex = rows[0] == _COMPLEX_COLUMNS
    body = [r for r in rows[1:] if r]
    try:
        ms = np.array([int(r[0]) for r in body])
        ak = np.array([float(r[1]) for r in body])
        mag = np.array([float(r[2]) for r in body])
        z = np.array([complex(float(r[3]), float(r[4])) for r in body]) if has_complex else None
    except (ValueError, IndexError) as e:
        raise FormatError(f"bad data row: {e}") from None
    if ms.size == 0:
        raise FormatError("measurement file has no data rows")
    m_min = int(ms[0])
    n_s = int(np.count_nonzero(ms == m_min))
    scales = ak[:n_s]
    n_m = ms.size // n_s
    if ms.size != n_m * n_s:
        raise FormatError("rows do not form a full (m, a_k) grid")
    expect_m = np.repeat(np.arange(m_min, m_min + n_m), n_s)
    if not (np.array_equal(ms, expect_m) and np.array_equal(ak, np.tile(scales, n_m))):
        raise FormatError("rows do not form a full (m, a_k) grid in m-major order")
    try:
        return MagnitudeMeasurements(omega, m_min, scales, mag.reshape(n_m, n_s), wavelet, ell,
                                     z.reshape(n_m, n_s) if z is not None else None)
    except ValueError as e:
        raise FormatError(str(e)) from None


def write_measurements(path, meas: MagnitudeMeasurements, complex_values: bool = False) -> None:
    atomic_write(path, measurements_to_csv(meas, complex_values))


def read_measurements(path) -> MagnitudeMeasurements:
    with open(path, encoding="utf-8") as fh:
        return measurements_from_csv(fh.read())


# diagnostics ----------------------------------------------------------------------

def diagnostics_to_json(residual_meas: float, ell: int, flags, extra: dict | None = None) -> str:
    doc = {"residual_meas": _number(residual_meas) if math.isfinite(residual_meas) else None,
           "ell": int(ell), "flags": [str(f) for f in flags]}
    if extra:
        doc["diagnostics"] = {k: _number(v) if math.isfinite(v) else None for k, v in extra.items()}
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"
