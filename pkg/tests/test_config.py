import json

import numpy as np
import pytest

from bandphase.config import DEFAULT_SEED, DEFAULT_TOLERANCES, RunConfig, geometric_scales
from bandphase.errors import InvalidParameter
from bandphase.quadrature import QuadratureSpec


def test_defaults():
    cfg = RunConfig()
    assert cfg.seed == DEFAULT_SEED
    np.testing.assert_allclose(cfg.scale_array(), 2.0 ** -np.arange(4, 11))
    assert cfg.tol("tau_quad") == DEFAULT_TOLERANCES["tau_quad"]
    assert cfg.wavelet == {"kind": "morlet", "xi0": 5.0}


def test_geometric_scales():
    np.testing.assert_allclose(geometric_scales(1.0, 2.0, 3), [1.0, 2.0, 4.0])
    for bad in ((0.0, 2.0, 3), (1.0, 1.0, 3), (1.0, 2.0, 0)):
        with pytest.raises(InvalidParameter):
            geometric_scales(*bad)


def test_round_trip_through_file(tmp_path):
    cfg = RunConfig(omega=2.0, window=(-10, 10), scales=[0.5, 0.25], seed=7,
                    quadrature=QuadratureSpec(num_nodes=16, panels=4),
                    tolerances={"eps_zero": 1e-9})
    p = tmp_path / "c.json"
    p.write_text(json.dumps(cfg.to_dict()))
    back = RunConfig.load(p)
    assert back.to_dict() == cfg.to_dict()
    assert back.tol("eps_zero") == 1e-9
    assert back.quadrature == cfg.quadrature


def test_overrides_ignore_none():
    cfg = RunConfig().with_overrides(seed=None, omega=3.0)
    assert cfg.seed == DEFAULT_SEED and cfg.omega == 3.0


@pytest.mark.parametrize("doc", [
    {"omega": 0}, {"window": [5, 1]}, {"tolerances": {"nope": 1}}, {"tolerances": {"tau_quad": 0}},
    {"seed": -1}, {"seed": 2 ** 64}, {"n_coeffs": 0}, {"scales": []}, {"scales": {"a0": 1}},
    {"extra": 1},
])
def test_invalid_configs(doc):
    with pytest.raises(InvalidParameter):
        RunConfig.from_dict(doc)


def test_load_rejects_non_object(tmp_path):
    p = tmp_path / "c.json"
    p.write_text("[1]")
    with pytest.raises(InvalidParameter):
        RunConfig.load(p)
    p.write_text("{")
    with pytest.raises(InvalidParameter):
        RunConfig.load(p)
