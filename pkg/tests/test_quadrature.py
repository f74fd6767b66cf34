import math

import numpy as np
import pytest

from bandphase.errors import InvalidParameter
from bandphase.quadrature import QuadratureSpec, panels_for, rule, split_rule


def test_defaults():
    q = QuadratureSpec()
    assert (q.num_nodes, q.rule, q.panels) == (32, "gauss-legendre-composite", 8)


@pytest.mark.parametrize("kw", [{"num_nodes": 8}, {"rule": "simpson"}, {"panels": 0}])
def test_invalid_specs(kw):
    with pytest.raises(InvalidParameter):
        QuadratureSpec(**kw)


def test_refined_doubles_every_panel_count():
    q = QuadratureSpec(panels=5)
    assert panels_for(q.refined(), 1.0, 0.0) == 10
    assert panels_for(q.refined(), 1.0, 100.0) == 2 * panels_for(q, 1.0, 100.0)
    assert panels_for(q, 1.0, 0.0, minimum=7) == 7


def test_dict_round_trip():
    q = QuadratureSpec(24, "trapezoid", 3)
    assert QuadratureSpec.from_dict(q.to_dict()) == q


@pytest.mark.parametrize("spec", [QuadratureSpec(), QuadratureSpec(rule="trapezoid", num_nodes=64)])
def test_rule_integrates_oscillatory_exponential(spec):
    # ∫_{-1}^{1} e^{2πi t ξ} dξ = sin(2πt)/(πt)
    t = 3.3
    x, w = split_rule(1.0, panels_for(spec, 1.0, t), spec)
    got = np.sum(w * np.exp(2j * np.pi * t * x))
    tol = 1e-13 if spec.rule != "trapezoid" else 1e-4
    assert abs(got - math.sin(2 * math.pi * t) / (math.pi * t)) < tol


def test_weights_sum_to_length():
    x, w = rule(-0.5, 2.0, 7, QuadratureSpec())
    assert abs(w.sum() - 2.5) < 1e-14
    assert x.min() > -0.5 and x.max() < 2.0


def test_split_rule_has_no_node_at_zero_and_covers_band():
    x, w = split_rule(2.0, 4, QuadratureSpec())
    assert not np.any(x == 0)
    assert abs(w.sum() - 4.0) < 1e-13
    xp, wp = split_rule(2.0, 4, QuadratureSpec(), positive_only=True)
    assert np.all(xp > 0) and abs(wp.sum() - 2.0) < 1e-13


def test_panels_track_oscillation():
    q = QuadratureSpec()
    assert panels_for(q, 1.0, 0.0) == q.panels
    assert panels_for(q, 1.0, 100.0) == math.ceil(2 * math.pi * 100 / 8)
