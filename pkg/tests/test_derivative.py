import numpy as np
import pytest

from bandphase.corpus import random_real, rng_for
from bandphase.cwt import MagnitudeMeasurements, measure
from bandphase.errors import DCObstruction, InvalidParameter, NotConverging
from bandphase.retrieval.derivative import (antidifferentiate, estimate_derivative_magnitudes,
                                            estimate_derivative_magnitudes_full)
from bandphase.signals import BandlimitedSignal, TruncationWarning, derivative, evaluate, l2_distance, norm, realize
from bandphase.verification import signal_window
from bandphase.wavelets import MomentProfile, gauss_lowpass, morlet, probe_moment_order

SCALES = 2.0 ** -np.arange(4, 11)


def _truth(f, ell, meas):
    return evaluate(derivative(f, ell), meas.times).real ** 2


@pytest.mark.parametrize("w,tol", [(morlet(5.0), 1e-3), (gauss_lowpass(), 1e-4)], ids=["morlet", "gauss"])
def test_extrapolated_magnitudes(w, tol):
    f = random_real(rng_for(21), 3)
    prof = probe_moment_order(w)
    meas = measure(f, w, signal_window(f), SCALES)
    est = estimate_derivative_magnitudes_full(meas, prof)
    want = _truth(f, prof.ell, meas)
    assert np.max(np.abs(est.values - want)) <= tol * np.max(want)
    assert est.spread < 0.1 and est.last_step < 0.1
    assert np.all(est.values >= 0)


def test_zero_measurements_give_zero():
    meas = MagnitudeMeasurements(1.0, -3, SCALES, np.zeros((7, SCALES.size)))
    est = estimate_derivative_magnitudes(meas, MomentProfile(1, 1.0 + 0j, 0.0))
    assert np.all(est == 0)


def test_large_scales_do_not_converge():
    f = random_real(rng_for(2), 3)
    w = morlet(5.0)
    meas = measure(f, w, signal_window(f), [1.0, 0.5, 0.25])
    with pytest.raises(NotConverging):
        estimate_derivative_magnitudes(meas, probe_moment_order(w))


def test_estimator_validation():
    meas = MagnitudeMeasurements(1.0, 0, [0.1, 0.05], np.ones((3, 2)))
    with pytest.raises(InvalidParameter):
        estimate_derivative_magnitudes(meas, MomentProfile(0, 1.0 + 0j, 0.0))
    meas = MagnitudeMeasurements(1.0, 0, SCALES, np.ones((3, SCALES.size)))
    with pytest.raises(InvalidParameter):
        estimate_derivative_magnitudes(meas, MomentProfile(0, 0j, 0.0))


@pytest.mark.parametrize("ell", [1, 2, 3])
@pytest.mark.parametrize("seed", [0, 1])
def test_antiderivative_round_trip(seed, ell):
    f = random_real(rng_for(seed), 5)
    g = antidifferentiate(derivative(f, ell), ell)
    assert l2_distance(g, f) <= 1e-8 * norm(f)
    assert g.is_real
    assert g.info["truncation"] <= 1e-8 * norm(f)


def test_antiderivative_of_realized_derivative():
    f = random_real(rng_for(4), 5)
    h = realize(derivative(f, 1))
    assert l2_distance(antidifferentiate(h, 1), f) <= 1e-7 * norm(f)


def test_antiderivative_of_atom_derivative(atom):
    g = antidifferentiate(derivative(atom, 1), 1)
    assert l2_distance(g, atom) <= 1e-12


def test_order_zero_is_identity(real_signal):
    assert antidifferentiate(real_signal, 0) is real_signal


def test_plain_signal_is_not_a_derivative(atom):
    # the atom's spectrum is 1/2 at ξ = 0, so it has no L² antiderivative
    with pytest.raises(DCObstruction):
        antidifferentiate(atom, 1)


def test_antiderivative_validation(atom):
    h = derivative(atom, 1)
    with pytest.raises(InvalidParameter):
        antidifferentiate(h, -1)
    with pytest.raises(InvalidParameter):
        antidifferentiate(h, 1, xi_cut=0.5)


def test_slowly_decaying_antiderivative_warns():
    # sinc(2x) − sinc(2x − 1) has zero mean; its antiderivative decays like 1/x
    h = BandlimitedSignal(1.0, [1.0, -1.0])
    with pytest.warns(TruncationWarning, match="L2 mass"):
        g = antidifferentiate(h, 1, pad=1)
    assert g.info["truncation"] > 1e-3


def test_scale_of_gain():
    # |f'|² estimate scales with the square of the measurement scale
    f = random_real(rng_for(6), 3)
    w = morlet(5.0)
    prof = probe_moment_order(w)
    meas = measure(f, w, signal_window(f), SCALES)
    a = estimate_derivative_magnitudes(meas, prof)
    b = estimate_derivative_magnitudes(meas.scaled(3.0), prof)
    assert np.max(np.abs(b - 9 * a)) <= 1e-12 * np.max(b)
