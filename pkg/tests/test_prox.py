"""Tests for the squared max-norm proximal operator."""

import numpy as np
import pytest

from cesim.prox import clip_level, prox_sq_maxnorm


def _objective(v, x, weight):
    """weight * ||x||_inf^2 + 0.5 ||x - v||^2, the prox objective."""
    return weight * np.max(np.abs(x)) ** 2 + 0.5 * np.sum(np.abs(x - v) ** 2)


def _level_objective(mags, t, weight):
    return weight * t ** 2 + 0.5 * np.sum(np.maximum(mags - t, 0.0) ** 2)


def test_zero_weight_is_identity():
    rng = np.random.default_rng(0)
    v = rng.standard_normal(10) + 1j * rng.standard_normal(10)
    np.testing.assert_array_equal(prox_sq_maxnorm(v, 0.0), v)
    assert clip_level(np.abs(v), 0.0) == np.max(np.abs(v))


def test_empty_and_zero_inputs():
    assert clip_level(np.array([]), 1.0) == 0.0
    np.testing.assert_array_equal(prox_sq_maxnorm(np.zeros(5), 2.0), np.zeros(5))


def test_validation():
    with pytest.raises(ValueError):
        clip_level(np.array([-1.0]), 1.0)
    with pytest.raises(ValueError):
        clip_level(np.array([1.0]), -0.5)


def test_scalar_closed_form():
    """One element: level = m / (1 + 2 weight), from the 1-D stationarity."""
    for m in (0.5, 1.0, 3.0):
        for w in (0.1, 1.0, 10.0):
            assert clip_level(np.array([m]), w) == pytest.approx(
                m / (1 + 2 * w), rel=1e-12)


def test_phases_never_change():
    rng = np.random.default_rng(1)
    for _ in range(50):
        v = rng.standard_normal(16) + 1j * rng.standard_normal(16)
        out = prox_sq_maxnorm(v, 0.8)
        np.testing.assert_allclose(np.angle(out), np.angle(v), atol=1e-12)


def test_clipping_structure():
    """Entries above the level clip to it; entries below are untouched."""
    rng = np.random.default_rng(2)
    for _ in range(50):
        v = rng.standard_normal(24) + 1j * rng.standard_normal(24)
        w = 10.0 ** rng.uniform(-1, 1)
        t = clip_level(np.abs(v), w)
        out = prox_sq_maxnorm(v, w)
        m = np.abs(v)
        np.testing.assert_allclose(np.abs(out), np.minimum(m, t), atol=1e-12)


def test_level_monotone_in_weight():
    rng = np.random.default_rng(3)
    m = np.abs(rng.standard_normal(20))
    levels = [clip_level(m, w) for w in (0.01, 0.1, 1.0, 10.0, 100.0)]
    assert all(a >= b for a, b in zip(levels, levels[1:]))
    assert levels[-1] < np.max(m)


def test_level_is_stationary_point():
    """The returned level beats small perturbations of the 1-D objective."""
    rng = np.random.default_rng(4)
    for _ in range(100):
        m = np.abs(rng.standard_normal(int(rng.integers(2, 40))))
        w = 10.0 ** rng.uniform(-1.5, 0.5)
        t = clip_level(m, w)
        base = _level_objective(m, t, w)
        for eps in (1e-6, -1e-6, 1e-4, -1e-4):
            if t + eps >= 0:
                assert base <= _level_objective(m, t + eps, w) + 1e-12


def test_prox_beats_random_candidates():
    """The prox point minimizes the full vector objective: no random
    competitor (same phases, perturbed moduli) does better."""
    rng = np.random.default_rng(5)
    for _ in range(30):
        v = rng.standard_normal(12) + 1j * rng.standard_normal(12)
        w = 10.0 ** rng.uniform(-1, 1)
        out = prox_sq_maxnorm(v, w)
        best = _objective(v, out, w)
        for _ in range(20):
            competitor = out * (1 + 0.01 * rng.standard_normal(12))
            assert best <= _objective(v, competitor, w) + 1e-10


def test_matches_bracket_formula():
    """The level satisfies t = (sum of clipped moduli) / (2 w + k) for the
    active set it induces, the defining stationarity condition."""
    rng = np.random.default_rng(6)
    for _ in range(200):
        m = np.abs(rng.standard_normal(int(rng.integers(2, 64))))
        w = 10.0 ** rng.uniform(-1.5, 0.5)
        t = clip_level(m, w)
        active = m > t
        k = int(active.sum())
        if k:
            assert t == pytest.approx(m[active].sum() / (2 * w + k), rel=1e-9)


def test_real_input_keeps_signs():
    v = np.array([3.0, -2.0, 0.5, -0.1])
    out = prox_sq_maxnorm(v, 1.0)
    assert np.all(np.sign(out) == np.sign(v))
    assert np.isrealobj(out)


def test_stacked_axes_pool_one_level():
    """A multi-axis input is clipped with a single pooled level."""
    rng = np.random.default_rng(7)
    v = rng.standard_normal((2, 3, 8))
    t = clip_level(np.abs(v).ravel(), 0.7)
    out = prox_sq_maxnorm(v, 0.7)
    assert np.max(np.abs(out)) == pytest.approx(min(t, np.max(np.abs(v))), rel=1e-12)
