import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nhkitaev.model import (
    ModelParams,
    build_bloch,
    d_vector,
    dispersion,
    hermitian_counterpart_bloch,
    similarity_transform,
)
from nhkitaev.numerics import eig2_complex

couplings = st.floats(-3.0, 3.0, allow_nan=False)
nonzero_t = st.floats(-3.0, 3.0).filter(lambda t: abs(t) > 0.05)
momenta = st.floats(0.0, 2.0 * math.pi, exclude_max=True)


def test_params_reject_zero_t():
    with pytest.raises(ValueError):
        ModelParams(0.0, 0.5, 1.0, 1.0)


def test_params_reject_nonfinite():
    with pytest.raises(ValueError):
        ModelParams(1.0, math.nan, 1.0, 1.0)
    with pytest.raises(ValueError):
        ModelParams(1.0, 0.0, math.inf, 1.0)


def test_build_bloch_balanced_k0():
    h = build_bloch(ModelParams(1.0, 0.0, 1.0, 1.0), 0.0)
    assert np.allclose(h, [[-1.0, 0.0], [0.0, 1.0]])


def test_build_bloch_imbalanced():
    h = build_bloch(ModelParams(1.0, 0.5, 2.0, 0.5), math.pi / 2)
    assert np.allclose(h, [[0.5, -2.0j], [0.5j, -0.5]], atol=1e-15)


def test_build_bloch_antipairing():
    h = build_bloch(ModelParams(1.0, 0.0, 1.0, -1.0), math.pi / 2)
    assert np.allclose(h, [[0.0, -1.0j], [-1.0j, 0.0]], atol=1e-15)


def test_d_vector_balanced():
    d = d_vector(ModelParams(1.0, 0.0, 1.0, 1.0), math.pi / 2)
    assert np.allclose(d.as_array(), [0.0, 1.0, 0.0], atol=1e-15)


def test_d_vector_imbalanced():
    d = d_vector(ModelParams(1.0, 0.5, 2.0, 0.5), math.pi / 2)
    assert np.allclose(d.as_array(), [-0.75j, 1.25, 0.5], atol=1e-15)


def test_d_vector_at_k0():
    d = d_vector(ModelParams(1.0, 0.3, 1.7, -0.4), 0.0)
    assert np.allclose(d.as_array(), [0.0, 0.0, 0.3 - 1.0], atol=1e-15)


def test_dispersion_examples():
    assert dispersion(ModelParams(1.0, 0.0, 1.0, 1.0), math.pi / 2).epsilon == pytest.approx(2.0)
    eps = dispersion(ModelParams(1.0, 0.5, 2.0, 0.5), math.pi / 2).epsilon
    assert eps == pytest.approx(2.0 * math.sqrt(1.25), abs=1e-12)
    assert eps == pytest.approx(2.2360680, abs=1e-7)
    d = dispersion(ModelParams(1.0, 0.0, 1.0, -1.0), math.pi / 2)
    assert d.epsilon == pytest.approx(2.0j)
    assert not d.is_real


@settings(max_examples=1000, deadline=None)
@given(nonzero_t, couplings, couplings, couplings, momenta)
def test_eigenvalue_identity(t, mu, da, db, k):
    """Both eigenvalues of h_k equal +-eps_k/2."""
    params = ModelParams(t, mu, da, db)
    eps = dispersion(params, k).epsilon
    lam = eig2_complex(build_bloch(params, k)).values
    expected = sorted([eps / 2, -eps / 2], key=lambda z: (z.real, z.imag))
    got = sorted(lam, key=lambda z: (z.real, z.imag))
    scale = max(1.0, abs(eps))
    assert abs(got[0] - expected[0]) <= 1e-10 * scale
    assert abs(got[1] - expected[1]) <= 1e-10 * scale


@settings(max_examples=300, deadline=None)
@given(nonzero_t, couplings, couplings, couplings, momenta)
def test_d_sigma_reconstructs_bloch(t, mu, da, db, k):
    params = ModelParams(t, mu, da, db)
    assert np.abs(d_vector(params, k).dot_sigma() - build_bloch(params, k)).max() < 1e-14


@settings(max_examples=300, deadline=None)
@given(nonzero_t, couplings, couplings, couplings, momenta)
def test_hermitian_iff_balanced(t, mu, da, db, k):
    """The Hermiticity defect is exactly |da - db| |sin k|."""
    params = ModelParams(t, mu, da, db)
    h = build_bloch(params, k)
    defect = np.abs(h - h.conj().T).max()
    assert defect == pytest.approx(abs(da - db) * abs(math.sin(k)), abs=1e-14)
    if da == db:
        assert defect < 1e-14


def test_dx2_dy2_dz2_equals_quarter_eps_squared():
    rng = np.random.default_rng(1)
    for _ in range(300):
        params = ModelParams(rng.uniform(0.1, 2), rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2))
        k = rng.uniform(0, 2 * math.pi)
        d = d_vector(params, k)
        ssum = d.dx**2 + d.dy**2 + d.dz**2
        eps = dispersion(params, k).epsilon
        assert abs(ssum - (eps / 2) ** 2) < 1e-12 * max(1.0, abs(eps) ** 2)


def test_counterpart_balanced_is_identity_map():
    params = ModelParams(1.0, 0.3, 1.0, 1.0)
    for k in np.linspace(0, 2 * math.pi, 17):
        assert np.allclose(hermitian_counterpart_bloch(params, k), build_bloch(params, k))


def test_counterpart_example():
    h = hermitian_counterpart_bloch(ModelParams(1.0, 0.5, 2.0, 0.5), math.pi / 2)
    assert np.allclose(h, [[0.5, -1.0j], [1.0j, -0.5]], atol=1e-15)


def test_counterpart_rejects_nonpositive_product():
    with pytest.raises(ValueError):
        hermitian_counterpart_bloch(ModelParams(1.0, 0.0, 1.0, -1.0), 0.3)


def test_counterpart_isospectral():
    rng = np.random.default_rng(2)
    for _ in range(100):
        da = rng.uniform(0.05, 2.5) * rng.choice([-1, 1])
        db = abs(rng.uniform(0.05, 2.5)) * math.copysign(1.0, da)
        params = ModelParams(rng.uniform(0.1, 2), rng.uniform(-2, 2), da, db)
        k = rng.uniform(0, 2 * math.pi)
        lam_h = np.sort(eig2_complex(build_bloch(params, k)).values.real)
        lam_c = np.sort(eig2_complex(hermitian_counterpart_bloch(params, k)).values.real)
        assert np.abs(lam_h - lam_c).max() < 1e-12 * max(1.0, np.abs(lam_c).max())


@pytest.mark.parametrize(
    "da,db,expected",
    [
        (2.0, 0.5, [2.0**-0.5, 2.0**0.5]),
        (0.5, 2.0, [2.0**0.5, 2.0**-0.5]),
        (1.0, 1.0, [1.0, 1.0]),
    ],
)
def test_similarity_transform_values(da, db, expected):
    u = similarity_transform(ModelParams(1.0, 0.5, da, db))
    assert np.allclose(np.diagonal(u), expected, atol=1e-14)


def test_similarity_transform_conjugates_to_counterpart():
    # holds for positive and for negative pairs (entries turn imaginary there)
    for da, db in [(2.0, 0.5), (0.5, 2.0), (-1.0, -1.0), (-0.3, -2.1)]:
        params = ModelParams(1.0, 0.5, da, db)
        u = similarity_transform(params)
        ui = np.diag(1.0 / np.diagonal(u))
        worst = 0.0
        for k in 2 * math.pi * np.arange(64) / 64:
            lhs = u @ build_bloch(params, k) @ ui
            worst = max(worst, np.abs(lhs - hermitian_counterpart_bloch(params, k)).max())
        assert worst < 1e-14
