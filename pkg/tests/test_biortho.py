import math

import numpy as np
import pytest

from nhkitaev.biortho import (
    Band,
    PhaseDomainError,
    angles,
    berry_connection,
    connection_loop_integral,
    eigensystem,
    transport_frame,
    wilson_loop_total,
    zak_phase,
)
from nhkitaev.model import ModelParams, build_bloch, d_vector, dispersion
from nhkitaev.phases import classify

RNG = np.random.default_rng(20240812)


def random_nondegenerate(rng, gapped_only=False):
    while True:
        t = rng.uniform(0.2, 2.0) * rng.choice([-1.0, 1.0])
        params = ModelParams(t, rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2))
        k = rng.uniform(0.0, 2 * math.pi)
        if abs(dispersion(params, k).epsilon) < 1e-3:
            continue
        d = d_vector(params, k)
        if abs(d.dy) + abs(d.dz) < 1e-6:
            continue
        return params, k


def test_eigensystem_balanced_midband():
    params = ModelParams(1.0, 0.0, 1.0, 1.0)
    sys = eigensystem(params, math.pi / 2)
    h = build_bloch(params, math.pi / 2)
    assert np.linalg.norm(h @ sys.psi_plus - sys.psi_plus) < 1e-12
    assert np.linalg.norm(h @ sys.psi_minus + sys.psi_minus) < 1e-12
    assert abs(np.vdot(sys.eta_plus, sys.psi_plus) - 1.0) < 1e-12
    assert abs(np.vdot(sys.eta_plus, sys.psi_minus)) < 1e-12


def test_eigensystem_nonorthogonal_right_vectors():
    sys = eigensystem(ModelParams(1.0, 0.5, 2.0, 0.5), math.pi / 3)
    assert abs(np.vdot(sys.eta_plus, sys.psi_minus)) < 1e-12
    assert abs(np.vdot(sys.psi_plus, sys.psi_minus)) > 1e-3


def test_eigensystem_rejects_exceptional_point():
    with pytest.raises(PhaseDomainError):
        eigensystem(ModelParams(1.0, 0.0, 1.0, -1.0), math.pi / 4)


def test_eigensystem_invariants_random():
    for _ in range(300):
        params, k = random_nondegenerate(RNG)
        sys = eigensystem(params, k)
        h = build_bloch(params, k)
        eps = dispersion(params, k).epsilon
        scale = max(1.0, abs(eps))
        assert np.linalg.norm(h @ sys.psi_plus - (eps / 2) * sys.psi_plus) < 1e-10 * scale
        assert np.linalg.norm(h @ sys.psi_minus + (eps / 2) * sys.psi_minus) < 1e-10 * scale
        gram = np.array(
            [
                [np.vdot(sys.eta_plus, sys.psi_plus), np.vdot(sys.eta_plus, sys.psi_minus)],
                [np.vdot(sys.eta_minus, sys.psi_plus), np.vdot(sys.eta_minus, sys.psi_minus)],
            ]
        )
        assert np.abs(gram - np.eye(2)).max() < 1e-10
        completeness = np.outer(sys.psi_plus, np.conj(sys.eta_plus)) + np.outer(
            sys.psi_minus, np.conj(sys.eta_minus)
        )
        assert np.abs(completeness - np.eye(2)).max() < 1e-10


def test_eigensystem_at_pairing_nodes():
    # sin k = 0: h_k is diagonal and the frame reduces to coordinate vectors
    params = ModelParams(1.0, 0.5, 2.0, 0.5)
    for k in (0.0, math.pi):
        sys = eigensystem(params, k)
        h = build_bloch(params, k)
        eps = dispersion(params, k).epsilon
        assert np.linalg.norm(h @ sys.psi_plus - (eps / 2) * sys.psi_plus) < 1e-12


def test_angles_balanced():
    a = angles(ModelParams(1.0, 0.0, 1.0, 1.0), math.pi / 2)
    assert a.r == pytest.approx(1.0)
    assert a.theta == pytest.approx(math.pi / 2)
    assert a.phi == pytest.approx(math.pi / 2)


def test_angles_imbalanced_cos_theta():
    params = ModelParams(1.0, 0.5, 2.0, 0.5)
    a = angles(params, math.pi / 2)
    r = math.sqrt(1.25)
    assert a.r == pytest.approx(r)
    assert np.cos(a.theta) == pytest.approx(-0.75j / r, abs=1e-12)
    d = d_vector(params, math.pi / 2).as_array()
    assert np.abs(a.reconstruct() - d).max() < 1e-10


def test_angles_polar_axis_case():
    # k = 0: d = (0, 0, mu - t), reconstruction must stay exact
    params = ModelParams(1.0, 0.4, 1.3, 0.7)
    a = angles(params, 0.0)
    d = d_vector(params, 0.0).as_array()
    assert np.abs(a.reconstruct() - d).max() < 1e-12


def test_angles_reconstruction_random():
    for _ in range(300):
        params, k = random_nondegenerate(RNG)
        a = angles(params, k)
        d = d_vector(params, k).as_array()
        assert np.abs(a.reconstruct() - d).max() < 1e-10 * max(1.0, abs(a.r))


def test_angles_reject_vanishing_r():
    with pytest.raises(PhaseDomainError):
        angles(ModelParams(1.0, 0.0, 1.0, -1.0), math.pi / 4)


@pytest.mark.parametrize(
    "mu,da,db,expected",
    [
        (0.5, 2.0, 0.5, -math.pi),
        (0.5, -1.0, -1.0, math.pi),
        (1.5, 1.0, 1.0, 0.0),
    ],
)
def test_zak_reference_points(mu, da, db, expected):
    for band in (Band.PLUS, Band.MINUS):
        res = zak_phase(ModelParams(1.0, mu, da, db), band, 4096)
        assert res.value == pytest.approx(expected, abs=1e-6)
        assert res.converged


def test_zak_rejects_non_gapped():
    with pytest.raises(PhaseDomainError):
        zak_phase(ModelParams(1.0, 0.5, 1.0, -1.0), Band.PLUS, 4096)


def test_zak_rejects_small_grid():
    with pytest.raises(ValueError):
        zak_phase(ModelParams(1.0, 0.5, 1.0, 1.0), Band.PLUS, 32)


def test_zak_quantized_on_random_gapped_draws():
    rng = np.random.default_rng(5)
    count = 0
    while count < 100:
        t = rng.uniform(0.2, 2.0) * rng.choice([-1.0, 1.0])
        mu = rng.uniform(-3, 3)
        da = rng.uniform(-3, 3)
        db = rng.uniform(-3, 3)
        params = ModelParams(t, mu, da, db)
        label = classify(params)
        if not label.is_gapped:
            continue
        if min(abs(abs(mu / t) - 1.0), abs((mu * mu + da * db) / (t * t) - 1.0)) < 1e-2:
            continue
        count += 1
        value = zak_phase(params, Band.PLUS, 512).value
        nearest = min((-math.pi, 0.0, math.pi), key=lambda q: abs(value - q))
        assert abs(value - nearest) < 1e-6
        if label.kind.value.startswith("gapped_topo"):
            assert value == pytest.approx(-math.pi * math.copysign(1.0, (da + db) / t), abs=1e-6)
            assert value == pytest.approx(label.zak_value, abs=1e-6)


def test_zak_band_independence():
    rng = np.random.default_rng(6)
    for mu, da, db in [(0.5, 2.0, 0.5), (0.2, -0.7, -1.9), (1.8, 1.2, 0.4), (2.2, 0.8, -0.9)]:
        zp = zak_phase(ModelParams(1.0, mu, da, db), Band.PLUS, 512).value
        zm = zak_phase(ModelParams(1.0, mu, da, db), Band.MINUS, 512).value
        assert zp == pytest.approx(zm, abs=1e-9)


def test_zak_gauge_invariance_mod_2pi():
    """Random per-point rescaling of psi (with eta rescaled to preserve
    biorthonormality) leaves the Wilson total invariant modulo 2 pi."""
    params = ModelParams(1.0, 0.5, 2.0, 0.5)
    nk = 256
    ks = 2 * math.pi * np.arange(nk) / nk
    frames = [transport_frame(params, float(k), Band.PLUS) for k in ks]
    rng = np.random.default_rng(7)
    lam = rng.uniform(0.2, 3.0, nk) * np.exp(1j * rng.uniform(-math.pi, math.pi, nk))
    gauged = [(psi * l, eta / np.conj(l)) for (psi, eta), l in zip(frames, lam)]
    total0 = 0.0
    total1 = 0.0
    for m in range(nk):
        total0 += -np.angle(np.vdot(frames[m][1], frames[(m + 1) % nk][0]))
        total1 += -np.angle(np.vdot(gauged[m][1], gauged[(m + 1) % nk][0]))
    diff = (total1 - total0 + math.pi) % (2 * math.pi) - math.pi
    assert abs(diff) < 1e-10


def test_hermitian_reduction():
    """For delta_a = delta_b the biorthogonal loop equals the ordinary
    Berry-phase Wilson loop computed with <psi|psi> overlaps."""
    params = ModelParams(1.0, 0.5, 1.3, 1.3)
    nk = 512
    ks = 2 * math.pi * np.arange(nk) / nk
    frames = [transport_frame(params, float(k), Band.PLUS) for k in ks]
    berry = 0.0
    for m in range(nk):
        berry += -np.angle(np.vdot(frames[m][0], frames[(m + 1) % nk][0]))
    assert wilson_loop_total(params, Band.PLUS, nk) == pytest.approx(berry, abs=1e-8)
    # and eta coincides with psi pointwise in the Hermitian case
    psi, eta = frames[17]
    assert np.abs(psi - eta).max() < 1e-12


def test_a_theta_vanishes():
    """<eta|d/d theta|psi> = 0 for the half-angle frame, via finite differences."""
    from nhkitaev.biortho import _half_angle_frame

    rng = np.random.default_rng(8)
    h = 1e-6
    for _ in range(50):
        theta = rng.uniform(0.3, math.pi - 0.3) + 1j * rng.uniform(-0.4, 0.4)
        phi = rng.uniform(-math.pi, math.pi) + 1j * rng.uniform(-0.4, 0.4)
        pp, pm, ep, em = _half_angle_frame(theta, phi)
        pp2, pm2, _, _ = _half_angle_frame(theta + h, phi)
        pp1, pm1, _, _ = _half_angle_frame(theta - h, phi)
        a_plus = np.vdot(ep, (pp2 - pp1) / (2 * h))
        a_minus = np.vdot(em, (pm2 - pm1) / (2 * h))
        assert abs(a_plus) < 1e-6
        assert abs(a_minus) < 1e-6


def test_berry_connection_balanced_equals_hermitian_connection():
    params = ModelParams(1.0, 0.5, 1.0, 1.0)
    k = math.pi / 2
    a = berry_connection(params, k)
    h = 1e-6
    psi_f, _ = transport_frame(params, k + h, Band.PLUS)
    psi_b, _ = transport_frame(params, k - h, Band.PLUS)
    psi, _ = transport_frame(params, k, Band.PLUS)
    hermitian = np.vdot(psi, (psi_f - psi_b) / (2 * h))
    assert a == pytest.approx(hermitian, abs=1e-10)


def test_berry_connection_rejects_ep():
    with pytest.raises(PhaseDomainError):
        berry_connection(ModelParams(1.0, 0.0, 1.0, -1.0), math.pi / 4)


def test_connection_loop_integral_matches_zak():
    params = ModelParams(1.0, 0.5, 2.0, 0.5)
    loop = connection_loop_integral(params, Band.PLUS, 2048)
    assert loop == pytest.approx(-math.pi, abs=1e-4)
    zak = zak_phase(params, Band.PLUS, 4096).value
    assert loop == pytest.approx(zak, abs=1e-4)
