"""Exact phase classification and exceptional-point structure.

The phase diagram in units of t:

    delta_a/t, delta_b/t > 0,  |mu/t| < 1   gapped, Zak -pi
    delta_a/t, delta_b/t < 0,  |mu/t| < 1   gapped, Zak +pi
    delta_a delta_b / t^2 > 0, mu/t = +-1   gapless boundary
    |mu/t| > 1, mu^2 + delta_a delta_b > t^2   gapped trivial, Zak 0
    delta_a = delta_b = 0, |mu/t| <= 1      degeneracy line
    otherwise                               coalescing (EP / broken region)

Equalities are tested with absolute tolerance BOUNDARY_ATOL in units of t;
exact-boundary points get the boundary label, never a neighboring phase, so
grid sweeps are deterministic.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .model import ModelParams, build_bloch, dispersion, radicand
from .numerics import singular_values_2x2

BOUNDARY_ATOL = 1e-12
KC_DISPERSION_ATOL = 1e-9
EP_RANK_RTOL = 1e-10
ZERO_MATRIX_ATOL = 1e-12


class PhaseKind(Enum):
    GAPPED_TOPO_NEG = "gapped_topo_neg"
    GAPPED_TOPO_POS = "gapped_topo_pos"
    GAPPED_TRIVIAL = "gapped_trivial"
    GAPLESS_BOUNDARY = "gapless_boundary"
    DEGENERACY_LINE = "degeneracy_line"
    COALESCING = "coalescing"


GAPPED_KINDS = frozenset(
    {PhaseKind.GAPPED_TOPO_NEG, PhaseKind.GAPPED_TOPO_POS, PhaseKind.GAPPED_TRIVIAL}
)

_ZAK_OF_KIND = {
    PhaseKind.GAPPED_TOPO_NEG: -math.pi,
    PhaseKind.GAPPED_TOPO_POS: math.pi,
    PhaseKind.GAPPED_TRIVIAL: 0.0,
}


@dataclass(frozen=True)
class PhaseLabel:
    kind: PhaseKind
    zak_value: float | None = None

    @property
    def is_gapped(self) -> bool:
        return self.kind in GAPPED_KINDS


class EpKind(Enum):
    JORDAN_BLOCK = "jordan_block"
    DIAGONAL_ZERO = "diagonal_zero"


@dataclass(frozen=True)
class CriticalMomenta:
    """Zeros of the dispersion in [0, 2pi) with their degeneracy character."""

    values: tuple[float, ...]
    characters: tuple[EpKind, ...]


@dataclass(frozen=True)
class MinGapResult:
    min_real_gap: float
    any_imaginary: bool


@dataclass(frozen=True)
class SurfaceSample:
    """One point of a phase-boundary surface, in units of t.

    ``separates`` holds the classification of the two points displaced by
    +-1e-3 along the surface normal.
    """

    surface_id: int
    delta_a: float
    delta_b: float
    mu: float
    label: PhaseKind
    separates: tuple[PhaseKind, PhaseKind]


def classify(params: ModelParams) -> PhaseLabel:
    """Exact phase label of a parameter point, in units of t."""
    t = params.t
    mt = params.mu / t
    dat = params.delta_a / t
    dbt = params.delta_b / t
    eps = BOUNDARY_ATOL
    if dat > eps and dbt > eps and abs(mt) < 1.0 - eps:
        kind = PhaseKind.GAPPED_TOPO_NEG
    elif dat < -eps and dbt < -eps and abs(mt) < 1.0 - eps:
        kind = PhaseKind.GAPPED_TOPO_POS
    elif dat * dbt > eps and abs(abs(mt) - 1.0) <= eps:
        kind = PhaseKind.GAPLESS_BOUNDARY
    elif abs(mt) > 1.0 + eps and mt * mt + dat * dbt > 1.0 + eps:
        kind = PhaseKind.GAPPED_TRIVIAL
    elif abs(dat) <= eps and abs(dbt) <= eps and abs(mt) <= 1.0 + eps:
        kind = PhaseKind.DEGENERACY_LINE
    else:
        kind = PhaseKind.COALESCING
    return PhaseLabel(kind, _ZAK_OF_KIND.get(kind))


def broken_symmetry_test(params: ModelParams) -> bool:
    """True iff some momentum carries an imaginary quasiparticle level.

    Minimizes f(x) = (t^2 - da db) x^2 - 2 mu t x + mu^2 + da db over
    x = cos k in [-1, 1] analytically; the level is imaginary iff the
    minimum is strictly negative. Equivalent closed form:
    da db < 0 and mu^2 + da db < t^2.
    """
    t, mu, prod = params.t, params.mu, params.pairing_product
    a = t * t - prod

    def f(x):
        return a * x * x - 2.0 * mu * t * x + mu * mu + prod

    best = min(f(-1.0), f(1.0))
    if a > 0.0:
        xv = mu * t / a
        if -1.0 <= xv <= 1.0:
            best = min(best, f(xv))
    return best < 0.0


def _kc_pair(c: float) -> list[float]:
    """Momenta in [0, 2pi) with cos k = c."""
    k = math.acos(c)
    if k == 0.0 or abs(k - math.pi) < 1e-15:
        return [k]
    return [k, 2.0 * math.pi - k]


def critical_momenta(params: ModelParams) -> CriticalMomenta:
    """All zeros of the dispersion in [0, 2pi), or empty if gapped.

    Generic zeros come from cos k_c = (mu t +- sqrt(da db (mu^2 + da db -
    t^2)))/(t^2 - da db); on the free-fermion line delta_a = delta_b = 0 the
    two nodal points sit at cos k_c = mu/t.
    """
    t, mu = params.t, params.mu
    prod = params.pairing_product
    cos_values: list[float] = []
    if params.delta_a == 0.0 and params.delta_b == 0.0:
        if abs(mu / t) <= 1.0:
            cos_values.append(mu / t)
    else:
        den = t * t - prod
        if abs(den) <= BOUNDARY_ATOL * t * t:
            # radicand linear in cos k
            if mu * t != 0.0:
                cos_values.append((mu * mu + prod) / (2.0 * mu * t))
        else:
            disc = prod * (mu * mu + prod - t * t)
            if disc >= 0.0:
                root = math.sqrt(disc)
                cos_values.extend([(mu * t + root) / den, (mu * t - root) / den])
    kcs: list[float] = []
    for c in cos_values:
        if abs(c) > 1.0 + 1e-12:
            continue
        c = min(1.0, max(-1.0, c))
        for k in _kc_pair(c):
            if all(abs(k - other) > 1e-12 for other in kcs):
                kcs.append(k)
    kcs = [k for k in kcs if abs(dispersion(params, k).epsilon) <= KC_DISPERSION_ATOL]
    kcs.sort()
    chars = tuple(ep_character(params, k) for k in kcs)
    return CriticalMomenta(tuple(kcs), chars)


def ep_character(params: ModelParams, kc: float) -> EpKind:
    """Degeneracy character of a dispersion zero.

    JORDAN_BLOCK when h_{kc} has rank one (the eigenvectors coalesce),
    DIAGONAL_ZERO when h_{kc} vanishes entirely (a nodal point with two
    independent zero modes). For a Jordan block the explicit similarity
    s = [[1, 0], [mu - t cos kc, -i delta_a sin kc]] is additionally checked
    to map h_{kc} onto [[0, 1], [0, 0]] up to an overall scalar; the check
    is skipped when s is singular (delta_a = 0 or sin kc = 0).
    """
    scale = params.scale()
    eps = dispersion(params, kc).epsilon
    if abs(eps) > KC_DISPERSION_ATOL * max(1.0, scale):
        raise ValueError(f"k = {kc} is not a zero of the dispersion (|eps| = {abs(eps):.3e})")
    h = build_bloch(params, kc)
    hmax = float(np.abs(h).max())
    if hmax <= ZERO_MATRIX_ATOL * max(1.0, scale):
        return EpKind.DIAGONAL_ZERO
    s1, s2 = singular_values_2x2(h)
    if s2 / s1 >= EP_RANK_RTOL:
        raise ValueError(
            f"h at k = {kc} is neither rank-deficient nor zero (sv ratio {s2 / s1:.3e})"
        )
    sdet = -1j * params.delta_a * math.sin(kc)
    if abs(sdet) > 1e-9 * max(1.0, scale):
        s = np.array([[1.0, 0.0], [params.mu - params.t * math.cos(kc), sdet]], dtype=complex)
        j = s @ h @ np.linalg.inv(s)
        top = j[0, 1]
        rest = max(abs(j[0, 0]), abs(j[1, 0]), abs(j[1, 1]))
        if abs(top) <= 1e-9 * max(1.0, scale) or rest / abs(top) > 1e-8:
            raise ValueError(f"similarity check failed at k = {kc}")
    return EpKind.JORDAN_BLOCK


def min_gap(params: ModelParams, nk: int) -> MinGapResult:
    """Grid oracle: minimum |eps_k| over real levels and an imaginary flag.

    Scans k_m = 2 pi m / nk without interpolation; callers choose nk.
    """
    if nk < 16:
        raise ValueError(f"nk must be >= 16, got {nk}")
    k = 2.0 * np.pi * np.arange(nk) / nk
    m = params.mu - params.t * np.cos(k)
    rad = m * m + params.pairing_product * np.sin(k) ** 2
    any_imag = bool((rad < 0.0).any())
    real_rad = rad[rad >= 0.0]
    gap = float(2.0 * np.sqrt(real_rad.min())) if real_rad.size else math.inf
    return MinGapResult(gap, any_imag)


def _classify_units(da: float, db: float, mu: float) -> PhaseKind:
    return classify(ModelParams(1.0, mu, da, db)).kind


def boundary_surfaces(resolution: int) -> list[SurfaceSample]:
    """Point samples of the three boundary families, mu/t >= 0 half-space.

    Surface 1: the gapless plane mu/t = 1 over delta_a delta_b > 0.
    Surface 2: mu^2 + delta_a delta_b = t^2 with |mu/t| > 1, bounding the
               coalescing region.
    Surface 3: the delta_a delta_b = 0 planes for |mu/t| < 1.

    All coordinates in units of t. Each sample carries the classification
    of the two points displaced by +-1e-3 along the surface normal.
    """
    if resolution < 8:
        raise ValueError(f"resolution must be >= 8, got {resolution}")
    grid = np.linspace(-2.0, 2.0, 2 * resolution + 1)
    h = 1e-3
    samples: list[SurfaceSample] = []

    for da in grid:
        for db in grid:
            if da * db <= 0.0:
                continue
            lab = _classify_units(da, db, 1.0)
            sep = (_classify_units(da, db, 1.0 - h), _classify_units(da, db, 1.0 + h))
            samples.append(SurfaceSample(1, float(da), float(db), 1.0, lab, sep))

    mus = np.linspace(1.0, 2.0, resolution + 1)[1:]
    for mu in mus:
        for da in grid:
            if da == 0.0:
                continue
            db = (1.0 - mu * mu) / da
            if abs(db) > 2.0:
                continue
            n = np.array([db, da, 2.0 * mu])
            n /= np.linalg.norm(n)
            lab = _classify_units(float(da), float(db), float(mu))
            sep = (
                _classify_units(float(da - h * n[0]), float(db - h * n[1]), float(mu - h * n[2])),
                _classify_units(float(da + h * n[0]), float(db + h * n[1]), float(mu + h * n[2])),
            )
            samples.append(SurfaceSample(2, float(da), float(db), float(mu), lab, sep))

    mus = np.linspace(0.0, 1.0, resolution, endpoint=False)
    for mu in mus:
        for da in grid:
            if da == 0.0:
                continue
            # delta_b = 0 sheet, then delta_a = 0 sheet
            lab = _classify_units(float(da), 0.0, float(mu))
            sep = (_classify_units(float(da), -h, float(mu)), _classify_units(float(da), h, float(mu)))
            samples.append(SurfaceSample(3, float(da), 0.0, float(mu), lab, sep))
            lab = _classify_units(0.0, float(da), float(mu))
            sep = (_classify_units(-h, float(da), float(mu)), _classify_units(h, float(da), float(mu)))
            samples.append(SurfaceSample(3, 0.0, float(da), float(mu), lab, sep))
    return samples
