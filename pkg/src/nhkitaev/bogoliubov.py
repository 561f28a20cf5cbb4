"""Complex Bogoliubov coefficients and the closed-chain ground-state energy.

The pairing sector at momentum k is diagonalized by the complex Bogoliubov
coefficients

    xi  = sgn(sin k) sqrt(mu - t cos k + r) / sqrt(2 r),
    eta = |sin k| sqrt(delta_a delta_b) / (sqrt(2 r) sqrt(r + mu - t cos k)),

with r = eps_k / 2 on the principal branch. They close canonically,
xi^2 + eta^2 = 1, for every admissible momentum, in both the real- and the
imaginary-level regime. Each square root is taken on the principal branch
factor by factor; with that branch choice the imaginary-level relation
conj(xi) = sgn(sin k) eta holds as an identity.
"""

import cmath
import math
from dataclasses import dataclass
from enum import Enum

from .model import ModelParams, dispersion, radicand
from .numerics import principal_sqrt
from .phases import broken_symmetry_test

COEFF_REALITY_ATOL = 1e-10
BROKEN_RELATION_ATOL = 1e-8
EP_ATOL = 1e-9
PAIRING_NODE_ATOL = 1e-12


class LevelKind(Enum):
    REAL_LEVEL = "real_level"
    IMAGINARY_LEVEL = "imaginary_level"


@dataclass(frozen=True)
class BogoliubovCoefficients:
    xi: complex
    eta: complex
    k: float
    level_real: bool


@dataclass(frozen=True)
class GroundStateEnergy:
    """-(1/2) sum_k eps_k over the closed-chain momentum grid.

    ``ep_momenta`` flags grid momenta where the dispersion vanishes (their
    contribution is zero but the degeneracy is not silently dropped).
    """

    value: complex
    n_sites: int
    ep_momenta: tuple[float, ...]


def coefficients(params: ModelParams, k: float) -> BogoliubovCoefficients:
    """Bogoliubov pair (xi, eta) at momentum k.

    k in {0, pi} is rejected: the pairing term vanishes there and the mode
    is a bare fermion of energy 2(mu - t cos k), handled by callers.
    Degenerate momenta (eps_k = 0) and vanishing pairing products are also
    rejected.
    """
    sk = math.sin(k)
    if abs(sk) < PAIRING_NODE_ATOL:
        raise ValueError(
            f"k = {k} carries no pairing (sin k = 0); the mode is a bare fermion"
        )
    if params.pairing_product == 0.0:
        raise ValueError("coefficients require delta_a * delta_b != 0")
    scale = max(1.0, params.scale())
    r = principal_sqrt(radicand(params, k))
    if abs(r) < EP_ATOL * scale:
        raise ValueError(f"k = {k} is an exceptional momentum (eps_k = 0)")
    m = params.mu - params.t * math.cos(k)
    sqrt_2r = cmath.sqrt(2.0 * r)
    xi = math.copysign(1.0, sk) * cmath.sqrt(m + r) / sqrt_2r
    eta = abs(sk) * principal_sqrt(params.pairing_product) / (sqrt_2r * cmath.sqrt(r + m))
    return BogoliubovCoefficients(xi, eta, k, dispersion(params, k).is_real)


def symmetry_indicator(params: ModelParams, k: float) -> LevelKind:
    """Reality class of the quasiparticle level at k.

    REAL_LEVEL follows the reality of eps_k itself. For delta_a delta_b > 0
    a real level also makes xi and eta individually real; for an imaginary
    level the broken-region relation conj(xi) = sgn(sin k) eta is verified
    before returning.
    """
    c = coefficients(params, k)
    if c.level_real:
        if params.pairing_product > 0.0:
            dev = max(abs(c.xi.imag), abs(c.eta.imag))
            if dev > COEFF_REALITY_ATOL * max(1.0, abs(c.xi), abs(c.eta)):
                raise AssertionError(
                    f"real level at k = {k} produced complex coefficients (dev {dev:.3e})"
                )
        return LevelKind.REAL_LEVEL
    rel = abs(c.xi.conjugate() - math.copysign(1.0, math.sin(k)) * c.eta)
    if rel > BROKEN_RELATION_ATOL * max(1.0, abs(c.eta)):
        raise AssertionError(
            f"broken-region relation violated at k = {k} (deviation {rel:.3e})"
        )
    return LevelKind.IMAGINARY_LEVEL


def ground_state_energy(params: ModelParams, n_sites: int) -> GroundStateEnergy:
    """Ground-state energy of the closed chain from the diagonal form.

    Sums -eps_k/2 over k_m = 2 pi m / n_sites. At k in {0, pi} the pairing
    vanishes and the bare mode of energy 2(mu - t cos k) enters with the
    occupation that minimizes the energy, which is exactly the -|.|
    contribution the principal-branch dispersion already produces. In the
    broken region some eps_k are positive imaginary and the total acquires
    a negative imaginary part.
    """
    if n_sites < 2:
        raise ValueError(f"n_sites must be >= 2, got {n_sites}")
    scale = max(1.0, params.scale())
    total = 0.0 + 0.0j
    flagged: list[float] = []
    for m in range(n_sites):
        k = 2.0 * math.pi * m / n_sites
        eps = dispersion(params, k).epsilon
        if abs(eps) < EP_ATOL * scale:
            flagged.append(k)
        total -= 0.5 * eps
    return GroundStateEnergy(total, n_sites, tuple(flagged))
