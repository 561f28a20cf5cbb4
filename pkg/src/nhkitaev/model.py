"""Momentum-space building blocks of the Kitaev chain with imbalanced pairing.

The chain couples N spinless fermion sites with hopping t, chemical potential
mu, and p-wave pair creation/annihilation of unequal strengths delta_a and
delta_b. In the Nambu basis (c_k, c^dag_{-k}) every momentum sector is
governed by the 2x2 core matrix

    h_k = [[mu - t cos k,  -i delta_a sin k],
           [i delta_b sin k,  -mu + t cos k]],

which is non-Hermitian whenever delta_a != delta_b. This module provides
h_k, its d-vector decomposition, the complex quasiparticle dispersion, and
the Hermitian counterpart reached by a diagonal similarity transformation.
"""

from dataclasses import dataclass
from math import cos, isfinite, sin

import numpy as np

from .numerics import principal_sqrt

REALITY_RTOL = 1e-10

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


@dataclass(frozen=True)
class ModelParams:
    """The four real couplings (t, mu, delta_a, delta_b) of the chain.

    t = 0 is rejected: every phase-boundary condition is expressed in units
    of t.
    """

    t: float
    mu: float
    delta_a: float
    delta_b: float

    def __post_init__(self):
        for name in ("t", "mu", "delta_a", "delta_b"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or not isfinite(v):
                raise ValueError(f"{name} must be a finite real number, got {v!r}")
        if self.t == 0.0:
            raise ValueError("t must be nonzero (couplings are measured in units of t)")

    @property
    def pairing_product(self) -> float:
        return self.delta_a * self.delta_b

    def scale(self) -> float:
        return max(abs(self.t), abs(self.mu), abs(self.delta_a), abs(self.delta_b))


@dataclass(frozen=True)
class DVector3:
    """Complex vector field d(k) with h_k = d . sigma."""

    dx: complex
    dy: complex
    dz: complex

    def as_array(self) -> np.ndarray:
        return np.array([self.dx, self.dy, self.dz], dtype=complex)

    def dot_sigma(self) -> np.ndarray:
        return self.dx * SIGMA_X + self.dy * SIGMA_Y + self.dz * SIGMA_Z


@dataclass(frozen=True)
class Dispersion:
    """Quasiparticle energy eps_k on the principal branch.

    eps lies on the closed non-negative real axis or the open positive
    imaginary axis; ``is_real`` classifies which.
    """

    epsilon: complex
    is_real: bool


def radicand(params: ModelParams, k: float) -> float:
    """(mu - t cos k)^2 + delta_a delta_b sin^2 k, the square of eps_k/2."""
    m = params.mu - params.t * cos(k)
    return m * m + params.pairing_product * sin(k) ** 2


def build_bloch(params: ModelParams, k: float) -> np.ndarray:
    """Core matrix h_k in the Nambu basis (c_k, c^dag_{-k})."""
    dz = params.mu - params.t * cos(k)
    sk = sin(k)
    return np.array(
        [[dz, -1j * params.delta_a * sk],
         [1j * params.delta_b * sk, -dz]],
        dtype=complex,
    )


def d_vector(params: ModelParams, k: float) -> DVector3:
    """Decomposition h_k = d(k) . sigma.

    dx is purely imaginary (or zero) for real k; the imbalance delta_a -
    delta_b enters only through dx.
    """
    sk = sin(k)
    return DVector3(
        dx=-0.5j * (params.delta_a - params.delta_b) * sk,
        dy=0.5 * (params.delta_a + params.delta_b) * sk,
        dz=complex(params.mu - params.t * cos(k)),
    )


def dispersion(params: ModelParams, k: float) -> Dispersion:
    """eps_k = 2 sqrt((mu - t cos k)^2 + delta_a delta_b sin^2 k).

    The principal branch makes eps_k real non-negative for a non-negative
    radicand and positive imaginary otherwise; +-eps_k/2 are the two
    eigenvalues of h_k.
    """
    eps = 2.0 * principal_sqrt(radicand(params, k))
    is_real = abs(eps.imag) <= REALITY_RTOL * max(1.0, abs(eps))
    return Dispersion(eps, is_real)


def hermitian_counterpart_bloch(params: ModelParams, k: float) -> np.ndarray:
    """Hermitian matrix with the same spectrum as h_k.

    Defined only for delta_a delta_b > 0, where sqrt(delta_a delta_b) is
    real and h_k is similar to a Hermitian matrix.
    """
    prod = params.pairing_product
    if prod <= 0.0:
        raise ValueError(
            "Hermitian counterpart requires delta_a * delta_b > 0, "
            f"got {prod}"
        )
    dz = params.mu - params.t * cos(k)
    g = np.sqrt(prod) * sin(k)
    return np.array([[dz, -1j * g], [1j * g, -dz]], dtype=complex)


def similarity_transform(params: ModelParams) -> np.ndarray:
    """Diagonal U with U h_k U^{-1} equal to the Hermitian counterpart.

    U = diag(s, 1/s) with s^2 = sqrt(delta_a delta_b)/delta_a. For
    delta_a, delta_b > 0 this is the real rescaling
    diag((delta_b/delta_a)^{1/4}, (delta_a/delta_b)^{1/4}); for a negative
    pair the entries pick up a factor i so that the conjugation identity
    still holds exactly.
    """
    prod = params.pairing_product
    if prod <= 0.0:
        raise ValueError(
            "similarity transform requires delta_a * delta_b > 0, "
            f"got {prod}"
        )
    s = np.sqrt(np.sqrt(prod) / params.delta_a + 0j)
    return np.array([[s, 0.0], [0.0, 1.0 / s]], dtype=complex)
