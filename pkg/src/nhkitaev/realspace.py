"""Open-chain matrices, Majorana ladder, zero modes and edge profiles.

Single-particle convention: every 2N x 2N matrix here represents the adjoint
action of the quadratic Hamiltonian on coefficient vectors of linear
operators, [H, sum_i w_i O_i] = sum_i (M w)_i O_i. Zero modes are then
literally kernel vectors, and statements like [f_N, H] = 0 become
matrix-vector residuals.

Bases:
  h_nonhermitian  operators expanded in (c^dag_1..c^dag_N, c_1..c_N) under
                  the imbalanced Hamiltonian; non-Hermitian for
                  delta_a != delta_b.
  h_counterpart   same expansion under the Hermitian counterpart, i.e. the
                  balanced chain with pairing sqrt(delta_a delta_b).
  m_majorana      the counterpart in the Majorana basis
                  (a_1, b_1, ..., a_N, b_N); built as i times a real
                  antisymmetric matrix with couplings 2 mu on a rung and
                  t +- sqrt(delta_a delta_b) along the staggered legs.

The spectra of all three coincide: h_nonhermitian is mapped onto
h_counterpart by the diagonal rescaling S = diag(s .. s, 1/s .. 1/s) with
s^2 = sqrt(delta_a delta_b)/delta_a, and the Majorana transformation is a
fixed change of basis.
"""

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .model import ModelParams
from .numerics import eigh, singular_values_2x2

ISOSPECTRAL_ATOL = 1e-12
MIDGAP_TOL = 1e-6


class AnalyticCaseError(ValueError):
    """Raised outside the closed-form zero-mode regime."""


class ZeroModeKind(Enum):
    MAJORANA_PLUS = "majorana_plus"
    MAJORANA_MINUS = "majorana_minus"
    FERMIONIC = "fermionic"
    CANONICAL_BAR = "canonical_bar"
    CANONICAL = "canonical"


@dataclass(frozen=True)
class OpenChainSystem:
    n_sites: int
    params: ModelParams
    h_nonhermitian: np.ndarray
    h_counterpart: np.ndarray
    m_majorana: np.ndarray


@dataclass(frozen=True)
class ZeroModeVector:
    """Coefficients of a zero-mode operator in its stated basis.

    Majorana kinds live in the (a_1, b_1, ..., a_N, b_N) basis, the
    fermionic and canonical kinds in (c^dag_1..c^dag_N, c_1..c_N).
    ``normalization`` records the geometric sum used to normalize,
    Omega' = sum_j x^{2(j-1)} with x = mu/t.
    """

    coefficients: np.ndarray
    normalization: float
    kind: ZeroModeKind


@dataclass(frozen=True)
class EdgeProfile:
    amplitudes_left: np.ndarray
    amplitudes_right: np.ndarray
    decay_ratio: float


def omega_constants(x: float, n_sites: int) -> tuple[float, float]:
    """(Omega, Omega') for decay ratio x: sum of x^{j-1} and of x^{2(j-1)}."""
    js = np.arange(n_sites)
    return float(np.sum(x ** js)), float(np.sum(x ** (2 * js)))


def _shift(n: int) -> np.ndarray:
    return np.diag(np.ones(n - 1), -1)


def build_system(params: ModelParams, n_sites: int) -> OpenChainSystem:
    """Open-boundary adjoint-action matrices (c_{N+1} = 0).

    Requires delta_a delta_b > 0, where sqrt(delta_a delta_b) is real and
    the Hermitian counterpart exists.
    """
    if n_sites < 2:
        raise ValueError(f"n_sites must be >= 2, got {n_sites}")
    prod = params.pairing_product
    if prod <= 0.0:
        raise ValueError(f"open-chain systems require delta_a * delta_b > 0, got {prod}")
    n = n_sites
    t, mu = params.t, params.mu
    delta = math.sqrt(prod)
    s = _shift(n)
    hop = 2.0 * mu * np.eye(n) - t * (s + s.T)
    pair = s - s.T
    h_cp = np.block([[hop, delta * pair], [-delta * pair, -hop]]).astype(complex)
    h_nh = np.block(
        [[hop, params.delta_a * pair], [-params.delta_b * pair, -hop]]
    ).astype(complex)
    w = np.zeros((2 * n, 2 * n))
    for j in range(n):
        w[2 * j, 2 * j + 1] = -2.0 * mu          # a_j -- b_j rung
    for j in range(n - 1):
        w[2 * j + 1, 2 * j + 2] = -(t + delta)   # b_j -- a_{j+1}
        w[2 * j + 3, 2 * j] = -(t - delta)       # b_{j+1} -- a_j
    w = w - w.T
    return OpenChainSystem(n, params, h_nh, h_cp, 1j * w)


def similarity_scaling(params: ModelParams, n_sites: int) -> np.ndarray:
    """Diagonal of S with S h_nonhermitian S^{-1} = h_counterpart."""
    prod = params.pairing_product
    if prod <= 0.0:
        raise ValueError(f"similarity scaling requires delta_a * delta_b > 0, got {prod}")
    s = cmath.sqrt(math.sqrt(prod) / params.delta_a)
    return np.concatenate(
        [np.full(n_sites, s, dtype=complex), np.full(n_sites, 1.0 / s, dtype=complex)]
    )


def isospectral_check(params: ModelParams, n_sites: int) -> float:
    """max |S h_nonhermitian S^{-1} - h_counterpart| for the diagonal S."""
    sys = build_system(params, n_sites)
    d = similarity_scaling(params, n_sites)
    conj = (d[:, None] * sys.h_nonhermitian) * (1.0 / d)[None, :]
    return float(np.abs(conj - sys.h_counterpart).max())


def open_spectrum(system: OpenChainSystem, physical_units: bool = False) -> np.ndarray:
    """All 2N eigenvalues of the Majorana ladder, ascending.

    m_majorana is Hermitian (i times real antisymmetric), so the spectrum is
    real and comes in +- pairs. The default energy unit keeps the ladder
    couplings t +- sqrt(delta_a delta_b) and 2 mu as built; with
    ``physical_units`` the values are divided by 4, the coefficient scale of
    the quadratic form itself.
    """
    vals = eigh(system.m_majorana).values
    return vals / 4.0 if physical_units else vals


def _analytic_case_guard(params: ModelParams, n_sites: int) -> float:
    """Validate the closed-form regime; returns the decay ratio mu/t."""
    if n_sites < 2:
        raise ValueError(f"n_sites must be >= 2, got {n_sites}")
    prod = params.pairing_product
    if prod <= 0.0:
        raise AnalyticCaseError(f"closed-form zero modes require delta_a * delta_b > 0, got {prod}")
    if params.t <= 0.0 or abs(math.sqrt(prod) - params.t) > 1e-12 * params.scale():
        raise AnalyticCaseError(
            "closed-form zero modes exist only for sqrt(delta_a delta_b) = t "
            f"with t > 0; got t = {params.t}, sqrt(product) = {math.sqrt(prod)}"
        )
    x = params.mu / params.t
    if abs(x) >= 1.0:
        raise AnalyticCaseError(f"no zero mode for |mu/t| >= 1 (mu/t = {x})")
    return x


def zero_mode_f(params: ModelParams, n_sites: int):
    """Combined Majorana zero modes f_+, f_- and the fermionic f_N.

    In the SSH-reduced case sqrt(delta_a delta_b) = t the zero modes are the
    geometric combinations f_+ = sum_j x^{j-1} a_j and
    f_- = sum_j x^{N-j} b_j with x = mu/t, normalized by sqrt(Omega') so
    that f_+-^2 = 1. f_N = (f_+ - i f_-)/2 is returned in the
    (c^dag, c) basis.
    """
    x = _analytic_case_guard(params, n_sites)
    n = n_sites
    _, omega_p = omega_constants(x, n)
    norm = 1.0 / math.sqrt(omega_p)
    js = np.arange(n)
    fp = np.zeros(2 * n, dtype=complex)
    fp[2 * js] = norm * x ** js
    fm = np.zeros(2 * n, dtype=complex)
    fm[2 * js + 1] = norm * x ** (n - 1 - js)
    # f_N = (f_+ - i f_-)/2 rewritten on (c^dag, c): a_j = c^dag_j + c_j,
    # b_j = -i (c^dag_j - c_j)
    u = 0.5 * norm * (x ** js - x ** (n - 1 - js))
    v = 0.5 * norm * (x ** js + x ** (n - 1 - js))
    fn = np.concatenate([u, v]).astype(complex)
    return (
        ZeroModeVector(fp, omega_p, ZeroModeKind.MAJORANA_PLUS),
        ZeroModeVector(fm, omega_p, ZeroModeKind.MAJORANA_MINUS),
        ZeroModeVector(fn, omega_p, ZeroModeKind.FERMIONIC),
    )


def canonical_zero_modes(params: ModelParams, n_sites: int):
    """The canonical zero-mode pair of the imbalanced open chain.

    Obtained from f_N by the equivalence between the chain and its Hermitian
    counterpart: the (c^dag, c) coefficients acquire the canonical rescaling
    weights (delta_a/delta_b)^{1/4} and (delta_b/delta_a)^{1/4}. The pair
    satisfies {F_N, Fbar_N} = 1 and both vectors lie in the kernel of
    h_nonhermitian up to a residual of order (mu/t)^N.
    """
    x = _analytic_case_guard(params, n_sites)
    n = n_sites
    _, omega_p = omega_constants(x, n)
    norm = 0.5 / math.sqrt(omega_p)
    lam = cmath.sqrt(cmath.sqrt(params.pairing_product + 0j) / params.delta_a)
    js = np.arange(n)
    grow = x ** js
    fall = x ** (n - 1 - js)
    bar = np.concatenate([(grow + fall) / lam, lam * (grow - fall)]) * norm
    plain = np.concatenate([(grow - fall) / lam, lam * (grow + fall)]) * norm
    return (
        ZeroModeVector(bar.astype(complex), omega_p, ZeroModeKind.CANONICAL_BAR),
        ZeroModeVector(plain.astype(complex), omega_p, ZeroModeKind.CANONICAL),
    )


def canonical_bracket(a: np.ndarray, b: np.ndarray) -> complex:
    """{A, B} for operators with (c^dag, c) coefficient vectors a and b."""
    n = a.size // 2
    return complex(a[:n] @ b[n:] + a[n:] @ b[:n])


def majorana_bracket(a: np.ndarray, b: np.ndarray) -> complex:
    """{A, B} for operators with Majorana coefficient vectors ({g_i,g_j} = 2 delta)."""
    return complex(2.0 * (a @ b))


def edge_states(params: ModelParams, n_sites: int) -> EdgeProfile:
    """Site profiles of the left and right edge-mode states.

    The left state is the geometric profile
    sqrt(delta_b / (2 Omega delta_a)) x^{j-1} with x = mu/t and
    Omega = (x^N - 1)/(x - 1); the right state is its site reversal.
    """
    x = _analytic_case_guard(params, n_sites)
    omega, _ = omega_constants(x, n_sites)
    pref = math.sqrt(params.delta_b / (2.0 * omega * params.delta_a))
    left = pref * x ** np.arange(n_sites)
    return EdgeProfile(left, left[::-1].copy(), x)


def kernel_overlap(params: ModelParams, n_sites: int) -> float:
    """Alignment of span{psi_L, psi_R} with the numerical near-kernel.

    Embeds the two edge profiles as counterpart zero-mode coefficient
    vectors, (g, g) and (g-reversed, -g-reversed), takes the two
    smallest-|E| eigenvectors of h_counterpart, and returns the smallest
    singular value of the 2x2 overlap matrix (the cosine of the largest
    principal angle between the subspaces).
    """
    x = _analytic_case_guard(params, n_sites)
    sys = build_system(params, n_sites)
    g = x ** np.arange(n_sites)
    z_left = np.concatenate([g, g]).astype(complex)
    z_left /= np.linalg.norm(z_left)
    gr = g[::-1]
    z_right = np.concatenate([gr, -gr]).astype(complex)
    z_right /= np.linalg.norm(z_right)
    dec = eigh(sys.h_counterpart)
    order = np.argsort(np.abs(dec.values), kind="stable")
    v = dec.vectors[:, order[:2]]
    z = np.stack([z_left, z_right], axis=1)
    overlap = z.conj().T @ v
    return singular_values_2x2(overlap)[1]
