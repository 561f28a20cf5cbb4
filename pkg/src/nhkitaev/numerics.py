"""Self-contained dense linear algebra used by the rest of the package.

The only nontrivial kernel is a complex Hermitian eigensolver built the
classical way: Householder reduction to a real symmetric tridiagonal matrix
(with phase absorption of the complex sub-diagonal), followed by
implicit-shift QL iteration with accumulation of the transformations.
``numpy.linalg`` eigensolvers are deliberately not used here; they serve as
an independent oracle in the test suite only.
"""

from dataclasses import dataclass, field

import numpy as np

MAX_DIMENSION = 1024
HERMITICITY_ATOL = 1e-12
OFFDIAG_DEFLATION_RTOL = 1e-14
MAX_SWEEPS_PER_EIGENVALUE = 30


class NonConvergenceError(RuntimeError):
    """Raised when the QL iteration exceeds its sweep budget."""


def principal_sqrt(x: float) -> complex:
    """Principal square root of a real number.

    Non-negative input gives the non-negative real root, negative input the
    positive-imaginary root.
    """
    if x >= 0.0:
        return complex(np.sqrt(x), 0.0)
    return complex(0.0, np.sqrt(-x))


@dataclass(frozen=True)
class DenseHermitian:
    """A dense Hermitian matrix, symmetrized at construction.

    The asymmetry defect ``max|A - A^H|`` of the input is recorded; inputs
    with a defect above ``HERMITICITY_ATOL`` (relative to the largest entry)
    are rejected.
    """

    entries: np.ndarray
    asymmetry_defect: float = field(default=0.0)

    def __init__(self, entries):
        a = np.asarray(entries, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {a.shape}")
        if a.shape[0] > MAX_DIMENSION:
            raise ValueError(f"dimension {a.shape[0]} exceeds cap {MAX_DIMENSION}")
        defect = float(np.abs(a - a.conj().T).max()) if a.size else 0.0
        scale = max(1.0, float(np.abs(a).max())) if a.size else 1.0
        if defect > HERMITICITY_ATOL * scale:
            raise ValueError(f"matrix is not Hermitian: defect {defect:.3e}")
        object.__setattr__(self, "entries", 0.5 * (a + a.conj().T))
        object.__setattr__(self, "asymmetry_defect", defect)

    @property
    def dimension(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues (ascending) and orthonormal eigenvector columns."""

    values: np.ndarray
    vectors: np.ndarray


def _tridiagonalize(a: np.ndarray):
    """Householder reduction A -> Q T Q^H with T real symmetric tridiagonal.

    Returns (d, e, q): diagonal, sub-diagonal and the accumulated unitary.
    """
    a = a.copy()
    n = a.shape[0]
    q = np.eye(n, dtype=complex)
    for k in range(n - 2):
        x = a[k + 1:, k]
        nx = np.linalg.norm(x)
        if nx == 0.0:
            continue
        ph = x[0] / abs(x[0]) if abs(x[0]) > 0.0 else 1.0
        v = x.copy()
        v[0] += ph * nx
        nv = np.linalg.norm(v)
        if nv == 0.0:
            continue
        v /= nv
        # two-sided reflector on the trailing block: P A P with P = 1 - 2 v v^H
        sub = a[k + 1:, k + 1:]
        w = sub @ v
        w -= np.vdot(v, w) * v
        sub -= 2.0 * np.outer(v, w.conj()) + 2.0 * np.outer(w, v.conj())
        a[k + 1:, k] = 0.0
        a[k + 1, k] = -ph * nx
        a[k, k + 1:] = 0.0
        a[k, k + 1] = np.conj(-ph * nx)
        qsub = q[:, k + 1:]
        qsub -= 2.0 * np.outer(qsub @ v, v.conj())
    d = a.diagonal().real.copy()
    e = np.zeros(n - 1) if n > 1 else np.zeros(0)
    # absorb the residual phases of the sub-diagonal into the basis columns
    phase = 1.0 + 0.0j
    for j in range(n - 1):
        b = a[j + 1, j]
        ab = abs(b)
        e[j] = ab
        if ab > 0.0:
            phase = phase * (b / ab)
        q[:, j + 1] *= phase
    return d, e, q


def _ql_implicit(d: np.ndarray, e: np.ndarray, q: np.ndarray):
    """Implicit-shift QL on a real symmetric tridiagonal matrix.

    Rotations are accumulated into the columns of ``q``. Follows the classic
    tql2 recursion; deflation at OFFDIAG_DEFLATION_RTOL relative size.
    """
    n = d.size
    d = d.copy()
    e = np.append(e.copy(), 0.0)
    for l in range(n):
        for sweep in range(MAX_SWEEPS_PER_EIGENVALUE + 1):
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= OFFDIAG_DEFLATION_RTOL * dd:
                    break
                m += 1
            if m == l:
                break
            if sweep == MAX_SWEEPS_PER_EIGENVALUE:
                raise NonConvergenceError(
                    f"QL iteration did not converge for eigenvalue {l}"
                )
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = np.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + (r if g >= 0.0 else -r))
            s = c = 1.0
            p = 0.0
            underflow = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = np.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                col = q[:, i + 1].copy()
                q[:, i + 1] = s * q[:, i] + c * col
                q[:, i] = c * q[:, i] - s * col
            if not underflow:
                d[l] -= p
                e[l] = g
                e[m] = 0.0
    return d, q


def eigh(matrix) -> EigenDecomposition:
    """Diagonalize a Hermitian matrix.

    Parameters
    ----------
    matrix : DenseHermitian or array_like
        Array input is validated and symmetrized via ``DenseHermitian``.

    Returns
    -------
    EigenDecomposition
        Eigenvalues ascending; eigenvector columns orthonormal, each with a
        deterministic phase (largest-magnitude component real positive).

    Raises
    ------
    NonConvergenceError
        If the QL iteration exceeds 30 sweeps for some eigenvalue.
    """
    if not isinstance(matrix, DenseHermitian):
        matrix = DenseHermitian(matrix)
    a = matrix.entries
    n = a.shape[0]
    if n == 0:
        return EigenDecomposition(np.zeros(0), np.zeros((0, 0), dtype=complex))
    if n == 1:
        return EigenDecomposition(a.diagonal().real.copy(), np.eye(1, dtype=complex))
    d, e, q = _tridiagonalize(a)
    vals, vecs = _ql_implicit(d, e, q)
    order = np.argsort(vals, kind="stable")
    vals = vals[order]
    vecs = vecs[:, order]
    for j in range(n):
        i = int(np.argmax(np.abs(vecs[:, j])))
        piv = vecs[i, j]
        if abs(piv) > 0.0:
            vecs[:, j] *= np.conj(piv) / abs(piv)
    return EigenDecomposition(vals, vecs)


@dataclass(frozen=True)
class Eig2Result:
    """Closed-form eigendecomposition of a 2x2 complex matrix."""

    values: np.ndarray     # two complex eigenvalues
    vectors: np.ndarray    # columns, normalized; parallel when defective
    defective: bool


DEFECTIVE_ANGLE_TOL = 1e-8


def eig2_complex(matrix) -> Eig2Result:
    """Eigenvalues and eigenvectors of a 2x2 complex matrix in closed form.

    Uses the quadratic formula with the principal branch of the discriminant
    root. Near-defective matrices (eigenvector angle below 1e-8) are flagged,
    never treated as an error.
    """
    m = np.asarray(matrix, dtype=complex)
    if m.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got {m.shape}")
    tr = m[0, 0] + m[1, 1]
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    disc = np.sqrt(tr * tr - 4.0 * det + 0j)
    lam = np.array([(tr - disc) / 2.0, (tr + disc) / 2.0])
    scale = max(float(np.abs(m).max()), 1e-300)
    vecs = np.zeros((2, 2), dtype=complex)
    for j, lj in enumerate(lam):
        # kernel of (m - lam): take the better-conditioned row
        r0 = np.array([m[0, 0] - lj, m[0, 1]])
        r1 = np.array([m[1, 0], m[1, 1] - lj])
        if np.linalg.norm(r0) >= np.linalg.norm(r1):
            v = np.array([-r0[1], r0[0]])
        else:
            v = np.array([-r1[1], r1[0]])
        nv = np.linalg.norm(v)
        if nv <= 1e-14 * scale:
            v = np.array([1.0, 0.0], dtype=complex) if j == 0 else np.array([0.0, 1.0], dtype=complex)
            nv = 1.0
        vecs[:, j] = v / nv
    sine = abs(vecs[0, 0] * vecs[1, 1] - vecs[1, 0] * vecs[0, 1])
    return Eig2Result(lam, vecs, bool(sine < DEFECTIVE_ANGLE_TOL))


def singular_values_2x2(matrix) -> tuple[float, float]:
    """Singular values (descending) of a 2x2 complex matrix, closed form."""
    m = np.asarray(matrix, dtype=complex)
    if m.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got {m.shape}")
    g = m.conj().T @ m
    half_tr = 0.5 * g.trace().real
    det = (g[0, 0] * g[1, 1] - g[0, 1] * g[1, 0]).real
    gap = np.sqrt(max(half_tr * half_tr - det, 0.0))
    s1 = np.sqrt(max(half_tr + gap, 0.0))
    s2 = np.sqrt(max(half_tr - gap, 0.0))
    return float(s1), float(s2)
