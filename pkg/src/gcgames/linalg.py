"""Dense real matrix kernels shared by every other module.

Everything here operates on plain ``numpy.ndarray`` objects (row-major,
float64).  Symmetric matrices are passed around as full square arrays; the
helpers :func:`pack_upper` / :func:`unpack_upper` provide the packed
upper-triangle view used by the LMI solver, where symmetry must be structural
rather than asserted.

The symmetric eigensolver is a cyclic Jacobi sweep.  It is deliberately
independent of LAPACK so that certificate re-checks elsewhere in the package
do not share code with the routines they are verifying.  Problems in this
package never exceed roughly 10x10, where Jacobi is both simple and accurate
to near machine precision.
"""

import numpy as np

__all__ = [
    "NumericsError",
    "SingularMatrixError",
    "NotPositiveDefiniteError",
    "ConvergenceError",
    "symmetrize",
    "require_symmetric",
    "pack_upper",
    "unpack_upper",
    "sym_eigendecompose",
    "max_eigenvalue",
    "min_eigenvalue",
    "is_negative_definite",
    "is_positive_definite",
    "cholesky_factor",
    "invert_spd",
    "solve_linear",
    "spectral_radius",
]


class NumericsError(Exception):
    """Base class for numerical failures in the dense kernels."""


class SingularMatrixError(NumericsError):
    """Linear system is singular to working tolerance.

    Carries ``cond``, a cheap estimate of the condition number at the point
    of failure.
    """

    def __init__(self, message, cond=np.inf):
        super().__init__(message)
        self.cond = cond


class NotPositiveDefiniteError(NumericsError):
    """Cholesky factorization hit a non-positive pivot."""


class ConvergenceError(NumericsError):
    """Iteration cap exceeded before reaching the requested tolerance."""


def symmetrize(m):
    """Return the symmetric part (m + m.T)/2 as a new array."""
    m = np.asarray(m, dtype=float)
    return 0.5 * (m + m.T)


def require_symmetric(m, tol=1e-10):
    """Validate symmetry of ``m`` and return it as a float array."""
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    scale = 1.0 + np.abs(m).max(initial=0.0)
    if np.abs(m - m.T).max(initial=0.0) > tol * scale:
        raise ValueError("matrix is not symmetric to tolerance")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def pack_upper(m):
    """Pack the upper triangle of a symmetric matrix into a 1-D vector.

    Entries are ordered row by row: (0,0), (0,1), ..., (0,n-1), (1,1), ...
    """
    m = np.asarray(m, dtype=float)
    n = m.shape[0]
    iu = np.triu_indices(n)
    return m[iu].copy()


def unpack_upper(vec, n):
    """Inverse of :func:`pack_upper`: rebuild the full symmetric matrix."""
    vec = np.asarray(vec, dtype=float)
    out = np.zeros((n, n))
    iu = np.triu_indices(n)
    out[iu] = vec
    out = out + np.triu(out, 1).T
    return out


def sym_eigendecompose(m, max_sweeps=60):
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Parameters
    ----------
    m : (n, n) array
        Symmetric matrix with finite entries.
    max_sweeps : int
        Cap on full off-diagonal sweeps before giving up.

    Returns
    -------
    eigenvalues : (n,) array, ascending
    eigenvectors : (n, n) array
        Orthogonal; column j pairs with eigenvalue j, so
        ``V @ diag(w) @ V.T`` reconstructs ``m``.
    """
    a = require_symmetric(m).copy()
    n = a.shape[0]
    v = np.eye(n)
    if n == 1:
        return a[0, :1].copy(), v

    scale = np.abs(a).max(initial=0.0)
    if scale == 0.0:
        return np.zeros(n), v
    tol = 1e-16 * n * scale

    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.triu(a, 1) ** 2))
        if off <= tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-18 * scale:
                    continue
                # classic two-sided rotation, Rutishauser's stable formulas
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta == 0.0:
                    t = 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rot_p = c * a[:, p] - s * a[:, q]
                rot_q = s * a[:, p] + c * a[:, q]
                a[:, p], a[:, q] = rot_p, rot_q
                rot_p = c * a[p, :] - s * a[q, :]
                rot_q = s * a[p, :] + c * a[q, :]
                a[p, :], a[q, :] = rot_p, rot_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                rot_p = c * v[:, p] - s * v[:, q]
                rot_q = s * v[:, p] + c * v[:, q]
                v[:, p], v[:, q] = rot_p, rot_q
    else:
        raise ConvergenceError(
            f"Jacobi eigensolver did not converge in {max_sweeps} sweeps "
            f"(off-diagonal norm {off:.3e})"
        )

    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def max_eigenvalue(m):
    """Largest eigenvalue of a symmetric matrix (Jacobi-based)."""
    w, _ = sym_eigendecompose(m)
    return float(w[-1])


def min_eigenvalue(m):
    """Smallest eigenvalue of a symmetric matrix (Jacobi-based)."""
    w, _ = sym_eigendecompose(m)
    return float(w[0])


def is_negative_definite(m, margin=0.0):
    """True iff every eigenvalue of symmetric ``m`` is below ``-margin``."""
    if margin < 0:
        raise ValueError("margin must be nonnegative")
    return max_eigenvalue(m) < -margin


def is_positive_definite(m, margin=0.0):
    """True iff every eigenvalue of symmetric ``m`` exceeds ``margin``."""
    if margin < 0:
        raise ValueError("margin must be nonnegative")
    return min_eigenvalue(m) > margin


def cholesky_factor(m):
    """Lower-triangular L with L L^T = m for symmetric positive definite m.

    Raises :class:`NotPositiveDefiniteError` when a pivot is not strictly
    positive, which doubles as the package's SPD test.
    """
    a = require_symmetric(m)
    n = a.shape[0]
    L = np.zeros((n, n))
    for j in range(n):
        d = a[j, j] - np.dot(L[j, :j], L[j, :j])
        if d <= 0.0 or not np.isfinite(d):
            raise NotPositiveDefiniteError(
                f"pivot {j} is {d:.3e}; matrix is not positive definite"
            )
        L[j, j] = np.sqrt(d)
        for i in range(j + 1, n):
            L[i, j] = (a[i, j] - np.dot(L[i, :j], L[j, :j])) / L[j, j]
    return L


def _forward_substitute(L, b):
    n = L.shape[0]
    x = np.array(b, dtype=float, copy=True)
    for i in range(n):
        x[i] -= L[i, :i] @ x[:i]
        x[i] /= L[i, i]
    return x


def _back_substitute(U, b):
    n = U.shape[0]
    x = np.array(b, dtype=float, copy=True)
    for i in range(n - 1, -1, -1):
        x[i] -= U[i, i + 1:] @ x[i + 1:]
        x[i] /= U[i, i]
    return x


def invert_spd(m):
    """Inverse of a symmetric positive definite matrix via Cholesky."""
    L = cholesky_factor(m)
    n = L.shape[0]
    inv = np.empty((n, n))
    eye = np.eye(n)
    for j in range(n):
        y = _forward_substitute(L, eye[:, j])
        inv[:, j] = _back_substitute(L.T, y)
    return symmetrize(inv)


def solve_linear(a, b):
    """Solve a x = b for square numerically nonsingular ``a``.

    Raises :class:`SingularMatrixError` with a condition estimate when the
    system is singular to tolerance (relative SVD threshold 1e-12).
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"coefficient matrix must be square, got {a.shape}")
    sv = np.linalg.svd(a, compute_uv=False)
    if sv[0] == 0.0 or sv[-1] <= 1e-12 * sv[0]:
        cond = np.inf if sv[-1] == 0.0 else float(sv[0] / sv[-1])
        raise SingularMatrixError(
            f"matrix singular to tolerance (cond ~ {cond:.3e})", cond=cond
        )
    return np.linalg.solve(a, b)


def spectral_radius(a):
    """max |eigenvalue| of a square (not necessarily symmetric) matrix."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] == 0:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvals(a))))
