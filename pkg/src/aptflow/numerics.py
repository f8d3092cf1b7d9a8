"""Small dense complex linear algebra used throughout the package.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``. Density
matrices are the same arrays; :func:`check_density_matrix` enforces the usual
physical constraints where a function needs them.
"""
from __future__ import annotations

import math
from functools import reduce
from typing import Sequence

import numpy as np

from .exceptions import DimensionError, NormalizationError, SymmetryError

HERMITIAN_TOL = 1e-10
DENSITY_HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
JACOBI_OFFDIAG_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100
EXPM_TERM_TOL = 1e-16

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)

PAULIS = {"I": I2, "X": SIGMA_X, "Y": SIGMA_Y, "Z": SIGMA_Z}


def as_matrix(m) -> np.ndarray:
    """Coerce to a finite 2-d complex array."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise DimensionError(f"expected a 2-d matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.transpose(m))


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def kron_all(*factors) -> np.ndarray:
    return reduce(kron, factors)


def is_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    m = np.asarray(m)
    return m.shape[0] == m.shape[1] and np.max(np.abs(m - dagger(m)), initial=0.0) <= tol


def is_unitary(m: np.ndarray, tol: float = 1e-12) -> bool:
    m = np.asarray(m, dtype=complex)
    return np.max(np.abs(dagger(m) @ m - np.eye(m.shape[0]))) <= tol


def _eigh_2x2(m: np.ndarray):
    a = m[0, 0].real
    d = m[1, 1].real
    b = m[0, 1]
    mean = 0.5 * (a + d)
    delta = 0.5 * (a - d)
    rad = math.hypot(delta, abs(b))
    vals = np.array([mean + rad, mean - rad])
    if abs(b) == 0.0:
        if a >= d:
            vecs = np.eye(2, dtype=complex)
        else:
            vecs = np.array([[0, 1], [1, 0]], dtype=complex)
        return vals, vecs
    # pick the better-conditioned null vector of m - lambda_plus
    if delta >= 0:
        v = np.array([delta + rad, np.conj(b)], dtype=complex)
    else:
        v = np.array([b, rad - delta], dtype=complex)
    v /= np.linalg.norm(v)
    w = np.array([-np.conj(v[1]), np.conj(v[0])])
    return vals, np.column_stack([v, w])


def _eigh_jacobi(m: np.ndarray, tol: float, max_sweeps: int):
    a = np.array(m, dtype=complex)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = max(1.0, float(np.linalg.norm(a)))
    for _ in range(max_sweeps):
        off = float(np.linalg.norm(a - np.diag(np.diag(a))))
        if off < tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                phase = apq / mag
                app = a[p, p].real
                aqq = a[q, q].real
                tau = (aqq - app) / (2.0 * mag)
                t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                # unitary on the (p, q) plane: phase removal then real rotation
                j = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]], dtype=complex)
                idx = [p, q]
                a[:, idx] = a[:, idx] @ j
                a[idx, :] = dagger(j) @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                v[:, idx] = v[:, idx] @ j
    vals = np.real(np.diag(a)).copy()
    return vals, v


def hermitian_eigen(m, tol: float = HERMITIAN_TOL, *, jacobi_tol: float = JACOBI_OFFDIAG_TOL,
                    max_sweeps: int = JACOBI_MAX_SWEEPS):
    """Eigen-decomposition of a Hermitian matrix.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvalues sorted in
    descending order and eigenvectors as orthonormal columns. 2x2 inputs use
    the closed-form quadratic, larger ones a cyclic complex Jacobi sweep.
    """
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"square matrix required, got {m.shape}")
    asym = np.max(np.abs(m - dagger(m)), initial=0.0)
    if asym > tol:
        raise SymmetryError(f"matrix is not Hermitian (max |m - m^H| = {asym:.3e})")
    m = 0.5 * (m + dagger(m))
    n = m.shape[0]
    if n == 1:
        return np.array([m[0, 0].real]), np.ones((1, 1), dtype=complex)
    if n == 2:
        vals, vecs = _eigh_2x2(m)
    else:
        vals, vecs = _eigh_jacobi(m, jacobi_tol, max_sweeps)
    order = np.argsort(-vals, kind="stable")
    return vals[order], vecs[:, order]


def check_density_matrix(rho, dim: int | None = None, *, hermitian_tol: float = DENSITY_HERMITIAN_TOL,
                         trace_tol: float = TRACE_TOL, psd_tol: float = PSD_TOL) -> np.ndarray:
    """Validate ``rho`` as a density matrix and return it as a complex array."""
    rho = as_matrix(rho)
    n = rho.shape[0]
    if rho.shape != (n, n) or n & (n - 1):
        raise DimensionError(f"density matrix must be square with power-of-two size, got {rho.shape}")
    if dim is not None and n != dim:
        raise DimensionError(f"expected dimension {dim}, got {n}")
    if not is_hermitian(rho, hermitian_tol):
        raise SymmetryError("density matrix is not Hermitian")
    tr = np.trace(rho).real
    if abs(tr - 1.0) > trace_tol:
        raise NormalizationError(f"density matrix has trace {tr!r}")
    if np.min(hermitian_eigen(rho)[0]) < -psd_tol:
        raise ValueError("density matrix is not positive semidefinite")
    return rho


def ket(bits: str) -> np.ndarray:
    """Computational basis vector, e.g. ``ket("01")``; qubit 0 is the leftmost bit."""
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int(bits, 2)] = 1.0
    return v


def projector(psi) -> np.ndarray:
    """|psi><psi| for a (not necessarily normalized) vector, normalized to unit trace."""
    psi = np.asarray(psi, dtype=complex).ravel()
    norm2 = float(np.vdot(psi, psi).real)
    if norm2 <= 0.0:
        raise NormalizationError("zero vector")
    return np.outer(psi, np.conj(psi)) / norm2


def partial_trace(rho, keep: Sequence[int], dims: Sequence[int]) -> np.ndarray:
    """Reduced density matrix on the subsystems listed in ``keep``.

    ``dims`` gives the dimension of every tensor factor, in order; kept
    factors appear in the result in ascending index order.
    """
    rho = as_matrix(rho)
    dims = [int(d) for d in dims]
    total = int(np.prod(dims))
    if rho.shape != (total, total):
        raise DimensionError(f"dims {dims} imply size {total}, state has shape {rho.shape}")
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= len(dims) for k in keep):
        raise DimensionError(f"subsystem indices {keep} out of range for {len(dims)} factors")
    n = len(dims)
    t = rho.reshape(dims + dims)
    traced = [k for k in range(n) if k not in keep]
    # einsum subscripts: row index i_k, column index j_k; traced factors share a letter
    letters = iter("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ")
    rows = [next(letters) for _ in range(n)]
    cols = [rows[k] if k in traced else next(letters) for k in range(n)]
    out = [rows[k] for k in keep] + [cols[k] for k in keep]
    reduced = np.einsum("".join(rows + cols) + "->" + "".join(out), t)
    d_keep = int(np.prod([dims[k] for k in keep])) if keep else 1
    return reduced.reshape(d_keep, d_keep)


def expm_oracle(m, t: float = 1.0, *, term_tol: float = EXPM_TERM_TOL) -> np.ndarray:
    """exp(-i m t) by scaling-and-squaring of a plain Taylor series.

    Deliberately independent of any closed form; intended as a reference
    for tests and cross-checks, not for speed.
    """
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"square matrix required, got {m.shape}")
    a = -1j * t * m
    n = m.shape[0]
    norm = float(np.linalg.norm(a, 1))
    squarings = max(0, int(math.ceil(math.log2(norm))) + 1) if norm > 0 else 0
    a = a / (2.0 ** squarings)
    result = np.eye(n, dtype=complex)
    term = np.eye(n, dtype=complex)
    for k in range(1, 200):
        term = term @ a / k
        result = result + term
        if np.max(np.abs(term)) < term_tol:
            break
    for _ in range(squarings):
        result = result @ result
    return result
