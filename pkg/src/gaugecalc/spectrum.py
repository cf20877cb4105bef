"""Kernel dimensions of the covariant Hodge Laplacians on the torus grid.

The eigenproblem is built from a compatible pair of one-sided difference
operators: forward differences for the derivative and their exact adjoints
(backward differences) for the codifferential.  Central differences
annihilate the Nyquist checkerboard modes on even grids, which would inflate
the harmonic counts with spurious null vectors; the one-sided pair keeps the
kernel equal to the continuum harmonic space while its Laplacian is still the
standard second-order five-point stencil.

Counting is done over the real coefficient space: anti-Hermitian values are
expanded in an orthonormal basis of u(m) under Re tr(A B^H), the operator
matrix (symmetric positive semi-definite by construction) is assembled
densely, and eigenvalues below the threshold are counted.
"""

from __future__ import annotations

import numpy as np

from .forms import l2_norm
from .gauge import curvature


def antihermitian_basis(m):
    """Orthonormal basis of u(m) under Re tr(A B^H), shape (m*m, m, m)."""
    basis = []
    for j in range(m):
        t = np.zeros((m, m), dtype=complex)
        t[j, j] = 1j
        basis.append(t)
    inv = 1.0 / np.sqrt(2.0)
    for j in range(m):
        for l in range(j + 1, m):
            t = np.zeros((m, m), dtype=complex)
            t[j, l] = inv
            t[l, j] = -inv
            basis.append(t)
            t = np.zeros((m, m), dtype=complex)
            t[j, l] = 1j * inv
            t[l, j] = 1j * inv
            basis.append(t)
    return np.stack(basis)


def _fx(a, h):
    return (np.roll(a, -1, axis=0) - a) / h


def _fy(a, h):
    return (np.roll(a, -1, axis=1) - a) / h


def _bx(a, h):
    return (a - np.roll(a, 1, axis=0)) / h


def _by(a, h):
    return (a - np.roll(a, 1, axis=1)) / h


def _comm(a, b):
    return a @ b - b @ a


def _d0(ex, ey, f, h):
    return _fx(f, h) + _comm(ex, f), _fy(f, h) + _comm(ey, f)


def _d1(ex, ey, p, q, h):
    return _fx(q, h) - _fy(p, h) + _comm(ex, q) - _comm(ey, p)


def _delta1(ex, ey, p, q, h):
    return -(_bx(p, h) + _by(q, h)) + _comm(p, ex) + _comm(q, ey)


def _delta2(ex, ey, r, h):
    return _by(r, h) + _comm(ey, r), -_bx(r, h) + _comm(r, ex)


def _apply_laplacian(ex, ey, degree, comps, h):
    if degree == 0:
        (f,) = comps
        p, q = _d0(ex, ey, f, h)
        return (_delta1(ex, ey, p, q, h),)
    if degree == 1:
        p, q = comps
        r = _d1(ex, ey, p, q, h)
        dp, dq = _delta2(ex, ey, r, h)
        f = _delta1(ex, ey, p, q, h)
        gp, gq = _d0(ex, ey, f, h)
        return (dp + gp, dq + gq)
    (r,) = comps
    p, q = _delta2(ex, ey, r, h)
    return (_d1(ex, ey, p, q, h),)


def harmonic_space_dim(conn, degree, threshold=1e-6, flat_tol=1e-8, dof_limit=4608):
    """Number of Laplacian eigenvalues below `threshold` at the given degree.

    Only flat connections are accepted: the covariant complex is a complex
    only when the curvature vanishes, so non-flat input is rejected with the
    measured curvature norm.
    """
    if degree not in (0, 1, 2):
        raise ValueError("degree must be 0, 1 or 2")
    kn = l2_norm(curvature(conn))
    if kn > flat_tol:
        raise ValueError(
            f"harmonic counting needs a flat connection: curvature norm {kn:.3e} "
            f"exceeds {flat_tol:.1e}"
        )
    grid = conn.grid
    n, m, h = grid.n, conn.m, grid.h
    ex, ey = conn.potential.comps
    basis = antihermitian_basis(m)
    nb = m * m
    ncomp = 2 if degree == 1 else 1
    dof = ncomp * n * n * nb
    if dof > dof_limit:
        raise ValueError(f"eigenproblem size {dof} exceeds the limit {dof_limit}; reduce the grid")
    basis_conj = basis.conj()
    mat = np.empty((dof, dof))
    col = 0
    for c in range(ncomp):
        for j in range(n):
            for l in range(n):
                for ib in range(nb):
                    comps = [np.zeros((n, n, m, m), dtype=complex) for _ in range(ncomp)]
                    comps[c][j, l] = basis[ib]
                    out = _apply_laplacian(ex, ey, degree, comps, h)
                    mat[:, col] = np.concatenate([
                        np.einsum("xyij,aij->xya", oc, basis_conj).real.ravel(order="C")
                        for oc in out
                    ])
                    col += 1
    mat = 0.5 * (mat + mat.T)
    evals = np.linalg.eigvalsh(mat)
    return int(np.count_nonzero(evals < threshold))
