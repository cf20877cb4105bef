"""u(m) matrix algebra: brackets, ad-invariant metric, matrix exponentials.

Elements are anti-Hermitian m x m complex matrices.  The metric is
<A, B> = Re tr(A B^H); with the su(2) basis e_a = i sigma_a this gives
<e_a, e_b> = 2 delta_ab, and the brackets close as
[e_a, e_b] = -2 eps_abc e_c.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

ANTIHERMITIAN_ATOL = 1e-12

SIGMA1 = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA2 = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA3 = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
SIGMA = (SIGMA1, SIGMA2, SIGMA3)

E1 = 1j * SIGMA1
E2 = 1j * SIGMA2
E3 = 1j * SIGMA3
SU2_BASIS = (E1, E2, E3)

LEVI_CIVITA = np.zeros((3, 3, 3))
for _i, _j, _k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    LEVI_CIVITA[_i, _j, _k] = 1.0
    LEVI_CIVITA[_i, _k, _j] = -1.0


def dagger(a):
    """Conjugate transpose over the trailing two axes."""
    return np.conjugate(np.swapaxes(np.asarray(a), -1, -2))


def antihermitian_defect(a):
    """Largest entrywise magnitude of A + A^H (zero for anti-Hermitian A)."""
    a = np.asarray(a, dtype=complex)
    return float(np.max(np.abs(a + dagger(a))))


def is_antihermitian(a, atol=ANTIHERMITIAN_ATOL):
    return antihermitian_defect(a) <= atol


def require_antihermitian(a, what="matrix", atol=ANTIHERMITIAN_ATOL):
    defect = antihermitian_defect(a)
    if defect > atol:
        raise ValueError(
            f"{what} is not anti-Hermitian: defect {defect:.3e} exceeds {atol:.1e}"
        )


def _require_matching(a, b):
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return a, b


def bracket(a, b):
    """Commutator AB - BA."""
    a, b = _require_matching(a, b)
    return a @ b - b @ a


def inner(a, b):
    """Ad-invariant inner product Re tr(A B^H)."""
    a, b = _require_matching(a, b)
    return float(np.trace(a @ dagger(b)).real)


def mat_exp(a):
    """Matrix exponential (scaling-and-squaring); unitary for anti-Hermitian input."""
    return scipy.linalg.expm(np.asarray(a, dtype=complex))


def exp_antihermitian(a):
    """Exponential of a stack (..., m, m) of anti-Hermitian matrices.

    Uses the unitary eigendecomposition of -iA, so the result is unitary
    to rounding by construction.
    """
    a = np.asarray(a, dtype=complex)
    require_antihermitian(a, "exponent")
    w, u = np.linalg.eigh(-1j * a)
    return (u * np.exp(1j * w)[..., None, :]) @ dagger(u)


def random_antihermitian(rng, m, scale=1.0):
    """Random anti-Hermitian matrix with entries on the order of `scale`."""
    x = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    return scale * 0.5 * (x - dagger(x))
