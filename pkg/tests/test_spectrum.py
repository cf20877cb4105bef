import numpy as np
import pytest

from gaugecalc.algebra import E1, inner
from gaugecalc.forms import TorusGrid, constant_form, tensor_form, scalar_form
from gaugecalc.gauge import Connection, zero_connection
from gaugecalc.spectrum import antihermitian_basis, harmonic_space_dim


def test_antihermitian_basis_is_orthonormal():
    for m in (1, 2, 3):
        basis = antihermitian_basis(m)
        assert basis.shape == (m * m, m, m)
        for i, a in enumerate(basis):
            for j, b in enumerate(basis):
                assert inner(a, b) == pytest.approx(1.0 if i == j else 0.0, abs=1e-14)


def test_harmonic_dims_scalar():
    conn = zero_connection(TorusGrid(16), 1)
    assert tuple(harmonic_space_dim(conn, k) for k in (0, 1, 2)) == (1, 2, 1)


def test_harmonic_dims_rank_two():
    conn = zero_connection(TorusGrid(16), 2)
    assert harmonic_space_dim(conn, 0) == 4
    assert harmonic_space_dim(conn, 2) == 4


def test_harmonic_dims_small_grid():
    conn = zero_connection(TorusGrid(8), 1)
    assert tuple(harmonic_space_dim(conn, k) for k in (0, 1, 2)) == (1, 2, 1)


def test_rejects_non_flat_connection():
    grid = TorusGrid(16)
    x, _ = grid.nodes()
    prof = scalar_form(grid, 1, np.zeros((16, 16)), np.sin(2.0 * np.pi * x))
    conn = Connection(tensor_form(prof, E1))
    with pytest.raises(ValueError, match="curvature norm"):
        harmonic_space_dim(conn, 1)


def test_flat_twisted_connection_counts_discrete_kernel():
    # for a constant closed potential the covariant recursion only closes on
    # the commutant of the potential, so the discrete count at this resolution
    # is the ad-kernel dimension (2 for pi dx x e1 inside u(2))
    grid = TorusGrid(16)
    conn = Connection(constant_form(grid, 1, np.pi * E1, np.zeros((2, 2))))
    assert harmonic_space_dim(conn, 0) == 2


def test_rejects_oversized_problem():
    conn = zero_connection(TorusGrid(64), 2)
    with pytest.raises(ValueError, match="exceeds the limit"):
        harmonic_space_dim(conn, 1)
