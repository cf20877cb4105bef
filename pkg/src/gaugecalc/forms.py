"""Matrix-valued differential forms on a uniform periodic grid over [0,1)^2.

The underlying surface is the unit square with opposite edges identified and
the flat metric dx^2 + dy^2; the volume form is w = dx^dy.  Grid functions
are sampled at the nodes (j/N, l/N).  A degree-k form stores its components
at the nodes: one array for k = 0, the (dx, dy) pair for k = 1 and the
dx^dy coefficient for k = 2, each of shape (N, N, m, m).

The exterior derivative uses second-order central differences with periodic
wrap.  The difference operators commute and are skew-adjoint on the periodic
grid, so d(d(.)) = 0 and summation by parts hold exactly (to rounding), which
the operator-adjointness checks in this package rely on.
"""

from __future__ import annotations

import json

from dataclasses import dataclass

import numpy as np

from .algebra import ANTIHERMITIAN_ATOL, antihermitian_defect

ANTIHERMITIAN = "antihermitian"
GENERAL = "general"

_NCOMPS = {0: 1, 1: 2, 2: 1}


@dataclass(frozen=True)
class TorusGrid:
    """Uniform N x N node grid; coarser than 8 nodes per axis is refused."""

    n: int

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 8:
            raise ValueError(f"grid needs at least 8 nodes per axis, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))

    @property
    def h(self):
        return 1.0 / self.n

    def nodes(self):
        ax = np.arange(self.n) / self.n
        return np.meshgrid(ax, ax, indexing="ij")


def _combine_class(a, b):
    return ANTIHERMITIAN if a == ANTIHERMITIAN and b == ANTIHERMITIAN else GENERAL


@dataclass(frozen=True)
class MatrixForm:
    """Degree-k form with m x m complex matrix coefficients at the grid nodes."""

    degree: int
    grid: TorusGrid
    comps: tuple
    value_class: str = GENERAL

    def __post_init__(self):
        if self.degree not in _NCOMPS:
            raise ValueError(f"degree must be 0, 1 or 2, got {self.degree}")
        comps = tuple(np.asarray(c, dtype=complex) for c in self.comps)
        if len(comps) != _NCOMPS[self.degree]:
            raise ValueError(
                f"degree {self.degree} needs {_NCOMPS[self.degree]} components, got {len(comps)}"
            )
        n = self.grid.n
        shape = comps[0].shape
        if len(shape) != 4 or shape[:2] != (n, n) or shape[2] != shape[3]:
            raise ValueError(f"component shape {shape} does not match an (N, N, m, m) layout, N={n}")
        for c in comps[1:]:
            if c.shape != shape:
                raise ValueError("components have inconsistent shapes")
        if self.value_class not in (ANTIHERMITIAN, GENERAL):
            raise ValueError(f"unknown value class {self.value_class!r}")
        if self.value_class == ANTIHERMITIAN:
            defect = max(antihermitian_defect(c) for c in comps)
            if defect > ANTIHERMITIAN_ATOL:
                raise ValueError(
                    f"anti-Hermitian form has defect {defect:.3e} > {ANTIHERMITIAN_ATOL:.1e}"
                )
        object.__setattr__(self, "comps", comps)

    @property
    def m(self):
        return self.comps[0].shape[2]

    def max_abs(self):
        return max(float(np.max(np.abs(c))) for c in self.comps)

    def retag(self, value_class):
        return MatrixForm(self.degree, self.grid, self.comps, value_class)

    def _require_compatible(self, other):
        if not isinstance(other, MatrixForm):
            raise TypeError("expected a MatrixForm")
        if self.degree != other.degree or self.grid != other.grid or self.m != other.m:
            raise ValueError("forms have mismatched degree, grid or rank")

    def __add__(self, other):
        self._require_compatible(other)
        comps = tuple(a + b for a, b in zip(self.comps, other.comps))
        return MatrixForm(self.degree, self.grid, comps,
                          _combine_class(self.value_class, other.value_class))

    def __sub__(self, other):
        self._require_compatible(other)
        comps = tuple(a - b for a, b in zip(self.comps, other.comps))
        return MatrixForm(self.degree, self.grid, comps,
                          _combine_class(self.value_class, other.value_class))

    def __neg__(self):
        return MatrixForm(self.degree, self.grid, tuple(-c for c in self.comps),
                          self.value_class)

    def __mul__(self, scalar):
        real = isinstance(scalar, (int, float, np.integer, np.floating))
        if not real and not isinstance(scalar, (complex, np.complexfloating)):
            return NotImplemented
        vc = self.value_class if real else GENERAL
        return MatrixForm(self.degree, self.grid,
                          tuple(scalar * c for c in self.comps), vc)

    __rmul__ = __mul__


@dataclass(frozen=True)
class VectorField:
    """Real vector field (x- and y-components) at the grid nodes."""

    grid: TorusGrid
    vx: np.ndarray
    vy: np.ndarray

    def __post_init__(self):
        n = self.grid.n
        vx = np.asarray(self.vx, dtype=float)
        vy = np.asarray(self.vy, dtype=float)
        if vx.shape != (n, n) or vy.shape != (n, n):
            raise ValueError(f"vector field components must have shape ({n}, {n})")
        if not (np.all(np.isfinite(vx)) and np.all(np.isfinite(vy))):
            raise ValueError("vector field has non-finite entries")
        object.__setattr__(self, "vx", vx)
        object.__setattr__(self, "vy", vy)


def zero_form(grid, degree, m, value_class=ANTIHERMITIAN):
    comps = tuple(np.zeros((grid.n, grid.n, m, m), dtype=complex)
                  for _ in range(_NCOMPS[degree]))
    return MatrixForm(degree, grid, comps, value_class)


def scalar_form(grid, degree, *coeffs):
    """Scalar-valued (m = 1) form from real coefficient arrays."""
    if len(coeffs) != _NCOMPS[degree]:
        raise ValueError(f"degree {degree} needs {_NCOMPS[degree]} coefficient arrays")
    comps = []
    for c in coeffs:
        arr = np.asarray(c, dtype=complex)
        if arr.shape != (grid.n, grid.n):
            raise ValueError(f"coefficient array must have shape ({grid.n}, {grid.n})")
        comps.append(arr[..., None, None])
    return MatrixForm(degree, grid, tuple(comps), GENERAL)


def tensor_form(scalar, matrix):
    """Tensor product (scalar form) x (constant matrix)."""
    if scalar.m != 1:
        raise ValueError("tensor_form expects a scalar-valued form on the left")
    matrix = np.asarray(matrix, dtype=complex)
    scal_real = all(float(np.max(np.abs(c.imag))) <= 1e-14 for c in scalar.comps)
    vc = ANTIHERMITIAN if scal_real and antihermitian_defect(matrix) <= ANTIHERMITIAN_ATOL \
        else GENERAL
    comps = tuple(c[:, :, 0, 0][..., None, None] * matrix for c in scalar.comps)
    return MatrixForm(scalar.degree, scalar.grid, comps, vc)


def constant_form(grid, degree, *matrices):
    """Form with node-independent matrix coefficients."""
    if len(matrices) != _NCOMPS[degree]:
        raise ValueError(f"degree {degree} needs {_NCOMPS[degree]} coefficient matrices")
    mats = [np.asarray(mm, dtype=complex) for mm in matrices]
    m = mats[0].shape[0]
    comps = tuple(np.tile(mm, (grid.n, grid.n, 1, 1)) for mm in mats)
    vc = ANTIHERMITIAN if all(antihermitian_defect(mm) <= ANTIHERMITIAN_ATOL for mm in mats) \
        else GENERAL
    return MatrixForm(degree, grid, comps, vc)


def _ddx(arr, h):
    return (np.roll(arr, -1, axis=0) - np.roll(arr, 1, axis=0)) / (2.0 * h)


def _ddy(arr, h):
    return (np.roll(arr, -1, axis=1) - np.roll(arr, 1, axis=1)) / (2.0 * h)


def exterior_d(w):
    """Exterior derivative; rejects top-degree input."""
    if w.degree >= 2:
        raise ValueError("exterior derivative of a top-degree form is not defined here")
    h = w.grid.h
    if w.degree == 0:
        (f,) = w.comps
        return MatrixForm(1, w.grid, (_ddx(f, h), _ddy(f, h)), w.value_class)
    p, q = w.comps
    return MatrixForm(2, w.grid, (_ddx(q, h) - _ddy(p, h),), w.value_class)


def hodge_star(w):
    """Flat-metric star: *1 = dx^dy, *dx = dy, *dy = -dx, *(dx^dy) = 1."""
    if w.degree == 0:
        return MatrixForm(2, w.grid, w.comps, w.value_class)
    if w.degree == 1:
        p, q = w.comps
        return MatrixForm(1, w.grid, (-q, p), w.value_class)
    return MatrixForm(0, w.grid, w.comps, w.value_class)


def _coeff_product(a, b):
    # matrix product of coefficients; an m = 1 factor acts as a scalar
    if a.shape[2] == 1 and b.shape[2] > 1:
        return a[:, :, 0, 0][..., None, None] * b
    if b.shape[2] == 1 and a.shape[2] > 1:
        return a * b[:, :, 0, 0][..., None, None]
    return a @ b


def wedge_compose(a, b):
    """Wedge of the form parts with matrix composition of the coefficients."""
    if a.grid != b.grid:
        raise ValueError("forms live on different grids")
    if a.m != b.m and 1 not in (a.m, b.m):
        raise ValueError(f"coefficient ranks {a.m} and {b.m} are incompatible")
    total = a.degree + b.degree
    if total > 2:
        raise ValueError(f"wedge degree {a.degree} + {b.degree} exceeds the surface dimension")
    if a.degree == 0:
        (f,) = a.comps
        comps = tuple(_coeff_product(f, c) for c in b.comps)
        return MatrixForm(total, a.grid, comps, GENERAL)
    if b.degree == 0:
        (f,) = b.comps
        comps = tuple(_coeff_product(c, f) for c in a.comps)
        return MatrixForm(total, a.grid, comps, GENERAL)
    # 1-form wedge 1-form
    p, q = a.comps
    r, s = b.comps
    return MatrixForm(2, a.grid, (_coeff_product(p, s) - _coeff_product(q, r),), GENERAL)


def sharp(w):
    """Musical isomorphism on real scalar 1-forms (identity components, flat metric)."""
    if w.degree != 1:
        raise ValueError("sharp expects a 1-form")
    if w.m != 1:
        raise ValueError("sharp expects scalar-valued coefficients")
    p = w.comps[0][:, :, 0, 0]
    q = w.comps[1][:, :, 0, 0]
    if max(float(np.max(np.abs(p.imag))), float(np.max(np.abs(q.imag)))) > 1e-12:
        raise ValueError("sharp expects real coefficients")
    return VectorField(w.grid, p.real, q.real)


def interior(v, w):
    """Contraction in the first slot: i_v(P dx + Q dy) = vx P + vy Q, etc."""
    if not isinstance(v, VectorField):
        raise TypeError("expected a VectorField")
    if v.grid != w.grid:
        raise ValueError("vector field and form live on different grids")
    if w.degree == 0:
        raise ValueError("cannot contract a 0-form")
    vx = v.vx[..., None, None]
    vy = v.vy[..., None, None]
    if w.degree == 1:
        p, q = w.comps
        return MatrixForm(0, w.grid, (vx * p + vy * q,), w.value_class)
    (r,) = w.comps
    return MatrixForm(1, w.grid, (-vy * r, vx * r), w.value_class)


def l2_inner(a, b):
    """Discrete L2 pairing: h^2 sum over nodes of (form inner) * Re tr(A B^H)."""
    if a.degree != b.degree or a.grid != b.grid or a.m != b.m:
        raise ValueError("l2_inner needs forms of equal degree, grid and rank")
    total = 0.0
    for ca, cb in zip(a.comps, b.comps):
        total += float(np.einsum("xyij,xyij->", ca, cb.conj()).real)
    return a.grid.h ** 2 * total


def l2_norm(a):
    return float(np.sqrt(max(l2_inner(a, a), 0.0)))


def form_to_record(w):
    """Structured record with [re, im] entry lists (row-major); round-trips exactly."""
    return {
        "degree": w.degree,
        "n": w.grid.n,
        "m": w.m,
        "value_class": w.value_class,
        "components": [
            [[float(z.real), float(z.imag)] for z in c.ravel(order="C")]
            for c in w.comps
        ],
    }


def form_from_record(rec):
    required = {"degree", "n", "m", "value_class", "components"}
    missing = required - set(rec)
    if missing:
        raise ValueError(f"form record is missing keys: {sorted(missing)}")
    grid = TorusGrid(int(rec["n"]))
    n, m = grid.n, int(rec["m"])
    comps = []
    for entries in rec["components"]:
        flat = np.array([complex(re, im) for re, im in entries], dtype=complex)
        if flat.size != n * n * m * m:
            raise ValueError("component entry count does not match the declared shape")
        comps.append(flat.reshape(n, n, m, m))
    return MatrixForm(int(rec["degree"]), grid, tuple(comps), rec["value_class"])


def form_to_json(w):
    return json.dumps(form_to_record(w), sort_keys=True)


def form_from_json(text):
    return form_from_record(json.loads(text))
