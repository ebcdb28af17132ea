"""Truncated bivariate Taylor arithmetic in the independent variables xi, xibar.

A jet of order ``J`` at a base point stores the normalized derivatives

    c[a, b] = d^a dbar^b F(xi0, xibar0) / (a! b!),    a + b <= J,

where ``d = d/dxi`` and ``dbar = d/dxibar`` act as independent variables.
Coefficients live in a flat triangular array ordered by total degree, so
truncating to a lower order is a prefix slice.  The coefficient axis comes
first; any further leading axes are a *batch* of base points that share one
set of arithmetic calls, followed by the tensor axes (none for :class:`Jet`,
two for :class:`MatrixJet`).
"""

from __future__ import annotations

import functools
from numbers import Number
from types import SimpleNamespace

import numpy as np

from .errors import DivisionByZeroAtBasePoint, ShapeError

__all__ = [
    "Jet",
    "MatrixJet",
    "n_coeffs",
    "jet_lift",
    "jet_combine",
    "jet_reciprocal",
    "jet_conjugate",
    "matrix_ops",
    "matrix_adjoint",
    "matrix_trace",
    "matrix_derive",
    "matrix_inverse",
]

DEFAULT_ORDER = 4


def n_coeffs(order):
    return (order + 1) * (order + 2) // 2


@functools.lru_cache(maxsize=None)
def _tables(order):
    mono = [(n - b, b) for n in range(order + 1) for b in range(n + 1)]
    index = {ab: i for i, ab in enumerate(mono)}
    pairs = []
    for a, b in mono:
        ns, ts = [], []
        for n, (c, d) in enumerate(mono):
            if a + b + c + d <= order:
                ns.append(n)
                ts.append(index[(a + c, b + d)])
        pairs.append((np.array(ns), np.array(ts)))
    conj = np.array([index[(b, a)] for a, b in mono])
    tables = SimpleNamespace(mono=mono, index=index, pairs=pairs, conj=conj)
    if order >= 1:
        lower = mono[: n_coeffs(order - 1)]
        tables.d_src = np.array([index[(a + 1, b)] for a, b in lower])
        tables.d_fac = np.array([a + 1.0 for a, b in lower])
        tables.db_src = np.array([index[(a, b + 1)] for a, b in lower])
        tables.db_fac = np.array([b + 1.0 for a, b in lower])
    return tables


def _is_scalar(x):
    return isinstance(x, Number) or (isinstance(x, np.ndarray) and x.ndim == 0)


class _JetArray:
    """Shared storage and arithmetic; subclasses fix the number of tensor axes."""

    __slots__ = ("coeffs", "base", "order")
    _tail = 0
    __array_ufunc__ = None

    def __init__(self, coeffs, base, order=None):
        coeffs = np.asarray(coeffs, dtype=complex)
        base = np.asarray(base, dtype=complex)
        if order is None:
            order = _order_from_size(coeffs.shape[0])
        if coeffs.shape[0] != n_coeffs(order):
            raise ShapeError(
                f"order {order} needs {n_coeffs(order)} coefficients, got {coeffs.shape[0]}"
            )
        batch = coeffs.shape[1 : coeffs.ndim - self._tail]
        if base.shape != batch:
            raise ShapeError(f"base shape {base.shape} does not match batch shape {batch}")
        self.coeffs = coeffs
        self.base = base
        self.order = order

    # -- construction helpers -------------------------------------------------

    def _new(self, coeffs, order=None):
        return type(self)(coeffs, self.base, self.order if order is None else order)

    @property
    def batch_shape(self):
        return self.base.shape

    @property
    def value(self):
        """Constant term, i.e. the value at the base point."""
        return self.coeffs[0]

    def coeff(self, a, b):
        return self.coeffs[_tables(self.order).index[(a, b)]]

    def as_dict(self):
        """``{(a, b): coefficient}`` for an unbatched scalar jet."""
        return {ab: self.coeffs[i] for i, ab in enumerate(_tables(self.order).mono)}

    def truncate(self, order):
        if order > self.order:
            raise ValueError(f"cannot raise jet order from {self.order} to {order}")
        if order == self.order:
            return self
        return self._new(self.coeffs[: n_coeffs(order)], order)

    def max_abs(self):
        return float(np.max(np.abs(self.coeffs))) if self.coeffs.size else 0.0

    def derive(self, which):
        """Apply d (``which="xi"``) or dbar (``which="xibar"``); order drops by one."""
        if self.order < 1:
            raise ValueError("derivative needs a jet of order >= 1")
        t = _tables(self.order)
        if which in ("xi", "d", "∂"):
            src, fac = t.d_src, t.d_fac
        elif which in ("xibar", "dbar", "∂̄"):
            src, fac = t.db_src, t.db_fac
        else:
            raise ValueError(f"unknown derivative {which!r}")
        fac = fac.reshape((-1,) + (1,) * (self.coeffs.ndim - 1))
        return self._new(self.coeffs[src] * fac, self.order - 1)

    # -- arithmetic -----------------------------------------------------------

    def _check_base(self, other):
        if other.base is not self.base and not np.array_equal(other.base, self.base):
            raise ShapeError("jets live at different base points")

    def _linear(self, other, sign):
        if _is_scalar(other) or (isinstance(other, np.ndarray) and self._tail and other.ndim == 2):
            coeffs = self.coeffs.copy()
            coeffs[0] = coeffs[0] + sign * np.asarray(other)
            return self._new(coeffs)
        if type(other) is not type(self):
            return NotImplemented
        self._check_base(other)
        order = min(self.order, other.order)
        n = n_coeffs(order)
        if self._tail and self.coeffs.shape[-2:] != other.coeffs.shape[-2:]:
            raise ShapeError(f"shape mismatch {self.shape} vs {other.shape}")
        return self._new(self.coeffs[:n] + sign * other.coeffs[:n], order)

    def __add__(self, other):
        return self._linear(other, 1)

    def __radd__(self, other):
        return self._linear(other, 1)

    def __sub__(self, other):
        return self._linear(other, -1)

    def __rsub__(self, other):
        return (-self)._linear(other, 1)

    def __neg__(self):
        return self._new(-self.coeffs)

    def __mul__(self, other):
        if _is_scalar(other):
            return self._new(self.coeffs * other)
        if isinstance(other, _JetArray):
            return _product(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if _is_scalar(other):
            return self._new(self.coeffs * other)
        return NotImplemented

    def __truediv__(self, other):
        if _is_scalar(other):
            return self._new(self.coeffs / other)
        if isinstance(other, Jet):
            return self * jet_reciprocal(other)
        return NotImplemented


def _order_from_size(size):
    order = 0
    while n_coeffs(order) < size:
        order += 1
    if n_coeffs(order) != size:
        raise ShapeError(f"{size} is not a triangular coefficient count")
    return order


class Jet(_JetArray):
    """Scalar jet; ``coeffs`` has shape ``(n_coeffs(order), *batch)``."""

    __slots__ = ()
    _tail = 0

    def __repr__(self):
        return f"Jet(order={self.order}, batch={self.batch_shape}, value={self.value!r})"

    def conj(self):
        return jet_conjugate(self)

    @classmethod
    def constant(cls, value, base, order):
        base = np.asarray(base, dtype=complex)
        coeffs = np.zeros((n_coeffs(order),) + base.shape, dtype=complex)
        coeffs[0] = value
        return cls(coeffs, base, order)


class MatrixJet(_JetArray):
    """Matrix of jets; ``coeffs`` has shape ``(n_coeffs(order), *batch, rows, cols)``."""

    __slots__ = ()
    _tail = 2

    def __repr__(self):
        return f"MatrixJet(shape={self.shape}, order={self.order}, batch={self.batch_shape})"

    @property
    def shape(self):
        return self.coeffs.shape[-2:]

    @property
    def dim(self):
        rows, cols = self.shape
        if rows != cols:
            raise ShapeError(f"matrix is not square: {self.shape}")
        return rows

    def __matmul__(self, other):
        if isinstance(other, MatrixJet):
            return _product(self, other)
        if isinstance(other, np.ndarray) and other.ndim == 2:
            return self._new(self.coeffs @ other)
        return NotImplemented

    def __rmatmul__(self, other):
        if isinstance(other, np.ndarray) and other.ndim == 2:
            return self._new(other @ self.coeffs)
        return NotImplemented

    def entry(self, i, j):
        return Jet(self.coeffs[..., i, j], self.base, self.order)

    def column(self, j):
        return self._new(self.coeffs[..., :, j : j + 1])

    def row(self, i):
        return self._new(self.coeffs[..., i : i + 1, :])

    def adjoint(self):
        return matrix_adjoint(self)

    def trace(self):
        return matrix_trace(self)

    @classmethod
    def identity(cls, n, base, order):
        return cls.constant(np.eye(n), base, order)

    @classmethod
    def constant(cls, matrix, base, order):
        base = np.asarray(base, dtype=complex)
        matrix = np.asarray(matrix, dtype=complex)
        coeffs = np.zeros((n_coeffs(order),) + base.shape + matrix.shape, dtype=complex)
        coeffs[0] = matrix
        return cls(coeffs, base, order)

    @classmethod
    def from_entries(cls, rows):
        """Assemble from a nested list of :class:`Jet` sharing base and order."""
        first = rows[0][0]
        order = min(j.order for row in rows for j in row)
        for row in rows:
            for j in row:
                first._check_base(j)
        n = n_coeffs(order)
        coeffs = np.stack([np.stack([j.coeffs[:n] for j in row], axis=-1) for row in rows], axis=-2)
        return cls(coeffs, first.base, order)


# -- products -----------------------------------------------------------------


def _mul_ss(xm, yn):
    return xm[None] * yn


def _mul_sm(xm, yn):
    return xm[None, ..., None, None] * yn


def _mul_ms(xm, yn):
    return xm[None] * yn[..., None, None]


def _mul_mm(xm, yn):
    return np.matmul(xm[None], yn)


def _product(x, y):
    """Truncated Cauchy product; matrix-matrix products contract like ``@``."""
    x._check_base(y)
    xs, ys = isinstance(x, Jet), isinstance(y, Jet)
    if xs and ys:
        op, cls, shape = _mul_ss, Jet, ()
    elif xs:
        op, cls, shape = _mul_sm, MatrixJet, y.shape
    elif ys:
        op, cls, shape = _mul_ms, MatrixJet, x.shape
    else:
        if x.shape[1] != y.shape[0]:
            raise ShapeError(f"cannot multiply {x.shape} by {y.shape}")
        op, cls, shape = _mul_mm, MatrixJet, (x.shape[0], y.shape[1])
    order = min(x.order, y.order)
    t = _tables(order)
    n = n_coeffs(order)
    xc, yc = x.coeffs[:n], y.coeffs[:n]
    out = np.zeros((n,) + x.batch_shape + shape, dtype=complex)
    for m, (ns, ts) in enumerate(t.pairs):
        out[ts] += op(xc[m], yc[ns])
    return cls(out, x.base, order)


# -- public operations -------------------------------------------------------


def jet_lift(value, base, order, role="constant"):
    """Lift a constant or a coordinate function to a jet at ``base``."""
    if order < 0:
        raise ValueError("order must be >= 0")
    base = np.asarray(base, dtype=complex)
    coeffs = np.zeros((n_coeffs(order),) + base.shape, dtype=complex)
    if role == "constant":
        coeffs[0] = value
    elif role == "variable_xi":
        coeffs[0] = base
        if order >= 1:
            coeffs[_tables(order).index[(1, 0)]] = 1.0
    elif role == "variable_xibar":
        coeffs[0] = np.conj(base)
        if order >= 1:
            coeffs[_tables(order).index[(0, 1)]] = 1.0
    else:
        raise ValueError(f"unknown role {role!r}")
    return Jet(coeffs, base, order)


def jet_combine(a, b, op):
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def jet_reciprocal(a):
    c0 = a.coeffs[0]
    scale = np.max(np.abs(a.coeffs), axis=0)
    if np.any(np.abs(c0) <= 1e-14 * scale) or np.any(c0 == 0):
        raise DivisionByZeroAtBasePoint("reciprocal of a jet with vanishing constant term")
    # 1/(c0 (1 + h)) = (1/c0) sum_n (-h)^n, h nilpotent to the jet order
    h = Jet(a.coeffs / c0, a.base, a.order)
    h.coeffs[0] = 0.0
    r = Jet.constant(1.0, a.base, a.order)
    for _ in range(a.order):
        r = 1.0 - h * r
    return Jet(r.coeffs / c0, a.base, a.order)


def jet_conjugate(a):
    """Complex conjugate of a real-analytic function: swap (a, b) and conjugate."""
    coeffs = np.conj(a.coeffs[_tables(a.order).conj])
    if isinstance(a, MatrixJet):
        return MatrixJet(coeffs, a.base, a.order)
    return Jet(coeffs, a.base, a.order)


def matrix_ops(A, B, op):
    if op == "mul":
        return A @ B
    if op == "add":
        return A + B
    if op == "sub":
        return A - B
    if op == "commutator":
        return A @ B - B @ A
    raise ValueError(f"unknown op {op!r}")


def matrix_adjoint(A):
    coeffs = np.conj(A.coeffs[_tables(A.order).conj]).swapaxes(-1, -2)
    return MatrixJet(coeffs, A.base, A.order)


def matrix_trace(A):
    return Jet(np.trace(A.coeffs, axis1=-2, axis2=-1), A.base, A.order)


def matrix_derive(A, which):
    return A.derive(which)


def matrix_inverse(A, max_cond=1e12):
    """Inverse of a square matrix jet by Neumann series around the base value."""
    n = A.dim
    a0 = A.coeffs[0]
    cond = np.linalg.cond(a0)
    if np.any(~np.isfinite(cond)) or np.any(cond > max_cond):
        raise DivisionByZeroAtBasePoint(f"matrix singular at base point (cond={np.max(cond):.3g})")
    inv0 = np.linalg.inv(a0)
    h = MatrixJet(inv0[None] @ A.coeffs, A.base, A.order)
    h.coeffs[0] = 0.0
    r = MatrixJet.identity(n, A.base, A.order)
    eye = np.eye(n)
    for _ in range(A.order):
        r = eye - h @ r
    return MatrixJet(r.coeffs @ inv0[None], A.base, A.order)
