"""Dense quaternionic vectors and matrices.

H^n is a right H-module: vectors are columns, matrices act on the left and
scalars act on the right, so that <x, y> = sum conj(x_i) y_i is
H-linear in its second argument.  A quaternion entry is stored as the
trailing axis (re, i, j, k) of a float64 array.
"""
from __future__ import annotations

import numpy as np

from .errors import SizeMismatch
from .quat import MULT_TABLE, Quaternion, conj_array, hamilton

MEMBERSHIP_TOL = 1e-9


def _as_quat_array(value) -> np.ndarray:
    if isinstance(value, Quaternion):
        return value.to_array()
    return np.asarray(value, dtype=float)


class HVector:
    __slots__ = ("data",)

    def __init__(self, entries):
        if isinstance(entries, HVector):
            data = entries.data
        else:
            data = np.asarray(
                [_as_quat_array(e) for e in entries] if isinstance(entries, (list, tuple)) else entries,
                dtype=float,
            )
        if data.ndim != 2 or data.shape[1] != 4 or data.shape[0] < 1:
            raise SizeMismatch(f"vector data must have shape (n, 4), got {data.shape}")
        data = np.array(data, dtype=float)
        data.flags.writeable = False
        self.data = data

    @classmethod
    def basis(cls, n: int, i: int) -> "HVector":
        data = np.zeros((n, 4))
        data[i, 0] = 1.0
        return cls(data)

    @property
    def n(self) -> int:
        return self.data.shape[0]

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, i: int) -> Quaternion:
        return Quaternion.from_array(self.data[i])

    def __repr__(self):
        return f"HVector({self.data.tolist()})"

    def norm(self) -> float:
        return float(np.linalg.norm(self.data))

    def scale(self, q) -> "HVector":
        """Right scalar action v * q."""
        return HVector(hamilton(self.data, _as_quat_array(q)))

    def __mul__(self, q):
        if isinstance(q, (int, float, np.floating)):
            return HVector(self.data * float(q))
        return self.scale(q)

    def __add__(self, other: "HVector") -> "HVector":
        _check_same(self.n, other.n)
        return HVector(self.data + other.data)

    def __sub__(self, other: "HVector") -> "HVector":
        _check_same(self.n, other.n)
        return HVector(self.data - other.data)

    def __neg__(self):
        return HVector(-self.data)

    def normalized(self) -> "HVector":
        return HVector(self.data / self.norm())


def inner(x: HVector, y: HVector) -> Quaternion:
    """<x, y> = sum conj(x_i) y_i."""
    _check_same(x.n, y.n)
    return Quaternion.from_array(hamilton(conj_array(x.data), y.data).sum(axis=0))


class HMatrix:
    __slots__ = ("data",)

    def __init__(self, entries):
        if isinstance(entries, HMatrix):
            data = entries.data
        elif isinstance(entries, (list, tuple)):
            data = np.asarray([[_as_quat_array(e) for e in row] for row in entries], dtype=float)
        else:
            data = np.asarray(entries, dtype=float)
        if data.ndim != 3 or data.shape[2] != 4:
            raise SizeMismatch(f"matrix data must have shape (n, m, 4), got {data.shape}")
        data = np.array(data, dtype=float)
        data.flags.writeable = False
        self.data = data

    @classmethod
    def diag(cls, *entries) -> "HMatrix":
        n = len(entries)
        data = np.zeros((n, n, 4))
        for i, e in enumerate(entries):
            data[i, i] = _as_quat_array(Quaternion.coerce(e))
        return cls(data)

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape[:2]

    @property
    def n(self) -> int:
        return self.data.shape[0]

    def __getitem__(self, ij) -> Quaternion:
        return Quaternion.from_array(self.data[ij])

    def __repr__(self):
        return f"HMatrix({self.data.tolist()})"

    def column(self, j: int) -> HVector:
        return HVector(self.data[:, j])

    def __matmul__(self, other):
        if isinstance(other, HVector):
            return apply(self, other)
        return matmul(self, other)

    def __add__(self, other: "HMatrix") -> "HMatrix":
        _check_same(self.shape, other.shape)
        return HMatrix(self.data + other.data)

    def __sub__(self, other: "HMatrix") -> "HMatrix":
        return sub(self, other)

    def __neg__(self):
        return HMatrix(-self.data)

    @property
    def H(self) -> "HMatrix":
        return adjoint(self)


def _check_same(a, b):
    if a != b:
        raise SizeMismatch(f"size mismatch: {a} vs {b}")


def identity(n: int) -> HMatrix:
    data = np.zeros((n, n, 4))
    data[np.arange(n), np.arange(n), 0] = 1.0
    return HMatrix(data)


def zeros(n: int) -> HMatrix:
    return HMatrix(np.zeros((n, n, 4)))


def matmul(A: HMatrix, B: HMatrix) -> HMatrix:
    """(AB)[i, j] = sum_k A[i, k] B[k, j], products taken in that order."""
    if A.shape[1] != B.shape[0]:
        raise SizeMismatch(f"cannot multiply {A.shape} by {B.shape}")
    return HMatrix(np.einsum("ika,kjb,abc->ijc", A.data, B.data, MULT_TABLE))


def apply(A: HMatrix, v: HVector) -> HVector:
    if A.shape[1] != v.n:
        raise SizeMismatch(f"cannot apply {A.shape} to a vector of length {v.n}")
    return HVector(np.einsum("ika,kb,abc->ic", A.data, v.data, MULT_TABLE))


def adjoint(A: HMatrix) -> HMatrix:
    return HMatrix(conj_array(A.data.transpose(1, 0, 2)))


def sub(A: HMatrix, B: HMatrix) -> HMatrix:
    _check_same(A.shape, B.shape)
    return HMatrix(A.data - B.data)


def fro_norm(A: HMatrix) -> float:
    return float(np.linalg.norm(A.data))


def symplectic_residual(A: HMatrix) -> float:
    """Frobenius norm of A*A - I."""
    if A.shape[0] != A.shape[1]:
        raise SizeMismatch(f"symplectic residual needs a square matrix, got {A.shape}")
    return fro_norm(sub(matmul(adjoint(A), A), identity(A.n)))


def is_symplectic(A: HMatrix, tol: float = MEMBERSHIP_TOL) -> bool:
    return symplectic_residual(A) <= tol


def embed(A: HMatrix) -> HMatrix:
    """Sp(n) -> Sp(n+1), A |-> [[A, 0], [0, 1]]."""
    n = A.n
    data = np.zeros((n + 1, n + 1, 4))
    data[:n, :n] = A.data
    data[n, n, 0] = 1.0
    return HMatrix(data)


def rank_one(x: HVector, q) -> HMatrix:
    """Matrix x q x* with entries x_i q conj(x_j)."""
    xq = hamilton(x.data, _as_quat_array(q))
    return HMatrix(hamilton(xq[:, None, :], conj_array(x.data)[None, :, :]))


def exp_series(M: HMatrix, terms: int = 20) -> HMatrix:
    """Truncated power series sum_{k < terms} M^k / k!."""
    total = identity(M.n)
    term = identity(M.n)
    for k in range(1, terms):
        term = HMatrix(matmul(term, M).data / k)
        total = total + term
    return total
