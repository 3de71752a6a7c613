"""The quasi-projective space Q_n inside Sp(n) and the normal cells of Sp(n).

A point of Q_n is carried as a representative (x, lam) in S^{4n-1} x S^3
together with its matrix phi(x, lam) = x (lam - 1) x* + I.  The matrix is
the invariant of the equivalence (x, lam) ~ (x nu, nu^-1 lam nu), so all
comparisons between points go through it.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NotInQn, NotUnit, OutOfBall, SizeMismatch
from .hmat import (
    MEMBERSHIP_TOL,
    HMatrix,
    HVector,
    apply,
    fro_norm,
    identity,
    inner,
    matmul,
    rank_one,
    symplectic_residual,
)
from .quat import ONE, Quaternion

UNIT_TOL = 1e-12


@dataclass(frozen=True)
class QPoint:
    x: HVector
    lam: Quaternion
    matrix: HMatrix = field(repr=False)

    @property
    def n(self) -> int:
        return self.x.n


def phi(x: HVector, lam: Quaternion, unit_tol: float = UNIT_TOL) -> QPoint:
    """phi(x, lam) = x (lam - 1) x* + I: sends x to x lam, fixes x's orthogonal complement."""
    x = HVector(x)
    lam = Quaternion.coerce(lam)
    if abs(x.norm() ** 2 - 1.0) > unit_tol:
        raise NotUnit(f"x is not a unit vector (|x|^2 = {x.norm() ** 2!r})")
    if abs(lam.norm() - 1.0) > unit_tol:
        raise NotUnit(f"lambda is not a unit quaternion (|lambda| = {lam.norm()!r})")
    rank = rank_one(x, lam - ONE)
    return QPoint(x, lam, HMatrix(rank.data + identity(x.n).data))


def base_point(n: int) -> QPoint:
    return phi(HVector.basis(n, 0), ONE)


def recover(A: HMatrix, tol: float = MEMBERSHIP_TOL) -> QPoint:
    """Inverse of phi up to the equivalence relation.

    Pivots on the largest column of A - I, then reads lam off <x, Ax>.
    Raises NotInQn unless the rebuilt phi(x, lam) matches A.
    """
    if A.shape[0] != A.shape[1]:
        raise SizeMismatch(f"recover needs a square matrix, got {A.shape}")
    n = A.n
    if symplectic_residual(A) > tol:
        raise NotInQn("matrix is not symplectic within tolerance")
    B = A.data - identity(n).data
    if np.linalg.norm(B) <= tol:
        return base_point(n)
    col_norms = np.linalg.norm(B, axis=(0, 2))
    j = int(np.argmax(col_norms))
    x = HVector(B[:, j] / col_norms[j])
    lam = inner(x, apply(A, x))
    modulus = lam.norm()
    if modulus == 0.0:
        raise NotInQn("degenerate pivot column")
    point = phi(x, lam / modulus)
    residual = float(np.linalg.norm(point.matrix.data - A.data))
    if residual > tol * (1.0 + fro_norm(A)):
        raise NotInQn(f"A - I is not rank one (reconstruction residual {residual:.3e})")
    return point


def in_qn(A: HMatrix, tol: float = MEMBERSHIP_TOL) -> bool:
    try:
        recover(A, tol)
    except NotInQn:
        return False
    return True


def equivalent(p: QPoint, q: QPoint, tol: float = MEMBERSHIP_TOL) -> bool:
    if p.n != q.n:
        raise SizeMismatch(f"points live in Q_{p.n} and Q_{q.n}")
    if abs(p.lam - ONE) <= tol and abs(q.lam - ONE) <= tol:
        return True
    return float(np.linalg.norm(p.matrix.data - q.matrix.data)) <= tol


def ball_to_sphere(v) -> Quaternion:
    """E^3 -> S^3 collapsing the boundary sphere to -1: v |-> exp(pi v)."""
    v = np.asarray(v, dtype=float)
    r = float(np.linalg.norm(v))
    if r == 0.0:
        return ONE
    if r >= 1.0:
        return Quaternion(-1.0)
    s = math.sin(math.pi * r) / r
    return Quaternion(math.cos(math.pi * r), *(float(c) for c in s * v))


def char_map(n: int, y, v, tol: float = UNIT_TOL) -> QPoint:
    """Characteristic map h_n of the top cell of Q_n.

    ``y`` holds the first n - 1 coordinates of x (shape (n-1, 4)); the last
    coordinate is real and non-negative.  ``v`` is a point of the closed
    3-ball.
    """
    y = np.asarray(y.data if isinstance(y, HVector) else y, dtype=float).reshape(-1, 4)
    if y.shape[0] != n - 1:
        raise SizeMismatch(f"expected {n - 1} free coordinates, got {y.shape[0]}")
    v = np.asarray(v, dtype=float)
    if v.shape != (3,):
        raise SizeMismatch(f"v must be a real 3-vector, got shape {v.shape}")
    ny = float(np.linalg.norm(y))
    if ny > 1.0 + tol or float(np.linalg.norm(v)) > 1.0 + tol:
        raise OutOfBall("point outside the closed unit ball")
    x = np.zeros((n, 4))
    x[: n - 1] = y
    x[n - 1, 0] = math.sqrt(max(0.0, 1.0 - ny * ny))
    x /= np.linalg.norm(x)
    return phi(HVector(x), ball_to_sphere(v))


@dataclass(frozen=True, order=True)
class NormalCell:
    indices: tuple[int, ...]

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        if any(i <= 0 for i in idx) or any(a <= b for a, b in zip(idx, idx[1:])):
            raise ValueError(f"normal cell indices must be positive and strictly decreasing: {idx}")
        object.__setattr__(self, "indices", idx)

    @property
    def dimension(self) -> int:
        return sum(4 * i - 1 for i in self.indices)

    @property
    def is_zero_cell(self) -> bool:
        return not self.indices

    def __str__(self):
        if self.is_zero_cell:
            return "I"
        return "(" + ",".join(map(str, self.indices)) + ")"


def cells(n: int) -> list[NormalCell]:
    """All 2^n cells of Sp(n): the 0-cell I followed by the normal cells."""
    if n < 1:
        raise ValueError("n must be >= 1")
    out = [NormalCell(())]
    for r in range(1, n + 1):
        for combo in itertools.combinations(range(n, 0, -1), r):
            out.append(NormalCell(combo))
    out.sort(key=lambda c: (c.dimension, c.indices))
    return out


def poincare_polynomial(n: int) -> list[int]:
    """Coefficients (index = degree) counting cells of each dimension."""
    cs = cells(n)
    coeffs = [0] * (max(c.dimension for c in cs) + 1)
    for c in cs:
        coeffs[c.dimension] += 1
    return coeffs


def make_rng(seed, *counters) -> np.random.Generator:
    """Generator for stream ``counters`` under ``seed``; independent of call order."""
    return np.random.default_rng(list(_flatten((seed, *counters))))


def _flatten(key):
    for k in key:
        if isinstance(k, (tuple, list)):
            yield from _flatten(k)
        else:
            yield int(k)


def random_unit_vector(rng: np.random.Generator, n: int) -> HVector:
    g = rng.standard_normal((n, 4))
    return HVector(g / np.linalg.norm(g))


def random_unit_quaternion(rng: np.random.Generator) -> Quaternion:
    g = rng.standard_normal(4)
    return Quaternion.from_array(g / np.linalg.norm(g))


def random_imaginary_axis(rng: np.random.Generator) -> Quaternion:
    g = rng.standard_normal(3)
    return Quaternion(0.0, *(g / np.linalg.norm(g)))


def sample_qn(n: int, seed) -> QPoint:
    rng = make_rng(seed)
    x = random_unit_vector(rng, n)
    return phi(x, random_unit_quaternion(rng))


def sample_sp_product(n: int, k: int, seed) -> HMatrix:
    """Product of k independent random points of Q_n."""
    if k < 0:
        raise ValueError("k must be >= 0")
    out = identity(n)
    for i in range(k):
        out = matmul(out, sample_qn(n, (seed, i)).matrix)
    return out
