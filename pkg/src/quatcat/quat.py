"""Quaternion scalars: Hamilton product, polar form, principal Log and exp.

Basis convention is fixed as ij = k, jk = i, ki = j.  Scalar values are
:class:`Quaternion` instances; the matrix layer stores quaternions as the
trailing axis of length 4 of a float64 array and uses :func:`hamilton` for
vectorised products.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NegativeRealAxis, ZeroQuaternion

BRANCH_EPS = 1e-9
AXIS_EPS = 1e-12


def _structure_constants() -> np.ndarray:
    # table[a, b, c]: coefficient of e_c in e_a * e_b for e = (1, i, j, k)
    table = np.zeros((4, 4, 4))
    for a in range(4):
        table[0, a, a] = 1.0
        table[a, 0, a] = 1.0
    for a in (1, 2, 3):
        table[a, a, 0] = -1.0
    for a, b, c in ((1, 2, 3), (2, 3, 1), (3, 1, 2)):
        table[a, b, c] = 1.0
        table[b, a, c] = -1.0
    return table


MULT_TABLE = _structure_constants()
_CONJ_SIGNS = np.array([1.0, -1.0, -1.0, -1.0])


def hamilton(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Broadcasting Hamilton product over the last axis (length 4)."""
    return np.einsum("...a,...b,abc->...c", p, q, MULT_TABLE)


def conj_array(q: np.ndarray) -> np.ndarray:
    return np.asarray(q) * _CONJ_SIGNS


@dataclass(frozen=True)
class Quaternion:
    re: float = 0.0
    im_i: float = 0.0
    im_j: float = 0.0
    im_k: float = 0.0

    @classmethod
    def from_array(cls, a) -> "Quaternion":
        r, i, j, k = (float(c) for c in a)
        return cls(r, i, j, k)

    @classmethod
    def coerce(cls, value) -> "Quaternion":
        if isinstance(value, Quaternion):
            return value
        if isinstance(value, (int, float, np.floating, np.integer)):
            return cls(float(value))
        return cls.from_array(value)

    def to_array(self) -> np.ndarray:
        return np.array([self.re, self.im_i, self.im_j, self.im_k])

    def __iter__(self):
        yield from (self.re, self.im_i, self.im_j, self.im_k)

    @property
    def imag(self) -> "Quaternion":
        return Quaternion(0.0, self.im_i, self.im_j, self.im_k)

    def conj(self) -> "Quaternion":
        return Quaternion(self.re, -self.im_i, -self.im_j, -self.im_k)

    def norm(self) -> float:
        return math.sqrt(self.re**2 + self.im_i**2 + self.im_j**2 + self.im_k**2)

    __abs__ = norm

    def imag_norm(self) -> float:
        return math.sqrt(self.im_i**2 + self.im_j**2 + self.im_k**2)

    def inverse(self) -> "Quaternion":
        n2 = self.re**2 + self.im_i**2 + self.im_j**2 + self.im_k**2
        if n2 == 0.0:
            raise ZeroQuaternion("zero quaternion has no inverse")
        return self.conj() * (1.0 / n2)

    def __add__(self, other):
        o = Quaternion.coerce(other)
        return Quaternion(self.re + o.re, self.im_i + o.im_i, self.im_j + o.im_j, self.im_k + o.im_k)

    __radd__ = __add__

    def __sub__(self, other):
        o = Quaternion.coerce(other)
        return Quaternion(self.re - o.re, self.im_i - o.im_i, self.im_j - o.im_j, self.im_k - o.im_k)

    def __rsub__(self, other):
        return Quaternion.coerce(other) - self

    def __neg__(self):
        return Quaternion(-self.re, -self.im_i, -self.im_j, -self.im_k)

    def __mul__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            s = float(other)
            return Quaternion(self.re * s, self.im_i * s, self.im_j * s, self.im_k * s)
        if not isinstance(other, Quaternion):
            return NotImplemented
        return mul(self, other)

    def __rmul__(self, other):
        # only real scalars reach here; they are central
        if isinstance(other, (int, float, np.floating, np.integer)):
            return self * other
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return self * (1.0 / float(other))
        return NotImplemented

    def isclose(self, other, tol: float = 1e-12) -> bool:
        return abs(self - Quaternion.coerce(other)) <= tol


ONE = Quaternion(1.0)
I = Quaternion(0.0, 1.0)
J = Quaternion(0.0, 0.0, 1.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)


def mul(p: Quaternion, q: Quaternion) -> Quaternion:
    a1, b1, c1, d1 = p.re, p.im_i, p.im_j, p.im_k
    a2, b2, c2, d2 = q.re, q.im_i, q.im_j, q.im_k
    return Quaternion(
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    )


@dataclass(frozen=True)
class PolarForm:
    """q = modulus * (cos theta + sin theta * axis), theta in [0, pi].

    When Im q vanishes (theta in {0, pi}) the axis is the conventional i
    and ``degenerate`` is set.
    """

    modulus: float
    theta: float
    axis: Quaternion
    degenerate: bool = False

    def reconstruct(self) -> Quaternion:
        return (math.cos(self.theta) + self.axis * math.sin(self.theta)) * self.modulus


def polar(q: Quaternion, axis_eps: float = AXIS_EPS) -> PolarForm:
    q = Quaternion.coerce(q)
    modulus = q.norm()
    if modulus == 0.0:
        raise ZeroQuaternion("polar form of 0 is undefined")
    v = q.imag_norm()
    # atan2 equals arccos(Re q / |q|) on [0, pi] but keeps accuracy near 0 and pi
    theta = math.atan2(v, q.re)
    if v > axis_eps:
        return PolarForm(modulus, theta, q.imag / v)
    return PolarForm(modulus, theta, I, degenerate=True)


def qlog(q: Quaternion, branch_eps: float = BRANCH_EPS, axis_eps: float = AXIS_EPS) -> Quaternion:
    """Principal logarithm ln|q| + theta * axis."""
    pf = polar(q, axis_eps)
    if pf.theta >= math.pi - branch_eps:
        raise NegativeRealAxis(f"Log undefined on the negative real axis (theta={pf.theta!r})")
    return pf.axis * pf.theta + math.log(pf.modulus)


def qexp(q: Quaternion, axis_eps: float = AXIS_EPS) -> Quaternion:
    q = Quaternion.coerce(q)
    scale = math.exp(q.re)
    v = q.imag_norm()
    if v <= axis_eps:
        return Quaternion(scale)
    s = scale * math.sin(v) / v
    return Quaternion(scale * math.cos(v), s * q.im_i, s * q.im_j, s * q.im_k)


def similar(p: Quaternion, q: Quaternion, tol: float = 1e-12) -> bool:
    p, q = Quaternion.coerce(p), Quaternion.coerce(q)
    return abs(p.norm() - q.norm()) <= tol and abs(p.re - q.re) <= tol
