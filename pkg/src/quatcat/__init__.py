"""Quaternionic Log/exp, the quasi-projective space Q_n in Sp(n), and a
numerically certified three-set cover of Q_n contractible in Sp(n)."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    BranchViolation,
    DomainError,
    NegativeRealAxis,
    NotInQn,
    NotUnit,
    OutOfBall,
    SizeMismatch,
    ZeroQuaternion,
)
from .quat import I, J, K, ONE, PolarForm, Quaternion, mul, polar, qexp, qlog, similar  # noqa: E402
from .hmat import HMatrix, HVector, identity, matmul, symplectic_residual  # noqa: E402
from .qproj import NormalCell, QPoint, cells, phi, poincare_polynomial, recover, sample_qn  # noqa: E402
from .cover import CoverClass, HomotopyCertificate, classify, contract_O1, contract_O2, verify_cover  # noqa: E402
