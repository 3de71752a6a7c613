"""The three-set cover O1, O2, O3 of Q_n and its contracting homotopies.

O1 = {phi(x, lam) : lam != +-1} contracts along
Phi(A, t) = phi(x, exp((1 - t) Log lam)), which never leaves Q_n.
O2 = {phi(x, -1)} contracts along the two-piece path Psi built from
phi(x, -1) = phi(x, i) phi(x, i).  O3 is a small ball around I, contracted
with the Phi formula (lam is far from the branch cut there).

:func:`verify_cover` samples each set, traces its contraction over a
uniform time grid and summarises the numerical evidence in a
:class:`HomotopyCertificate`.
"""
from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import BranchViolation, DomainError, NegativeRealAxis
from .hmat import (
    MEMBERSHIP_TOL,
    HMatrix,
    HVector,
    fro_norm,
    identity,
    matmul,
    rank_one,
    symplectic_residual,
)
from .qproj import (
    QPoint,
    in_qn,
    make_rng,
    phi,
    random_imaginary_axis,
    random_unit_quaternion,
    random_unit_vector,
    sample_qn,
)
from .quat import BRANCH_EPS, I, ONE, Quaternion, qexp, qlog

CLASS_EPS = 1e-12
O3_RADIUS = 0.1
LOG_I = qlog(I)


class CoverClass(str, enum.Enum):
    O1 = "O1"
    O2 = "O2"
    O3 = "O3"


def classify(p: QPoint, class_eps: float = CLASS_EPS) -> CoverClass:
    if abs(p.lam + ONE) <= class_eps:
        return CoverClass.O2
    if abs(p.lam - ONE) <= class_eps:
        return CoverClass.O3
    return CoverClass.O1


def _log_lambda(p: QPoint, branch_eps: float) -> Quaternion:
    try:
        return qlog(p.lam, branch_eps=branch_eps)
    except NegativeRealAxis as exc:
        raise BranchViolation(f"lambda too close to -1 for the principal Log: {p.lam}") from exc


def log_matrix(p: QPoint, branch_eps: float = BRANCH_EPS) -> HMatrix:
    """Log A = x (Log lam) x*, skew-adjoint for unit lam."""
    return rank_one(p.x, _log_lambda(p, branch_eps))


def exp_rank_one(x: HVector, mu: Quaternion) -> HMatrix:
    """exp(x mu x*) for unit x, summed in closed form as I + x (e^mu - 1) x*."""
    return HMatrix(identity(x.n).data + rank_one(x, qexp(mu) - ONE).data)


def _check_time(t: float) -> float:
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"t must lie in [0, 1], got {t}")
    return t


def contract_O1(p: QPoint, t: float, branch_eps: float = BRANCH_EPS) -> QPoint:
    """Phi(A, t) = phi(x, exp((1 - t) Log lam)); also used on O3."""
    t = _check_time(t)
    log_lam = _log_lambda(p, branch_eps)
    return phi(p.x, qexp(log_lam * (1.0 - t)))


def psi_lower(x: HVector, t: float) -> HMatrix:
    """phi(x, exp((1 - 2t) Log i)) phi(x, i), the t <= 1/2 piece of Psi."""
    return matmul(phi(x, qexp(LOG_I * (1.0 - 2.0 * t))).matrix, phi(x, I).matrix)


def psi_upper(x: HVector, t: float) -> HMatrix:
    """phi(x, exp(2(1 - t) Log i)), the t >= 1/2 piece of Psi."""
    return phi(x, qexp(LOG_I * (2.0 * (1.0 - t)))).matrix


def contract_O2(p: QPoint, t: float, class_eps: float = CLASS_EPS) -> HMatrix:
    t = _check_time(t)
    if classify(p, class_eps) is not CoverClass.O2:
        raise DomainError("Psi is only defined on O2 = {phi(x, -1)}")
    return psi_lower(p.x, t) if t <= 0.5 else psi_upper(p.x, t)


def contraction(p: QPoint, which: CoverClass) -> Callable[[float], HMatrix]:
    if which is CoverClass.O2:
        return lambda t: contract_O2(p, t)
    return lambda t: contract_O1(p, t).matrix


def lipschitz_constant(A: HMatrix) -> float:
    return math.pi * (2.0 + fro_norm(A))


# ---------------------------------------------------------------- sampling

_STREAM = {CoverClass.O1: 1, CoverClass.O2: 2, CoverClass.O3: 3}


def sample_class(n: int, which: CoverClass, seed, index: int, o3_radius: float = O3_RADIUS) -> QPoint:
    """Deterministic sample ``index`` of the given cover set."""
    rng = make_rng(seed, _STREAM[which], index)
    x = random_unit_vector(rng, n)
    if which is CoverClass.O2:
        return phi(x, Quaternion(-1.0))
    if which is CoverClass.O3:
        if index == 0:
            return phi(x, ONE)
        eps = o3_radius * rng.uniform(0.0, 1.0)
        return phi(x, qexp(random_imaginary_axis(rng) * eps))
    while True:
        lam = random_unit_quaternion(rng)
        if abs(lam - ONE) > 1e-6 and abs(lam + ONE) > 1e-6:
            return phi(x, lam)


def cover_census(n: int, samples: int, seed, class_eps: float = CLASS_EPS) -> dict:
    """Tag random Q_n points plus forced O2/O3 constructions; count the tags."""
    counts = {c.value: 0 for c in CoverClass}
    tagged = 0
    forced = [(CoverClass.O2, 0), (CoverClass.O3, 0)]
    points = [sample_qn(n, (seed, i)) for i in range(samples)]
    points += [sample_class(n, c, seed, i) for c, i in forced]
    for p in points:
        near_plus, near_minus = abs(p.lam - ONE) <= class_eps, abs(p.lam + ONE) <= class_eps
        memberships = [not (near_plus or near_minus), near_minus, near_plus]
        tagged += sum(memberships) == 1
        counts[classify(p, class_eps).value] += 1
    return {"total": len(points), "uniquely_tagged": tagged, "counts": counts}


# ---------------------------------------------------------------- certificates


@dataclass
class HomotopyCertificate:
    n: int
    set: CoverClass
    samples: int
    time_steps: int
    max_endpoint_residual: float
    max_symplectic_residual: float
    stays_in_qn: bool
    left_qn_witness: Optional[tuple[int, float]]
    seed: int
    failures: int = 0
    max_step_ratio: float = 0.0
    max_branch_gap: Optional[float] = None
    representative_discrepancy: Optional[float] = None
    grid: list[float] = field(default_factory=list, repr=False)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_dict(self, with_grid: bool = False) -> dict:
        d = asdict(self)
        d["set"] = self.set.value
        d["left_qn_witness"] = (
            None if self.left_qn_witness is None else {"sample": self.left_qn_witness[0], "t": self.left_qn_witness[1]}
        )
        if not with_grid:
            d.pop("grid")
        return d


@dataclass
class _SampleResult:
    index: int
    endpoint: float
    sympl: float
    step_ratio: float
    first_out: Optional[float]
    branch_gap: float = 0.0
    discrepancy: float = 0.0


def trace_path(path: Callable[[float], HMatrix], grid: np.ndarray, tol: float):
    """Evaluate ``path`` on ``grid``; return matrices, symplectic residuals, Q_n flags."""
    mats = [path(float(t)) for t in grid]
    sympl = [symplectic_residual(M) for M in mats]
    flags = [in_qn(M, tol) for M in mats]
    return mats, sympl, flags


def _run_sample(n, which, seed, index, grid, tol) -> _SampleResult:
    p = sample_class(n, which, seed, index)
    mats, sympl, flags = trace_path(contraction(p, which), grid, tol)
    A = p.matrix
    endpoint = max(
        fro_norm(HMatrix(mats[0].data - A.data)),
        fro_norm(HMatrix(mats[-1].data - identity(n).data)),
    )
    bound = lipschitz_constant(A)
    step_ratio = float(max(
        (fro_norm(HMatrix(b.data - a.data)) / (bound * (t1 - t0)) for a, b, t0, t1 in zip(mats, mats[1:], grid, grid[1:])),
        default=0.0,
    ))
    first_out = next((float(t) for t, ok in zip(grid, flags) if not ok), None)
    res = _SampleResult(index, endpoint, max(sympl), step_ratio, first_out)
    if which is CoverClass.O2:
        res.branch_gap = fro_norm(HMatrix(psi_lower(p.x, 0.5).data - psi_upper(p.x, 0.5).data))
        # same point of O2, another representative x nu
        nu = random_unit_quaternion(make_rng(seed, 4, index))
        other = phi(p.x.scale(nu), Quaternion(-1.0))
        res.discrepancy = max(fro_norm(HMatrix(contract_O2(other, t).data - M.data)) for t, M in zip(grid, mats))
    return res


def verify_cover(
    n: int,
    samples: int = 100,
    time_steps: int = 64,
    tol: float = MEMBERSHIP_TOL,
    seed: int = 42,
    workers: int = 1,
) -> list[HomotopyCertificate]:
    """Certify that each of O1, O2, O3 contracts to I inside Sp(n).

    A sample fails when an endpoint or symplectic residual exceeds ``tol``,
    when a grid step exceeds the Lipschitz bound, when the O2 branches
    disagree at t = 1/2, or (O1/O3 only) when a path point leaves Q_n.
    Whether the O2 path leaves Q_n is recorded, not judged.
    """
    if n < 1 or samples < 1 or time_steps < 2:
        raise ValueError("need n >= 1, samples >= 1, time_steps >= 2")
    grid = np.linspace(0.0, 1.0, time_steps)
    certs = []
    for which in CoverClass:
        run = lambda i, which=which: _run_sample(n, which, seed, i, grid, tol)  # noqa: E731
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(run, range(samples)))
        else:
            results = [run(i) for i in range(samples)]
        certs.append(_certify(n, which, samples, grid, tol, seed, results))
    return certs


def _certify(n, which, samples, grid, tol, seed, results) -> HomotopyCertificate:
    outside = [(r.index, r.first_out) for r in results if r.first_out is not None]
    failures = 0
    for r in results:
        bad = r.endpoint > tol or r.sympl > tol or r.step_ratio > 1.0
        if which is CoverClass.O2:
            bad = bad or r.branch_gap > tol
        else:
            bad = bad or r.first_out is not None
        failures += bad
    cert = HomotopyCertificate(
        n=n,
        set=which,
        samples=samples,
        time_steps=len(grid),
        max_endpoint_residual=max(r.endpoint for r in results),
        max_symplectic_residual=max(r.sympl for r in results),
        stays_in_qn=not outside,
        left_qn_witness=min(outside) if outside else None,
        seed=seed,
        failures=failures,
        max_step_ratio=max(r.step_ratio for r in results),
        grid=[float(t) for t in grid],
    )
    if which is CoverClass.O2:
        cert.max_branch_gap = max(r.branch_gap for r in results)
        cert.representative_discrepancy = max(r.discrepancy for r in results)
    return cert
