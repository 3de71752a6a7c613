"""Property suites run by ``quatcat verify``.

Each suite returns a :class:`SuiteResult`; the report verdict is derived
from them.  Suites with expectation ``"witness"`` pass when they produce a
counterexample (e.g. a product of two rotations that is not in Q_n).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import cover
from .errors import NegativeRealAxis, ZeroQuaternion
from .hmat import (
    HMatrix,
    HVector,
    adjoint,
    apply,
    embed,
    exp_series,
    fro_norm,
    inner,
    matmul,
    rank_one,
    symplectic_residual,
)
from .qproj import (
    cells,
    equivalent,
    in_qn,
    make_rng,
    phi,
    poincare_polynomial,
    random_unit_quaternion,
    random_unit_vector,
    recover,
    sample_qn,
)
from .quat import I, J, Quaternion, qexp, qlog

# stream ids keep every suite's random numbers independent of the others
_QUAT, _HMAT, _MEMBER, _COMPOSE, _RECOVER, _RANK2, _EXP, _CENSUS = range(10, 18)


@dataclass
class SuiteResult:
    name: str
    samples: int
    failures: int
    max_endpoint_residual: float = 0.0
    max_symplectic_residual: float = 0.0
    expectation: str = "pass"
    witness: Optional[dict] = None
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        if self.expectation == "witness":
            return self.witness is not None and self.failures == 0
        return self.failures == 0 and self.witness is None

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "expectation": self.expectation,
            "samples": self.samples,
            "failures": self.failures,
            "max_endpoint_residual": float(self.max_endpoint_residual),
            "max_symplectic_residual": float(self.max_symplectic_residual),
            "witness": self.witness,
            "passed": self.passed,
            "details": self.details,
        }


def random_quaternion(rng: np.random.Generator, lo: float = 1e-3, hi: float = 1e3) -> Quaternion:
    """Random direction with log-uniform modulus in [lo, hi]."""
    g = rng.standard_normal(4)
    r = math.exp(rng.uniform(math.log(lo), math.log(hi)))
    return Quaternion.from_array(g / np.linalg.norm(g) * r)


def random_hmatrix(rng: np.random.Generator, n: int) -> HMatrix:
    return HMatrix(rng.standard_normal((n, n, 4)))


def quat_roundtrip(samples: int, seed) -> SuiteResult:
    rng = make_rng(seed, _QUAT)
    worst, failures = 0.0, 0
    for _ in range(samples):
        q = random_quaternion(rng)
        if q.imag_norm() <= 1e-8 * q.norm() and q.re < 0:
            continue
        err = abs(qexp(qlog(q)) - q) / q.norm()
        worst = max(worst, err)
        failures += err > 1e-11
    for bad, exc in ((Quaternion(-1.0), NegativeRealAxis), (Quaternion(0.0), ZeroQuaternion)):
        try:
            qlog(bad)
            failures += 1
        except exc:
            pass
    return SuiteResult("quat_roundtrip", samples, failures, max_endpoint_residual=worst)


def hmat_algebra(n: int, samples: int, seed) -> SuiteResult:
    """(AB)* = B*A*, A(v lam) = (Av) lam, embed preserves the residual."""
    rng = make_rng(seed, _HMAT)
    worst, worst_sympl, failures = 0.0, 0.0, 0
    for i in range(samples):
        A, B = random_hmatrix(rng, n), random_hmatrix(rng, n)
        v = HVector(rng.standard_normal((n, 4)))
        lam = Quaternion.from_array(rng.standard_normal(4))
        e1 = fro_norm(adjoint(matmul(A, B)) - matmul(adjoint(B), adjoint(A)))
        lhs, rhs = apply(A, v.scale(lam)), apply(A, v).scale(lam)
        e2 = float(np.linalg.norm(lhs.data - rhs.data))
        scale = fro_norm(A) * fro_norm(B) + fro_norm(A) * v.norm() * lam.norm()
        err = max(e1, e2) / scale
        S = sample_qn(n, (seed, _HMAT, i)).matrix
        e3 = abs(symplectic_residual(embed(S)) - symplectic_residual(S))
        worst, worst_sympl = max(worst, err), max(worst_sympl, e3)
        failures += err > 1e-12 or e3 > 1e-12
    return SuiteResult("hmat_algebra", samples, failures, worst, worst_sympl)


def qproj_membership(n: int, samples: int, seed) -> SuiteResult:
    res = [symplectic_residual(sample_qn(n, (seed, _MEMBER, i)).matrix) for i in range(samples)]
    failures = sum(r > 1e-10 for r in res)
    return SuiteResult("qproj_membership", samples, failures, max_symplectic_residual=max(res))


def qproj_composition(n: int, samples: int, seed) -> SuiteResult:
    """phi(x, lam) phi(x, mu) = phi(x, lam mu)."""
    rng = make_rng(seed, _COMPOSE)
    worst, failures = 0.0, 0
    for _ in range(samples):
        x = random_unit_vector(rng, n)
        lam, mu = random_unit_quaternion(rng), random_unit_quaternion(rng)
        lm = lam * mu
        err = fro_norm(matmul(phi(x, lam).matrix, phi(x, mu).matrix) - phi(x, lm / lm.norm()).matrix)
        worst = max(worst, err)
        failures += err > 1e-11
    return SuiteResult("qproj_composition", samples, failures, worst)


def qproj_recover(n: int, samples: int, seed, tol: float) -> SuiteResult:
    worst, failures = 0.0, 0
    for i in range(samples):
        p = sample_qn(n, (seed, _RECOVER, i))
        q = recover(p.matrix, tol)
        err = fro_norm(q.matrix - p.matrix)
        worst = max(worst, err)
        failures += not equivalent(p, q, tol)
    return SuiteResult("qproj_recover", samples, failures, worst)


def rank_two_product(rng: np.random.Generator, n: int) -> HMatrix:
    """phi(x, i) phi(y, j) with <x, y> = 0; A - I has rank two."""
    x = random_unit_vector(rng, n)
    y = random_unit_vector(rng, n)
    y = HVector(y.data - x.scale(inner(x, y)).data).normalized()
    return matmul(phi(x, I).matrix, phi(y, J).matrix)


def qproj_rank_two(n: int, samples: int, seed, tol: float) -> SuiteResult:
    rng = make_rng(seed, _RANK2)
    rejected = []
    for i in range(samples):
        if not in_qn(rank_two_product(rng, n), tol):
            rejected.append(i)
    witness = {"sample": rejected[0], "t": 0.0} if rejected else None
    return SuiteResult(
        "qproj_rank_two_rejection",
        samples,
        samples - len(rejected),
        expectation="witness",
        witness=witness,
    )


def exp_collapse(n: int, samples: int, seed) -> SuiteResult:
    """Closed-form exp(x mu x*) against the 20-term power series."""
    rng = make_rng(seed, _EXP)
    worst, failures = 0.0, 0
    for _ in range(samples):
        x = random_unit_vector(rng, n)
        g = rng.standard_normal(4)
        mu = Quaternion.from_array(g / np.linalg.norm(g) * rng.uniform(0.0, 2.0))
        err = fro_norm(cover.exp_rank_one(x, mu) - exp_series(rank_one(x, mu), 20))
        worst = max(worst, err)
        failures += err > 1e-10
    return SuiteResult("exp_rank_one_series", samples, failures, worst)


def cover_suites(n: int, samples: int, time_steps: int, tol: float, seed, workers: int = 1) -> list[SuiteResult]:
    out = []
    for cert in cover.verify_cover(n, samples, time_steps, tol, seed, workers):
        details = {
            "stays_in_qn": cert.stays_in_qn,
            "time_steps": cert.time_steps,
            "max_step_ratio": cert.max_step_ratio,
        }
        if cert.max_branch_gap is not None:
            details["max_branch_gap"] = cert.max_branch_gap
            details["representative_discrepancy"] = cert.representative_discrepancy
        witness = None
        if cert.left_qn_witness is not None:
            witness = {"sample": cert.left_qn_witness[0], "t": cert.left_qn_witness[1]}
        out.append(
            SuiteResult(
                f"cover_{cert.set.value}",
                cert.samples,
                cert.failures,
                cert.max_endpoint_residual,
                cert.max_symplectic_residual,
                witness=witness,
                details=details,
            )
        )
    return out


def cover_census_suite(n: int, samples: int, seed) -> SuiteResult:
    census = cover.cover_census(n, samples, (seed, _CENSUS))
    failures = census["total"] - census["uniquely_tagged"]
    if census["counts"]["O2"] == 0 or census["counts"]["O3"] == 0:
        failures += 1
    return SuiteResult("cover_census", census["total"], failures, details={"counts": census["counts"]})


def product_polynomial(n: int) -> list[int]:
    coeffs = np.array([1], dtype=np.int64)
    for i in range(1, n + 1):
        factor = np.zeros(4 * i, dtype=np.int64)
        factor[0] = factor[-1] = 1
        coeffs = np.convolve(coeffs, factor)
    return [int(c) for c in coeffs]


def cell_structure(n: int) -> SuiteResult:
    cs = cells(n)
    failures = 0
    failures += len(cs) != 2**n
    failures += max(c.dimension for c in cs) != 2 * n * n + n
    failures += poincare_polynomial(n) != product_polynomial(n)
    return SuiteResult("cells", len(cs), failures, details={"poincare": poincare_polynomial(n)})


def run_all(n: int, samples: int, time_steps: int, tol: float, seed, workers: int = 1) -> list[SuiteResult]:
    suites = [
        quat_roundtrip(samples, seed),
        hmat_algebra(n, samples, seed),
        qproj_membership(n, samples, seed),
        qproj_composition(n, samples, seed),
        qproj_recover(n, samples, seed, tol),
    ]
    if n >= 2:
        suites.append(qproj_rank_two(n, samples, seed, tol))
    suites.append(exp_collapse(n, samples, seed))
    suites.extend(cover_suites(n, samples, time_steps, tol, seed, workers))
    suites.append(cover_census_suite(n, samples, seed))
    suites.append(cell_structure(n))
    return suites
