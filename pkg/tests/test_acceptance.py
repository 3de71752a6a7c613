"""Exit criteria.  Each test appends one PASS/FAIL line to the terminal summary."""
import json
import math

import numpy as np
import pytest

from oracles import from_real_matrix, poly_product, real_matrix, taylor
from quatcat import cli
from quatcat.cover import CoverClass, classify, cover_census, exp_rank_one, sample_class, verify_cover
from quatcat.errors import NegativeRealAxis, NotInQn, ZeroQuaternion
from quatcat.hmat import HMatrix, HVector, fro_norm, inner, matmul, rank_one, symplectic_residual
from quatcat.qproj import (
    cells,
    equivalent,
    make_rng,
    phi,
    poincare_polynomial,
    random_unit_quaternion,
    random_unit_vector,
    recover,
    sample_qn,
)
from quatcat.quat import I, J, Quaternion, polar, qexp, qlog

SEED = 20240611


@pytest.fixture
def record(acceptance_log):
    def _record(number, title, ok, detail=""):
        acceptance_log.append(f"[{'PASS' if ok else 'FAIL'}] {number:>2}. {title}: {detail}")
        return ok

    return _record


def test_01_scalar_round_trip(record):
    rng = make_rng(SEED, 1)
    worst, tested = 0.0, 0
    while tested < 10_000:
        g = rng.standard_normal(4)
        q = Quaternion.from_array(g / np.linalg.norm(g) * math.exp(rng.uniform(math.log(1e-3), math.log(1e3))))
        if polar(q).theta >= math.pi - 1e-9:
            continue
        worst = max(worst, abs(qexp(qlog(q)) - q) / q.norm())
        tested += 1
    errors = []
    for bad, exc in ((Quaternion(-1.0), NegativeRealAxis), (Quaternion(0.0), ZeroQuaternion)):
        try:
            qlog(bad)
            errors.append(f"qlog({bad.re}) did not raise")
        except exc:
            pass
    ok = worst <= 1e-11 and not errors
    assert record(1, "scalar round trip", ok, f"max rel err {worst:.2e} over {tested}; {errors or 'errors raised'}")


def test_02_group_membership(record):
    worst = {n: max(symplectic_residual(sample_qn(n, (SEED, 2, n, i)).matrix) for i in range(1000)) for n in range(1, 6)}
    ok = max(worst.values()) <= 1e-10
    assert record(2, "group membership", ok, ", ".join(f"n={n}: {w:.1e}" for n, w in worst.items()))


def test_03_composition(record):
    rng = make_rng(SEED, 3)
    worst = 0.0
    for i in range(1000):
        n = 1 + i % 5
        x = random_unit_vector(rng, n)
        lam, mu = random_unit_quaternion(rng), random_unit_quaternion(rng)
        lm = lam * mu
        err = fro_norm(matmul(phi(x, lam).matrix, phi(x, mu).matrix) - phi(x, lm / lm.norm()).matrix)
        worst = max(worst, err)
    x = random_unit_vector(rng, 4)
    square = fro_norm(matmul(phi(x, I).matrix, phi(x, I).matrix) - phi(x, Quaternion(-1.0)).matrix)
    ok = worst <= 1e-11 and square <= 1e-11
    assert record(3, "composition identity", ok, f"max {worst:.2e}; phi(x,i)^2 vs phi(x,-1) {square:.1e}")


def test_04_recovery(record):
    failures = 0
    for n in range(2, 6):
        for i in range(1000):
            p = sample_qn(n, (SEED, 4, n, i))
            failures += not equivalent(recover(p.matrix), p)
    rng = make_rng(SEED, 4)
    accepted = 0
    for i in range(200):
        n = 2 + i % 4
        x, y = random_unit_vector(rng, n), random_unit_vector(rng, n)
        y = HVector(y.data - x.scale(inner(x, y)).data).normalized()
        try:
            recover(matmul(phi(x, I).matrix, phi(y, J).matrix))
            accepted += 1
        except NotInQn:
            pass
    ok = failures == 0 and accepted == 0
    assert record(4, "recovery", ok, f"{failures} round-trip failures / 4000; {accepted} rank-two products accepted / 200")


def test_05_exp_collapse(record):
    rng = make_rng(SEED, 5)
    worst = 0.0
    for i in range(500):
        n = 1 + i % 4
        x = random_unit_vector(rng, n)
        g = rng.standard_normal(4)
        mu = Quaternion.from_array(g / np.linalg.norm(g) * rng.uniform(0.0, 2.0))
        series = HMatrix(from_real_matrix(taylor(real_matrix(rank_one(x, mu).data), 20)))
        worst = max(worst, fro_norm(exp_rank_one(x, mu) - series))
    assert record(5, "matrix log/exp collapse", worst <= 1e-10, f"max Frobenius gap {worst:.2e}")


@pytest.fixture(scope="module")
def certificates():
    return {n: {c.set: c for c in verify_cover(n, samples=100, time_steps=64, seed=42)} for n in (2, 3)}


def test_06_phi_certificate(record, certificates):
    parts, ok = [], True
    for n, certs in certificates.items():
        for which in (CoverClass.O1, CoverClass.O3):
            c = certs[which]
            good = c.max_endpoint_residual <= 1e-10 and c.max_symplectic_residual <= 1e-10 and c.stays_in_qn and c.passed
            ok &= good
            parts.append(
                f"n={n} {which.value}: end {c.max_endpoint_residual:.1e} sympl {c.max_symplectic_residual:.1e} in_Qn {c.stays_in_qn}"
            )
    assert record(6, "Phi certificate", ok, "; ".join(parts))


def test_07_psi_certificate(record, certificates):
    parts, ok = [], True
    for n, certs in certificates.items():
        c = certs[CoverClass.O2]
        good = (
            c.max_endpoint_residual <= 1e-10
            and c.max_branch_gap <= 1e-12
            and c.max_symplectic_residual <= 1e-10
            and c.stays_in_qn == (c.left_qn_witness is None)
        )
        ok &= good
        parts.append(
            f"n={n}: end {c.max_endpoint_residual:.1e} branch gap {c.max_branch_gap:.1e} "
            f"sympl {c.max_symplectic_residual:.1e} stays_in_Qn={c.stays_in_qn} witness={c.left_qn_witness} "
            f"rep. discrepancy {c.representative_discrepancy:.3f}"
        )
    assert record(7, "Psi certificate", ok, "; ".join(parts))


def test_08_cover(record):
    census = cover_census(3, 10_000, SEED)
    forced = [classify(sample_class(3, c, SEED, 0)) is c for c in (CoverClass.O2, CoverClass.O3)]
    counts = census["counts"]
    ok = census["uniquely_tagged"] == census["total"] and counts["O2"] > 0 and counts["O3"] > 0 and all(forced)
    assert record(8, "cover", ok, f"{census['uniquely_tagged']}/{census['total']} uniquely tagged; frequencies {counts}")


def test_09_cells(record):
    bad = []
    for n in range(1, 9):
        cs = cells(n)
        expected = poly_product([[1] + [0] * (4 * i - 2) + [1] for i in range(1, n + 1)])
        if len(cs) != 2**n or max(c.dimension for c in cs) != 2 * n * n + n or poincare_polynomial(n) != expected:
            bad.append(n)
    assert record(9, "cells", not bad, f"n=1..8 checked; mismatches {bad}")


def test_10_determinism(record, tmp_path):
    outs = []
    for name in ("a", "b"):
        target = tmp_path / f"{name}.json"
        code = cli.main(["verify", "--n", "3", "--samples", "100", "--seed", "42", "--out", str(target)])
        outs.append((code, target.read_bytes()))
    ok = outs[0] == outs[1] and outs[0][0] == 0 and json.loads(outs[0][1])["verdict"] == "pass"
    assert record(10, "determinism", ok, f"exit codes {outs[0][0]}/{outs[1][0]}; identical bytes {outs[0][1] == outs[1][1]}")
