"""Acceptance checks, one test per criterion.

Each test prints a single ``CRITERION k: PASS|FAIL`` line (visible in ``pytest -v``
output) before asserting, so a run doubles as an acceptance report.
"""
import json
import os
import subprocess
import sys
import time

import numpy as np
import pytest

from slicecalc import harmonics as hm
from slicecalc import quat
from slicecalc.cli import main
from slicecalc.clifford import Signature
from slicecalc.diffops import verify_identity
from slicecalc.polycalc import CoordPoly, expand_power, slice_derivative_of_sd_poly, spherical_derivative_poly
from slicecalc.suites import (
    SuiteConfig,
    conj_slice,
    suite_cor_n_odd,
    suite_koebe,
    suite_laplacian,
    suite_propH,
    suite_teo2,
    suite_vs,
    suite_zonal,
)


@pytest.fixture
def verdict(capsys):
    def _verdict(k, ok, detail=""):
        with capsys.disabled():
            print(f"\nCRITERION {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail
    return _verdict


def _by_name(reports):
    return {r.identity: r for r in reports}


def _summary(reports):
    return ", ".join(f"{r.identity} max={r.max_residual:.2e}" for r in reports)


def test_criterion_01_exact_harmonicity(verdict):
    t0 = time.perf_counter()
    nonzero = [m for m in range(1, 13) if not spherical_derivative_poly(m, 3).laplacian().is_zero()]
    elapsed = time.perf_counter() - t0
    verdict(1, not nonzero and elapsed < 5.0, f"lap (x^m)'_s == 0 for m<=12, n=3; nonzero={nonzero}; {elapsed:.2f}s")


def test_criterion_02_expand_byte_exact(verdict):
    import io
    outs = []
    for op in ("dbar", "laplacian"):
        buf = io.StringIO()
        code = main(["expand", "--n", "3", "--power", "3", "--op", op], out=buf)
        outs.append((code, buf.getvalue()))
    want = [(0, "-2*(3*x0^2 - x1^2 - x2^2 - x3^2)\n"), (0, "-4*(3*x0 + x1*e1 + x2*e2 + x3*e3)\n")]
    verdict(2, outs == want, f"got {[o[1].strip() for o in outs]}")


def test_criterion_03_fueter_sce_and_biharmonic(verdict):
    bad = []
    for label, n, basis in (("R3", 3, None), ("H", 2, quat.QUAT_BASIS)):
        for m in range(1, 11):
            lap = expand_power(m, n, basis).laplacian()
            if not lap.apply_cr().is_zero():
                bad.append((label, m, "dbar lap"))
            if not lap.laplacian().is_zero():
                bad.append((label, m, "lap^2"))
    verdict(3, not bad, f"n=3 and H, m<=10; failures={bad}")


def test_criterion_04_n5_iterated(verdict):
    t0 = time.perf_counter()
    reports = suite_cor_n_odd(SuiteConfig(n=5))
    elapsed = time.perf_counter() - t0
    ok = all(r.passed for r in reports) and all(r.n == 5 for r in reports) and elapsed < 60.0
    verdict(4, ok, f"{_summary(reports)}; {elapsed:.1f}s")


def test_criterion_05_prop_numeric(verdict):
    reports = []
    for n in (3, 4, 5):
        reports += suite_teo2(SuiteConfig(n=n, samples=200, h=1e-4, tol=1e-5))
    worst = max(r.max_residual for r in reports)
    ok = all(r.passed and r.samples == 200 for r in reports)
    verdict(5, ok, f"{len(reports)} reports over n in 3,4,5; worst max residual {worst:.2e} < 1e-5")


def test_criterion_06_cleared_laplacian_identities(verdict):
    cfg = SuiteConfig(n=5)
    c41 = _by_name(suite_laplacian(cfg))["lap_sd_cleared"]
    c46 = _by_name(suite_vs(cfg))["lap_sv_d0"]
    ok = c41.passed and c46.passed and c41.samples == 8 and c46.samples == 8
    verdict(6, ok, f"n=5, m<=8: {_summary([c41, c46])}")


def test_criterion_07_zonal(verdict):
    reps = _by_name(suite_zonal(SuiteConfig()))
    names = ("zonal_Z11", "zonal_gegenbauer", "zonal_power")
    chosen = [reps[k] for k in names]
    ok = all(r.passed for r in chosen) and reps["zonal_gegenbauer"].samples == 100 \
        and reps["zonal_power"].samples == 100
    verdict(7, ok, _summary(chosen))


def test_criterion_08_koebe_poisson(verdict):
    reps = _by_name(suite_koebe(SuiteConfig()))
    chosen = [reps["koebe_poisson"], reps["poisson_partial_sums"]]
    ok = all(r.passed for r in chosen) and reps["koebe_poisson"].samples == 100
    verdict(8, ok, _summary(chosen))


def test_criterion_09_kelvin(verdict):
    rep = _by_name(suite_zonal(SuiteConfig()))["zonal_kelvin"]
    verdict(9, rep.passed and rep.samples == 100, _summary([rep]))


def test_criterion_10_quaternionic(verdict):
    reports = suite_propH(SuiteConfig())
    exact_bad = [m for m in range(1, 11)
                 if not (expand_power(m, 2, quat.QUAT_BASIS).laplacian()
                         + slice_derivative_of_sd_poly(m, 2, quat.QUAT_BASIS) * 4).is_zero()]
    ok = all(r.passed for r in reports) and not exact_bad
    worst = max(r.max_residual for r in reports)
    verdict(10, ok, f"propH worst {worst:.2e} < 1e-5; lap x^m = -4 d(x^m)'_s/dx exact m<=10, bad={exact_bad}")


def test_criterion_11_negative_controls(verdict):
    rep = verify_identity("cor1a", conj_slice(Signature(3)), 200, expected=False)
    x = CoordPoly.identity(2, quat.QUAT_BASIS)
    witness = x.apply_cr()
    exact_ok = (witness + 2).is_zero() and not witness.is_zero()
    ok = (not rep.passed) and min(rep.residuals) > 0.5 and exact_ok
    verdict(11, ok, f"cor1a on x^c: min residual {min(rep.residuals):.3f} > 0.5; "
                    f"dbar_CRF x = {witness.render(factor=False)}")


def test_criterion_12_determinism(verdict):
    env = dict(os.environ)
    env.pop("SLICECALC_SEED", None)
    cmd = [sys.executable, "-m", "slicecalc", "verify", "--seed", "42"]
    procs = [subprocess.Popen(cmd, stdout=subprocess.PIPE, stderr=subprocess.PIPE, env=env) for _ in range(2)]
    outs = [p.communicate(timeout=600) for p in procs]
    a, b = outs[0][0], outs[1][0]
    codes = [p.returncode for p in procs]
    doc = json.loads(a)
    ok = a == b and len(a) > 0 and codes == [0, 0] and doc["seed"] == 42
    verdict(12, ok, f"{len(a)} bytes, identical={a == b}, exit codes={codes}, suites={len(doc['suites'])}")
