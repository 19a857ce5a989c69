"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line."""
import json
import math
from fractions import Fraction as F
from math import comb

import numpy as np
import pytest

from conftest import ACCEPTANCE
from rectconv import gegenbauer as geg
from rectconv import verification as v
from rectconv.cli import run
from rectconv.convolution import ConvolutionParams, rect_convolve
from rectconv.pinching import pinch_at_point
from rectconv.poly import ExactPolynomial, cauchy_transform, from_roots
from rectconv.transforms import phi


def _record(number: int, ok: bool, detail: str) -> None:
    ACCEPTANCE[number] = (bool(ok), detail)
    print(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def _summary(*reports: v.VerificationReport) -> str:
    return "; ".join(f"{r.claim} {r.passed}/{r.trials}" for r in reports)


def test_criterion_01_gegenbauer_reduction():
    # independent closed form: s**d C_d^{k+1}((x - lam - mu) / (2 s)) with s = sqrt(lam mu) rational
    rng = np.random.default_rng(2024)
    pairs = []
    while len(pairs) < 50:
        r = F(int(rng.integers(1, 33)), int(rng.integers(1, 9)))
        s = F(int(rng.integers(1, 13)), int(rng.integers(1, 7)))
        lam, mu = (r, r * s * s) if rng.random() < 0.5 else (r * s * s, r)
        if (lam, mu) not in pairs:
            pairs.append((lam, mu))
    bad = checked = 0
    for lam, mu in pairs:
        root = F(math.isqrt((lam * mu).numerator), math.isqrt((lam * mu).denominator))
        assert root * root == lam * mu
        for d in range(1, 9):
            p, q = from_roots([lam] * d), from_roots([mu] * d)
            for k in range(0, 6):
                lhs = rect_convolve(p, q, ConvolutionParams(d, k)) * comb(k + d, d)
                arg = geg.geg_coeffs(d, k + 1).compose_affine(1 / (2 * root), -(lam + mu) / (2 * root))
                bad += lhs != arg * root ** d
                checked += 1
    _record(1, bad == 0, f"{checked - bad}/{checked} exact equalities over 50 pairs")


def test_criterion_02_rr():
    rep = v.verify_rr(v.TrialSpec(seed=0, trials=1000, d_max=10, n_max=5))
    _record(2, rep.ok and rep.trials == 1000, _summary(rep))


def test_criterion_03_main():
    rep = v.verify_main(v.TrialSpec(seed=0, trials=500, d_max=8, n_max=5, alpha_range=(0.0, 2.0)))
    worst_eq = 0.0
    for d in range(1, 9):
        for n in range(0, 6):
            q = from_roots([F(i + 1, 2) for i in range(d)], F(3, 2))
            for alpha in (F(1, 4), F(1), F(2)):
                worst_eq = max(worst_eq, abs(phi(ExactPolynomial.x() ** d, q, n, n, d, alpha)))
    ok = rep.ok and worst_eq <= 1e-10
    _record(3, ok, f"{_summary(rep)}; worst |phi| at x**d {worst_eq:.2g}")


def test_criterion_04_basic_theta():
    rep = v.verify_basic_theta(v.TrialSpec(seed=0, trials=200))
    _record(4, rep.ok, _summary(rep))


def test_criterion_05_translate():
    rep = v.verify_translate(v.TrialSpec(seed=0, trials=200))
    _record(5, rep.ok, _summary(rep))


def test_criterion_06_monotonicity():
    spec = v.TrialSpec(seed=0, trials=200, d_max=6, n_max=4)
    reps = [v.verify_hmonotone(spec), v.verify_monotu(spec), v.verify_simplify(spec),
            v.quasilinear_check(v.TrialSpec(seed=0, trials=200, d_max=4, n_max=4))]
    straddled = reps[-1].details.get("flags", {}).get("straddle_hypothesis", 0)
    _record(6, all(r.ok for r in reps), _summary(*reps) + f"; root straddle tested in {straddled} trials")


def test_criterion_07_gegenbauer_identities():
    out = v._geg_identities(30, ("1/2", "1", "3/2", "5"))
    _record(7, out.passed, f"120 (d, alpha) cases, violations {out.inputs['bad']}")


def test_criterion_08_prepreans():
    out = v._geg_maxroot_monotone(("1/4", "1", "3"), 40)
    _record(8, out.passed, f"d = 1..40, min gap to gamma {out.margin:.3g}")


def test_criterion_09_preans_and_ans():
    bad = checked = 0
    for d in range(1, 41):
        for n in range(0, 21):
            g = geg.gamma_nd(n, d)
            poly = geg.geg_coeffs(d, n + 1)
            for i in range(1, 9):
                x = g + (3.0 - g) * i / 8
                bad += cauchy_transform(poly, x) > geg.cauchy_upper_bound(n, d, x)
                checked += 1
    ans = v._geg_ans(1000, 0)
    ok = bad == 0 and ans.passed
    _record(9, ok, f"bound {checked - bad}/{checked}; ans implication 1000 trials "
                   f"({ans.inputs['applied']} with premise), violations {len(ans.inputs['bad'])}")


def test_criterion_10_asymptotics():
    out = v._geg_asymptotics(("1/4", "1/2", "1"))
    _record(10, out.passed, f"d = 200 worst slack to 5e-2: {out.margin:.3g}; issues {out.inputs['bad']}")


def test_criterion_11_pinching():
    rep = v.verify_pinch(v.TrialSpec(seed=0, trials=300, d_max=6, n_max=4))
    hand = pinch_at_point(0, 2, 4) == (F(4, 3), F(2, 3), F(8, 3))
    unsquared = rep.details.get("flags", {}).get("hat_root_above_unsquared_w_root", 0)
    _record(11, rep.ok and hand, f"{_summary(rep)} (a-d, quad <= 1e-9); hand example exact: {hand}; "
                                 f"hat root above unsquared W root in {unsquared} trials")


def test_criterion_12_base_cases():
    deriv = v.deriv_grid_check()
    claimt = v.verify_claim_t(v.TrialSpec(seed=0, trials=1000))
    geg0 = v.geg0_grid_check()
    delta = v._geg_delta(20, ("1/4", "1/2", "1"))
    ok = deriv.ok and claimt.ok and geg0.ok and delta.passed
    _record(12, ok, _summary(deriv, claimt, geg0) + f"; delta fitness d <= 20 ok: {delta.passed} "
                                                    f"(sturm-certified {delta.inputs['sturm_certified']}/60)")


REPORT_ARGS = {
    "main": ["--trials", "100"], "rr": ["--trials", "200"], "basictheta": ["--trials", "100"],
    "translate": ["--trials", "100"], "hmonotone": ["--trials", "100"], "monotu": ["--trials", "50"],
    "simplify": ["--trials", "100"], "quasilinear": ["--trials", "50", "--d-max", "4"],
    "pinch": ["--trials", "50", "--d-max", "5"], "claimt": ["--trials", "200"],
    "deriv": [], "geg0": [], "allderiv": [], "gegenbauer": ["--trials", "200"],
}


def test_criterion_13_determinism(tmp_path, capsys):
    assert set(REPORT_ARGS) == set(v.CLAIMS)
    mismatched, failed = [], []
    for claim, extra in REPORT_ARGS.items():
        blobs = []
        for run_id in (0, 1):
            path = tmp_path / f"{claim}-{run_id}.json"
            code = run(["verify", "--claim", claim, "--seed", "17", *extra, "--report", str(path)])
            if code != 0:
                failed.append(claim)
            blobs.append(path.read_bytes())
        if blobs[0] != blobs[1]:
            mismatched.append(claim)
        assert json.loads(blobs[0])["schema"] == 1
    capsys.readouterr()
    ok = not mismatched and not failed
    _record(13, ok, f"{len(REPORT_ARGS)} claims byte-identical across two runs; "
                    f"mismatched {mismatched}, failing {failed}")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-s"]))
