import json
import math
from fractions import Fraction as F

import pytest

from rectconv import verification as v
from rectconv.errors import InvalidArgumentError
from rectconv.poly import ExactPolynomial, from_roots

X = ExactPolynomial.x()


def test_trial_spec_validation():
    with pytest.raises(InvalidArgumentError):
        v.TrialSpec(trials=0)
    with pytest.raises(InvalidArgumentError):
        v.TrialSpec(alpha_range=(1.0, 0.5))
    with pytest.raises(InvalidArgumentError):
        v.TrialSpec(root_range=0)
    assert v.TrialSpec(root_range="5/2").root_range == F(5, 2)


def test_report_counts_and_json():
    rep = v.verify_main(v.TrialSpec(seed=3, trials=12, d_max=4, n_max=2))
    assert rep.passed + rep.failed == rep.trials == 12
    d = rep.to_dict()
    assert d["schema"] == 1 and "runtime_s" not in d
    assert "runtime_s" in rep.to_dict(include_runtime=True)
    json.dumps(d)


def test_reports_are_deterministic_and_order_independent(monkeypatch):
    spec = v.TrialSpec(seed=11, trials=8, d_max=4, n_max=2)
    a = json.dumps(v.verify_main(spec).to_dict(), sort_keys=True)
    monkeypatch.setenv("FFR_THREADS", "2")
    b = json.dumps(v.verify_main(spec).to_dict(), sort_keys=True)
    assert a == b


def test_failure_echo_is_replayable():
    def broken(spec, index):
        return v.Outcome(False, -1.0, {"roots": ["1/3"]})

    rep = v._run_trials("demo", v.TrialSpec(trials=3), broken)
    assert rep.failed == 3 and rep.worst_input == {"trial": 0, "roots": ["1/3"]}
    assert not rep.ok


def test_worker_count_parsing(monkeypatch):
    monkeypatch.setenv("FFR_THREADS", "bogus")
    assert v.worker_count() == 1
    monkeypatch.setenv("FFR_THREADS", "3")
    assert v.worker_count() == 3


def test_deriv_cofactor_structure():
    for d in (2, 3, 5):
        for n in (0, 2):
            m = n + d
            _, s0 = v.deriv_cofactor(0, n, d)
            assert s0.monic() == from_roots([0, 0, 0, 4 * (m - 1) * (d - 1)])
            assert s0.degree == 4
    with pytest.raises(InvalidArgumentError):
        v._deriv_outcome(1, 0, 1)


def test_deriv_second_derivative_value():
    assert v.deriv_second_derivative(0, 2) == 8
    rep = v.deriv_case_check(F(4), 3, 5)
    assert rep.ok
    assert rep.worst_input["f2_rel_err"] < 1e-3


def test_claim_t_hand_example():
    vals = v.claim_t_values(3, 3, 0, 1)
    assert vals["t"] == pytest.approx(4) and vals["t_star"] == pytest.approx(4)
    assert vals["T"] == pytest.approx(5 / 3) and vals["R"] == pytest.approx(3 / 4)
    assert v.claimT_check(3, 3, 0, 1).ok


def test_geg0_single_case_and_d1_closed_form():
    rep = v.geg0_check(2, 2, 0, 1, F(1, 2))
    assert rep.ok
    assert rep.worst_input["phi"] > 0


def test_allderiv_cases():
    assert v.allderiv_degree2_check(1, 0, 1, 0).ok
    rep = v.allderiv_degree2_check(2, 2, F(1, 2), 1)  # roots {0, 2a}
    assert rep.ok and rep.min_margin > 0
    assert rep.worst_input["d_dt_log_slope"] > 0
    with pytest.raises(InvalidArgumentError):
        v._allderiv_outcome(1, 2, 1, 0)


def test_run_claim_unknown():
    with pytest.raises(InvalidArgumentError):
        v.run_claim("nope", v.TrialSpec())


@pytest.mark.parametrize("claim", ["rr", "basictheta", "translate", "hmonotone", "monotu", "simplify",
                                   "quasilinear", "pinch", "claimt"])
def test_small_random_claims_pass(claim):
    spec = v.TrialSpec(seed=5, trials=15, d_max=4, n_max=3)
    rep = v.run_claim(claim, spec)
    assert rep.ok, rep.failures


def test_rational_above_sqrt_maxroot():
    p = from_roots([1, 9, 16])
    x = v._rational_above_sqrt_maxroot(p)
    assert x * x > 16 and x < 4.01
    assert math.isfinite(float(v._rational_above_sqrt_maxroot(X ** 3)))
