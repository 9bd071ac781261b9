"""Weight, moments, and the from-scratch erfc kernel."""

import mpmath
import pytest
from mpmath import mp, mpf

from opjump.core import (
    PrecisionConfig,
    WeightSpec,
    as_mpf,
    erfc_ext,
    eval_weight,
    gaussian_moments,
    incomplete_integrals,
    moments,
)

# Adaptive quadrature of int_1^inf t^4 e^{-t^2} dt at 400 bits (mpmath.quad),
# frozen 2026-08; the recursion must reproduce it to well past 30 digits.
I4_AT_1 = "0.564401395944551143181616941855865773840470195"


def test_erfc_matches_reference_all_regimes():
    # series (|x|<=1), continued fraction (x>1), reflection (x<-1)
    xs = ["0", "0.3", "-0.999", "1", "1.0000001", "1.2", "2", "5.5", "-1.5", "-4", "9.7"]
    for bits in (256, 1024):
        for xs_ in xs:
            got = erfc_ext(xs_, bits)
            with mp.workprec(bits + 80):
                ref = mpmath.erfc(mpf(xs_))
                err = abs(got - ref) / abs(ref)
                assert err < mpf(2) ** (-bits - 8), (xs_, bits, err)


def test_erfc_seam_continuity():
    # the series->fraction handoff at x=1 must not leave a step
    bits = 320
    eps = mpf("1e-40")
    lo = erfc_ext(1 - eps, bits)
    hi = erfc_ext(1 + eps, bits)
    assert abs(hi - lo) < mpf("1e-39")


def test_erfc_basic_values():
    assert erfc_ext("0", 128) == 1
    with mp.workprec(200):
        s = erfc_ext("0.5", 128) + erfc_ext("-0.5", 128)
        assert abs(s - 2) < mpf(2) ** (-120)


def test_incomplete_integral_frozen_quadrature():
    prec = PrecisionConfig(bits=384)
    vals = incomplete_integrals("1", 4, prec)
    with mp.workprec(420):
        assert abs(vals[4] - mpf(I4_AT_1)) < mpf("1e-44")


def test_incomplete_integrals_trivial_endpoints():
    prec = PrecisionConfig(bits=256)
    vals = incomplete_integrals("0", 1, prec)
    with mp.workprec(288):
        assert abs(vals[0] - mp.sqrt(mp.pi) / 2) < mpf(2) ** (-250)
        assert abs(vals[1] - mpf(1) / 2) < mpf(2) ** (-250)


@pytest.mark.parametrize("xjump", ["-2.5", "-0.7", "0.4", "3"])
def test_incomplete_integrals_vs_quadrature(xjump):
    prec = PrecisionConfig(bits=192)
    vals = incomplete_integrals(xjump, 9, prec)
    with mp.workprec(320):
        for j in (0, 3, 9):
            ref = mpmath.quad(
                lambda t, j=j: t**j * mpmath.e ** (-t * t), [mpf(xjump), mpmath.inf]
            )
            assert abs(vals[j] - ref) < abs(ref) * mpf(2) ** (-180) + mpf(2) ** (-180)


def test_gaussian_moments_match_gamma():
    g = gaussian_moments(12, 256)
    with mp.workprec(288):
        for j in range(0, 13, 2):
            assert abs(g[j] - mpmath.gamma(mpf(j + 1) / 2)) < mpf(2) ** (-240)
        for j in range(1, 13, 2):
            assert g[j] == 0


def test_moments_beta_zero_is_gaussian():
    spec = WeightSpec(beta="0", xjump="0.37")
    mv = moments(spec, 10, PrecisionConfig(bits=256))
    g = gaussian_moments(9, 256)
    with mp.workprec(288):
        for j in range(10):
            assert abs(mv.mu[j] - g[j]) < mpf(2) ** (-240)


def test_moments_jump_at_origin_mu0():
    # (1 - b/2) sqrt(pi) + b sqrt(pi)/2 = sqrt(pi) for any b
    for beta in ("0.5", "1.5", "-1.2"):
        mv = moments(WeightSpec(beta=beta, xjump="0"), 2, PrecisionConfig(bits=256))
        with mp.workprec(288):
            assert abs(mv.mu[0] - mp.sqrt(mp.pi)) < mpf(2) ** (-240)


def test_moments_closed_form_mu0():
    mv = moments(WeightSpec(beta="1.5", xjump="1"), 2, PrecisionConfig(bits=256))
    with mp.workprec(288):
        ref = mp.sqrt(mp.pi) / 4 + mpf(3) / 2 * mp.sqrt(mp.pi) / 2 * mpmath.erfc(1)
        assert abs(mv.mu[0] - ref) < mpf(2) ** (-240)


def test_moments_continuous_in_parameters():
    # small parameter steps move mu_j by O(step), not O(1)
    prec = PrecisionConfig(bits=192)
    h = mpf("1e-12")
    base = moments(WeightSpec(beta="1.2", xjump="0.8"), 6, prec)
    dx = moments(WeightSpec(beta="1.2", xjump=mpf("0.8") + h), 6, prec)
    db = moments(WeightSpec(beta=mpf("1.2") + h, xjump="0.8"), 6, prec)
    with mp.workprec(224):
        for j in range(6):
            assert abs(dx.mu[j] - base.mu[j]) < mpf("1e-10")
            assert abs(db.mu[j] - base.mu[j]) < mpf("1e-10")


def test_eval_weight_jump_sides():
    spec = WeightSpec(beta="1", xjump="0")
    with mp.workprec(288):
        below = eval_weight(spec, "-1")
        assert abs(below - mp.e ** mpf(-1) / 2) < mpf(2) ** (-240)
    # value at the jump itself takes the right limit
    at = eval_weight(spec, "0")
    assert abs(at - mpf(3) / 2) < mpf(2) ** (-240)
    spec2 = WeightSpec(beta="1.5", xjump="0.5")
    with mp.workprec(288):
        above = eval_weight(spec2, "2")
        assert abs(above - mp.e ** mpf(-4) * mpf(7) / 4) < mpf(2) ** (-240)


def test_eval_weight_beta_zero():
    assert eval_weight(WeightSpec(beta="0", xjump="3"), "0") == 1


def test_weightspec_rejects_out_of_range_beta():
    with pytest.raises(ValueError):
        WeightSpec(beta="2", xjump="0")
    with pytest.raises(ValueError):
        WeightSpec(beta="-2.0001", xjump="0")


def test_weightspec_general_jump_consistency():
    WeightSpec(beta="1.5", xjump="0.5", jumps=(("1.5", "0.5"),))
    with pytest.raises(ValueError):
        WeightSpec(beta="1.5", xjump="0.5", jumps=(("1.0", "0.5"),))
    with pytest.raises(ValueError):
        WeightSpec(beta="1.5", xjump="0.5", jumps=(("1.5", "0.5"), ("0.1", "2")))


def test_precision_config_invariants():
    with pytest.raises(ValueError):
        PrecisionConfig(bits=32)
    with pytest.raises(ValueError):
        PrecisionConfig(bits=256, fd_step="0")
    with pytest.raises(ValueError):
        PrecisionConfig(bits=256, oracle_bits=128)
    cfg = PrecisionConfig(bits=256)
    assert cfg.resolve_oracle_bits(40) == max(512, 16 * 40, 256)
    assert PrecisionConfig(bits=256, oracle_bits=2048).resolve_oracle_bits(4) == 2048


def test_as_mpf_accepts_strings_rejects_junk():
    assert as_mpf("0.1") == mpf("0.1")
    assert as_mpf(3) == 3
    with pytest.raises(TypeError):
        as_mpf(object())
