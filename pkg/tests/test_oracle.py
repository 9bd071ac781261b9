"""Moment-path reference tables: Stieltjes, norms, Hankel determinants."""

import pytest
from mpmath import mp, mpf

import opjump.oracle as oracle_mod
from opjump.core import MomentVector, PrecisionConfig, WeightSpec, gaussian_moments, moments
from opjump.oracle import (
    ORACLE_MAX_DEGREE,
    PositivityBreakdownError,
    hankel_det_direct,
    hankel_dets,
    jump_quantities,
    oracle_table,
    orthogonalize,
)

PREC = PrecisionConfig(bits=256)


def _seq(beta="1.5", xjump="0.5", deg=12, bits=512):
    spec = WeightSpec(beta=beta, xjump=xjump)
    mv = moments(spec, 2 * deg + 2, PrecisionConfig(bits=bits, oracle_bits=bits))
    return orthogonalize(mv, deg), mv


def test_orthogonality_residuals():
    seq, mv = _seq()
    with mp.workprec(seq.bits):
        # <P_m, P_n> must vanish for m != n at the working precision
        from opjump.oracle import _bilinear

        for m in range(6):
            for n in range(m + 1, 7):
                ip = _bilinear(mv.mu, seq.coeffs[m], seq.coeffs[n], 0)
                assert abs(ip) < seq.h[n] * mpf(2) ** (-480)


def test_monic_leading_coefficients():
    seq, _ = _seq(deg=8)
    for n, c in enumerate(seq.coeffs):
        assert c[n] == 1
        assert len(c) == n + 1


def test_hermite_norm_column():
    # closed form h_n = sqrt(pi) n! / 2^n for the undeformed weight
    seq, _ = _seq(beta="0", xjump="0", deg=8)
    with mp.workprec(540):
        expect = mp.sqrt(mp.pi)
        for n in range(9):
            assert abs(seq.h[n] - expect) < expect * mpf(2) ** (-480)
            expect *= mpf(n + 1) / 2


def test_hankel_dets_match_direct_lu():
    # product of norms vs an independent LU determinant of the moment matrix
    seq, mv = _seq(deg=10)
    D = hankel_dets(seq)
    with mp.workprec(540):
        for n in (1, 2, 5, 8, 10):
            direct = hankel_det_direct(mv, n)
            assert abs(D[n] - direct) < abs(direct) * mpf(2) ** (-440)
    assert D[0] == 1


def test_jump_quantities_universal_relations():
    seq, _ = _seq(deg=12)
    R, r = jump_quantities(seq)
    assert r[0] == 0
    xj = seq.spec.xjump_mp()
    with mp.workprec(540):
        for n in range(11):
            u1 = (xj - seq.alpha[n]) * R[n] - (r[n + 1] + r[n])
            assert abs(u1) < mpf(2) ** (-460)
        for n in range(1, 12):
            u2 = r[n] ** 2 - seq.beta_n[n] * R[n] * R[n - 1]
            assert abs(u2) < mpf(2) ** (-460)
            bn = (n + r[n]) / 2
            assert abs(seq.beta_n[n] - bn) < mpf(2) ** (-460)


def test_oracle_table_shapes_and_p1():
    spec = WeightSpec(beta="0.5", xjump="1")
    tab = oracle_table(spec, 6, PREC)
    assert tab.N == 6
    assert tab.source == "oracle"
    assert len(tab.alpha) == 7 and len(tab.r) == 8
    with mp.workprec(tab.bits):
        assert tab.p1[0] == 0
        for n in range(6):
            # p1(n) - p1(n+1) telescopes the recurrence diagonal
            assert abs((tab.p1[n] - tab.p1[n + 1]) - tab.alpha[n]) < mpf(2) ** (-460)
        for n in range(7):
            assert abs(tab.R[n] - 2 * tab.alpha[n]) < abs(tab.R[n]) * mpf(2) ** (-440)
        for n in range(7):
            assert abs(tab.D[n + 1] - tab.D[n] * tab.h[n]) < tab.D[n + 1] * mpf(2) ** (-460)


def test_oracle_degree_cap():
    spec = WeightSpec(beta="0.5", xjump="0")
    with pytest.raises(ValueError):
        oracle_table(spec, ORACLE_MAX_DEGREE + 1, PREC)
    with pytest.raises(ValueError):
        oracle_table(spec, -1, PREC)


def test_orthogonalize_requires_enough_moments():
    spec = WeightSpec(beta="0.5", xjump="0")
    mv = moments(spec, 6, PrecisionConfig(bits=128))
    with pytest.raises(ValueError):
        orthogonalize(mv, 4)


def test_positivity_breakdown_on_indefinite_moments():
    # hand-built moment vector whose 3x3 Hankel minor is negative
    spec = WeightSpec(beta="0", xjump="0")
    g = list(gaussian_moments(7, 128))
    with mp.workprec(160):
        g[4] = mp.sqrt(mp.pi) / 8
    mv = MomentVector(spec=spec, mu=tuple(g), incomplete=(), bits=128)
    with pytest.raises(PositivityBreakdownError) as exc:
        orthogonalize(mv, 2)
    assert exc.value.index == 2
    assert exc.value.bits == 128


def test_oracle_table_retries_with_doubled_bits(monkeypatch):
    spec = WeightSpec(beta="1.5", xjump="0.5")
    seen = []
    real = oracle_mod.orthogonalize

    def flaky(mv, N):
        seen.append(mv.bits)
        if len(seen) < 3:
            raise PositivityBreakdownError(5, mv.bits)
        return real(mv, N)

    monkeypatch.setattr(oracle_mod, "orthogonalize", flaky)
    tab = oracle_mod.oracle_table(spec, 6, PrecisionConfig(bits=256))
    assert seen == [512, 1024, 2048]
    assert tab.bits == 2048


def test_oracle_table_gives_up_after_three_doublings(monkeypatch):
    spec = WeightSpec(beta="1.5", xjump="0.5")
    seen = []

    def always_bad(mv, N):
        seen.append(mv.bits)
        raise PositivityBreakdownError(2, mv.bits)

    monkeypatch.setattr(oracle_mod, "orthogonalize", always_bad)
    with pytest.raises(PositivityBreakdownError) as exc:
        oracle_mod.oracle_table(spec, 6, PrecisionConfig(bits=256))
    assert seen == [512, 1024, 2048, 4096]
    assert exc.value.bits == 4096


def test_oracle_beta_zero_alpha_vanishes():
    tab = oracle_table(WeightSpec(beta="0", xjump="2"), 8, PREC)
    with mp.workprec(tab.bits):
        for n in range(9):
            assert abs(tab.alpha[n]) < mpf(2) ** (-460)
        for n in range(1, 9):
            assert abs(tab.beta_n[n] - mpf(n) / 2) < mpf(2) ** (-460)
