"""Reference path: monic orthogonal polynomials straight from the moments.

The Stieltjes procedure below is deliberately naive -- inner products are
exact bilinear sums over the moment table -- because its only job is to be
*independent* of the difference-equation fast path.  It is O(N^3) in degree
and runs at a much larger mantissa, so keep N small (the public entry point
caps it at 64).
"""

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from mpmath import mp, mpf

from .core import (
    GUARD_BITS,
    CoeffTable,
    MomentVector,
    PrecisionConfig,
    WeightSpec,
    as_mpf,
    moments,
)

ORACLE_MAX_DEGREE = 64
_MAX_RETRIES = 3


class PositivityBreakdownError(ArithmeticError):
    """A squared norm h_n came out non-positive: the working precision
    cannot resolve the Hankel minors at this degree."""

    def __init__(self, index: int, bits: int):
        super().__init__(f"h_{index} <= 0 at {bits} bits")
        self.index = index
        self.bits = bits


@dataclass(frozen=True)
class MonicPolySeq:
    """Monic orthogonal polynomials P_0..P_N for a weight.

    coeffs[n] holds the ascending coefficients of P_n (last entry 1).
    h[n] = <P_n, P_n>, alpha/beta_n the recurrence data recovered from the
    Stieltjes quotients (beta_n[0] = 0), value_at_jump[n] = P_n(xjump).
    """

    spec: WeightSpec
    coeffs: Tuple[Tuple[mpf, ...], ...]
    h: Tuple[mpf, ...]
    alpha: Tuple[mpf, ...]
    beta_n: Tuple[mpf, ...]
    value_at_jump: Tuple[mpf, ...]
    bits: int

    @property
    def N(self) -> int:
        return len(self.coeffs) - 1


def horner(coeffs: Sequence[mpf], x: mpf) -> mpf:
    """Evaluate a polynomial given ascending coefficients."""
    acc = mpf(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _bilinear(mu, c1, c2, shift: int) -> mpf:
    # <x^shift p, q> = sum_{i,j} c1_i c2_j mu_{i+j+shift}
    acc = mpf(0)
    for i, a in enumerate(c1):
        if a == 0:
            continue
        for j, b in enumerate(c2):
            if b == 0:
                continue
            acc += a * b * mu[i + j + shift]
    return acc


def orthogonalize(mv: MomentVector, N: int) -> MonicPolySeq:
    """Stieltjes procedure: build P_0..P_N from the moment table.

    Needs len(mv.mu) >= 2N + 2.  Raises PositivityBreakdownError when a
    squared norm fails to come out positive.
    """
    if len(mv.mu) < 2 * N + 2:
        raise ValueError(f"need {2 * N + 2} moments for degree {N}, have {len(mv.mu)}")
    with mp.workprec(mv.bits + GUARD_BITS):
        mu = mv.mu
        coeffs = [(mpf(1),)]
        h = []
        alpha = []
        beta_n = [mpf(0)]
        for n in range(N + 1):
            pn = coeffs[n]
            hn = _bilinear(mu, pn, pn, 0)
            if not hn > 0:
                raise PositivityBreakdownError(n, mv.bits)
            h.append(hn)
            if n == N:
                break
            an = _bilinear(mu, pn, pn, 1) / hn
            alpha.append(an)
            # P_{n+1} = (x - alpha_n) P_n - beta_n P_{n-1}
            nxt = [mpf(0)] * (n + 2)
            for i, c in enumerate(pn):
                nxt[i + 1] += c
                nxt[i] -= an * c
            if n > 0:
                bn = hn / h[n - 1]
                beta_n.append(bn)
                for i, c in enumerate(coeffs[n - 1]):
                    nxt[i] -= bn * c
            coeffs.append(tuple(nxt))
        # alpha_N needs mu up to 2N+1, which the length check guarantees
        alpha.append(_bilinear(mu, coeffs[N], coeffs[N], 1) / h[N])
        xj = mv.spec.xjump_mp()
        vals = tuple(horner(c, xj) for c in coeffs)
    return MonicPolySeq(
        spec=mv.spec,
        coeffs=tuple(coeffs),
        h=tuple(h),
        alpha=tuple(alpha),
        beta_n=tuple(beta_n),
        value_at_jump=vals,
        bits=mv.bits,
    )


def jump_quantities(seq: MonicPolySeq) -> Tuple[Tuple[mpf, ...], Tuple[mpf, ...]]:
    """Auxiliary jump data (R_n, r_n) from the polynomial values at xjump.

    R_n = beta P_n(xjump)^2 e^{-xjump^2} / h_n        for n = 0..N,
    r_n = beta P_n(xjump) P_{n-1}(xjump) e^{-xjump^2} / h_{n-1}, r_0 = 0.
    """
    with mp.workprec(seq.bits + GUARD_BITS):
        b = seq.spec.beta_mp()
        xj = seq.spec.xjump_mp()
        gauss = mp.e ** (-xj * xj)
        vals = seq.value_at_jump
        R = tuple(b * vals[n] ** 2 * gauss / seq.h[n] for n in range(seq.N + 1))
        r = [mpf(0)]
        for n in range(1, seq.N + 1):
            r.append(b * vals[n] * vals[n - 1] * gauss / seq.h[n - 1])
    return R, tuple(r)


def hankel_dets(seq: MonicPolySeq) -> Tuple[mpf, ...]:
    """D_0..D_{N+1} with D_0 = 1 and D_{n+1} = D_n * h_n."""
    with mp.workprec(seq.bits + GUARD_BITS):
        out = [mpf(1)]
        for hn in seq.h:
            out.append(out[-1] * hn)
    return tuple(out)


def hankel_det_direct(mv: MomentVector, n: int) -> mpf:
    """det[mu_{i+j}]_{i,j=0..n-1} by LU, independent of the Stieltjes path."""
    if n == 0:
        return mpf(1)
    if len(mv.mu) < 2 * n - 1:
        raise ValueError(f"need {2 * n - 1} moments, have {len(mv.mu)}")
    with mp.workprec(mv.bits + GUARD_BITS):
        m = mp.matrix(n, n)
        for i in range(n):
            for j in range(n):
                m[i, j] = mv.mu[i + j]
        return mp.det(m)


def oracle_table(spec: WeightSpec, N: int, prec: PrecisionConfig) -> CoeffTable:
    """Reference CoeffTable for degrees 0..N via exact moments.

    Runs at ``prec.resolve_oracle_bits(N)`` and doubles the mantissa (up to
    three times) if positivity of the norms breaks down.  N is capped at
    ORACLE_MAX_DEGREE; use the fast path beyond that.
    """
    if not 0 <= N <= ORACLE_MAX_DEGREE:
        raise ValueError(f"oracle path supports 0 <= N <= {ORACLE_MAX_DEGREE}, got {N}")
    bits = prec.resolve_oracle_bits(N)
    deg = N + 1  # one extra degree so r/p1 reach index N+1
    last: Optional[PositivityBreakdownError] = None
    for _ in range(_MAX_RETRIES + 1):
        mv = moments(spec, 2 * deg + 2, PrecisionConfig(bits=bits, fd_step=prec.fd_step))
        try:
            seq = orthogonalize(mv, deg)
        except PositivityBreakdownError as exc:
            last = exc
            bits *= 2
            continue
        return _table_from_seq(seq, N, bits)
    raise last


def _table_from_seq(seq: MonicPolySeq, N: int, bits: int) -> CoeffTable:
    R_full, r_full = jump_quantities(seq)
    D = hankel_dets(seq)
    with mp.workprec(bits + GUARD_BITS):
        p1 = tuple(
            seq.coeffs[n][n - 1] if n >= 1 else mpf(0) for n in range(N + 2)
        )
    return CoeffTable(
        spec=seq.spec,
        N=N,
        alpha=seq.alpha[: N + 1],
        beta_n=seq.beta_n[: N + 1],
        r=r_full[: N + 2],
        R=R_full[: N + 1],
        h=seq.h[: N + 2],
        p1=p1,
        D=D[: N + 2],
        source="oracle",
        bits=bits,
    )
