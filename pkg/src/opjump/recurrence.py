"""Fast path: recurrence coefficients from the coupled difference equations.

Seed alpha_0 = mu_1/mu_0 (closed form below), r_0 = 0, then march

    r_{n+1}     = 2 alpha_n (xjump - alpha_n) - r_n
    alpha_{n+1} = r_{n+1}^2 / (2 (n + 1 + r_{n+1}) alpha_n)
    beta_n      = (n + r_n) / 2

which is O(N) per table versus the oracle's O(N^3).  The same pass fills the
norms (h_0 = mu_0, h_n = beta_n h_{n-1}), the subleading coefficients
p1(n) = -sum_{j<n} alpha_j and the Hankel determinants D_n = prod_{j<n} h_j.
"""

import warnings
from dataclasses import dataclass
from typing import Sequence, Tuple

from mpmath import mp, mpf

from .core import (
    GUARD_BITS,
    CoeffTable,
    PrecisionConfig,
    Real,
    WeightSpec,
    as_mpf,
    erfc_ext,
    moments,
)


class DivisionBreakdownError(ArithmeticError):
    """A denominator in the iteration fell below the precision floor."""

    def __init__(self, index: int, quantity: str, bits: int):
        super().__init__(
            f"|{quantity}| < 2^-{bits // 2} at step {index}; "
            f"raise bits or shrink the range"
        )
        self.index = index
        self.quantity = quantity
        self.bits = bits


class PoleProximityError(ValueError):
    """An evaluation point sits too close to a pole of the ladder
    coefficients (xjump) or of the compatibility combination (alpha_n)."""


class PrecisionDegradationWarning(UserWarning):
    """Consistency residuals grew past the expected roundoff envelope."""


def alpha0(spec: WeightSpec, prec: PrecisionConfig) -> mpf:
    """Seed value mu_1/mu_0 in closed form:

    alpha_0 = (beta/2) e^{-xjump^2}
              / ((1 - beta/2) sqrt(pi) + beta sqrt(pi)/2 erfc(xjump)).
    """
    bits = prec.bits
    with mp.workprec(bits + GUARD_BITS):
        b = spec.beta_mp()
        xj = spec.xjump_mp()
        num = b / 2 * mp.e ** (-xj * xj)
        den = (1 - b / 2) * mp.sqrt(mp.pi) + b * mp.sqrt(mp.pi) / 2 * erfc_ext(xj, bits)
        return num / den


def _hermite_table(spec: WeightSpec, N: int, bits: int) -> CoeffTable:
    # beta = 0: everything is exact, no division anywhere.
    with mp.workprec(bits + GUARD_BITS):
        zero = mpf(0)
        beta_n = (zero,) + tuple(mpf(n) / 2 for n in range(1, N + 1))
        h = [mp.sqrt(mp.pi)]
        for n in range(1, N + 2):
            h.append(h[-1] * n / 2)
        D = [mpf(1)]
        for hn in h:
            D.append(D[-1] * hn)
    return CoeffTable(
        spec=spec,
        N=N,
        alpha=(zero,) * (N + 1),
        beta_n=beta_n,
        r=(zero,) * (N + 2),
        R=(zero,) * (N + 1),
        h=tuple(h),
        p1=(zero,) * (N + 2),
        D=tuple(D[: N + 2]),
        source="exact",
        bits=bits,
    )


def iterate(spec: WeightSpec, N: int, prec: PrecisionConfig) -> CoeffTable:
    """March the difference equations up to degree N.

    Every division is guarded: a denominator below 2^(-bits/2) raises
    DivisionBreakdownError with the offending step.  Internal consistency
    ((xjump - alpha_n) R_n = r_{n+1} + r_n and r_n^2 = beta_n R_n R_{n-1})
    is spot-checked along the way; drift past the roundoff envelope emits a
    PrecisionDegradationWarning rather than failing.
    """
    if N < 0:
        raise ValueError("N must be >= 0")
    bits = prec.bits
    with mp.workprec(bits + GUARD_BITS):
        if spec.beta_mp() == 0:
            return _hermite_table(spec, N, bits)
        floor = mpf(2) ** (-(bits // 2))
        xj = spec.xjump_mp()
        mu0 = moments(spec, 1, prec).mu[0]
        a = alpha0(spec, prec)
        alpha = [a]
        r = [mpf(0)]
        beta_n = [mpf(0)]
        h = [mu0]
        p1 = [mpf(0)]
        D = [mpf(1), mu0]
        check_every = max(1, N // 1000)
        for n in range(N + 1):
            rn1 = 2 * alpha[n] * (xj - alpha[n]) - r[n]
            r.append(rn1)
            p1.append(p1[n] - alpha[n])
            if n == N:
                break
            den = 2 * (n + 1 + rn1) * alpha[n]
            if abs(den) < floor:
                raise DivisionBreakdownError(n + 1, "2(n+1+r_{n+1})alpha_n", bits)
            alpha.append(rn1 * rn1 / den)
            bn1 = (n + 1 + rn1) / 2
            beta_n.append(bn1)
            h.append(bn1 * h[n])
            D.append(D[n + 1] * h[n + 1])
            if (n + 1) % check_every == 0:
                _spot_check(spec, alpha, r, beta_n, n + 1, bits, floor)
        # one more norm so h reaches index N+1; D already does
        bN1 = (N + 1 + r[N + 1]) / 2
        h.append(bN1 * h[N])
        R = tuple(2 * an for an in alpha)
    return CoeffTable(
        spec=spec,
        N=N,
        alpha=tuple(alpha),
        beta_n=tuple(beta_n),
        r=tuple(r),
        R=R,
        h=tuple(h),
        p1=tuple(p1),
        D=tuple(D[: N + 2]),
        source="iteration",
        bits=bits,
    )


def _spot_check(spec, alpha, r, beta_n, n, bits, floor):
    # u1 at n-1 and u2 at n, scaled tolerance ~ 2^-bits/2 * n
    xj = spec.xjump_mp()
    R_nm1 = 2 * alpha[n - 1]
    u1 = (xj - alpha[n - 1]) * R_nm1 - (r[n] + r[n - 1])
    tol = floor * (n + 1)
    drift = abs(u1)
    if n >= 2:
        u2 = r[n - 1] ** 2 - beta_n[n - 1] * (2 * alpha[n - 1]) * (2 * alpha[n - 2])
        drift = max(drift, abs(u2))
    if drift > tol:
        warnings.warn(
            f"consistency drift {mp.nstr(drift, 3)} > {mp.nstr(tol, 3)} at n = {n}",
            PrecisionDegradationWarning,
            stacklevel=3,
        )


def universal_residuals(table: CoeffTable) -> Tuple[Tuple[mpf, ...], Tuple[mpf, ...]]:
    """Residuals of the two parameter-free identities on a table.

    u1[n] = (xjump - alpha_n) R_n - (r_{n+1} + r_n)   for n = 0..N,
    u2[n] = r_n^2 - beta_n R_n R_{n-1}                for n = 1..N.

    Both vanish for exact data regardless of beta, xjump or the source path.
    """
    with mp.workprec(table.bits + GUARD_BITS):
        xj = table.spec.xjump_mp()
        u1 = tuple(
            (xj - table.alpha[n]) * table.R[n] - (table.r[n + 1] + table.r[n])
            for n in range(table.N + 1)
        )
        u2 = tuple(
            table.r[n] ** 2 - table.beta_n[n] * table.R[n] * table.R[n - 1]
            for n in range(1, table.N + 1)
        )
    return u1, u2


@dataclass(frozen=True)
class LadderCoeffs:
    """Rational coefficients A_n(z) = R_n/(z - xjump) + 2 and
    B_n(z) = r_n/(z - xjump) entering the raising/lowering relations.

    eval_a/eval_b evaluate at the caller's working precision.
    """

    n: int
    pole: mpf
    a_residue: mpf
    a_const: mpf
    b_residue: mpf

    def eval_a(self, z) -> mpf:
        return self.a_residue / (as_mpf(z) - self.pole) + self.a_const

    def eval_b(self, z) -> mpf:
        return self.b_residue / (as_mpf(z) - self.pole)


def ladder_coeffs(table: CoeffTable, n: int) -> LadderCoeffs:
    """A_n, B_n read off a coefficient table (0 <= n <= N)."""
    if not 0 <= n <= table.N:
        raise ValueError(f"n = {n} outside 0..{table.N}")
    return LadderCoeffs(
        n=n,
        pole=table.spec.xjump_mp(),
        a_residue=table.R[n],
        a_const=mpf(2),
        b_residue=table.r[n],
    )


def compatibility_residuals(
    table: CoeffTable,
    n: int,
    zs: Sequence[Real],
    guard: Real = "1e-8",
) -> Tuple[Tuple[mpf, ...], Tuple[mpf, ...]]:
    """Residuals of the two ladder compatibility identities at points zs.

    s1(z) = B_{n+1}(z) + B_n(z) - (z - alpha_n) A_n(z) + 2 z
    s2(z) = B_{n+1}(z) - B_n(z)
            - (beta_{n+1} A_{n+1}(z) - beta_n A_{n-1}(z) - 1) / (z - alpha_n)

    Needs 1 <= n <= N - 1.  Points closer than ``guard`` to the pole at
    xjump or to alpha_n raise PoleProximityError.
    """
    if not 1 <= n <= table.N - 1:
        raise ValueError(f"n = {n} outside 1..{table.N - 1}")
    with mp.workprec(table.bits + GUARD_BITS):
        g = as_mpf(guard)
        xj = table.spec.xjump_mp()
        an = table.alpha[n]
        A_nm1 = ladder_coeffs(table, n - 1)
        A_n = ladder_coeffs(table, n)
        A_np1 = ladder_coeffs(table, n + 1)
        b_np1 = table.beta_n[n + 1]
        s1 = []
        s2 = []
        for z in zs:
            zv = as_mpf(z)
            if abs(zv - xj) < g:
                raise PoleProximityError(f"z = {zv} within {g} of xjump")
            if abs(zv - an) < g:
                raise PoleProximityError(f"z = {zv} within {g} of alpha_{n}")
            bn = A_n.eval_b(zv)
            bn1 = A_np1.eval_b(zv)
            a_n = A_n.eval_a(zv)
            s1.append(bn1 + bn - (zv - an) * a_n + 2 * zv)
            s2.append(
                bn1
                - bn
                - (b_np1 * A_np1.eval_a(zv) - table.beta_n[n] * A_nm1.eval_a(zv) - 1)
                / (zv - an)
            )
    return tuple(s1), tuple(s2)
