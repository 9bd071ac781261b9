"""Domain types, weight evaluation and exact moments for the jump-deformed
Hermite weight

    w(x) = e^{-x^2} * (1 - beta/2 + beta * theta(x - xjump)),

positive on the real line iff beta/2 in (-1, 1).  theta is the Heaviside step
with the right-limit convention theta(0) = 1.

Everything numeric runs on mpmath arbitrary-precision floats.  Public
operations evaluate under ``mp.workprec(bits + GUARD_BITS)`` and return mpf
values that stay valid after the context exits.
"""

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

from mpmath import mp, mpf

GUARD_BITS = 32

Real = Union[int, float, str, mpf]


class PrecisionExhaustionError(ArithmeticError):
    """An iterative kernel failed to converge within its iteration budget."""


def as_mpf(value: Real) -> mpf:
    """Convert to mpf at the current working precision.

    Strings are preferred for non-representable decimals ("1.5" and 1.5 are
    both exact in binary, "0.1" is not -- pass it as a string).
    """
    if isinstance(value, mpf):
        return value
    if isinstance(value, (int, float, str)):
        return mpf(value)
    raise TypeError(f"cannot convert {type(value).__name__} to mpf")


@dataclass(frozen=True)
class WeightSpec:
    """Parameters of the deformed weight.

    Parameters
    ----------
    beta : Real
        Jump strength; requires beta/2 in (-1, 1).
    xjump : Real
        Location of the discontinuity.
    jumps : tuple of (delta, x) pairs, optional
        General multi-jump data.  The runtime supports exactly one jump; if
        given, this must be the single pair ``(beta, xjump)``.
    reference : str
        Baseline weight; only "hermite" is supported.
    """

    beta: Real
    xjump: Real
    jumps: Optional[Tuple[Tuple[Real, Real], ...]] = None
    reference: str = "hermite"

    def __post_init__(self):
        if self.reference != "hermite":
            raise ValueError(f"unsupported reference weight {self.reference!r}")
        with mp.workprec(128):
            b = as_mpf(self.beta)
            if not (-2 < b < 2):
                raise ValueError(f"beta/2 = {b / 2} outside (-1, 1)")
            as_mpf(self.xjump)
        if self.jumps is not None:
            if len(self.jumps) != 1:
                raise ValueError("only a single jump is supported")
            with mp.workprec(128):
                d, x = self.jumps[0]
                if as_mpf(d) != b or as_mpf(x) != as_mpf(self.xjump):
                    raise ValueError("jumps[0] must equal (beta, xjump)")

    def beta_mp(self) -> mpf:
        return as_mpf(self.beta)

    def xjump_mp(self) -> mpf:
        return as_mpf(self.xjump)


@dataclass(frozen=True)
class PrecisionConfig:
    """Working-precision policy.

    bits is the fast-path mantissa size, oracle_bits the reference-path one
    (``None`` resolves to ``max(512, 16 * N, bits)`` for a degree-N run).
    fd_step is the default finite-difference step for the deformation
    parameter.
    """

    bits: int = 256
    oracle_bits: Optional[int] = None
    fd_step: Real = "1e-3"

    def __post_init__(self):
        if self.bits < 64:
            raise ValueError(f"bits = {self.bits} < 64")
        if self.oracle_bits is not None and self.oracle_bits < self.bits:
            raise ValueError("oracle_bits < bits")
        with mp.workprec(128):
            if not as_mpf(self.fd_step) > 0:
                raise ValueError("fd_step must be positive")

    def resolve_oracle_bits(self, N: int) -> int:
        if self.oracle_bits is not None:
            return self.oracle_bits
        return max(512, 16 * N, self.bits)

    def fd_step_mp(self) -> mpf:
        return as_mpf(self.fd_step)


@dataclass(frozen=True)
class MomentVector:
    """Moments mu_j = integral x^j w(x) dx, j = 0..count-1, plus the
    incomplete pieces I_j(xjump) they were assembled from.  ``bits`` records
    the working precision used to build them."""

    spec: WeightSpec
    mu: Tuple[mpf, ...]
    incomplete: Tuple[mpf, ...]
    bits: int


@dataclass(frozen=True)
class CoeffTable:
    """Recurrence data for the monic orthogonal polynomials of a weight.

    Index ranges: alpha and R cover n = 0..N, beta_n covers n = 0..N with the
    n = 0 entry fixed at 0, r covers n = 0..N+1, h/p1/D cover n = 0..N+1
    (D_0 = 1).  ``source`` is "iteration", "oracle" or "exact".
    """

    spec: WeightSpec
    N: int
    alpha: Tuple[mpf, ...]
    beta_n: Tuple[mpf, ...]
    r: Tuple[mpf, ...]
    R: Tuple[mpf, ...]
    h: Tuple[mpf, ...]
    p1: Tuple[mpf, ...]
    D: Tuple[mpf, ...]
    source: str
    bits: int

    def __post_init__(self):
        n = self.N
        sizes = (len(self.alpha), len(self.beta_n), len(self.R))
        if sizes != (n + 1,) * 3:
            raise ValueError(f"alpha/beta_n/R must have {n + 1} entries, got {sizes}")
        sizes = (len(self.r), len(self.h), len(self.p1), len(self.D))
        if sizes != (n + 2,) * 4:
            raise ValueError(f"r/h/p1/D must have {n + 2} entries, got {sizes}")


def eval_weight(spec: WeightSpec, x: Real, bits: int = 256) -> mpf:
    """Evaluate w(x); at x = xjump the right limit applies."""
    with mp.workprec(bits + GUARD_BITS):
        b = spec.beta_mp()
        xv = as_mpf(x)
        theta = 1 if xv >= spec.xjump_mp() else 0
        return mp.e ** (-xv * xv) * (1 - b / 2 + b * theta)


def erfc_ext(x: Real, bits: int) -> mpf:
    """Complementary error function, built from scratch.

    Three regimes: Maclaurin series of erf for |x| <= 1, a continued fraction
    for the upper incomplete gamma Gamma(1/2, x^2) (modified Lentz) for
    x > 1, and the reflection erfc(x) = 2 - erfc(-x) for x < -1.

    The continued fraction converges slowly just above the seam (tens of
    milliseconds at 256 bits for x near 1, improving rapidly with x); see
    _gamma_cf for the iteration-count model.
    """
    wp = bits + GUARD_BITS
    with mp.workprec(wp):
        xv = as_mpf(x)
        if xv < -1:
            return 2 - erfc_ext(-xv, bits)
        if xv <= 1:
            return 1 - _erf_series(xv, wp)
        return _gamma_cf(xv, wp) / mp.sqrt(mp.pi)


def _erf_series(x: mpf, wp: int) -> mpf:
    # erf(x) = 2/sqrt(pi) * sum_k (-1)^k x^(2k+1) / (k! (2k+1)); terms decay
    # factorially for |x| <= 1 and there is no cancellation worth guarding.
    tol = mpf(2) ** (-wp - 4)
    neg_x2 = -x * x
    term = x
    total = mpf(0)
    for k in range(8 * wp):
        total += term / (2 * k + 1)
        term = term * neg_x2 / (k + 1)
        if abs(term) < tol:
            return 2 * total / mp.sqrt(mp.pi)
    raise PrecisionExhaustionError("erf series did not converge")


def _gamma_cf(x: mpf, wp: int) -> mpf:
    # Gamma(a, z) = e^{-z} z^a / (z + 1 - a - 1*(1-a)/(z + 3 - a - ...)) with
    # a = 1/2, z = x^2, evaluated by the modified Lentz algorithm.
    #
    # Convergence is linear with a rate that degrades as z -> 1+: the
    # iteration count grows like (wp ln 2)^2 / (16 z), so the cap below must
    # be quadratic in wp or high-precision calls just above x = 1 would be
    # cut off mid-convergence.  The loop exits on the tolerance test, so the
    # generous cap costs nothing for well-converged arguments.
    a = mpf(1) / 2
    z = x * x
    tiny = mpf(2) ** (-4 * wp)
    tol = mpf(2) ** (-wp - 4)
    b = z + 1 - a
    c = 1 / tiny
    d = 1 / b
    f = d
    for i in range(1, 40 * wp + (wp * wp) // 8):
        an = -i * (i - a)
        b += 2
        d = an * d + b
        if d == 0:
            d = tiny
        c = b + an / c
        if c == 0:
            c = tiny
        d = 1 / d
        delta = d * c
        f *= delta
        if abs(delta - 1) < tol:
            return mp.e ** (-z) * x * f
    raise PrecisionExhaustionError("incomplete-gamma continued fraction stalled")


def gaussian_moments(jmax: int, bits: int) -> Tuple[mpf, ...]:
    """Full-line Gaussian moments G_j = integral x^j e^{-x^2} dx, j = 0..jmax.

    G_0 = sqrt(pi), G_1 = 0, G_j = (j-1)/2 * G_{j-2}.
    """
    with mp.workprec(bits + GUARD_BITS):
        g = [mp.sqrt(mp.pi), mpf(0)]
        for j in range(2, jmax + 1):
            g.append(g[j - 2] * (j - 1) / 2)
        return tuple(g[: jmax + 1])


def incomplete_integrals(xjump: Real, jmax: int, prec: PrecisionConfig) -> Tuple[mpf, ...]:
    """Tail integrals I_j = integral_xjump^inf x^j e^{-x^2} dx, j = 0..jmax.

    I_0 = sqrt(pi)/2 * erfc(xjump), I_1 = e^{-xjump^2}/2 and
    I_j = xjump^{j-1} e^{-xjump^2}/2 + (j-1)/2 * I_{j-2}.
    """
    bits = prec.bits
    with mp.workprec(bits + GUARD_BITS):
        t = as_mpf(xjump)
        gauss = mp.e ** (-t * t) / 2
        out = [mp.sqrt(mp.pi) / 2 * erfc_ext(t, bits)]
        if jmax >= 1:
            out.append(gauss)
        tpow = t  # t^(j-1) for the next even j
        for j in range(2, jmax + 1):
            out.append(tpow * gauss + out[j - 2] * (j - 1) / 2)
            tpow *= t
        return tuple(out[: jmax + 1])


def moments(spec: WeightSpec, count: int, prec: PrecisionConfig) -> MomentVector:
    """First ``count`` moments of the deformed weight.

    mu_j = (1 - beta/2) G_j + beta I_j(xjump): the baseline Gaussian piece
    plus the jump's excess over the tail.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    bits = prec.bits
    jmax = count - 1
    with mp.workprec(bits + GUARD_BITS):
        b = spec.beta_mp()
        gauss = gaussian_moments(jmax, bits)
        inc = incomplete_integrals(spec.xjump, jmax, prec)
        mu = tuple((1 - b / 2) * gauss[j] + b * inc[j] for j in range(count))
    return MomentVector(spec=spec, mu=mu, incomplete=inc, bits=bits)
