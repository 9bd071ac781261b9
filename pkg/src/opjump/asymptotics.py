"""Large-degree behaviour of the coefficients when the jump sits at the
origin: oscillatory asymptote formulas, phase fitting, and the order check
that the formulas are accurate to O(1/n^2).
"""

import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
from mpmath import mp, mpf

from .core import GUARD_BITS, CoeffTable, Real, as_mpf

TWO_PI = 2 * math.pi


class DegenerateFitError(ValueError):
    """The least-squares system for the phase has no usable signal."""


def b_const(beta: Real, bits: int = 256) -> mpf:
    """b = ln((1 + beta/2)/(1 - beta/2)) / (2 pi), the amplitude scale of
    the oscillatory corrections.  Zero iff beta = 0."""
    with mp.workprec(bits + GUARD_BITS):
        b = as_mpf(beta)
        if not (-2 < b < 2):
            raise ValueError(f"beta/2 = {b / 2} outside (-1, 1)")
        return mp.log((1 + b / 2) / (1 - b / 2)) / (2 * mp.pi)


@dataclass(frozen=True)
class AsymptoteParams:
    """Inputs of the large-n formulas: the scale constant b and the fitted
    (not predicted) phase offset B."""

    beta: Real
    b: mpf
    B: float
    bits: int = 256

    @classmethod
    def for_beta(cls, beta: Real, B: float = 0.0, bits: int = 256) -> "AsymptoteParams":
        return cls(beta=beta, b=b_const(beta, bits), B=B, bits=bits)


def theta(n: int, params: AsymptoteParams) -> mpf:
    """Slowly drifting phase theta_n = 2 b ln n + B."""
    with mp.workprec(params.bits + GUARD_BITS):
        return 2 * params.b * mp.log(n) + as_mpf(params.B)


def asymptote(n: int, params: AsymptoteParams) -> Tuple[mpf, mpf]:
    """Large-n estimates (alpha_n, r_n) for a jump at the origin:

    alpha_n ~ b/sqrt(2n) [1 + (-1)^n sin th
                           - (1/4n)(1 + (-1)^n (sin th - 4 b cos th))]
    r_n     ~ -b (-1)^n cos th - (b^2/2n)(1 + sin^2 th)

    with th = theta(n).  Requires n >= 1.
    """
    if n < 1:
        raise ValueError("asymptote needs n >= 1")
    with mp.workprec(params.bits + GUARD_BITS):
        b = params.b
        th = theta(n, params)
        sign = -1 if n % 2 else 1
        s, c = mp.sin(th), mp.cos(th)
        lead = b / mp.sqrt(2 * n)
        alpha = lead * (1 + sign * s - (1 + sign * (s - 4 * b * c)) / (4 * n))
        r = -b * sign * c - b * b / (2 * n) * (1 + s * s)
        return alpha, r


def asymptote_arrays(
    ns: Sequence[int], params: AsymptoteParams
) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorised float64 version of asymptote() for plotting and fitting."""
    ns = np.asarray(ns, dtype=np.float64)
    if np.any(ns < 1):
        raise ValueError("asymptote needs n >= 1")
    b = float(params.b)
    th = 2 * b * np.log(ns) + params.B
    sign = np.where(np.asarray(ns, dtype=np.int64) % 2 == 0, 1.0, -1.0)
    s, c = np.sin(th), np.cos(th)
    lead = b / np.sqrt(2 * ns)
    alpha = lead * (1 + sign * s - (1 + sign * (s - 4 * b * c)) / (4 * ns))
    r = -b * sign * c - b * b / (2 * ns) * (1 + s * s)
    return alpha, r


def fit_phase(table: CoeffTable, n_range: Tuple[int, int]) -> Tuple[float, float]:
    """Fit the phase offset B from tabulated r_n over n in [n_lo, n_hi].

    Linear least squares on the leading oscillation
    r_n ~ amp * b (-1)^n (sin(phi_n) sin B - cos(phi_n) cos B),
    phi_n = 2 b ln n.  Returns (B mod 2pi, amp); amp ~ 1 when the asymptote
    regime is reached, and is worth inspecting as a fit diagnostic.
    """
    n_lo, n_hi = n_range
    if not 1 <= n_lo < n_hi <= table.N + 1:
        raise ValueError(f"fit window [{n_lo}, {n_hi}] outside 1..{table.N + 1}")
    with mp.workprec(128):
        if table.spec.xjump_mp() != 0:
            raise ValueError("phase fit requires the jump at the origin")
    b = float(b_const(table.spec.beta, table.bits))
    if b == 0.0:
        raise DegenerateFitError("beta = 0 carries no oscillation")
    ns = np.arange(n_lo, n_hi + 1)
    rv = np.array([float(table.r[n]) for n in ns])
    sign = np.where(ns % 2 == 0, 1.0, -1.0)
    phi = 2 * b * np.log(ns)
    # columns multiply (c, s) = amp * (cos B, sin B)
    design = np.column_stack([-b * sign * np.cos(phi), b * sign * np.sin(phi)])
    sol, *_ = np.linalg.lstsq(design, rv, rcond=None)
    c, s = sol
    amp = math.hypot(c, s)
    if not amp > 1e-12:
        raise DegenerateFitError("no oscillatory signal in the fit window")
    return math.atan2(s, c) % TWO_PI, amp


@dataclass(frozen=True)
class OrderCheckReport:
    """n^2-scaled residuals of the two origin identities on asymptote data.

    res18[n] = r_{n+1} + r_n + 2 alpha_n^2
    res19[n] = r_n^2 - 2 (n + r_n) alpha_n alpha_{n-1}

    Exact coefficients satisfy both identically; the asymptote formulas only
    to O(1/n^2), so n^2 * |res| staying bounded is the order statement.
    """

    ns: np.ndarray
    scaled18: np.ndarray
    scaled19: np.ndarray

    @property
    def sup18(self) -> float:
        return float(self.scaled18.max())

    @property
    def sup19(self) -> float:
        return float(self.scaled19.max())


def order_check(params: AsymptoteParams, n_max: int) -> OrderCheckReport:
    """Evaluate the asymptote formulas for n = 1..n_max+1 and score the
    identity residuals, scaled by n^2, over n = 2..n_max.

    Runs vectorised in float64 so n_max up to 10^6 stays cheap; the residuals
    decay like 1/n^2, so the scaled sequences carry ~O(1) values whose
    float64 noise floor (~1e-4 at n = 10^6) sits far below any useful bound.
    """
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    all_n = np.arange(1, n_max + 2)
    alpha, r = asymptote_arrays(all_n, params)
    ns = np.arange(2, n_max + 1)
    a_n = alpha[1:n_max]        # alpha[k] holds degree k+1
    a_nm1 = alpha[0 : n_max - 1]
    r_n = r[1:n_max]
    r_np1 = r[2 : n_max + 1]
    res18 = r_np1 + r_n + 2 * a_n**2
    res19 = r_n**2 - 2 * (ns + r_n) * a_n * a_nm1
    n2 = ns.astype(np.float64) ** 2
    return OrderCheckReport(
        ns=ns, scaled18=n2 * np.abs(res18), scaled19=n2 * np.abs(res19)
    )
