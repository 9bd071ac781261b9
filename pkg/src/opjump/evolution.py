"""Evolution in the jump location: finite differences across an xjump grid,
Toda-type flow residuals, the Painleve-IV reduction of alpha_n, and the
Hankel-determinant / free-energy functionals built on top of them.

Grid convention: every public operation takes an XGridTables (one CoeffTable
per grid point, all same degree/precision) and differentiates columns of it.
Central stencils eat ``FD_MARGIN[order]`` points off each end; results are
reported on the interior.
"""

from dataclasses import dataclass
from typing import Dict, Optional, Tuple

from mpmath import mp, mpf

from .core import GUARD_BITS, CoeffTable, PrecisionConfig, Real, WeightSpec, as_mpf
from .oracle import oracle_table
from .recurrence import DivisionBreakdownError, iterate

FD_MARGIN = {1: 1, 2: 1, 3: 2}


class GridTooSmallError(ValueError):
    """Not enough grid points for the requested stencil."""


class NegativityError(ArithmeticError):
    """2 alpha_n / beta came out negative; Psi_n is not real here."""


@dataclass(frozen=True)
class XGridTables:
    """Coefficient tables on a uniform xjump grid."""

    grid: Tuple[mpf, ...]
    tables: Tuple[CoeffTable, ...]
    step: mpf

    def __post_init__(self):
        if len(self.grid) != len(self.tables):
            raise ValueError("grid/tables length mismatch")
        if len(self.grid) < 2:
            raise GridTooSmallError("need at least two grid points")
        tol = abs(self.step) * mpf(2) ** -40
        for a, b in zip(self.grid, self.grid[1:]):
            if abs((b - a) - self.step) > tol:
                raise ValueError("grid is not uniform")

    @property
    def bits(self) -> int:
        return self.tables[0].bits

    @property
    def N(self) -> int:
        return self.tables[0].N

    def column(self, name: str, n: int) -> Tuple[mpf, ...]:
        """Extract coefficient ``name`` (e.g. "alpha") at fixed degree n,
        one value per grid point."""
        return tuple(getattr(t, name)[n] for t in self.tables)


def grid_tables(
    beta: Real,
    xmin: Real,
    xmax: Real,
    npoints: int,
    N: int,
    prec: PrecisionConfig,
    source: str = "iteration",
) -> XGridTables:
    """Tabulate coefficients on a uniform grid of jump locations."""
    if npoints < 2:
        raise GridTooSmallError("npoints must be >= 2")
    with mp.workprec(prec.bits + GUARD_BITS):
        lo, hi = as_mpf(xmin), as_mpf(xmax)
        if not lo < hi:
            raise ValueError("xmin must be < xmax")
        h = (hi - lo) / (npoints - 1)
        grid = tuple(lo + k * h for k in range(npoints))
    if source == "iteration":
        build = lambda s: iterate(s, N, prec)
    elif source == "oracle":
        build = lambda s: oracle_table(s, N, prec)
    else:
        raise ValueError(f"unknown source {source!r}")
    tables = tuple(build(WeightSpec(beta=beta, xjump=x)) for x in grid)
    return XGridTables(grid=grid, tables=tables, step=h)


def fd_derivative(values, order: int, step: mpf) -> Tuple[mpf, ...]:
    """Central finite difference of given order (1, 2 or 3) on a uniform
    column.  Returns len(values) - 2*FD_MARGIN[order] interior values,
    evaluated at the caller's working precision."""
    try:
        margin = FD_MARGIN[order]
    except KeyError:
        raise ValueError(f"unsupported derivative order {order}")
    v = list(values)
    if len(v) < 2 * margin + 1:
        raise GridTooSmallError(
            f"order-{order} stencil needs {2 * margin + 1} points, have {len(v)}"
        )
    h = as_mpf(step)
    if order == 1:
        return tuple((v[i + 1] - v[i - 1]) / (2 * h) for i in range(1, len(v) - 1))
    if order == 2:
        h2 = h * h
        return tuple(
            (v[i + 1] - 2 * v[i] + v[i - 1]) / h2 for i in range(1, len(v) - 1)
        )
    h3 = 2 * h**3
    return tuple(
        (v[i + 2] - 2 * v[i + 1] + 2 * v[i - 1] - v[i - 2]) / h3
        for i in range(2, len(v) - 2)
    )


@dataclass(frozen=True)
class TodaReport:
    """Residuals of the three flow equations, per degree, on the interior
    grid.  Keys of t0/t2 run over n = 0..n_max, of t1 over 1..n_max."""

    grid_interior: Tuple[mpf, ...]
    t0: Dict[int, Tuple[mpf, ...]]
    t1: Dict[int, Tuple[mpf, ...]]
    t2: Dict[int, Tuple[mpf, ...]]
    max_abs: mpf
    max_at: Tuple[str, int, mpf]


def toda_residuals(g: XGridTables, n_max: Optional[int] = None) -> TodaReport:
    """Flow residuals over the grid:

    t0[n] = d/dx ln h_n + 2 alpha_n
    t1[n] = (d/dx r_n) / (2 (n + r_n)) - (alpha_{n-1} - alpha_n)
    t2[n] = d/dx alpha_n - (r_n - r_{n+1})

    All three vanish as O(step^2) for exact tables.
    """
    if n_max is None:
        n_max = g.N
    if not 0 <= n_max <= g.N:
        raise ValueError(f"n_max outside 0..{g.N}")
    with mp.workprec(g.bits + GUARD_BITS):
        interior = g.grid[1:-1]
        t0 = {}
        t1 = {}
        t2 = {}
        worst = (mpf(0), ("t0", 0, g.grid[0]))
        for n in range(n_max + 1):
            ln_h = [mp.log(h) for h in g.column("h", n)]
            d_lnh = fd_derivative(ln_h, 1, g.step)
            alpha = g.column("alpha", n)
            r_n = g.column("r", n)
            r_np1 = g.column("r", n + 1)
            d_alpha = fd_derivative(alpha, 1, g.step)
            t0[n] = tuple(
                d_lnh[k] + 2 * alpha[k + 1] for k in range(len(interior))
            )
            t2[n] = tuple(
                d_alpha[k] - (r_n[k + 1] - r_np1[k + 1])
                for k in range(len(interior))
            )
            if n >= 1:
                d_r = fd_derivative(r_n, 1, g.step)
                a_prev = g.column("alpha", n - 1)
                t1[n] = tuple(
                    d_r[k] / (2 * (n + r_n[k + 1]))
                    - (a_prev[k + 1] - alpha[k + 1])
                    for k in range(len(interior))
                )
            for name, res in (("t0", t0[n]), ("t1", t1.get(n)), ("t2", t2[n])):
                if res is None:
                    continue
                for k, val in enumerate(res):
                    if abs(val) > worst[0]:
                        worst = (abs(val), (name, n, interior[k]))
    return TodaReport(
        grid_interior=interior,
        t0=t0,
        t1=t1,
        t2=t2,
        max_abs=worst[0],
        max_at=worst[1],
    )


def rn_from_alpha(g: XGridTables, n: int) -> Tuple[Tuple[mpf, ...], Tuple[mpf, ...]]:
    """Reconstruct r_n = alpha_n (x - alpha_n) + (d/dx alpha_n)/2 on the
    interior grid; returns (estimate, estimate - tabulated)."""
    if not 0 <= n <= g.N:
        raise ValueError(f"n outside 0..{g.N}")
    with mp.workprec(g.bits + GUARD_BITS):
        alpha = g.column("alpha", n)
        r = g.column("r", n)
        d_alpha = fd_derivative(alpha, 1, g.step)
        est = tuple(
            alpha[k + 1] * (g.grid[k + 1] - alpha[k + 1]) + d_alpha[k] / 2
            for k in range(len(d_alpha))
        )
        dev = tuple(est[k] - r[k + 1] for k in range(len(est)))
    return est, dev


def painleve_rhs(alpha: mpf, d_alpha: mpf, x: mpf, n: int) -> mpf:
    """Right-hand side of the second-order ODE satisfied by alpha_n(x):

    alpha'' = (alpha')^2 / (2 alpha) + 6 alpha^3 - 8 x alpha^2
              + 2 (x^2 - (2n+1)) alpha.

    Equivalent, after w(z) = 2 alpha(-z), to the standard Painleve-IV form
    w'' = w'^2/(2w) + 3/2 w^3 + 4 z w^2 + 2(z^2 - a) w + b/w with
    a = 2n + 1, b = 0.
    """
    return (
        d_alpha * d_alpha / (2 * alpha)
        + 6 * alpha**3
        - 8 * x * alpha * alpha
        + 2 * (x * x - (2 * n + 1)) * alpha
    )


def painleve_residual(
    g: XGridTables, n: int, guard: Real = "1e-4"
) -> Tuple[Optional[mpf], ...]:
    """alpha_n'' minus the ODE right-hand side on the interior grid.

    Points with |alpha_n| < guard are masked to None -- the (alpha')^2 /
    (2 alpha) term is not resolvable there at fixed step size.
    """
    if not 1 <= n <= g.N:
        raise ValueError(f"n outside 1..{g.N}")
    with mp.workprec(g.bits + GUARD_BITS):
        gd = as_mpf(guard)
        alpha = g.column("alpha", n)
        d1 = fd_derivative(alpha, 1, g.step)
        d2 = fd_derivative(alpha, 2, g.step)
        out = []
        for k in range(len(d1)):
            a = alpha[k + 1]
            if abs(a) < gd:
                out.append(None)
                continue
            out.append(d2[k] - painleve_rhs(a, d1[k], g.grid[k + 1], n))
    return tuple(out)


def taylor_extend(
    alpha_at_0: mpf, slope_at_0: mpf, n: int, order: int, x: Real, bits: int = 256
) -> mpf:
    """Short-range Taylor prediction of alpha_n(x) around x = 0.

    order 2 is the linear model alpha + slope*x; order 3 adds
    (x^2/2) * painleve_rhs(alpha, slope, 0, n).  The slope should come from
    the flow identity alpha_n'(0) = r_n(0) - r_{n+1}(0).
    """
    if order not in (2, 3):
        raise ValueError("order must be 2 or 3")
    with mp.workprec(bits + GUARD_BITS):
        xv = as_mpf(x)
        a0 = as_mpf(alpha_at_0)
        s0 = as_mpf(slope_at_0)
        est = a0 + s0 * xv
        if order == 3:
            est += painleve_rhs(a0, s0, mpf(0), n) * xv * xv / 2
        return est


@dataclass(frozen=True)
class HankelLogDerivReport:
    """Derivatives of ln D_n across the grid versus their algebraic values.

    identity is the derivative-free residual of
    -2 sum_{j<n} alpha_j = 2 x r_n - 2 (n + r_n)(alpha_n + alpha_{n-1}),
    checked pointwise on the full grid.  alg1 = 2 p1(n) = -2 sum_{j<n}
    alpha_j and alg2 = 2 r_n also live on the full grid; fd1/fd2 and the
    deviations dev1/dev2 on the interior.
    """

    n: int
    identity: Tuple[mpf, ...]
    alg1: Tuple[mpf, ...]
    alg2: Tuple[mpf, ...]
    fd1: Tuple[mpf, ...]
    fd2: Tuple[mpf, ...]
    dev1: Tuple[mpf, ...]
    dev2: Tuple[mpf, ...]

    @property
    def max_identity(self) -> mpf:
        return max(abs(d) for d in self.identity)

    @property
    def max_dev1(self) -> mpf:
        return max(abs(d) for d in self.dev1)

    @property
    def max_dev2(self) -> mpf:
        return max(abs(d) for d in self.dev2)


def hankel_identity_residuals(table: CoeffTable, n_max: Optional[int] = None):
    """Derivative-free form of d ln D_n: residuals of

    -2 sum_{j<n} alpha_j - (2 x r_n - 2 (n + r_n)(alpha_n + alpha_{n-1}))

    for n = 1..n_max on a single table -- no grid required."""
    if n_max is None:
        n_max = table.N
    if not 1 <= n_max <= table.N:
        raise ValueError(f"n_max outside 1..{table.N}")
    with mp.workprec(table.bits + GUARD_BITS):
        xj = table.spec.xjump_mp()
        out = []
        for n in range(1, n_max + 1):
            rn = table.r[n]
            rhs = 2 * xj * rn - 2 * (n + rn) * (table.alpha[n] + table.alpha[n - 1])
            out.append(2 * table.p1[n] - rhs)
    return tuple(out)


def hankel_logderivs(g: XGridTables, n: int) -> HankelLogDerivReport:
    """First and second x-derivatives of ln D_n against the closed forms
    d ln D_n = -2 sum_{j<n} alpha_j and d^2 ln D_n = 2 r_n, plus the
    derivative-free identity residual at each grid point."""
    if not 1 <= n <= g.N:
        raise ValueError(f"n outside 1..{g.N}")
    with mp.workprec(g.bits + GUARD_BITS):
        ln_d = [mp.log(t.D[n]) for t in g.tables]
        fd1 = fd_derivative(ln_d, 1, g.step)
        fd2 = fd_derivative(ln_d, 2, g.step)
        alg1 = tuple(2 * t.p1[n] for t in g.tables)
        alg2 = tuple(2 * t.r[n] for t in g.tables)
        ident = tuple(
            hankel_identity_residuals(t, n)[-1] for t in g.tables
        )
        dev1 = tuple(fd1[k] - alg1[k + 1] for k in range(len(fd1)))
        dev2 = tuple(fd2[k] - alg2[k + 1] for k in range(len(fd2)))
    return HankelLogDerivReport(
        n=n,
        identity=ident,
        alg1=alg1,
        alg2=alg2,
        fd1=fd1,
        fd2=fd2,
        dev1=dev1,
        dev2=dev2,
    )


def simpson(values, step: mpf) -> mpf:
    """Composite Simpson rule on a uniform grid; the last interval falls
    back to the trapezoid rule when the point count is even."""
    v = list(values)
    if len(v) < 2:
        raise GridTooSmallError("quadrature needs at least two points")
    h = as_mpf(step)
    total = mpf(0)
    m = len(v) if len(v) % 2 == 1 else len(v) - 1
    for i in range(0, m - 2, 2):
        total += (v[i] + 4 * v[i + 1] + v[i + 2]) * h / 3
    if len(v) % 2 == 0:
        total += (v[-2] + v[-1]) * h / 2
    return total


@dataclass(frozen=True)
class TodaMoleculeReport:
    """Second log-derivative of the dressed determinant versus four times the
    nearest-neighbour determinant ratio (the Gaussian prefactors cancel in
    the ratio, so it is computed undressed)."""

    n: int
    residual: Tuple[mpf, ...]
    ratio: Tuple[mpf, ...]
    ratio_minus_beta: Tuple[mpf, ...]

    @property
    def max_residual(self) -> mpf:
        return max(abs(x) for x in self.residual)

    @property
    def max_ratio_minus_beta(self) -> mpf:
        return max(abs(x) for x in self.ratio_minus_beta)


def toda_molecule_residual(g: XGridTables, n: int) -> TodaMoleculeReport:
    """Residual of d^2/dx^2 ln(e^{n x^2} D_n) = 4 Dt_{n+1} Dt_{n-1} / Dt_n^2.

    With Dt_m = e^{m x^2} D_m the exponential prefactors cancel exactly in
    the ratio ((n+1) + (n-1) - 2n = 0), so the right side is just
    4 D_{n+1} D_{n-1} / D_n^2, which also equals 4 beta_n.
    """
    if not 1 <= n <= g.N:
        raise ValueError(f"n outside 1..{g.N}")
    with mp.workprec(g.bits + GUARD_BITS):
        ln_dressed = [
            n * x * x + mp.log(t.D[n]) for x, t in zip(g.grid, g.tables)
        ]
        fd2 = fd_derivative(ln_dressed, 2, g.step)
        ratio = tuple(
            t.D[n + 1] * t.D[n - 1] / (t.D[n] * t.D[n])
            for t in g.tables
        )
        residual = tuple(fd2[k] - 4 * ratio[k + 1] for k in range(len(fd2)))
        rmb = tuple(
            ratio[k] - g.tables[k].beta_n[n] for k in range(len(g.grid))
        )
    return TodaMoleculeReport(
        n=n, residual=residual, ratio=ratio, ratio_minus_beta=rmb
    )


@dataclass(frozen=True)
class FreeEnergyData:
    """F_n = -ln D_n along the grid plus the jump-response representation.

    F, f = F - n x^2 and Psi = sqrt(2 alpha_n / beta) live on the full grid
    (Psi is taken >= 0; every power entering the integrand is even, so the
    sign carries no content).  sum_rule_value is the Simpson integral of
    (4n + 1 - 2x^2) Psi^2 + 3 beta x Psi^4 - beta^2 Psi^6 over the window;
    sum_rule_deviations holds its distance to each reference candidate.
    When x_eval is set, f_rep reconstructs F(x_eval) from the left-edge
    reference plus (beta/2) * (prefix integral + Psi Psi'), and f_direct is
    the independent oracle value.
    """

    n: int
    F: Tuple[mpf, ...]
    f: Tuple[mpf, ...]
    psi: Tuple[mpf, ...]
    sum_rule_value: mpf
    sum_rule_deviations: Dict[str, mpf]
    x_eval: Optional[mpf] = None
    f_rep: Optional[mpf] = None
    f_direct: Optional[mpf] = None
    discrepancy: Optional[mpf] = None
    f_reference: Optional[mpf] = None


def free_energy(
    g: XGridTables,
    n: int,
    x_eval: Optional[Real] = None,
    reference_prec: Optional[PrecisionConfig] = None,
) -> FreeEnergyData:
    """Free-energy functional of the jump location at fixed degree.

    Builds F = -ln D_n, f = F - n x^2 and Psi = sqrt(2 alpha_n / beta) on the
    grid, integrates the sum-rule combination, and (optionally) checks the
    integral representation of F(x_eval) against a direct oracle value, with
    the left grid edge standing in for the x -> -inf reference.
    """
    if not 1 <= n <= g.N:
        raise ValueError(f"n outside 1..{g.N}")
    spec0 = g.tables[0].spec
    with mp.workprec(g.bits + GUARD_BITS):
        beta_w = spec0.beta_mp()
        if beta_w == 0:
            raise ValueError("beta = 0 has no jump response")
        F = tuple(-mp.log(t.D[n]) for t in g.tables)
        f_shift = tuple(F[k] - n * g.grid[k] ** 2 for k in range(len(F)))
        psi = []
        for x, t in zip(g.grid, g.tables):
            val = 2 * t.alpha[n] / beta_w
            if val < 0:
                raise NegativityError(
                    f"2 alpha_{n}/beta = {mp.nstr(val, 8)} < 0 at x = {mp.nstr(x, 8)}"
                )
            psi.append(mp.sqrt(val))
        psi = tuple(psi)
        integrand = tuple(
            (4 * n + 1 - 2 * x * x) * p**2
            + 3 * beta_w * x * p**4
            - beta_w * beta_w * p**6
            for x, p in zip(g.grid, psi)
        )
        s_val = simpson(integrand, g.step)
        two_pi_nb = 2 * mp.pi * n * _b_of(beta_w)
        deviations = {
            "zero": s_val,
            "two_pi_n_b": s_val - two_pi_nb,
            "four_pi_n_b_over_beta": s_val - 2 * two_pi_nb / beta_w,
        }
        if x_eval is None:
            return FreeEnergyData(
                n=n,
                F=F,
                f=f_shift,
                psi=psi,
                sum_rule_value=s_val,
                sum_rule_deviations=deviations,
            )
        xe = as_mpf(x_eval)
        k_eval = None
        for k, x in enumerate(g.grid):
            if abs(x - xe) <= abs(g.step) / 4:
                k_eval = k
                break
        if k_eval is None:
            raise ValueError(f"x_eval = {xe} is not on the grid")
        if not 2 <= k_eval <= len(g.grid) - 2:
            raise GridTooSmallError("x_eval too close to the grid edge")
        prefix = simpson(integrand[: k_eval + 1], g.step)
        d_psi = (psi[k_eval + 1] - psi[k_eval - 1]) / (2 * g.step)
        if reference_prec is None:
            reference_prec = PrecisionConfig(
                bits=g.bits, oracle_bits=max(512, 16 * (n + 1))
            )
        ref_table = oracle_table(
            WeightSpec(beta=spec0.beta, xjump=g.grid[0]), n, reference_prec
        )
        eval_table = oracle_table(
            WeightSpec(beta=spec0.beta, xjump=xe), n, reference_prec
        )
        f_ref = -mp.log(ref_table.D[n])
        f_direct = -mp.log(eval_table.D[n])
        f_rep = f_ref + beta_w / 2 * (prefix + psi[k_eval] * d_psi)
        disc = f_rep - f_direct
    return FreeEnergyData(
        n=n,
        F=F,
        f=f_shift,
        psi=psi,
        sum_rule_value=s_val,
        sum_rule_deviations=deviations,
        x_eval=xe,
        f_rep=f_rep,
        f_direct=f_direct,
        discrepancy=disc,
        f_reference=f_ref,
    )


def _b_of(beta: mpf) -> mpf:
    # ln((1 + beta/2)/(1 - beta/2)) / (2 pi); kept local to avoid an import
    # cycle with asymptotics, which owns the public version.
    return mp.log((1 + beta / 2) / (1 - beta / 2)) / (2 * mp.pi)


@dataclass(frozen=True)
class AlphaFromFreeEnergy:
    """alpha_n recovered from x-derivatives of the free energy, two ways."""

    n: int
    grid_interior: Tuple[mpf, ...]
    est_from_F: Tuple[mpf, ...]
    est_from_f: Tuple[mpf, ...]
    dev: Tuple[mpf, ...]

    @property
    def max_dev(self) -> mpf:
        return max(abs(d) for d in self.dev)


def alpha_from_free_energy(
    g: XGridTables, n: int, guard: Real = "1e-8"
) -> AlphaFromFreeEnergy:
    """Invert the log-derivative identities for alpha_n:

    est_F = (F' - x F'' + F'''/2) / (4n - 2 F'')          with F = -ln D_n,
    est_f = x/2 - (f''' + 2 f') / (4 f'')                 with f = F - n x^2.

    Both need the order-3 stencil, so two points are trimmed from each end.
    The two forms are algebraically identical on the same stencil data; dev
    is est_F minus the tabulated alpha_n.
    """
    if not 1 <= n <= g.N:
        raise ValueError(f"n outside 1..{g.N}")
    with mp.workprec(g.bits + GUARD_BITS):
        gd = as_mpf(guard)
        F = [-mp.log(t.D[n]) for t in g.tables]
        f1 = fd_derivative(F, 1, g.step)
        f2 = fd_derivative(F, 2, g.step)
        f3 = fd_derivative(F, 3, g.step)
        interior = g.grid[2:-2]
        est_F = []
        est_f = []
        dev = []
        for k, x in enumerate(interior):
            F1, F2, F3 = f1[k + 1], f2[k + 1], f3[k]
            den = 4 * n - 2 * F2
            if abs(den) < gd:
                raise DivisionBreakdownError(k + 2, "4n - 2F''", g.bits)
            est_F.append((F1 - x * F2 + F3 / 2) / den)
            # f = F - n x^2: f' = F' - 2nx, f'' = F'' - 2n, f''' = F'''
            g1 = F1 - 2 * n * x
            g2 = F2 - 2 * n
            if abs(g2) < gd:
                raise DivisionBreakdownError(k + 2, "f''", g.bits)
            est_f.append(x / 2 - (f3[k] + 2 * g1) / (4 * g2))
            dev.append(est_F[-1] - g.tables[k + 2].alpha[n])
    return AlphaFromFreeEnergy(
        n=n,
        grid_interior=interior,
        est_from_F=tuple(est_F),
        est_from_f=tuple(est_f),
        dev=tuple(dev),
    )
