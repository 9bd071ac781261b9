"""Command-line front end.

Subcommands: ``iterate`` and ``oracle`` dump coefficient tables as CSV,
``scan`` sweeps the jump location (parallel over grid points, Fig.-style
rescaled column included), ``taylor`` compares short-range Taylor predictions
against direct iteration, ``asymptote`` fits the large-n phase and reports
order-check bounds as JSON, and ``verify`` runs one of seven residual suites
and emits a JSON report.

All numeric output is decimal scientific notation with a configurable number
of significant digits; identical arguments produce identical bytes.  Exit
codes: 0 success, 1 usage, 2 iteration breakdown, 3 oracle breakdown,
4 verification failure.
"""

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from mpmath import mp, mpf

from .core import GUARD_BITS, PrecisionConfig, WeightSpec, as_mpf
from .oracle import ORACLE_MAX_DEGREE, PositivityBreakdownError, oracle_table
from .recurrence import (
    DivisionBreakdownError,
    compatibility_residuals,
    iterate,
    universal_residuals,
)
from . import asymptotics, evolution

SUITES = (
    "universal",
    "compat",
    "toda",
    "painleve",
    "hankel",
    "freenergy",
    "asymptote",
)


def supported_digits(bits: int) -> int:
    """Largest significant-digit count the mantissa actually backs."""
    return max(1, int(bits * math.log10(2)) - 2)


def format_sig(x, digits: int) -> str:
    """Normalized scientific notation: d.dd...e[+-]XX, fixed digit count.

    The exponent keeps at least two digits so output columns are stable;
    zero is rendered as 0.00...0e+00.
    """
    xv = as_mpf(x)
    if xv == 0:
        mantissa = "0." + "0" * (digits - 1) if digits > 1 else "0"
        return mantissa + "e+00"
    s = mp.nstr(xv, digits, strip_zeros=False, min_fixed=0, max_fixed=0)
    if "e" in s:
        mant, exp = s.split("e")
        e = int(exp)
    else:
        mant, e = s, 0
    return f"{mant}e{e:+03d}"


def format_float(v: float) -> str:
    return f"{v:.12e}"


def _thread_cap(njobs: int) -> int:
    raw = os.environ.get("OPJUMP_THREADS", "").strip()
    if raw:
        try:
            cap = int(raw)
        except ValueError:
            raise ValueError(f"OPJUMP_THREADS = {raw!r} is not an integer")
        if cap < 1:
            raise ValueError("OPJUMP_THREADS must be >= 1")
    else:
        cap = os.cpu_count() or 1
    return max(1, min(cap, njobs))


class _Parser(argparse.ArgumentParser):
    # usage problems must exit 1, not argparse's default 2
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(1)


def _parse_n_list(text: str) -> Tuple[int, ...]:
    try:
        values = sorted({int(part) for part in text.split(",") if part.strip()})
    except ValueError:
        raise ValueError(f"--n expects integers separated by commas, got {text!r}")
    if not values or values[0] < 0:
        raise ValueError(f"--n values must be >= 0, got {text!r}")
    return tuple(values)


@dataclass
class RunConfig:
    """Validated bundle of CLI arguments for one invocation."""

    subcommand: str
    beta: Optional[str] = "1.5"
    xjump: Optional[str] = "0"
    xmin: Optional[str] = None
    xmax: Optional[str] = None
    steps: int = 2
    n: Optional[int] = 10
    n_list: Tuple[int, ...] = ()
    bits: int = 256
    oracle_bits: Optional[int] = None
    fd_step: str = "1e-3"
    fit_lo: int = 1000
    fit_hi: int = 10000
    n_max: int = 10000
    digits: int = 30
    out: Optional[str] = None
    suite: Optional[str] = None
    fig: int = 2

    def __post_init__(self):
        if self.digits < 1:
            raise ValueError("--digits must be >= 1")
        cap = supported_digits(self.bits)
        if self.digits > cap:
            raise ValueError(
                f"--digits {self.digits} exceeds the {cap} digits supported "
                f"by {self.bits} bits"
            )
        self.prec = PrecisionConfig(
            bits=self.bits, oracle_bits=self.oracle_bits, fd_step=self.fd_step
        )

    def weight(self, xjump: Optional[str] = None) -> WeightSpec:
        return WeightSpec(beta=self.beta, xjump=self.xjump if xjump is None else xjump)

    def resolved(self, field: str, fallback):
        value = getattr(self, field)
        return fallback if value is None else value


def _emit(text: str, out: Optional[str]):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)


def _emit_json(obj, out: Optional[str]):
    _emit(json.dumps(obj, indent=2, sort_keys=True) + "\n", out)


# ---------------------------------------------------------------------------
# table dumps

def _table_rows(table, columns, digits, N):
    rows = []
    for n in range(N + 2):
        cells = [str(n)]
        for col in columns:
            seq = getattr(table, col)
            cells.append(format_sig(seq[n], digits) if n < len(seq) else "")
        rows.append(",".join(cells))
    return rows


def cmd_iterate(cfg: RunConfig) -> int:
    table = iterate(cfg.weight(), cfg.n, cfg.prec)
    rows = _table_rows(table, ("alpha", "beta_n", "r", "R"), cfg.digits, cfg.n)
    _emit("n,alpha,beta_n,r,R\n" + "\n".join(rows) + "\n", cfg.out)
    return 0


def cmd_oracle(cfg: RunConfig) -> int:
    table = oracle_table(cfg.weight(), cfg.n, cfg.prec)
    rows = _table_rows(
        table, ("alpha", "beta_n", "r", "R", "h", "D"), cfg.digits, cfg.n
    )
    _emit("n,alpha,beta_n,r,R,h,D\n" + "\n".join(rows) + "\n", cfg.out)
    return 0


# ---------------------------------------------------------------------------
# scan

def _grid_point(xmin: str, xmax: str, steps: int, k: int, bits: int) -> mpf:
    # recomputed identically everywhere (main process and workers), so the
    # emitted bytes cannot depend on how the work was distributed
    with mp.workprec(bits + GUARD_BITS):
        lo, hi = as_mpf(xmin), as_mpf(xmax)
        return lo + k * ((hi - lo) / (steps - 1))


def _scan_point(payload):
    """One grid point -> formatted CSV cells.  Runs in a worker process, so
    everything in and out is plain strings/ints."""
    beta, xmin, xmax, steps, k, n_list, bits, fd_step, digits, fig = payload
    prec = PrecisionConfig(bits=bits, fd_step=fd_step)
    x = _grid_point(xmin, xmax, steps, k, bits)
    spec = WeightSpec(beta=beta, xjump=x)
    xcell = format_sig(x, digits)
    try:
        table = iterate(spec, max(n_list), prec)
    except DivisionBreakdownError as exc:
        rows = [(xcell, n, "", "", "") for n in n_list]
        warning = {
            "xjump": xcell,
            "index": exc.index,
            "quantity": exc.quantity,
            "message": str(exc),
        }
        return rows, warning
    with mp.workprec(bits + GUARD_BITS):
        b = asymptotics.b_const(beta, bits)
        rows = []
        warning = None
        for n in n_list:
            a = table.alpha[n]
            if b == 0:
                resc = ""
                warning = {
                    "xjump": xcell,
                    "message": "beta = 0: rescaled column left empty (b = 0)",
                }
            elif fig == 1:
                resc = format_sig(mp.sqrt(mpf(n) / 2) * a / b, digits)
            else:
                resc = format_sig(a / b, digits)
            rows.append(
                (xcell, n, format_sig(a, digits), resc, format_sig(table.r[n], digits))
            )
    return rows, warning


def cmd_scan(cfg: RunConfig) -> int:
    with mp.workprec(cfg.bits + GUARD_BITS):
        if not as_mpf(cfg.xmin) < as_mpf(cfg.xmax):
            raise ValueError("--xmin must be < --xmax")
    if cfg.steps < 2:
        raise ValueError("--steps must be >= 2")
    payloads = [
        (
            cfg.beta,
            cfg.xmin,
            cfg.xmax,
            cfg.steps,
            k,
            cfg.n_list,
            cfg.bits,
            cfg.fd_step,
            cfg.digits,
            cfg.fig,
        )
        for k in range(cfg.steps)
    ]
    workers = _thread_cap(len(payloads))
    if workers == 1:
        results = [_scan_point(p) for p in payloads]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_scan_point, payloads, chunksize=1))
    lines = ["xjump,n,alpha,alpha_rescaled,r"]
    warnings_out: List[dict] = []
    for rows, warning in results:  # grid order == submission order
        for xcell, n, a, resc, r in rows:
            lines.append(f"{xcell},{n},{a},{resc},{r}")
        if warning is not None:
            warnings_out.append(warning)
    _emit("\n".join(lines) + "\n", cfg.out)
    sidecar = "".join(json.dumps(w, sort_keys=True) + "\n" for w in warnings_out)
    if cfg.out is not None:
        with open(cfg.out + ".warnings.jsonl", "w", newline="") as fh:
            fh.write(sidecar)
    elif sidecar:
        sys.stderr.write(sidecar)
    return 0


# ---------------------------------------------------------------------------
# taylor

def cmd_taylor(cfg: RunConfig) -> int:
    """Short-range Taylor predictions of alpha_n(xjump) from x = 0 data
    versus direct iteration, with Fig.-1-style rescaled columns."""
    prec = cfg.prec
    base = iterate(WeightSpec(beta=cfg.beta, xjump="0"), cfg.n + 1, prec)
    direct = iterate(cfg.weight(), cfg.n, prec)
    with mp.workprec(cfg.bits + GUARD_BITS):
        b = asymptotics.b_const(cfg.beta, cfg.bits)
        if b == 0:
            raise ValueError("beta = 0 leaves nothing to rescale or predict")
        xv = as_mpf(cfg.xjump)
        lines = [
            "n,alpha_iter,alpha_taylor2,alpha_taylor3,"
            "rescaled_iter,rescaled_taylor2,rescaled_taylor3"
        ]
        for n in range(1, cfg.n + 1):
            a0 = base.alpha[n]
            slope = base.r[n] - base.r[n + 1]
            t2 = evolution.taylor_extend(a0, slope, n, 2, xv, cfg.bits)
            t3 = evolution.taylor_extend(a0, slope, n, 3, xv, cfg.bits)
            scale = mp.sqrt(mpf(n) / 2) / b
            cells = [str(n)]
            cells += [format_sig(v, cfg.digits) for v in (direct.alpha[n], t2, t3)]
            cells += [
                format_sig(v * scale, cfg.digits)
                for v in (direct.alpha[n], t2, t3)
            ]
            lines.append(",".join(cells))
    _emit("\n".join(lines) + "\n", cfg.out)
    return 0


# ---------------------------------------------------------------------------
# asymptote

def cmd_asymptote(cfg: RunConfig) -> int:
    if not 1 <= cfg.fit_lo < cfg.fit_hi:
        raise ValueError("--fit-lo must be >= 1 and < --fit-hi")
    N = max(cfg.fit_hi, cfg.n)
    table = iterate(WeightSpec(beta=cfg.beta, xjump="0"), N, cfg.prec)
    B, amp = asymptotics.fit_phase(table, (cfg.fit_lo, cfg.fit_hi))
    params = asymptotics.AsymptoteParams.for_beta(cfg.beta, B=B, bits=cfg.bits)
    check = asymptotics.order_check(params, cfg.n_max)
    report = {
        "beta": cfg.beta,
        "b": format_sig(params.b, cfg.digits),
        "B": format_float(B),
        "amplitude": format_float(amp),
        "fit_window": [cfg.fit_lo, cfg.fit_hi],
        "order_check": {
            "n_max": cfg.n_max,
            "sup_n2_residual_18": format_float(check.sup18),
            "sup_n2_residual_19": format_float(check.sup19),
        },
    }
    out_json = json.dumps(report, indent=2, sort_keys=True) + "\n"
    sys.stdout.write(out_json)
    if cfg.out is not None:
        with mp.workprec(cfg.bits + GUARD_BITS):
            lines = ["n,alpha_est,r_est,alpha_est_rescaled"]
            scale_b = params.b
            for n in range(1, cfg.n + 1):
                a_est, r_est = asymptotics.asymptote(n, params)
                resc = mp.sqrt(mpf(n) / 2) * a_est / scale_b
                lines.append(
                    ",".join(
                        [
                            str(n),
                            format_sig(a_est, cfg.digits),
                            format_sig(r_est, cfg.digits),
                            format_sig(resc, cfg.digits),
                        ]
                    )
                )
        with open(cfg.out, "w", newline="") as fh:
            fh.write("\n".join(lines) + "\n")
    return 0


# ---------------------------------------------------------------------------
# verify suites

def _report(suite, params, residual_max, location, tolerance, order, ok, extra=None):
    rep = {
        "suite": suite,
        "params": params,
        "residual_max": residual_max,
        "residual_location": location,
        "tolerance": tolerance,
        "convergence_order": order,
        "pass": bool(ok),
    }
    if extra:
        rep["extra"] = extra
    return rep


def _suite_prec(cfg: RunConfig, N: int) -> PrecisionConfig:
    obits = cfg.oracle_bits if cfg.oracle_bits is not None else max(1024, 16 * N)
    return PrecisionConfig(bits=cfg.bits, oracle_bits=obits, fd_step=cfg.fd_step)


def _suite_universal(cfg: RunConfig):
    N = cfg.resolved("n", 30)
    beta = cfg.resolved("beta", "1.5")
    xjump = cfg.resolved("xjump", "0.5")
    prec = _suite_prec(cfg, N)
    table = oracle_table(WeightSpec(beta=beta, xjump=xjump), N, prec)
    u1, u2 = universal_residuals(table)
    tol = mpf("1e-25")
    worst = mpf(0)
    where = {"kind": "u1", "n": 0}
    for name, seq, off in (("u1", u1, 0), ("u2", u2, 1)):
        for k, v in enumerate(seq):
            if abs(v) > worst:
                worst = abs(v)
                where = {"kind": name, "n": k + off}
    params = {
        "beta": beta,
        "xjump": xjump,
        "n": N,
        "oracle_bits": prec.resolve_oracle_bits(N),
    }
    return _report(
        "universal",
        params,
        format_sig(worst, cfg.digits),
        where,
        format_sig(tol, 3),
        None,
        worst <= tol,
    )


def _suite_compat(cfg: RunConfig):
    n_top = cfg.resolved("n", 20)
    beta = cfg.resolved("beta", "1.5")
    xjump = cfg.resolved("xjump", "0.5")
    N = n_top + 1
    prec = _suite_prec(cfg, N)
    table = oracle_table(WeightSpec(beta=beta, xjump=xjump), N, prec)
    zs = ("-2", "-1", "1", "2", "3")
    tol = mpf("1e-22")
    worst = mpf(0)
    where = {"kind": "s1", "n": 1, "z": zs[0]}
    for n in range(1, n_top + 1):
        s1, s2 = compatibility_residuals(table, n, zs)
        for name, seq in (("s1", s1), ("s2", s2)):
            for z, v in zip(zs, seq):
                if abs(v) > worst:
                    worst = abs(v)
                    where = {"kind": name, "n": n, "z": z}
    params = {
        "beta": beta,
        "xjump": xjump,
        "n": n_top,
        "z": list(zs),
        "oracle_bits": prec.resolve_oracle_bits(N),
    }
    return _report(
        "compat",
        params,
        format_sig(worst, cfg.digits),
        where,
        format_sig(tol, 3),
        None,
        worst <= tol,
    )


def _center_max(res_seqs, center_idx):
    worst = mpf(0)
    for seq in res_seqs:
        v = seq[center_idx]
        if v is not None and abs(v) > worst:
            worst = abs(v)
    return worst


def _suite_toda(cfg: RunConfig):
    n_top = cfg.resolved("n", 20)
    beta = cfg.resolved("beta", "1.5")
    with mp.workprec(cfg.bits + GUARD_BITS):
        h0 = as_mpf(cfg.fd_step)
        steps = [10 * h0, 5 * h0, h0]
        center = as_mpf(cfg.resolved("xjump", "0.5"))
        maxima = []
        for h in steps:
            g = evolution.grid_tables(
                beta, center - 2 * h, center + 2 * h, 5, n_top + 1, cfg.prec
            )
            rep = evolution.toda_residuals(g, n_max=n_top)
            seqs = (
                list(rep.t0.values()) + list(rep.t1.values()) + list(rep.t2.values())
            )
            maxima.append(_center_max(seqs, 1))  # grid point #2 = center
        orders = [
            float(mp.log(maxima[i] / maxima[i + 1]) / mp.log(steps[i] / steps[i + 1]))
            for i in range(len(steps) - 1)
        ]
    ok = all(1.8 <= o <= 2.2 for o in orders)
    params = {
        "beta": beta,
        "xjump": str(center),
        "n": n_top,
        "fd_steps": [format_sig(h, 6) for h in steps],
        "bits": cfg.bits,
    }
    return _report(
        "toda",
        params,
        format_sig(maxima[-1], cfg.digits),
        {"kind": "max over t0/t1/t2 at center", "n": n_top},
        "order in [1.8, 2.2]",
        format_float(orders[-1]),
        ok,
        extra={"orders": [format_float(o) for o in orders]},
    )


def _suite_painleve(cfg: RunConfig):
    n = cfg.resolved("n", 5)
    beta = cfg.resolved("beta", "1.5")
    with mp.workprec(cfg.bits + GUARD_BITS):
        h0 = as_mpf(cfg.fd_step)
        steps = [2 * h0, h0]
        center = as_mpf(cfg.resolved("xjump", "0"))
        maxima = []
        for h in steps:
            g = evolution.grid_tables(
                beta, center - 2 * h, center + 2 * h, 5, n, cfg.prec
            )
            res = evolution.painleve_residual(g, n)
            maxima.append(_center_max([res], 1))
        if maxima[-1] == 0:
            order = 2.0  # masked or exactly zero: nothing to scale
        else:
            order = float(mp.log(maxima[0] / maxima[1]) / mp.log(steps[0] / steps[1]))
    ok = 1.8 <= order <= 2.2
    params = {
        "beta": beta,
        "xjump": str(center),
        "n": n,
        "fd_steps": [format_sig(h, 6) for h in steps],
        "bits": cfg.bits,
    }
    return _report(
        "painleve",
        params,
        format_sig(maxima[-1], cfg.digits),
        {"kind": "ODE residual at center", "n": n},
        "order in [1.8, 2.2]",
        format_float(order),
        ok,
    )


def _suite_hankel(cfg: RunConfig):
    # (i) derivative-free identity on a long iteration table
    beta = cfg.resolved("beta", "1.5")
    xjump = cfg.resolved("xjump", "0.5")
    N_id = max(cfg.resolved("n", 500), 500)
    table = iterate(WeightSpec(beta=beta, xjump=xjump), N_id, cfg.prec)
    ident = evolution.hankel_identity_residuals(table)
    worst = mpf(0)
    worst_n = 1
    for k, v in enumerate(ident):
        if abs(v) > worst:
            worst = abs(v)
            worst_n = k + 1
    tol = mpf("1e-20")
    ok_ident = worst <= tol
    # (ii)/(iii) fd log-derivatives on oracle grids, order measured
    n_fd = 10
    prec = _suite_prec(cfg, n_fd)
    with mp.workprec(cfg.bits + GUARD_BITS):
        h0 = as_mpf(cfg.fd_step)
        steps = [2 * h0, h0]
        dev1 = []
        dev2 = []
        for h in steps:
            g = evolution.grid_tables(
                "0.5", 1 - 2 * h, 1 + 2 * h, 5, n_fd, prec, source="oracle"
            )
            rep = evolution.hankel_logderivs(g, n_fd)
            dev1.append(abs(rep.dev1[1]))
            dev2.append(abs(rep.dev2[1]))
        order1 = float(mp.log(dev1[0] / dev1[1]) / mp.log(steps[0] / steps[1]))
        order2 = float(mp.log(dev2[0] / dev2[1]) / mp.log(steps[0] / steps[1]))
    ok = ok_ident and 1.8 <= order1 <= 2.2 and 1.8 <= order2 <= 2.2
    params = {
        "beta": beta,
        "xjump": xjump,
        "identity_n_max": N_id,
        "bits": cfg.bits,
        "fd_check": {"beta": "0.5", "xjump": "1", "n": n_fd},
    }
    return _report(
        "hankel",
        params,
        format_sig(worst, cfg.digits),
        {"kind": "derivative-free identity", "n": worst_n},
        format_sig(tol, 3),
        format_float(order2),
        ok,
        extra={
            "fd1_order": format_float(order1),
            "fd2_order": format_float(order2),
        },
    )


def _suite_freenergy(cfg: RunConfig):
    beta = cfg.resolved("beta", "0.5")
    n = cfg.resolved("n", 2)
    prec = PrecisionConfig(bits=cfg.bits, fd_step=cfg.fd_step)
    npts = 1025  # h = 1/64 over [-8, 8]
    g = evolution.grid_tables(beta, "-8", "8", npts, n + 1, prec)
    fe = evolution.free_energy(g, n, x_eval="0.5")
    with mp.workprec(cfg.bits + GUARD_BITS):
        # Hermite-limit determinant ratios against the oracle at the window
        # edges; closed form D_n = pi^(n/2) prod_{j<n} j!/2^j
        d_std = mpf(1)
        fact = mpf(1)
        for j in range(n):
            if j > 1:
                fact *= j
            d_std *= mp.sqrt(mp.pi) * fact / mpf(2) ** j
        obits = max(1024, 16 * (n + 1))
        oprec = PrecisionConfig(bits=cfg.bits, oracle_bits=obits)
        d_minus = oracle_table(WeightSpec(beta=beta, xjump="-8"), n, oprec).D[n]
        d_plus = oracle_table(WeightSpec(beta=beta, xjump="8"), n, oprec).D[n]
        ratio_minus = d_minus / d_std
        ratio_plus = d_plus / d_std
        shift = mpf(2) ** (1 - n)
        bmp = as_mpf(beta)
        onejump_minus = (1 + bmp / 2) ** n
        onejump_plus = (1 - bmp / 2) ** n
    dg = cfg.digits
    extra = {
        "sum_rule": {
            "value": format_sig(fe.sum_rule_value, dg),
            "minus_zero": format_sig(fe.sum_rule_deviations["zero"], dg),
            "minus_two_pi_n_b": format_sig(fe.sum_rule_deviations["two_pi_n_b"], dg),
            "minus_four_pi_n_b_over_beta": format_sig(
                fe.sum_rule_deviations["four_pi_n_b_over_beta"], dg
            ),
        },
        "limit_ratios": {
            "D_at_minus_8_over_closed_form": format_sig(ratio_minus, dg),
            "D_at_plus_8_over_closed_form": format_sig(ratio_plus, dg),
            "closed_form_shift_2^(1-n)": format_sig(shift, dg),
            "ratio_minus_over_shift": format_sig(ratio_minus / shift, dg),
            "ratio_plus_over_shift": format_sig(ratio_plus / shift, dg),
            "one_jump_factor_minus_(1+beta/2)^n": format_sig(onejump_minus, dg),
            "one_jump_factor_plus_(1-beta/2)^n": format_sig(onejump_plus, dg),
        },
        "representation": {
            "x_eval": format_sig(fe.x_eval, dg),
            "F_rep": format_sig(fe.f_rep, dg),
            "F_direct_oracle": format_sig(fe.f_direct, dg),
            "discrepancy": format_sig(fe.discrepancy, dg),
            "F_reference_left_edge": format_sig(fe.f_reference, dg),
        },
    }
    ok = cfg.digits >= 25
    params = {"beta": beta, "n": n, "grid": ["-8", "8", npts], "bits": cfg.bits}
    return _report(
        "freenergy",
        params,
        format_sig(abs(fe.discrepancy), dg),
        {"kind": "F representation vs oracle", "x": "0.5"},
        "report-only (>= 25 digits)",
        None,
        ok,
        extra=extra,
    )


def _suite_asymptote(cfg: RunConfig):
    beta = cfg.resolved("beta", "1.5")
    N = max(cfg.fit_hi, 10000)
    table = iterate(WeightSpec(beta=beta, xjump="0"), N, cfg.prec)
    b1, amp1 = asymptotics.fit_phase(table, (1000, 3000))
    b2, amp2 = asymptotics.fit_phase(table, (3000, 10000))
    delta = abs(b1 - b2)
    delta = min(delta, 2 * math.pi - delta)
    params_fit = asymptotics.AsymptoteParams.for_beta(beta, B=b1, bits=cfg.bits)
    check = asymptotics.order_check(params_fit, cfg.n_max)
    ok = delta <= 1e-2 and math.isfinite(check.sup18) and math.isfinite(check.sup19)
    params = {
        "beta": beta,
        "windows": [[1000, 3000], [3000, 10000]],
        "n_max": cfg.n_max,
        "bits": cfg.bits,
    }
    return _report(
        "asymptote",
        params,
        format_float(delta),
        {"kind": "|B(window1) - B(window2)|"},
        "1e-2",
        None,
        ok,
        extra={
            "B": [format_float(b1), format_float(b2)],
            "amplitude": [format_float(amp1), format_float(amp2)],
            "sup_n2_residual_18": format_float(check.sup18),
            "sup_n2_residual_19": format_float(check.sup19),
        },
    )


_SUITE_FN = {
    "universal": _suite_universal,
    "compat": _suite_compat,
    "toda": _suite_toda,
    "painleve": _suite_painleve,
    "hankel": _suite_hankel,
    "freenergy": _suite_freenergy,
    "asymptote": _suite_asymptote,
}


def cmd_verify(cfg: RunConfig) -> int:
    report = _SUITE_FN[cfg.suite](cfg)
    _emit_json(report, cfg.out)
    return 0 if report["pass"] else 4


# ---------------------------------------------------------------------------
# parser

def build_parser() -> _Parser:
    top = _Parser(prog="opjump", description=__doc__.splitlines()[0])
    sub = top.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def common(p, *, xjump=True, oracle=False):
        p.add_argument("--beta", default="1.5", help="jump height (beta/2 in (-1,1))")
        if xjump:
            p.add_argument("--xjump", default="0", help="jump location")
        p.add_argument("--bits", type=int, default=256)
        if oracle:
            p.add_argument("--oracle-bits", type=int, default=None, dest="oracle_bits")
        p.add_argument("--fd-step", default="1e-3", dest="fd_step")
        p.add_argument("--digits", type=int, default=30)
        p.add_argument("--out", default=None, help="output path (default stdout)")

    p = sub.add_parser("iterate", help="difference-equation table as CSV")
    common(p)
    p.add_argument("--n", type=int, default=10, help="max degree N")

    p = sub.add_parser("oracle", help="moment-oracle table as CSV")
    common(p, oracle=True)
    p.add_argument("--n", type=int, default=10, help=f"max degree N (<= {ORACLE_MAX_DEGREE})")

    p = sub.add_parser("verify", help="run a residual suite, emit JSON")
    common(p, oracle=True)
    p.set_defaults(beta=None, xjump=None)
    p.add_argument("--suite", required=True, choices=SUITES)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--fit-lo", type=int, default=1000, dest="fit_lo")
    p.add_argument("--fit-hi", type=int, default=10000, dest="fit_hi")
    p.add_argument("--n-max", type=int, default=10000, dest="n_max")

    p = sub.add_parser("scan", help="sweep the jump location, CSV per (x, n)")
    common(p, xjump=False)
    p.add_argument("--xmin", required=True)
    p.add_argument("--xmax", required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--n", required=True, help="comma-separated degree list")
    p.add_argument("--fig", type=int, choices=(1, 2), default=2,
                   help="rescaling: 1 -> b^-1 sqrt(n/2) alpha, 2 -> b^-1 alpha")

    p = sub.add_parser("taylor", help="Taylor-from-origin vs iterated alpha, CSV")
    common(p)
    p.add_argument("--n", type=int, default=100, help="max degree")

    p = sub.add_parser("asymptote", help="fit phase B, report order bounds (JSON)")
    common(p)
    p.add_argument("--n", type=int, default=200, help="rows in the optional curve CSV")
    p.add_argument("--fit-lo", type=int, default=1000, dest="fit_lo")
    p.add_argument("--fit-hi", type=int, default=10000, dest="fit_hi")
    p.add_argument("--n-max", type=int, default=10000, dest="n_max")
    return top


_DISPATCH = {
    "iterate": cmd_iterate,
    "oracle": cmd_oracle,
    "verify": cmd_verify,
    "scan": cmd_scan,
    "taylor": cmd_taylor,
    "asymptote": cmd_asymptote,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    fields = (
        "beta xjump xmin xmax steps n n_list bits oracle_bits fd_step "
        "fit_lo fit_hi n_max digits out suite fig"
    ).split()
    kwargs = {}
    for f in fields:
        if hasattr(args, f):
            kwargs[f] = getattr(args, f)
    try:
        if args.subcommand == "scan":
            kwargs["n_list"] = _parse_n_list(kwargs.pop("n"))
            kwargs["n"] = max(kwargs["n_list"])
        cfg = RunConfig(subcommand=args.subcommand, **kwargs)
        if args.subcommand == "oracle" and not 0 <= cfg.n <= ORACLE_MAX_DEGREE:
            raise ValueError(f"--n must be within 0..{ORACLE_MAX_DEGREE}")
    except (ValueError, TypeError) as exc:
        print(f"opjump: error: {exc}", file=sys.stderr)
        return 1
    try:
        return _DISPATCH[args.subcommand](cfg)
    except DivisionBreakdownError as exc:
        print(f"opjump: iteration breakdown: {exc}", file=sys.stderr)
        return 2
    except PositivityBreakdownError as exc:
        print(f"opjump: oracle breakdown: {exc}", file=sys.stderr)
        return 3
    except (ValueError, ArithmeticError) as exc:
        print(f"opjump: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
