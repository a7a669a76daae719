"""Command-line entry point.

    cuspsums coeffs --form delta --n-max 2000 --verify
    cuspsums moments --form unit --M 100 --A 4
    cuspsums exppairs --word BABAAB

Exit status: 0 on success, 1 on validation failure, 2 when a resource cap
refuses the request.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path


from . import coeffs, exppairs, moments, quadruples, voronoi
from .config import ConfigError, RunConfig, load_config
from .report import ReportError, export_report, make_report
from .sums import Twist, build_prefix_cache

SUBCOMMANDS = ("coeffs", "voronoi", "moments", "quadruples", "exppairs", "oscillation", "all")


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cuspsums", description="Twisted cusp form coefficient sums.")
    p.add_argument("command", choices=SUBCOMMANDS)
    p.add_argument("--config")
    p.add_argument("--form", dest="form_id")
    p.add_argument("--n-max", "--n", dest="n_max", type=int)
    p.add_argument("--h", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--M", type=float, nargs="+")
    p.add_argument("--delta", type=float, nargs="+")
    p.add_argument("--xi", type=float, nargs="+")
    p.add_argument("--V", type=float, nargs="+")
    p.add_argument("--A", type=float, nargs="+")
    p.add_argument("--word")
    p.add_argument("--eps", type=float)
    p.add_argument("--c-small", dest="c_small", type=float)
    p.add_argument("--C-big", dest="C_big", type=float)
    p.add_argument("--quad-cutoff", dest="quad_cutoff", type=int)
    p.add_argument("--out")
    p.add_argument("--workers", type=int)
    p.add_argument("--verify", action="store_true")
    return p


class _Run:
    """Shared state for one invocation: config, lazily built tables and caches."""

    def __init__(self, cfg: RunConfig, explicit_n_max: bool):
        self.cfg = cfg
        self.explicit_n_max = explicit_n_max
        self._table = None
        self._caches = {}

    def needed_length(self) -> int:
        top = max(self.cfg.M_grid())
        extra = max(self.cfg.delta + self.cfg.xi, default=0.0)
        return math.ceil(2 * top + extra) + 2

    def table(self) -> coeffs.CoeffTable:
        if self._table is None:
            cfg = self.cfg
            cfg.check_grids()
            n = cfg.n_max if self.explicit_n_max else min(cfg.n_max, self.needed_length())
            if cfg.form_id == "unit":
                if n > coeffs.DEFAULT_CAP:
                    raise coeffs.ResourceLimitError(f"n_max={n} exceeds cap {coeffs.DEFAULT_CAP}")
                self._table = coeffs.synthetic_table({1: 1}, n)
                self._table = coeffs.CoeffTable(12, "unit", self._table.exact, self._table.normalized)
            else:
                self._table = coeffs.build_cusp_form(cfg.form_id, n)
        return self._table

    def cache(self, h: int, k: int):
        if (h, k) not in self._caches:
            self._caches[(h, k)] = build_prefix_cache(self.table(), h, k)
        return self._caches[(h, k)]

    def report(self, module: str, op: str, params: dict, results: dict, flags=()) -> dict:
        return make_report(module, op, params, results, self.cfg.digest(), self.cfg.form_id, flags)


def _cmd_coeffs(run: _Run, verify: bool) -> list:
    t = run.table()
    results = {"first": [str(v) for v in t.exact[1:11]], "length": t.length, "weight": t.weight}
    flags = []
    if verify:
        tabs = coeffs.divisor_tables(t.length)
        stats = coeffs.coefficient_statistics(t, tabs)
        results.update(stats)
        if t.form_id != "unit":
            results["hecke_ok"] = coeffs.hecke_check(t)
        if t.form_id == "delta":
            n = min(t.length, 2000)
            eta3 = coeffs.build_eta3_series(n - 1)
            power = [1] + [0] * (n - 1)
            for _ in range(8):
                power = coeffs.schoolbook_multiply(power, eta3, n - 1)
            results["schoolbook_match"] = list(t.exact[1 : n + 1]) == power
        if not results["deligne_ok"]:
            flags.append("deligne_failed")
    print(f"{t.form_id}: c(1..6) = {', '.join(results['first'][:6])}")
    if verify:
        print(f"deligne_ok = {str(results['deligne_ok']).lower()}")
    out = Path(run.cfg.out)
    coeffs.export_csv(t, out / f"coeffs_{t.form_id}.csv")
    return [("coeffs", run.report("coeffs", "build_cusp_form", {"n_max": t.length, "verify": verify}, results, flags))]


def _cmd_voronoi(run: _Run) -> list:
    cfg = run.cfg
    t = run.table()
    reports = []
    for h, k in cfg.twist_list():
        twist = Twist.make(h, k)
        for M in cfg.M_grid():
            xs = voronoi.half_integer_samples(M, 2 * M, 32)
            grid = [N for N in (1e2, 1e3, 1e4) if N <= M and N <= t.length]
            scan = voronoi.truncation_error_scan(t, twist, xs, grid, cache=run.cache(h, k), workers=cfg.workers)
            print(f"h/k={h}/{k} M={M:g}: slope {scan.slope}")
            reports.append(
                (
                    f"voronoi_scan_{h}_{k}_{M:g}",
                    run.report("voronoi", "truncation_error_scan", {"h": h, "k": k, "x_range": [M, 2 * M]}, scan.as_dict(), scan.flags),
                )
            )
        if t.length >= 51:
            full = voronoi.full_voronoi_check(t, twist, 10.5, 50.5, t.length)
            res = {"lhs": full.lhs, "rhs": full.rhs, "gap": full.gap, "relative_gap": full.relative_gap if full.lhs else None}
            reports.append(
                (
                    f"voronoi_full_{h}_{k}",
                    run.report("voronoi", "full_voronoi_check", {"h": h, "k": k, "a": 10.5, "b": 50.5, "n_max": t.length}, res),
                )
            )
    return reports


def _cmd_moments(run: _Run) -> list:
    cfg = run.cfg
    reports = []
    for h, k in cfg.twist_list():
        cache = run.cache(h, k)
        for M in cfg.M_grid():
            params = {"h": h, "k": k, "M": M}
            res = {}
            for A in cfg.A:
                rep = moments.exact_power_moment(cache, M, "abs_power", A)
                res[f"abs_power_{A:g}"] = rep.as_dict()
                print(f"h/k={h}/{k} M={M:g} A={A:g}: raw {rep.raw:.17g} ratio {rep.ratio:.6g}")
            for mode in ("signed_first", "abs_first", "plusplus_square"):
                res[mode] = moments.exact_power_moment(cache, M, mode).as_dict()
            for D in cfg.delta:
                Xi = min(cfg.xi) if cfg.xi else M
                if M + Xi + D <= cache.length:
                    res[f"short_mean_square_{D:g}"] = moments.short_mean_square(cache, M, Xi, D).as_dict()
                if 2 * M + D <= cache.length:
                    res[f"max_short_mean_square_{D:g}"] = moments.max_short_mean_square(cache, M, D).as_dict()
            pair = exppairs.apply_process_word(cfg.word)
            for V in cfg.V:
                res[f"large_values_{V:g}"] = moments.large_value_count(cache, M, V, pair, cfg.eps).as_dict()
            reports.append((f"moments_{h}_{k}_{M:g}", run.report("moments", "exact_power_moment", params, res)))
    t = run.table()
    cutoff = min(t.length, 10**5)
    C = moments.constant_C(t, cutoff)
    reports.append(("constant_C", run.report("moments", "constant_C", {"cutoff": cutoff}, {"value": C.value, "tail": C.tail})))
    return reports


def _cmd_quadruples(run: _Run) -> list:
    cfg = run.cfg
    N = cfg.quad_cutoff
    q = quadruples.enumerate_equal_sum_quadruples(N)
    res = {"cutoff": N, "count": q.count()}
    gaps = {}
    for pattern in quadruples.PATTERNS:
        g = quadruples.min_gap_ratio(min(100, N), pattern)
        gaps[pattern] = {"min_gap": g.min_gap, "min_ratio": g.min_ratio, "argmin_ratio": list(g.argmin_ratio)}
    res["min_gap_ratio"] = gaps
    t = run.table()
    for h, k in cfg.twist_list():
        if N <= t.length:
            cf = moments.constant_CF(t, Twist.make(h, k), N, q)
            res[f"C_F_{h}_{k}"] = {"value": cf.value, "tail": cf.tail, "imag_residue": cf.imag_residue}
    print(f"equal-sum quadruples up to {N}: {res['count']}")
    return [("quadruples", run.report("quadruples", "enumerate_equal_sum_quadruples", {"cutoff": N}, res))]


def _cmd_exppairs(run: _Run) -> list:
    cfg = run.cfg
    pair = exppairs.apply_process_word(cfg.word)
    print(pair)
    res = {"pair": [str(pair.p), str(pair.q)]}
    if pair.p > 0:
        res["psi_threshold"] = str(exppairs.psi_threshold(pair))
        if pair.moment_admissible:
            th = {}
            for A in cfg.A:
                out = exppairs.theorem3_phi_psi(pair, "2/3", "1/3", A)
                th[f"{A:g}"] = {
                    "Phi": [str(v) for v in out["Phi"].exponents()[:2]],
                    "Psi": [str(v) for v in out["Psi"].exponents()[:2]],
                }
            res["theorem3"] = th
    k = cfg.twist_list()[0][1]
    res["pointwise"] = {f"{M:g}": exppairs.pointwise_bound_table(k, int(M), cfg.eps) for M in cfg.M_grid() if k * k <= M}
    return [("exppairs", run.report("exppairs", "apply_process_word", {"word": cfg.word}, res))]


def _cmd_oscillation(run: _Run) -> list:
    cfg = run.cfg
    reports = []
    for h, k in cfg.twist_list():
        cache = run.cache(h, k)
        for M in cfg.M_grid():
            rep = moments.omega_scan(cache, M, cfg.c_small, cfg.C_big)
            print(f"h/k={h}/{k} M={M:g}: proportion {rep.proportion:.6g}, {len(rep.intervals)} intervals")
            reports.append(
                (f"oscillation_{h}_{k}_{M:g}", run.report("moments", "omega_scan", {"h": h, "k": k, "M": M}, rep.as_dict(), rep.flags))
            )
    return reports


def run_command(argv=None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    overrides = {
        key: getattr(args, key)
        for key in ("form_id", "n_max", "h", "k", "M", "delta", "xi", "V", "A", "word", "eps", "c_small", "C_big", "quad_cutoff", "out", "workers")
    }
    try:
        cfg = load_config(args.config, overrides)
        run = _Run(cfg, args.n_max is not None)
        todo = SUBCOMMANDS[:-1] if args.command == "all" else (args.command,)
        reports = []
        for cmd in todo:
            if cmd == "coeffs":
                reports += _cmd_coeffs(run, args.verify)
            elif cmd == "voronoi":
                reports += _cmd_voronoi(run)
            elif cmd == "moments":
                reports += _cmd_moments(run)
            elif cmd == "quadruples":
                reports += _cmd_quadruples(run)
            elif cmd == "exppairs":
                reports += _cmd_exppairs(run)
            else:
                reports += _cmd_oscillation(run)
        for name, rep in reports:
            export_report(rep, Path(cfg.out) / f"{name}.json")
    except (coeffs.ResourceLimitError, quadruples.BudgetExceededError) as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 2
    except (ConfigError, ReportError, ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
