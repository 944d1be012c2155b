"""Command-line front end: single values, window scans, residual tables,
and the self-verification suites.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O error.
Output files land in the directory named by the COTSUMS_OUTDIR environment
variable (falling back to the working directory) unless an explicit path is
given.  All numbers are serialized with 17 significant digits, CSV with
plain decimal points, line-feed newlines, and a header row.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import asymptotics, core, equidist, gseries

VERIFY_SUITES = (
    "identities",
    "closed",
    "asympt",
    "c1",
    "gmachinery",
    "moments",
    "expsums",
    "distribution",
    "determinism",
)


@dataclass
class RunConfig:
    """Parsed per-invocation settings, one subcommand's worth."""

    subcommand: str
    b: int | None = None
    r: int | None = None
    b_list: tuple[int, ...] = ()
    a0: float | None = None
    a1: float | None = None
    k_max: int = 3
    n: int = 0
    m1: int = 12
    grid: int = 4001
    samples: int = 20000
    output: str | None = None
    fmt: str | None = None
    threads: int = 1
    deterministic: bool = False
    precision: str = "default"
    suite: str = "all"
    bmax: int = 500
    figure: bool = False


def _out_path(name: str | None, default_name: str) -> str:
    base = os.environ.get("COTSUMS_OUTDIR", os.getcwd())
    chosen = name if name else default_name
    return chosen if os.path.isabs(chosen) else os.path.join(base, chosen)


def _g17(x: float) -> str:
    return format(float(x), ".17g")


def _write_csv(path: str, header: list[str], rows: list[list[str]]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def report_to_dict(rep: equidist.ScanReport) -> dict:
    ks = rep.ks_distance
    return {
        "b": rep.b,
        "a0": rep.a0,
        "a1": rep.a1,
        "phi": rep.phi,
        "count": rep.count,
        "moments_c0": [rep.moments_c0[k] for k in sorted(rep.moments_c0)],
        "moments_q": [rep.moments_q[k] for k in sorted(rep.moments_q)],
        "ks_distance": None if ks is None else float(ks),
        "wall_ms": rep.wall_ms,
    }


def report_from_dict(d: dict) -> equidist.ScanReport:
    return equidist.ScanReport(
        b=d["b"],
        a0=d["a0"],
        a1=d["a1"],
        phi=d["phi"],
        count=d["count"],
        moments_c0={k + 1: v for k, v in enumerate(d["moments_c0"])},
        moments_q={k + 1: v for k, v in enumerate(d["moments_q"])},
        ks_distance=d["ks_distance"],
        wall_ms=d["wall_ms"],
    )


def cmd_c0(cfg: RunConfig) -> int:
    try:
        frac = core.ReducedFraction(cfg.r, cfg.b)
    except (ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    oracle = cfg.precision == "oracle"
    val = core.c0(frac, oracle=oracle)
    qv = core.q_sum(frac, oracle=oracle)
    vv = core.vasyunin(frac, oracle=oracle)
    re, im = core.estermann_at_zero(frac)
    label = f"{frac.r}/{frac.b}"
    print(f"c0({label}) = {_g17(val.value)} (err_bound {val.err_bound:.3g})")
    print(f"Q({label}) = {_g17(qv.value)} (err_bound {qv.err_bound:.3g})")
    print(f"V({label}) = {_g17(vv.value)} (err_bound {vv.err_bound:.3g})")
    print(f"Estermann(0; {label}) = ({_g17(re)}, {_g17(im)})")
    return 0


def cmd_scan(cfg: RunConfig) -> int:
    if cfg.figure:
        rs, c0v, _, _ = equidist.batch_c0_vq(cfg.b)
        rows = [[str(int(r)), _g17(v)] for r, v in zip(rs.tolist(), c0v.tolist())]
        path = _out_path(cfg.output, f"figure_b{cfg.b}.csv")
        try:
            _write_csv(path, ["r", "c0"], rows)
        except OSError as exc:
            print(f"error: cannot write {path}: {exc}", file=sys.stderr)
            return 3
        print(f"wrote {len(rows)} rows to {path}")
        return 0

    if cfg.a0 is None or cfg.a1 is None:
        print("error: moment mode needs --a0 and --a1 (or use --figure)", file=sys.stderr)
        return 2
    try:
        window = equidist.ScanWindow(cfg.b, cfg.a0, cfg.a1)
        rep = equidist.scan(
            window, cfg.k_max, threads=cfg.threads, deterministic=cfg.deterministic
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    rs, c0v, _ = equidist.scan_arrays(window, threads=cfg.threads)
    csv_path = _out_path(cfg.output, f"scan_b{cfg.b}.csv")
    json_path = os.path.splitext(csv_path)[0] + ".json"
    try:
        if cfg.fmt in (None, "csv"):
            rows = [[str(int(r)), _g17(v)] for r, v in zip(rs.tolist(), c0v.tolist())]
            _write_csv(csv_path, ["r", "c0"], rows)
            print(f"wrote {len(rs)} rows to {csv_path}")
        if cfg.fmt in (None, "json"):
            with open(json_path, "w", encoding="utf-8") as fh:
                json.dump(report_to_dict(rep), fh, indent=2)
                fh.write("\n")
            print(f"wrote report to {json_path}")
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return 3
    return 0


def cmd_asympt(cfg: RunConfig) -> int:
    blist = list(cfg.b_list)
    if not blist or any(y <= x for x, y in zip(blist, blist[1:])):
        print("error: --b-list must be strictly ascending", file=sys.stderr)
        return 2
    rows = []
    for b in blist:
        exact = core.c0(core.ReducedFraction(1, b)).value
        try:
            approx, _ = asymptotics.c0_asymptotic(b, cfg.n)
        except ValueError:
            # below the validity threshold: flagged, not fatal
            rows.append([str(b), _g17(exact), "", "", ""])
            continue
        residual = exact - approx
        rows.append(
            [
                str(b),
                _g17(exact),
                _g17(approx),
                _g17(residual),
                _g17(residual * float(b) ** (cfg.n + 1)),
            ]
        )
    path = _out_path(cfg.output, f"asympt_n{cfg.n}.csv")
    try:
        _write_csv(path, ["b", "exact", "main", "residual", "scaled_residual"], rows)
    except OSError as exc:
        print(f"error: cannot write {path}: {exc}", file=sys.stderr)
        return 3
    print(f"wrote {len(rows)} rows to {path}")
    return 0


# ---------------------------------------------------------------------------
# verification suites (numpy-only runtime, deterministic)


def _suite_identities(cfg: RunConfig):
    worst = 0.0
    for b in range(2, cfg.bmax + 1):
        rs, c0v, vv, qv = equidist.batch_c0_vq(b)
        pos = np.full(b, -1, dtype=np.int64)
        pos[rs] = np.arange(len(rs))
        rbar = np.array([pow(int(r), -1, b) for r in rs.tolist()], dtype=np.int64)
        denom = np.maximum(1.0, np.abs(c0v))
        worst = max(worst, float(np.max(np.abs(vv + c0v[pos[rbar]]) / denom)))
        c0_one = c0v[pos[1]]
        worst = max(
            worst,
            float(np.max(np.abs(c0v - (c0_one - qv) / rs) / denom)),
        )
        worst = max(worst, float(np.max(np.abs(c0v[pos[(b - rs) % b]] + c0v) / denom)))
    return worst < 1e-6, worst, f"b <= {cfg.bmax}, V/decomposition/oddness"


def _suite_closed(cfg: RunConfig):
    worst = 0.0
    ok = core.c0(core.ReducedFraction(1, 2)).value == 0.0
    worst = max(worst, abs(core.c0(core.ReducedFraction(1, 3)).value - math.sqrt(3) / 9))
    re, im = core.estermann_at_zero(core.ReducedFraction(1, 3))
    worst = max(worst, abs(re - 0.25), abs(im - math.sqrt(3) / 18))
    for b in range(2, 1001):
        if core.q_sum(core.ReducedFraction(1, b)).value != 0.0:
            ok = False
    return ok and worst < 1e-12, worst, "c0(1/2), c0(1/3), Q(1/b) b <= 1000"


def _suite_asympt(cfg: RunConfig):
    bs = [200, 400, 800, 1600, 3200]
    exact = {b: core.c0(core.ReducedFraction(1, b)).value for b in bs}
    scaled = {}
    for n in (0, 1, 2):
        scaled[n] = [
            abs(exact[b] - asymptotics.c0_asymptotic(b, n)[0]) * float(b) ** (n + 1)
            for b in bs
        ]
    var0 = max(scaled[0]) / min(scaled[0])
    reduction = scaled[0][-1] / 3200.0 / (scaled[1][-1] / 3200.0**2)
    ok = var0 < 3.0 and reduction >= 10.0 and max(scaled[2]) <= 0.5
    return ok, var0 - 1.0, f"n=0 variation {var0:.6f}, n=1 gain {reduction:.1e}"


def _suite_c1(cfg: RunConfig):
    worst = 0.0
    ok = True
    for r, b0 in ((2, 1), (3, 1)):
        bs = asymptotics.default_b_list(r, b0, 2001)
        slope, conf = asymptotics.c1_empirical(r, b0, bs)
        direct = asymptotics.c1_direct(asymptotics.C1Input(r, b0))
        gap = abs(slope - direct)
        worst = max(worst, gap)
        if gap > conf:
            ok = False
    slope1, _ = asymptotics.c1_empirical(1, 1, asymptotics.default_b_list(1, 1, 2001))
    ok = ok and abs(slope1) < 1e-3
    return ok, worst, "pairs (2,1), (3,1) vs direct; r=1 slope"


def _suite_gmachinery(cfg: RunConfig):
    t = gseries.TruncatedGSeries(cfg.m1)
    rng = np.random.default_rng(1009)
    worst = 0.0
    ok = True
    # exact antisymmetry on dyadics (series route) and floats (fourier route)
    ks = rng.integers(1, 1 << 20, 300)
    for k in ks.tolist():
        x = k / float(1 << 20)
        worst = max(worst, abs(gseries.f_eval(x, t) + gseries.f_eval(1.0 - x, t)))
    for x in rng.random(200).tolist():
        worst = max(worst, abs(gseries.g_fourier_eval(x, 4096) + gseries.g_fourier_eval(1.0 - x, 4096)))
    ok = ok and worst == 0.0
    # convergents and classifier
    cf = gseries.cf_expand(math.sqrt(2.0) - 1.0, 14)
    dets = [
        p1 * q0 - p0 * q1
        for (p0, q0), (p1, q1) in zip(cf.convergents, cf.convergents[1:])
    ]
    ok = ok and all(abs(d) == 1 for d in dets)
    ok = ok and gseries.convergence_classifier(cf).verdict == "converges"
    liou = gseries.cf_from_quotients([2, 4, 512, 1 << 4610])
    ok = ok and gseries.convergence_classifier(liou).verdict == "diverges"
    # two-evaluator agreement on a rotated grid; both truncations deep enough
    # that the shared tail no longer dominates the comparison
    u0 = rng.random()
    n = 2000
    fs = gseries._f_offset_grid(n, u0, 20)
    gs = gseries._fourier_offset_grid(n, u0, 1 << 20)
    l2 = math.sqrt(float(np.mean((fs - gs) ** 2)))
    ok = ok and l2 < 0.01
    # Parseval at m1 = 6
    t6 = gseries.TruncatedGSeries(6)
    s = gseries.fourier_coeffs_f(t6, 1 << 18)
    mass = 0.5 * float(s @ s)
    grid_vals = gseries._f_offset_grid(100_000, 0.5 + (100_000 * 0.6180339887498949) % 1.0, 6)
    grid_mass = float(np.mean(grid_vals**2))
    parseval_rel = abs(mass - grid_mass) / grid_mass
    ok = ok and parseval_rel < 1e-3
    # moment table structure
    tbl = gseries.hk_table(4, t, cfg.grid)
    ok = ok and tbl.hk[0] == 1.0 and tbl.d2k[0] == 1.0
    ok = ok and abs(tbl.hk[1] - 0.1389) < 4e-3
    roots = gseries.hk_growth_check(tbl)
    ok = ok and all(y > x for x, y in zip(roots, roots[1:]))
    ratios = [tbl.hk[k + 1] / tbl.hk[k] for k in range(1, 4)]
    ok = ok and all(y > x for x, y in zip(ratios, ratios[1:]))
    ok = ok and all(tbl.d2k[k] > 0.0 for k in range(1, 5))
    pi_rel = max(
        abs(tbl.hk[k] * math.pi ** (2 * k) - tbl.d2k[k]) / tbl.d2k[k] for k in range(1, 5)
    )
    ok = ok and pi_rel < 1e-12
    ok = ok and all(abs(tbl.odd[k]) <= max(tbl.errors[k], 1e-3) for k in range(1, 5))
    return ok, max(l2, parseval_rel), f"L2 {l2:.4f}, Parseval rel {parseval_rel:.2e}"


def _suite_moments(cfg: RunConfig):
    tbl = gseries.hk_table(2, gseries.TruncatedGSeries(cfg.m1), cfg.grid)
    h1 = tbl.hk[1]
    d2 = tbl.d2k[1]
    window = equidist.ScanWindow(cfg.b, 0.6, 0.8)
    rep = equidist.scan(window, 3, deterministic=True)
    m2_rel = abs(rep.moments_c0[2] - h1 * 0.2) / (h1 * 0.2)
    e1 = d2 / (3.0 * math.pi**2)
    q2_target = e1 * (0.8**3 - 0.6**3)
    q2_rel = abs(rep.moments_q[2] - q2_target) / q2_target
    ok = m2_rel < 0.15 and q2_rel < 0.15
    # moment bridge: second moments of c0 and Q/r agree to O(log^2 b / b)
    rs, c0v, qv = equidist.scan_arrays(window)
    s_c0 = float(np.sum(c0v**2))
    s_qr = float(np.sum((qv / rs) ** 2))
    bridge_rel = abs(s_c0 - s_qr) / s_c0
    ok = ok and bridge_rel < math.log(cfg.b) ** 2 / cfg.b
    # two-route H1: c0-based and Q-based must agree
    h1_c0 = rep.moments_c0[2] / 0.2
    h1_q = 3.0 * rep.moments_q[2] / (0.8**3 - 0.6**3)
    route_rel = abs(h1_c0 - h1_q) / h1_c0
    ok = ok and route_rel < 0.05
    # odd moments: zero-mean fluctuations at CLT scale
    for k in (1, 3):
        sigma = math.sqrt(rep.moments_c0[2 * k] / rep.count)
        ok = ok and abs(rep.moments_c0[k]) <= 3.0 * sigma
    worst = max(m2_rel, q2_rel, route_rel)
    return ok, worst, f"M2 rel {m2_rel:.3f}, Q2 rel {q2_rel:.3f}, bridge {bridge_rel:.1e}"


def _suite_expsums(cfg: RunConfig):
    ok = True
    worst = 0.0
    ns = np.arange(-100, 101, dtype=np.int64)
    for q in range(1, 101):
        units = np.array([r for r in range(1, q + 1) if math.gcd(r, q) == 1], dtype=np.int64)
        brute = np.cos(2.0 * np.pi * (((units[:, None] * ns[None, :]) % q) / q)).sum(axis=0)
        formula = np.array([equidist.ramanujan(q, int(n)) for n in ns.tolist()], dtype=float)
        diff = float(np.max(np.abs(formula - brute)))
        worst = max(worst, diff)
        if diff > 1e-6 or not np.array_equal(np.rint(brute), formula):
            ok = False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101):
        re, im = equidist.kloosterman(equidist.ExpSumParams(1, 1, p))
        if math.hypot(re, im) > 2.0 * math.sqrt(p) + 1e-9:
            ok = False
    for b in range(2, 201):
        re, im = equidist.kloosterman(equidist.ExpSumParams(0, 0, b))
        if re != float(equidist.euler_phi(b)) or im != 0.0:
            ok = False
    for n, m, b in ((1, 2, 97), (3, 7, 144), (5, 11, 199)):
        if equidist.kloosterman(equidist.ExpSumParams(n, m, b)) != equidist.kloosterman(
            equidist.ExpSumParams(m, n, b)
        ):
            ok = False
    return ok, worst, "ramanujan brute force, Weil, K(0,0,b), symmetry"


def _suite_distribution(cfg: RunConfig):
    ref = gseries.empirical_F(gseries.TruncatedGSeries(cfg.m1), cfg.samples)
    tol = 2.0 / math.sqrt(cfg.samples)
    ok = abs(ref.median()) < tol
    z = np.linspace(-1.5, 1.5, 41)
    sym = float(np.max(np.abs((1.0 - ref.cdf(-z + 1e-12)) - ref.cdf(z))))
    ok = ok and sym < tol and ref.max_jump() <= tol
    ks = []
    for b in (1009, 2003):
        rep = equidist.scan(equidist.ScanWindow(b, 0.6, 0.8), 1, deterministic=True, reference=ref)
        ks.append(rep.ks_distance)
    ok = ok and ks[1] < ks[0] and ks[1] < 0.08
    return ok, max(sym, ks[1]), f"symmetry {sym:.2e}, KS {ks[0]:.3f} -> {ks[1]:.3f}"


def _suite_determinism(cfg: RunConfig):
    window = equidist.ScanWindow(1009, 0.6, 0.8)
    rep1 = equidist.scan(window, 2, deterministic=True, threads=1)
    rep2 = equidist.scan(window, 2, deterministic=True, threads=4)
    s1 = json.dumps(report_to_dict(rep1), sort_keys=True)
    s2 = json.dumps(report_to_dict(rep2), sort_keys=True)
    ok = s1 == s2 and np.array_equal(rep1.cdf.values, rep2.cdf.values)
    rep3 = equidist.scan(window, 2, deterministic=True, threads=1)
    ok = ok and json.dumps(report_to_dict(rep3), sort_keys=True) == s1
    return ok, 0.0, "bit-identical reports across reruns and thread counts"


_SUITE_FUNCS = {
    "identities": _suite_identities,
    "closed": _suite_closed,
    "asympt": _suite_asympt,
    "c1": _suite_c1,
    "gmachinery": _suite_gmachinery,
    "moments": _suite_moments,
    "expsums": _suite_expsums,
    "distribution": _suite_distribution,
    "determinism": _suite_determinism,
}


def cmd_verify(cfg: RunConfig) -> int:
    names = VERIFY_SUITES if cfg.suite == "all" else (cfg.suite,)
    failures = 0
    for name in names:
        tic = time.perf_counter()
        passed, worst, detail = _SUITE_FUNCS[name](cfg)
        ms = (time.perf_counter() - tic) * 1e3
        status = "PASS" if passed else "FAIL"
        print(f"{name}: {status} (worst residual {worst:.3g}; {detail}) [{ms:.0f} ms]")
        if not passed:
            failures += 1
    return 1 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cotsums",
        description="Cotangent-sum values, window scans, asymptotic residuals, verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_c0 = sub.add_parser("c0", help="print c0, Q, V, and the Estermann pair for r/b")
    p_c0.add_argument("--r", type=int, required=True)
    p_c0.add_argument("--b", type=int, required=True)
    p_c0.add_argument("--precision", choices=("default", "oracle"), default="default")

    p_scan = sub.add_parser("scan", help="figure data or window moment scan")
    p_scan.add_argument("--b", type=int, required=True)
    p_scan.add_argument("--figure", action="store_true", help="full coprime range CSV")
    p_scan.add_argument("--a0", type=float)
    p_scan.add_argument("--a1", type=float)
    p_scan.add_argument("--kmax", type=int, default=3)
    p_scan.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p_scan.add_argument("--deterministic", action="store_true")
    p_scan.add_argument("--format", choices=("csv", "json"), default=None)
    p_scan.add_argument("--output", default=None)

    p_asy = sub.add_parser("asympt", help="asymptotic residual table")
    p_asy.add_argument("--n", type=int, default=0)
    p_asy.add_argument("--b-list", required=True, help="comma-separated ascending moduli")
    p_asy.add_argument("--output", default=None)

    p_ver = sub.add_parser("verify", help="run verification suites")
    p_ver.add_argument("--suite", choices=VERIFY_SUITES + ("all",), default="all")
    p_ver.add_argument("--bmax", type=int, default=500)
    p_ver.add_argument("--b", type=int, default=5003)
    p_ver.add_argument("--m1", type=int, default=12)
    p_ver.add_argument("--grid", type=int, default=4001)
    p_ver.add_argument("--samples", type=int, default=20000)
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(subcommand=args.command)
    if args.command == "c0":
        cfg.r, cfg.b, cfg.precision = args.r, args.b, args.precision
    elif args.command == "scan":
        cfg.b, cfg.figure = args.b, args.figure
        cfg.a0, cfg.a1, cfg.k_max = args.a0, args.a1, args.kmax
        cfg.threads, cfg.deterministic = args.threads, args.deterministic
        cfg.fmt, cfg.output = args.format, args.output
    elif args.command == "asympt":
        cfg.n = args.n
        try:
            cfg.b_list = tuple(int(x) for x in args.b_list.split(","))
        except ValueError:
            cfg.b_list = ()
        cfg.output = args.output
    elif args.command == "verify":
        cfg.suite, cfg.bmax, cfg.b = args.suite, args.bmax, args.b
        cfg.m1, cfg.grid, cfg.samples = args.m1, args.grid, args.samples
        cfg.deterministic = True
    return cfg


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    cfg = _config_from_args(args)
    handler = {
        "c0": cmd_c0,
        "scan": cmd_scan,
        "asympt": cmd_asympt,
        "verify": cmd_verify,
    }[args.command]
    return handler(cfg)


if __name__ == "__main__":
    sys.exit(main())
