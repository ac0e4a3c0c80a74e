"""Command-line front end.

Subcommands: cf, witness, bc-table, pair-scan, liminf, cartan-check.
Every subcommand accepts ``--config FILE``: a flat ``key = value`` file whose
keys are long option names (dashes or underscores). Values from the file act
as defaults and flags given on the command line win.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

from . import serialize
from .contfrac import bad_approx_estimate, convergent_table, error_record
from .cubic import CubicModel, cartan_bound, critical_points, solve_levelset
from .errors import AmbiguousEnclosure, LittlewoodError
from .pairs import critical_b, enumerate_pairs, lcm_condition
from .pipeline import StageError, littlewood_min, run_stages
from .reals import LiteralReal, QuadraticSurd, RealSpec, parse_real


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def parse_range(text: str) -> List[int]:
    """``"3"``, ``"1..6"`` or ``"1,3,5"``."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            a, b = part.split("..", 1)
            lo, hi = int(a), int(b)
            if hi < lo:
                raise ValueError(f"empty range {part!r}")
            out.extend(range(lo, hi + 1))
        elif part:
            out.append(int(part))
    if not out:
        raise ValueError("empty range")
    return out


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _eta(text: str) -> Fraction:
    v = _fraction(text)
    if not 0 <= v < Fraction(1, 3):
        raise argparse.ArgumentTypeError("eta must lie in [0, 1/3)")
    return v


def _positive_fraction(text: str) -> Fraction:
    v = _fraction(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _nrange(text: str) -> List[int]:
    try:
        r = parse_range(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if min(r) < 1:
        raise argparse.ArgumentTypeError("stage indices start at 1")
    return r


def _real(text: str) -> RealSpec:
    try:
        return parse_real(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def read_config(path: str) -> List[tuple]:
    items = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key = value")
            k, v = (s.strip() for s in line.split("=", 1))
            items.append((k.replace("_", "-"), v.strip('"').strip("'")))
    return items


def _expand_config(argv: List[str]) -> List[str]:
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    if i + 1 >= len(argv):
        raise UsageError("--config needs a file")
    path = argv[i + 1]
    rest = argv[:i] + argv[i + 2 :]
    if not rest:
        raise UsageError("a subcommand must precede --config")
    extra = []
    for k, v in read_config(path):
        if v.lower() in ("true", "yes", "on"):
            extra.append(f"--{k}")
        elif v.lower() in ("false", "no", "off"):
            continue
        else:
            extra += [f"--{k}", *v.split()]
    # file values first so explicit flags (parsed later) win
    return [rest[0], *extra, *rest[1:]]


@dataclass
class RunConfig:
    alpha: RealSpec
    beta: RealSpec
    epsilon: Fraction
    eta: Fraction
    n_values: List[int]
    delta: Optional[Fraction] = None
    max_multiples: int = 10**6
    strategy: str = "auto"
    jobs: int = 1


def _pair_specs(args):
    if args.metallic_pair:
        a, b = args.metallic_pair
        if not 1 <= a < b:
            raise UsageError("--metallic-pair needs 1 <= A < B")
        return QuadraticSurd.metallic(a), QuadraticSurd.metallic(b)
    if args.alpha is None or args.beta is None:
        raise UsageError("give --metallic-pair A B or both --alpha and --beta")
    return args.alpha, args.beta


def _out(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", newline=""), True


# subcommands -----------------------------------------------------------------

def cmd_cf(args) -> int:
    chosen = [x for x in (args.metallic, args.sqrt, args.surd, args.literal, args.real) if x is not None]
    if len(chosen) != 1:
        raise UsageError("give exactly one of --metallic, --sqrt, --surd, --literal, --real")
    if args.metallic is not None:
        spec = QuadraticSurd.metallic(args.metallic)
    elif args.sqrt is not None:
        spec = QuadraticSurd.sqrt(args.sqrt)
    elif args.surd is not None:
        spec = parse_real("surd:" + args.surd)
    elif args.literal is not None:
        text = args.literal
        spec = LiteralReal(text[:-1], exact=False) if text.endswith("~") else LiteralReal(text)
    else:
        spec = args.real
    try:
        tbl = convergent_table(spec, args.count)
    except AmbiguousEnclosure as exc:
        print(f"error: {exc}; certified quotients: {exc.certified}", file=sys.stderr)
        return 1
    payload = {
        "real": str(spec),
        "quotients": serialize.to_jsonable(list(tbl.quotients)),
        "convergents": serialize.to_jsonable([list(c) for c in tbl.convergents]),
        "period": list(tbl.period) if tbl.period else None,
    }
    if args.errors:
        payload["errors"] = [
            serialize.to_jsonable(error_record(spec, tbl, n)) for n in range(0, len(tbl) - 1, 2)
        ]
    if args.bad_approx:
        est = bad_approx_estimate(spec, args.bad_approx)
        payload["bad_approx_empirical"] = {"Q": args.bad_approx, "value": str(est), "approx": float(est)}
    if args.format == "table":
        print("k\ta_k\tp_k\tq_k")
        for k, (a, (p, q)) in enumerate(zip(tbl.quotients, tbl.convergents)):
            print(f"{k}\t{a}\t{p}\t{q}")
        if tbl.period:
            print(f"# period: preperiod {tbl.period[0]}, length {tbl.period[1]}")
        if args.bad_approx:
            print(f"# empirical min q||q x|| for q <= {args.bad_approx}: {float(est):.6f}")
    else:
        print(json.dumps(payload))
    return 0


def cmd_witness(args) -> int:
    alpha, beta = _pair_specs(args)
    cfg = RunConfig(alpha, beta, args.eps, args.eta, args.n, args.delta, args.max_multiples, args.strategy, args.jobs)
    out, close = _out(args.out)
    log = open(args.log, "a") if args.log else None
    found = errors = 0
    try:
        kw = dict(delta=cfg.delta, max_multiples=cfg.max_multiples, strategy=cfg.strategy)
        for rep in run_stages(cfg.alpha, cfg.beta, cfg.n_values, cfg.eta, cfg.epsilon, jobs=cfg.jobs, **kw):
            if isinstance(rep, StageError):
                errors += 1
                out.write(serialize.dumps(rep) + "\n")
            else:
                out.write(serialize.dumps(rep) + "\n")
                if rep.witness is not None:
                    found += 1
                    if log:
                        log.write(serialize.dumps(rep.witness) + "\n")
            out.flush()
    finally:
        if close:
            out.close()
        if log:
            log.close()
    print(f"stages: {len(cfg.n_values)}, witnesses: {found}, errors: {errors}", file=sys.stderr)
    if found:
        return 0
    return 1 if errors else 2


def cmd_bc_table(args) -> int:
    out, close = _out(args.out)
    w = csv.writer(out)
    w.writerow(["eta", "b_c_lo", "b_c_hi", "b_c"])
    for e in args.eta:
        bc = critical_b(e, args.tol)
        w.writerow([str(e), f"{float(bc.lo):.9f}", f"{float(bc.hi):.9f}", f"{float(bc.mid):.6f}"])
    if close:
        out.close()
    return 0


def _scan_job(job):
    pair, n, eta, budget = job
    return lcm_condition(pair, n, eta, budget)


def cmd_pair_scan(args) -> int:
    pairs = enumerate_pairs(args.eta, args.bmax)
    jobs = [(p, n, args.eta, args.budget) for p in pairs for n in args.n]
    if args.jobs > 1 and len(jobs) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(args.jobs) as ex:
            reports = list(ex.map(_scan_job, jobs))
    else:
        reports = [_scan_job(j) for j in jobs]
    out, close = _out(args.jsonl)
    for r in reports:
        out.write(serialize.dumps(r) + "\n")
    if close:
        out.close()
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["a", "b", "n", "cond1", "cond2", "eta_min", "gpf_a", "gpf_b"])
            for r in reports:
                w.writerow([r.a, r.b, r.n, r.cond1, r.cond2, f"{float(r.eta_min.mid):.6f}",
                            "" if r.gpf_a is None else r.gpf_a, "" if r.gpf_b is None else r.gpf_b])
    print(f"pairs: {len(pairs)}, reports: {len(reports)}", file=sys.stderr)
    return 0


def cmd_liminf(args) -> int:
    rows = littlewood_min(args.alpha, args.beta, args.Q)
    out, close = _out(args.out)
    w = csv.writer(out)
    w.writerow(["n", "term_lo", "term_hi", "prefix_min"])
    for r in rows:
        w.writerow([r.n, f"{float(r.term.lo):.12g}", f"{float(r.term.hi):.12g}", f"{float(r.prefix_min):.12g}"])
    if close:
        out.close()
    if args.plot:
        with open(args.plot, "w") as fh:
            fh.write("# n prefix_min\n")
            for r in rows:
                fh.write(f"{r.n} {float(r.prefix_min):.12g}\n")
    return 0


def _random_cubic(rng: random.Random, span: int = 1000, denom: int = 1000):
    while True:
        roots = sorted({Fraction(rng.randint(-span * denom, span * denom), denom) for _ in range(3)})
        if len(roots) == 3:
            return roots


def _poly_endpoints(roots, eps, dps=60):
    # real roots of (t - r1)(t - r2)(t - r3) -+ eps, via mpmath's polynomial solver
    from mpmath import mp, mpf, polyroots

    with mp.workdps(dps):
        r = [mpf(x.numerator) / x.denominator for x in roots]
        s1, s2, s3 = r[0] + r[1] + r[2], r[0] * r[1] + r[0] * r[2] + r[1] * r[2], r[0] * r[1] * r[2]
        out = []
        for sign in (1, -1):
            for z in polyroots([1, -s1, s2, -s3 + sign * mpf(eps.numerator) / eps.denominator],
                               maxsteps=200, extraprec=2 * dps * 4):
                if abs(z.imag) <= mpf(10) ** (-dps // 2) * max(1, abs(z)):
                    out.append(float(z.real))
        return sorted(out)


def _oracle_ok(ls, roots, eps, tol=1e-12) -> bool:
    ours = sorted(float(e.mid) for e in ls.endpoints())
    ref = _poly_endpoints(roots, eps)
    if len(ours) != len(ref):
        return False
    return all(abs(a - b) <= tol * max(abs(b), 1) for a, b in zip(ours, ref))


def cmd_cartan_check(args) -> int:
    rng = random.Random(args.seed)
    eps_values = args.eps
    checked = violations = 0
    details = []
    for _ in range(args.count):
        roots = _random_cubic(rng)
        model = CubicModel.from_roots(roots)
        for eps in eps_values:
            ls = solve_levelset(model, eps)
            cart = cartan_bound(model, eps, ls)
            crit = critical_points(model, eps)
            ok = (
                cart.holds
                and crit.ordered
                and all(crit.middle_third)
                and all(d.lo <= 0 <= d.hi for d in crit.derivatives)
                and crit.interval_count == len(ls)
                and (not args.oracle or _oracle_ok(ls, roots, eps))
            )
            checked += 1
            if not ok:
                violations += 1
                details.append({"roots": [str(r.lo) for r in model.roots], "eps": str(eps)})
    print(json.dumps({"checked": checked, "violations": violations, "failures": details[:20]}))
    return 0 if violations == 0 else 2


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="littlewood", description="Certified experiments around n||n alpha|| ||n beta||.")
    p.add_argument("--precision-cap", type=_positive_int, help="max precision doublings (sets LF_PRECISION_CAP)")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    c = sub.add_parser("cf", help="continued fraction expansion")
    c.add_argument("--metallic", type=_positive_int)
    c.add_argument("--sqrt", type=_positive_int)
    c.add_argument("--surd", help="P:D:Q for (P + sqrt D)/Q")
    c.add_argument("--literal", help="decimal or p/q; trailing ~ marks it inexact")
    c.add_argument("--real", type=_real, help="any real spec (sqrt2, phi, metallic:7, ...)")
    c.add_argument("--count", type=_positive_int, default=10)
    c.add_argument("--errors", action="store_true", help="add error records for even indices")
    c.add_argument("--bad-approx", type=_positive_int, metavar="Q",
                   help="empirical min of q||q x|| over q <= Q")
    c.add_argument("--format", choices=("json", "table"), default="json")
    c.set_defaults(func=cmd_cf)

    w = sub.add_parser("witness", help="run the stage pipeline over a range of n")
    w.add_argument("--metallic-pair", nargs=2, type=_positive_int, metavar=("A", "B"))
    w.add_argument("--alpha", type=_real)
    w.add_argument("--beta", type=_real)
    w.add_argument("--eps", type=_positive_fraction, required=True)
    w.add_argument("--eta", type=_eta, default=Fraction(0))
    w.add_argument("--n", type=_nrange, required=True, help="e.g. 1..6")
    w.add_argument("--delta", type=_fraction)
    w.add_argument("--max-multiples", type=_positive_int, default=10**6)
    w.add_argument("--strategy", choices=("auto", "scan", "walk"), default="auto")
    w.add_argument("--jobs", type=_positive_int, default=1)
    w.add_argument("--out", help="JSON-lines report file (default stdout)")
    w.add_argument("--log", help="append certified witnesses here as JSON lines")
    w.set_defaults(func=cmd_witness)

    b = sub.add_parser("bc-table", help="CSV of eta against the critical b")
    b.add_argument("--eta", type=lambda s: [_eta(x) for x in s.split(",")],
                   default=[Fraction(0), Fraction(1, 100), Fraction(1, 10), Fraction(1, 4)])
    b.add_argument("--tol", type=_positive_fraction, default=Fraction(1, 10**6))
    b.add_argument("--out")
    b.set_defaults(func=cmd_bc_table)

    s = sub.add_parser("pair-scan", help="screen metallic pairs through the lcm condition")
    s.add_argument("--eta", type=_eta, required=True)
    s.add_argument("--bmax", type=_positive_int, required=True)
    s.add_argument("--n", type=_nrange, default=[1, 2, 3, 4, 5])
    s.add_argument("--budget", type=_positive_int, default=200_000, help="rho iterations per cofactor")
    s.add_argument("--jobs", type=_positive_int, default=1)
    s.add_argument("--jsonl", help="JSON-lines output (default stdout)")
    s.add_argument("--csv", help="CSV summary file")
    s.set_defaults(func=cmd_pair_scan)

    m = sub.add_parser("liminf", help="n ||n alpha|| ||n beta|| with running minimum")
    m.add_argument("--alpha", type=_real, required=True)
    m.add_argument("--beta", type=_real, required=True)
    m.add_argument("--Q", type=_positive_int, required=True)
    m.add_argument("--out", help="CSV file (default stdout)")
    m.add_argument("--plot", help="two-column data file for plotting")
    m.set_defaults(func=cmd_liminf)

    k = sub.add_parser("cartan-check", help="random-cubic level-set property run")
    k.add_argument("--count", type=_positive_int, default=1000)
    k.add_argument("--seed", type=int, default=0)
    k.add_argument("--eps", type=lambda s: [_positive_fraction(x) for x in s.split(",")],
                   default=[Fraction(1, 1000), Fraction(1, 10), Fraction(1)])
    k.add_argument("--oracle", action="store_true", help="also compare endpoints with a polynomial root solver")
    k.set_defaults(func=cmd_cartan_check)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv = _expand_config(argv)
    except (UsageError, OSError) as exc:
        print(f"littlewood: error: {exc}", file=sys.stderr)
        return 1
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 1
    if args.precision_cap:
        os.environ["LF_PRECISION_CAP"] = str(args.precision_cap)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"littlewood {args.command}: error: {exc}", file=sys.stderr)
        return 1
    except (LittlewoodError, ValueError) as exc:
        print(f"littlewood {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
