"""Command-line entry point: ``boxzeta <subcommand> ...``.

Exit status: 0 on success, 2 when a verification or fit fails, 1 on usage
errors (including p = 2).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys

from . import cmforms, counting, lfunc, tracefit
from .ffield import BadPrimeError, check_odd_prime, odd_primes
from .store import CacheKey, Store

log = logging.getLogger("boxzeta")

EXIT_OK, EXIT_USAGE, EXIT_FAILED = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _common() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("table", "json", "csv"), default="table")
    common.add_argument("--cache-dir", default=None,
                        help="cache directory (default: $BOXZETA_CACHE or ~/.cache/boxzeta)")
    common.add_argument("--no-cache", action="store_true", help="do not read or write the cache")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for per-prime work")
    common.add_argument("-v", "--verbose", action="store_true")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="boxzeta", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("count", parents=[common], help="point counts")
    p.add_argument("--variety", choices=("surface", "curve-x", "singular"), required=True)
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--degree", type=int, choices=(1, 2), default=1)
    p.add_argument("--brute", action="store_true", help="use the brute-force enumeration")

    p = sub.add_parser("ap", parents=[common], help="newform coefficient at a prime")
    p.add_argument("--form", choices=("f32", "f64", "h8", "h16", "h32"), required=True)
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--h16-inert", choices=cmforms.H16_INERT_CONVENTIONS, default="zero")

    p = sub.add_parser("gpair", parents=[common], help="g64 coefficient pair from curve counts")
    p.add_argument("--prime", type=int, required=True)

    p = sub.add_parser("qexp", parents=[common], help="q-expansion (odd indices)")
    p.add_argument("--form", choices=[f.value for f in cmforms.FormId], required=True)
    p.add_argument("--limit", type=int, required=True)
    p.add_argument("--h16-inert", choices=cmforms.H16_INERT_CONVENTIONS, default="zero")

    p = sub.add_parser("verify", parents=[common], help="check the trace identity")
    p.add_argument("--pmax", type=int, default=97)
    p.add_argument("--h16-inert", choices=cmforms.H16_INERT_CONVENTIONS, default="zero")

    p = sub.add_parser("fit", parents=[common], help="re-derive the multiplicities")
    p.add_argument("--pmax", type=int, default=97)
    p.add_argument("--fit-pmax", type=int, default=50)
    p.add_argument("--h16-inert", choices=cmforms.H16_INERT_CONVENTIONS, default="zero")

    p = sub.add_parser("euler", parents=[common], help="aggregate Euler factors")
    p.add_argument("--preset", choices=sorted(lfunc.PRESETS), required=True)
    p.add_argument("--pmax", type=int, required=True)

    p = sub.add_parser("table", parents=[common], help="per-prime coefficient/count table")
    p.add_argument("--pmax", type=int, default=97)
    p.add_argument("--csv", dest="csv_path", default=None)
    p.add_argument("--json", dest="json_path", default=None)

    p = sub.add_parser("report", parents=[common], help="full reproduction report")
    p.add_argument("--pmax", type=int, default=97)
    p.add_argument("--fit-pmax", type=int, default=50)
    p.add_argument("--h16-inert", choices=cmforms.H16_INERT_CONVENTIONS, default="zero")
    return parser


# --- helpers ---------------------------------------------------------------

def _store(args) -> Store | None:
    return None if args.no_cache else Store(args.cache_dir)


def _prime(p: int) -> int:
    if p == 2:
        raise BadPrimeError("p = 2: bad prime excluded (all levels are powers of 2)")
    return check_odd_prime(p)


def _csv(rows: list[dict], out) -> None:
    if not rows:
        return
    w = csv.DictWriter(out, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    w.writerows(rows)


def _emit(args, out, data: dict, rows: list[dict] | None, text: str) -> None:
    if args.format == "json":
        out.write(json.dumps(data, sort_keys=True, indent=2) + "\n")
    elif args.format == "csv":
        _csv(rows if rows is not None else [data], out)
    else:
        out.write(text.rstrip("\n") + "\n")


def _pair_json(pair):
    if pair is None:
        return None
    return [[z.re, z.im] for z in pair.values]


# --- subcommands -----------------------------------------------------------

def cmd_count(args, out) -> int:
    p = _prime(args.prime)
    store = _store(args)
    if args.variety in ("surface", "curve-x") and store is not None:
        method = "brute" if args.brute else "fast"
        key = CacheKey(args.variety, p, args.degree, method)
        value = store.get_or_compute(
            key, lambda: counting.count(args.variety, p, args.degree, args.brute).count)
        rec = counting.CountRecord(counting.VarietyId(args.variety), p, args.degree, value, method)
    else:
        rec = counting.count(args.variety, p, args.degree, args.brute)
    d = rec.to_dict()
    _emit(args, out, d, None, f"{rec.count}\t(variety={d['variety']} p={p} degree={rec.degree} method={rec.method})")
    return EXIT_OK


def cmd_ap(args, out) -> int:
    p = _prime(args.prime)
    v = cmforms.ap(args.form, p, args.h16_inert)
    d = {"form": args.form, "p": p, "a_p": v}
    if args.form == "h16":
        d["h16_inert"] = args.h16_inert
    _emit(args, out, d, None, str(v))
    return EXIT_OK


def cmd_gpair(args, out) -> int:
    p = _prime(args.prime)
    store = _store(args)
    if store is not None:
        re_, im = store.get_or_compute(CacheKey("gpair", p, 2, "fast"),
                                       lambda: list(cmforms.extract_g_pair(p).as_re_im()))
        pair = cmforms.CoeffPair.of(cmforms.GaussianInt(re_, im), cmforms.GaussianInt(re_, -im))
    else:
        pair = cmforms.extract_g_pair(p)
    re_, im = pair.as_re_im()
    d = {"p": p, "pair": _pair_json(pair), "re": re_, "im": im}
    _emit(args, out, d, [{"p": p, "g_pair_re": re_, "g_pair_im": im}], repr(pair))
    return EXIT_OK


def cmd_qexp(args, out) -> int:
    if args.limit < 1:
        raise UsageError("--limit must be >= 1")
    coeffs = cmforms.qexp(args.form, args.limit, args.h16_inert)
    is_pair = args.form == cmforms.FormId.g64_pair.value
    rows, lines, jd = [], [], {}
    for n, c in enumerate(coeffs, start=1):
        if c is cmforms.EXCLUDED:
            jv, tv = "excluded", "excluded"
        elif is_pair:
            jv, tv = _pair_json(c), ("undetermined" if c is None else repr(c))
        else:
            jv, tv = c, str(c)
        jd[str(n)] = jv
        rows.append({"n": n, "a_n": tv})
        lines.append(f"{n}\t{tv}")
    data = {"form": args.form, "limit": args.limit, "coefficients": jd,
            "note": lfunc.EXCLUSION_NOTE}
    _emit(args, out, data, rows, "\n".join(lines))
    return EXIT_OK


def _fit_text(report: tracefit.FitReport) -> str:
    d = report.to_dict()
    lines = [f"multiplicities {tuple(report.multiplicities)}  "
             f"(rank H2(Sbar) = {d['rank_h2bar']}, H2(S) = {d['rank_h2']})",
             f"conventions {d['conventions']}"]
    for p, r in sorted(report.residuals.items()):
        lines.append(f"p={p:4d}  #S(F_p)={report.counts[p]:8d}  residual={r}")
    lines.append("identity holds at every prime" if report.success else "IDENTITY FAILS")
    return "\n".join(lines)


def cmd_verify(args, out) -> int:
    report = tracefit.verify_identity(args.pmax, tracefit.PAPER_MULTIPLICITIES, args.h16_inert,
                                      jobs=args.jobs, store=_store(args))
    rows = [{"p": p, "count_surface": report.counts[p], "residual": r}
            for p, r in sorted(report.residuals.items())]
    _emit(args, out, report.to_dict(), rows, _fit_text(report))
    return EXIT_OK if report.success else EXIT_FAILED


def cmd_fit(args, out) -> int:
    try:
        report = tracefit.fit_report(args.pmax, args.fit_pmax, args.h16_inert,
                                     jobs=args.jobs, store=_store(args))
    except tracefit.FitError as exc:
        sol = getattr(exc, "solution", None)
        data = {"error": type(exc).__name__, "message": str(exc), "solution": sol,
                "conventions": {"h16_inert": args.h16_inert}}
        _emit(args, out, data, None, f"fit failed: {type(exc).__name__}: {exc}")
        return EXIT_FAILED
    rows = [dict(zip(tracefit.BASIS_NAMES, report.multiplicities.as_tuple()))]
    _emit(args, out, report.to_dict(), rows, _fit_text(report))
    return EXIT_OK if report.success else EXIT_FAILED


def cmd_euler(args, out) -> int:
    spec = lfunc.preset(args.preset)
    rows, lines, jrows = [], [], []
    for p in odd_primes(args.pmax):
        f = lfunc.aggregate_factor(spec, p)
        jrows.append({"p": p, "coeffs": list(f.coeffs)})
        rows.append({"p": p, **{f"c{i}": c for i, c in enumerate(f.coeffs)}})
        lines.append(f"p={p}: " + " ".join(str(c) for c in f.coeffs))
    data = {"preset": args.preset, "degree": spec.degree, "factors": jrows,
            "excluded": {"p": 2, "note": lfunc.EXCLUSION_NOTE}}
    _emit(args, out, data, rows, f"preset {args.preset}, degree {spec.degree}\n" + "\n".join(lines))
    return EXIT_OK


def cmd_table(args, out) -> int:
    counts = tracefit.surface_counts(odd_primes(args.pmax), jobs=args.jobs, store=_store(args))
    rows = lfunc.export_table(args.pmax, args.csv_path, args.json_path, surface_counts=counts)
    if args.format == "json":
        out.write(lfunc.table_json(rows, lfunc.PRESETS["sbar"]) + "\n")
    else:
        buf = io.StringIO()
        lfunc.write_csv(rows, buf)
        out.write(buf.getvalue())
    return EXIT_OK


def cmd_report(args, out) -> int:
    store = _store(args)
    status = EXIT_OK
    data: dict = {"pmax": args.pmax, "fit_primes": f"3..{args.fit_pmax}",
                  "conventions": {"h16_inert": args.h16_inert}}
    try:
        m = tracefit.fit_multiplicities(odd_primes(args.fit_pmax), args.h16_inert,
                                        holdout=[p for p in odd_primes(args.pmax) if p > args.fit_pmax],
                                        jobs=args.jobs, store=store)
        data["fit"] = {"ok": True, "multiplicities": dict(zip(tracefit.BASIS_NAMES, m.as_tuple()))}
    except tracefit.FitError as exc:
        data["fit"] = {"ok": False, "error": type(exc).__name__, "message": str(exc)}
        m = tracefit.PAPER_MULTIPLICITIES
        status = EXIT_FAILED
    report = tracefit.verify_identity(args.pmax, m, args.h16_inert, jobs=args.jobs, store=store)
    if not report.success:
        status = EXIT_FAILED
    data["verification"] = {"ok": report.success,
                            "nonzero_residuals": {str(p): r for p, r in report.residuals.items() if r}}
    data["rank"] = {"h2_sbar": m.rank, "h2_s": m.rank + tracefit.N_EXCEPTIONAL}
    data["picard"] = tracefit.picard_report(m)
    spec_m = m.as_tuple()
    data["l_degrees"] = {
        "sbar": lfunc.lspec_from_multiplicities(spec_m).degree,
        "s-paper": lfunc.lspec_from_multiplicities(spec_m, "paper").degree,
        "s-perm": lfunc.lspec_from_multiplicities(spec_m, "permutation").degree,
    }
    differ = report.hypotheses_differ_at
    splits_differ = data["picard"]["paper"]["split"] != data["picard"]["permutation"]["split"]
    data["exceptional_discrepancy"] = {"splits_differ": splits_differ, "count_differs_at": differ}

    pic = data["picard"]
    lines = [
        f"H2(Sbar) multiplicities (h16, h32, h8, 1, chi_-4, chi_-8, chi_8) = {spec_m}"
        + ("" if data["fit"]["ok"] else f"   [fit failed: {data['fit']['error']}]"),
        f"trace identity for 3 <= p <= {args.pmax}: {'OK' if report.success else 'FAILED'}",
        f"rank H2(Sbar) = {m.rank}, rank H2(S) = {m.rank + tracefit.N_EXCEPTIONAL}",
        f"L-function degrees: Sbar {data['l_degrees']['sbar']}, "
        f"S (paper) {data['l_degrees']['s-paper']}, S (permutation) {data['l_degrees']['s-perm']}",
        "Picard group of S over Q-bar by Galois character (1, chi_-4, chi_-8, chi_8):",
    ]
    for hyp in ("paper", "permutation"):
        sp = pic[hyp]["split"]
        lines.append(f"  {hyp:12s} ({sp['trivial']}, {sp['chi_m4']}, {sp['chi_m8']}, {sp['chi_8']})"
                     f"  total {pic[hyp]['total']}")
    if splits_differ or differ:
        lines.append("!! DISCREPANCY: the two models of the exceptional curves disagree")
        lines.append(f"!!   Picard splits differ; predicted #S(F_p) differs at p = {differ}")
    rows = [{"hypothesis": h, **pic[h]["split"], "total": pic[h]["total"]} for h in ("paper", "permutation")]
    _emit(args, out, data, rows, "\n".join(lines))
    return status


COMMANDS = {"count": cmd_count, "ap": cmd_ap, "gpair": cmd_gpair, "qexp": cmd_qexp,
            "verify": cmd_verify, "fit": cmd_fit, "euler": cmd_euler, "table": cmd_table,
            "report": cmd_report}


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        err.write(f"{exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=err,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args, out)
    except BadPrimeError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    except (UsageError, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
