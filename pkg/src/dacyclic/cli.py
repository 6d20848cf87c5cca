"""Command line front end.

Subcommands::

    norm               norm of an input polynomial plus its tail profile
    diagnose           stability, argument and sup-norm checks, then tail
                       profiles along the iterated-logarithm ladder
    verify             run a named verification suite (or "all")
    verify-identities  the three series-identity suites
    samples-dump       the sphere directions and radial grid for a seed

Exit codes: 0 ok, 1 verification failure, 2 parse error, 3 dimension
mismatch, 4 unstable input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import __version__
from .checks import ALIASES, IDENTITY_SUITES, SUITES, run_suite
from .errors import BranchError
from .inputs import InputError, PolynomialInput, load_polynomial, polynomial_to_json
from .norms import CONSISTENT, DIVERGING, INCONCLUSIVE, SpaceSpec, besov_norm_sq, parse_space, tail_profile
from .quadrature import dirichlet_integral_F, slice_besov_integral
from .sampling import SampleConfig, radial_grid, sphere_samples
from .transforms import (StablePolynomial, bounded_argument_estimate, iterated_log, normalize_stable,
                         stability_check, sup_norm_estimate)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_PARSE = 2
EXIT_DIMENSION = 3
EXIT_UNSTABLE = 4


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False, default=_jsonable) + "\n"


def _jsonable(v):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, np.bool_):
        return bool(v)
    if isinstance(v, complex):
        return [v.real, v.imag]
    raise TypeError(f"cannot serialize {type(v)}")


def _load(path: str) -> PolynomialInput:
    try:
        return load_polynomial(path)
    except (OSError, InputError) as exc:
        raise CliError(str(exc), EXIT_PARSE) from exc


def _space(text: str) -> SpaceSpec:
    try:
        return parse_space(text)
    except (ValueError, OSError) as exc:
        raise CliError(str(exc), EXIT_PARSE) from exc


def _config(args) -> SampleConfig:
    return SampleConfig(sphere_samples=args.sphere_samples, radial_grid=args.radial_grid, rng_seed=args.seed)


# ---------------------------------------------------------------------------
# norm
# ---------------------------------------------------------------------------

def cmd_norm(inp: PolynomialInput, space: SpaceSpec, cap: int) -> dict:
    if inp.dimension != space.dimension:
        raise CliError(f"input has dimension {inp.dimension}, space {space.label} has {space.dimension}",
                       EXIT_DIMENSION)
    f = inp.function(cap)
    profile = tail_profile(f, space)
    value = besov_norm_sq(f, space)
    # observed range of the factor comparing the space with H^2_d, degrees 1..cap
    factors = space.degree_weights(cap)[1:]
    ratio = {"min": float(factors.min()), "max": float(factors.max())} if factors.size else None
    return {"space": space.label, "degree_cap": cap, "form": inp.form, "norm_sq": value,
            "norm": math.sqrt(value), "h2d_weight_ratio": ratio, "profile": profile}


def _render_norm(res: dict, fmt: str) -> str:
    profile = res["profile"]
    if fmt == "csv":
        return profile.to_csv()
    if fmt == "json":
        doc = {k: v for k, v in res.items() if k != "profile"}
        doc["profile"] = profile.as_dict()
        return _json(doc)
    head = (f"space     {res['space']}\n"
            f"cap       {res['degree_cap']}\n"
            f"norm^2    {res['norm_sq']:.17g}\n"
            f"norm      {res['norm']:.17g}\n"
            f"ratio     {res['h2d_weight_ratio']}\n"
            f"slope     {profile.slope()}\n"
            f"verdict   {profile.verdict()}\n\n")
    return head + profile.to_csv()


# ---------------------------------------------------------------------------
# diagnose
# ---------------------------------------------------------------------------

def overall_verdict(levels: list[dict]) -> str:
    """Consistent if any ladder level is; otherwise the verdict of the last level.

    Membership of a single level is all the sufficient condition asks for.
    """
    verdicts = [lv["verdict"] for lv in levels]
    if CONSISTENT in verdicts:
        return CONSISTENT
    return verdicts[-1] if verdicts else INCONCLUSIVE


def cmd_diagnose(inp: PolynomialInput, space: SpaceSpec, ladder_max: int, cap: int, cfg: SampleConfig,
                 tol: float = 1e-8) -> tuple[dict, int]:
    """Build the diagnostic report; returns ``(report, exit_code)``."""
    if inp.dimension != space.dimension:
        raise CliError(f"input has dimension {inp.dimension}, space {space.label} has {space.dimension}",
                       EXIT_DIMENSION)
    if ladder_max < 0:
        raise CliError("--ladder-max must be >= 0", EXIT_PARSE)
    base = inp.polynomial
    report = {
        "input": polynomial_to_json(base, inp.form),
        "config": {**cfg.as_dict(), "degree_cap": cap, "tol": tol, "ladder_max": ladder_max,
                   "space": space.label},
    }
    if base.constant_term == 0:
        raise CliError("p(0) must be nonzero", EXIT_PARSE)
    evidence = stability_check(base, cfg)
    report["stability"] = evidence.as_dict()
    if not evidence.stable:
        report["verdict"] = "unstable"
        return report, EXIT_UNSTABLE
    p = StablePolynomial(base, base.degree, evidence)
    n = p.declared_degree
    report["declared_degree"] = n

    arg = bounded_argument_estimate(p, cfg)
    report["bounded_argument"] = {"observed": arg, "bound": n * math.pi, "holds": arg <= n * math.pi + 1e-6}
    q = normalize_stable(p)
    sup = sup_norm_estimate(q, cfg)
    report["sup_norm_normalized"] = {"observed": sup, "bound": 1.0, "holds": sup <= 1.0 + 1e-9}

    if n >= 1:
        if base.dimension == 1:
            res = dirichlet_integral_F(base, n, tol)
            name = "int_D |F'|^2 dA/pi, F = log(1 + log(2^n p(0)/p))"
        else:
            res = slice_besov_integral(base, n, cfg, max(tol, 1e-6))
            name = "sphere mean of slice integrals int_D |F_zeta'|^2 dA/pi"
        report["integral_bound"] = {"quantity": name, **res.as_dict(), "bound": 16.0 * n * n,
                                    "holds": res.value - res.error_estimate <= 16.0 * n * n}

    levels = []
    ladder = [0] if ladder_max == 0 else list(range(1, ladder_max + 1))
    q_cap = PolynomialInput(q).function(cap)
    for k in ladder:
        entry = {"level": k}
        try:
            f = inp.function(cap) if k == 0 else iterated_log(q_cap, k)
        except BranchError as exc:
            entry.update(verdict=INCONCLUSIVE, error=str(exc))
            levels.append(entry)
            continue
        profile = tail_profile(f, space)
        entry.update(function="input" if k == 0 else f"G_{k}(log(1/q))",
                     constant_term=[f.constant_term.real, f.constant_term.imag],
                     **profile.as_dict())
        levels.append(entry)
    report["levels"] = levels
    report["verdict"] = overall_verdict(levels)
    report["verdict_policy"] = ("slope of log(increment) vs log(degree) over the top half of degrees: "
                                "< -1.05 consistent-with-membership, > -0.95 diverging, else inconclusive")
    return report, EXIT_OK


def _render_diagnose(report: dict, fmt: str) -> str:
    if fmt == "json":
        return _json(report)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["level", "degree", "partial_norm_sq", "increment"])
        for lv in report.get("levels", []):
            for d, (s, inc) in enumerate(zip(lv.get("partial_norm_sq", []), lv.get("increment", []))):
                w.writerow([lv["level"], d, repr(s), repr(inc)])
        return buf.getvalue()
    lines = [f"stability   {report['stability']}"]
    for key in ("bounded_argument", "sup_norm_normalized", "integral_bound"):
        if key in report:
            lines.append(f"{key:<11} {report[key]}")
    for lv in report.get("levels", []):
        lines.append(f"level {lv['level']}: slope={lv.get('slope')} verdict={lv['verdict']}")
    lines.append(f"verdict     {report['verdict']}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def cmd_verify(suite: str, cfg: SampleConfig, tol: float | None = None,
               mc_points: int | None = None) -> tuple[list[dict], int]:
    rows = run_suite(suite, cfg.rng_seed, cfg, tol, mc_points)
    table = [r.as_dict() for r in rows]
    return table, EXIT_OK if all(r.passed for r in rows) else EXIT_FAIL


def _render_table(table: list[dict], fmt: str) -> str:
    if fmt == "json":
        return _json({"passed": all(r["passed"] for r in table), "checks": table})
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["suite", "case", "observed", "bound", "passed"])
        for r in table:
            w.writerow([r["suite"], r["case"], repr(r["observed"]), repr(r["bound"]), r["passed"]])
        return buf.getvalue()
    lines = [f"{'PASS' if r['passed'] else 'FAIL'}  {r['suite']:<14} {r['case']:<40} "
             f"observed={r['observed']:.6g} bound={r['bound']:.6g}" for r in table]
    return "\n".join(lines) + "\n"


def cmd_samples_dump(d: int, cfg: SampleConfig) -> dict:
    zeta = sphere_samples(d, cfg.sphere_samples, cfg.rng_seed)
    return {"config": {**cfg.as_dict(), "dimension": d},
            "directions": [[[float(z.real), float(z.imag)] for z in row] for row in zeta],
            "radii": [float(r) for r in radial_grid(cfg.radial_grid)]}


def _render_samples(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return _json(doc)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["kind", "index", "coordinate", "re", "im"])
    for i, row in enumerate(doc["directions"]):
        for j, (re, im) in enumerate(row):
            w.writerow(["direction", i, j + 1, repr(re), repr(im)])
    for i, r in enumerate(doc["radii"]):
        w.writerow(["radius", i, "", repr(r), "0.0"])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _sampling_flags(p: argparse.ArgumentParser):
    p.add_argument("--seed", type=int, default=0, help="seed for sphere samples and random instances")
    p.add_argument("--sphere-samples", type=int, default=200, help="number of sphere directions")
    p.add_argument("--radial-grid", type=int, default=50, help="number of radii per direction")


def _output_flags(p: argparse.ArgumentParser, default: str):
    p.add_argument("--format", choices=("json", "csv", "text"), default=default)
    p.add_argument("--out", help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dacyclic", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("norm", help="norm and tail profile of an input polynomial")
    p.add_argument("--input", required=True, help="polynomial JSON file")
    p.add_argument("--space", required=True,
                   help='"h2d:d=<d>", "dirichlet", "bv" or "besov:d=<d>,N=<N>,measure=<m>"')
    p.add_argument("--degree-cap", type=int, default=100)
    _output_flags(p, "text")

    p = sub.add_parser("diagnose", help="cyclicity diagnostics for a stable polynomial")
    p.add_argument("--input", required=True)
    p.add_argument("--space", required=True)
    p.add_argument("--ladder-max", type=int, default=2, help="highest ladder level; 0 profiles the input itself")
    p.add_argument("--degree-cap", type=int, default=100)
    p.add_argument("--tol", type=float, default=1e-8)
    _sampling_flags(p)
    _output_flags(p, "json")

    suite_names = sorted(SUITES) + sorted(ALIASES) + ["all"]
    for name in ("verify", "verify-identities"):
        p = sub.add_parser(name, help="run verification suites")
        if name == "verify":
            p.add_argument("suite", nargs="?", default="all", choices=suite_names)
            p.add_argument("--mc-points", type=int, default=None,
                           help="Monte Carlo points per cross-check (default 10^6)")
        p.add_argument("--tol", type=float, default=None)
        _sampling_flags(p)
        _output_flags(p, "text")

    p = sub.add_parser("samples-dump", help="print the seeded sample sets")
    p.add_argument("--input", help="take the dimension from this polynomial")
    p.add_argument("--dimension", type=int, default=None)
    _sampling_flags(p)
    _output_flags(p, "csv")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if getattr(args, "sphere_samples", 1) < 1 or getattr(args, "radial_grid", 1) < 1:
            raise CliError("sample counts must be >= 1", EXIT_PARSE)
        cfg = _config(args) if hasattr(args, "seed") else SampleConfig()
        if args.command == "norm":
            res = cmd_norm(_load(args.input), _space(args.space), args.degree_cap)
            _emit(_render_norm(res, args.format), args.out)
            return EXIT_OK
        if args.command == "diagnose":
            report, code = cmd_diagnose(_load(args.input), _space(args.space), args.ladder_max,
                                        args.degree_cap, cfg, args.tol)
            _emit(_render_diagnose(report, args.format), args.out)
            return code
        if args.command in ("verify", "verify-identities"):
            suites = [args.suite] if args.command == "verify" else list(IDENTITY_SUITES)
            table, code = [], EXIT_OK
            for s in suites:
                rows, c = cmd_verify(s, cfg, args.tol, getattr(args, "mc_points", None))
                table.extend(rows)
                code = max(code, c)
            _emit(_render_table(table, args.format), args.out)
            return code
        if args.command == "samples-dump":
            d = args.dimension or (_load(args.input).dimension if args.input else 1)
            _emit(_render_samples(cmd_samples_dump(d, cfg), args.format), args.out)
            return EXIT_OK
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
