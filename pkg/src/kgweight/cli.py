"""Command line interface.

Subcommands::

    kgweight verify --suite identities|series|lemmas|calibration|all
    kgweight weight mc --graph SELECTOR [--x X] [--samples N] [--seed S]
    kgweight weight pipeline --order N [--fit]
    kgweight fit --value V [--basis 1,zeta3^2/pi^6]
    kgweight graph --graph SELECTOR [--render]

Graph selectors: ``main``, ``bernoulli:<n>``, ``bsub``, ``wheel:<k>``,
``file:<path>``. Every subcommand prints a report as JSON (default, ``--json``)
or CSV (``--csv``). Exit status: 0 success, 1 a check failed, 2 usage error.
Environment: ``GW_SEED`` (default seed), ``GW_THREADS`` (Monte Carlo threads).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from datetime import datetime, timezone
from fractions import Fraction
from typing import Any, Optional, Sequence

from . import __version__
from . import eulersums as es
from . import geometry as geo
from . import graphs as gr
from . import pipeline as pl
from . import series as se
from . import specfun as sf
from .errors import KGWeightError, NoFitError

__all__ = ["main", "run", "build_report", "parse_graph_selector"]

CSV_COLUMNS = ("name", "value", "expected", "tolerance", "pass")


class UsageError(Exception):
    pass


def _entry(name: str, value: Any, expected: Any = None, tolerance: Optional[float] = None) -> dict:
    """One result line; ``pass`` is filled in when an expectation is given."""
    ok = None
    if expected is not None:
        if isinstance(value, (int, float)) and isinstance(expected, (int, float)):
            tol = 0.0 if tolerance is None else tolerance
            ok = bool(abs(value - expected) <= tol)
        else:
            ok = value == expected
    return {"name": name, "value": value, "expected": expected, "tolerance": tolerance, "pass": ok}


def build_report(command: str, inputs: dict, results: list[dict], seed: int) -> dict:
    return {
        "command": command,
        "inputs": inputs,
        "results": results,
        "seed": seed,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "version": __version__,
    }


def _format(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in report["results"]:
        w.writerow([_csv_cell(r[c]) for c in CSV_COLUMNS])
    return buf.getvalue()


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def parse_graph_selector(sel: str) -> gr.KGraph:
    kind, _, arg = sel.partition(":")
    try:
        if kind == "main" and not arg:
            return gr.build_main_graph()
        if kind == "bsub" and not arg:
            return gr.build_b_subgraph()
        if kind == "bernoulli":
            return gr.build_bernoulli_graph(int(arg))
        if kind == "wheel":
            return gr.build_wheel_graph(int(arg))
        if kind == "file":
            with open(arg, encoding="utf-8") as fh:
                return gr.parse(fh.read())
    except (ValueError, OSError) as exc:
        raise UsageError(f"bad graph selector {sel!r}: {exc}") from None
    raise UsageError(f"unknown graph selector {sel!r}")


def _default_seed() -> int:
    raw = os.environ.get("GW_SEED")
    if raw is None or raw == "":
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"GW_SEED must be an integer, got {raw!r}") from None


# ---------------------------------------------------------------- verify


def _suite_identities() -> list[dict]:
    out = []
    for n in range(0, 7):
        worst = 0.0
        for k in range(1, 10):
            y = k / 10
            lhs = sf.polylog_on_circle(n, y) + (-1) ** n * sf.polylog_on_circle(n, 1 - y)
            rhs = -((2j * math.pi) ** n) / math.factorial(n) * sf.bernoulli_poly(n)(y)
            worst = max(worst, abs(lhs - rhs))
        out.append(_entry(f"polylog_bernoulli_n{n}", worst, 0.0, 1e-11))
    for n in range(1, 13):
        ok = (
            sf.bernoulli_poly(n).derivative() == sf.bernoulli_poly(n - 1).scale(n)
            and sf.bernoulli_poly(n).integral01() == 0
        )
        out.append(_entry(f"bernoulli_recursion_n{n}", ok, True))
    N = 10**5
    cases = [(4, 2, 0), (4, 2, 1)] + [(r, r, 0) for r in (2, 3, 4)] + [(1, m, 0) for m in (2, 3, 4, 5)]
    for a, b, off in cases:
        res = es.euler_sum(a, b, off, N)
        out.append(_entry(f"euler_sum_{a}_{b}_{off}", res.value, es.euler_sum_closed(a, b, off), 1e-9))
    for n in (1, 2, 5, 20):
        h = float(sf.harmonic_number(n, 1))
        out.append(_entry(f"jjpn_plus_n{n}", es.jjpn_sum(n, "plus", N).value, h, 1e-9))
        out.append(_entry(f"jjpn_minus_n{n}", es.jjpn_sum(n, "minus", N).value, h - 2 / n, 1e-9))
    out.append(
        _entry(
            "final_constant_decomposition",
            es.final_constant(),
            sf.zeta_value(3) ** 2 / math.pi**6 - 37 / 11340,
            1e-12,
        )
    )
    return out


def _suite_series(N: int = 40) -> list[dict]:
    from collections import defaultdict

    g0 = se.v_zero_slice(se.set_cutoff_one(se.build_G(N)))
    ref: dict[int, Fraction] = defaultdict(Fraction)
    for j in range(1, N + 1):
        for k in range(1, N + 1 - j):
            n = j + k
            for m, c in ((n, Fraction(1, 2 * j * n)), (-k, Fraction(-1, 2 * j * n)), (j, Fraction(-1, 2 * n * n))):
                ref[m] += c
                ref[-m] += c
    mismatches = sum(
        1
        for m in range(-(N // 2), N // 2 + 1)
        if g0.get(m, se.PiRational(0)) != se.PiRational(ref.get(m, Fraction(0)), -2)
    )
    return [_entry(f"build_G_v0_mismatches_N{N}", mismatches, 0, 0.0)]


def _suite_lemmas(N: int = 10**4) -> list[dict]:
    out = []
    grid = [(0.7, 0.2), (0.25, 0.75), (0.1, 0.4), (0.9, 0.35), (0.45, 0.55)]
    for m, n in ((1, 0), (0, 1), (1, 1), (2, 1)):
        worst = max(abs(l - r) for l, r in (pl.lemma_UV_check(m, n, a, b, N) for a, b in grid))
        out.append(_entry(f"lemma_UV_m{m}_n{n}", worst, 0.0, 1e-8))
    for a, b in ((0.2, 0.6), (0.6, 0.2)):
        out.append(_entry(f"b_reduced_{a}_{b}", pl.b_lemma_reduced(a, b) * -0.5, pl.f_closed_form(a, b), 1e-15))
    return out


def _suite_calibration(seed: int, samples: int) -> list[dict]:
    out = []
    g1 = gr.build_bernoulli_graph(1)
    g2 = gr.build_bernoulli_graph(2)
    for g, n, x in ((g1, 1, 0.25), (g1, 1, 0.5), (g1, 1, 0.75), (g2, 2, 0.5)):
        est = geo.mc_weight(g, samples, seed, fixed_boundary={"P": x})
        exact = float(sf.bernoulli_poly(n)(x)) / math.factorial(n)
        out.append(_entry(f"bernoulli{n}_x{x}", est.value, exact, 3 * est.stderr))
    for a, b in ((0.2, 0.6), (0.6, 0.2)):
        est = pl.b_integration_mc(a, b, samples, seed)
        out.append(_entry(f"b_integration_{a}_{b}", est.value, pl.f_closed_form(a, b), 3 * est.stderr))
    return out


def _cmd_verify(args) -> tuple[dict, list[dict]]:
    suites = ["identities", "series", "lemmas", "calibration"] if args.suite == "all" else [args.suite]
    results: list[dict] = []
    for s in suites:
        if s == "identities":
            results += _suite_identities()
        elif s == "series":
            results += _suite_series()
        elif s == "lemmas":
            results += _suite_lemmas()
        elif s == "calibration":
            results += _suite_calibration(args.seed, args.samples)
    return {"suite": args.suite, "samples": args.samples}, results


# ---------------------------------------------------------------- weight


def _cmd_weight_mc(args) -> tuple[dict, list[dict]]:
    g = parse_graph_selector(args.graph)
    problems = gr.validate(g)
    if problems:
        raise UsageError("; ".join(problems))
    fixed = None
    if args.x is not None:
        if len(g.typeII) != 1:
            raise UsageError("--x needs a graph with exactly one boundary vertex")
        fixed = {g.typeII[0]: args.x}
    elif args.boundary:
        vals = [float(v) for v in args.boundary.split(",")]
        if len(vals) != len(g.typeII):
            raise UsageError(f"--boundary needs {len(g.typeII)} angles")
        fixed = dict(zip(g.typeII, vals))
    ordered = args.ordered if args.ordered is not None else (g == gr.build_main_graph())
    try:
        est = geo.mc_weight(
            g,
            args.samples,
            args.seed,
            ordered=ordered,
            fixed_boundary=fixed,
            proposal=args.proposal,
            batches=args.batches,
        )
    except geo.DimensionError as exc:
        raise UsageError(str(exc)) from None
    inputs = {
        "graph": args.graph,
        "x": args.x,
        "boundary": fixed,
        "samples": args.samples,
        "batches": args.batches,
        "ordered": ordered,
        "proposal": args.proposal,
        "orientation_per_vertex": geo.ORIENTATION_PER_VERTEX,
    }
    expected = None
    desc = gr.known_weight(g)
    if desc is not None:
        try:
            expected = float(desc.evaluate(args.x))
        except ValueError:
            expected = None
        # a fixed-boundary chain is compared at its angle; wheels need the full integral
        if desc.kind == "bernoulli" and fixed is None:
            expected = None
        if desc.kind == "wheel":
            expected = None
    results = [
        _entry("weight", est.value, expected, None if expected is None else 3 * est.stderr),
        _entry("stderr", est.stderr),
        _entry("samples", est.samples),
    ]
    if desc is not None:
        results.append(_entry("known_weight", str(desc)))
    return inputs, results


def _cmd_weight_pipeline(args) -> tuple[dict, list[dict]]:
    parts = pl.semianalytic_parts(args.order)
    target = es.final_constant()
    results = [
        _entry("weight", parts.value, target, 1e-6),
        _entry("exact_part", float(parts.exact)),
        _entry("tail", parts.tail),
        _entry("tail_bound", parts.tail_bound),
    ]
    if args.fit:
        basis = [1.0, sf.zeta_value(3) ** 2 / math.pi**6]
        try:
            fit = pl.rational_fit(parts.value, basis, max_den=args.max_den, tol=args.tol)
            results.append(_entry("fit_coefficient_1", str(fit.coefficients[0]), "-37/11340"))
            results.append(_entry("fit_coefficient_zeta3sq_pi6", str(fit.coefficients[1]), "1"))
            results.append(_entry("fit_residual", fit.residual, 0.0, args.tol))
        except NoFitError as exc:
            results.append(_entry("fit", f"no fit: {exc}", "fit found"))
    inputs = {"order": args.order, "fit": args.fit, "basis": ["1", "zeta(3)^2/pi^6"] if args.fit else None}
    return inputs, results


_NAMED_CONSTANTS = {
    "1": lambda: 1.0,
    "one": lambda: 1.0,
    "pi": lambda: math.pi,
    "zeta3": lambda: sf.zeta_value(3),
    "zeta3^2/pi^6": lambda: sf.zeta_value(3) ** 2 / math.pi**6,
}


def _cmd_fit(args) -> tuple[dict, list[dict]]:
    basis = []
    for tok in args.basis.split(","):
        tok = tok.strip()
        if tok in _NAMED_CONSTANTS:
            basis.append(_NAMED_CONSTANTS[tok]())
        else:
            try:
                basis.append(float(tok))
            except ValueError:
                raise UsageError(f"unknown basis constant {tok!r}") from None
    inputs = {"value": args.value, "basis": args.basis, "max_den": args.max_den, "tol": args.tol}
    try:
        fit = pl.rational_fit(args.value, basis, max_den=args.max_den, tol=args.tol)
    except NoFitError as exc:
        return inputs, [_entry("fit", f"no fit: {exc}")]
    results = [_entry(f"coefficient_{i}", str(c)) for i, c in enumerate(fit.coefficients)]
    results.append(_entry("residual", fit.residual, 0.0, args.tol))
    return inputs, results


def _cmd_graph(args) -> tuple[dict, list[dict]]:
    g = parse_graph_selector(args.graph)
    desc = gr.known_weight(g)
    problems = gr.validate(g)
    results = [
        _entry("valid", not problems, True),
        _entry("violations", "; ".join(problems)),
        _entry("lie_graph", gr.is_lie_graph(g)),
        _entry("edges", len(g.edges)),
        _entry("known_weight", str(desc) if desc else None),
    ]
    return {"graph": args.graph}, results


# ---------------------------------------------------------------- parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_format(p):
    grp = p.add_mutually_exclusive_group()
    grp.add_argument("--json", dest="fmt", action="store_const", const="json", help="JSON report (default)")
    grp.add_argument("--csv", dest="fmt", action="store_const", const="csv", help="CSV rows: " + ",".join(CSV_COLUMNS))
    p.set_defaults(fmt="json")


def _make_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="kgweight", description="Kontsevich graph weights: Monte Carlo and exact series.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="cmd", parser_class=_Parser)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", choices=["identities", "series", "lemmas", "calibration", "all"], default="identities")
    v.add_argument("--seed", type=int, default=None)
    v.add_argument("--samples", type=int, default=10**6)
    _add_format(v)

    w = sub.add_parser("weight", help="compute a graph weight")
    wsub = w.add_subparsers(dest="method", parser_class=_Parser)
    mc = wsub.add_parser("mc", help="Monte Carlo over configurations")
    mc.add_argument("--graph", required=True)
    mc.add_argument("--x", type=float, default=None, help="fixed boundary angle for one-boundary graphs")
    mc.add_argument("--boundary", default=None, help="comma-separated fixed boundary angles")
    mc.add_argument("--samples", type=int, default=10**6)
    mc.add_argument("--seed", type=int, default=None)
    mc.add_argument("--batches", type=int, default=geo.DEFAULT_BATCHES)
    mc.add_argument("--proposal", choices=["mixture", "uniform"], default="mixture")
    mc.add_argument("--ordered", dest="ordered", action="store_true", default=None)
    mc.add_argument("--unordered", dest="ordered", action="store_false")
    _add_format(mc)
    pp = wsub.add_parser("pipeline", help="exact series plus Euler sum tails")
    pp.add_argument("--order", type=int, default=200)
    pp.add_argument("--fit", action="store_true")
    pp.add_argument("--max-den", type=int, default=10**5)
    pp.add_argument("--tol", type=float, default=1e-8)
    pp.add_argument("--seed", type=int, default=None)
    _add_format(pp)

    f = sub.add_parser("fit", help="rational fit of a value over a basis")
    f.add_argument("--value", type=float, required=True)
    f.add_argument("--basis", default="1,zeta3^2/pi^6")
    f.add_argument("--max-den", type=int, default=10**5)
    f.add_argument("--tol", type=float, default=1e-8)
    f.add_argument("--seed", type=int, default=None)
    _add_format(f)

    g = sub.add_parser("graph", help="inspect a graph")
    g.add_argument("--graph", required=True)
    g.add_argument("--render", action="store_true", help="print the canonical graph JSON instead of a report")
    g.add_argument("--seed", type=int, default=None)
    _add_format(g)
    return p


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = _make_parser()
    try:
        args = parser.parse_args(argv)
        if args.cmd is None or (args.cmd == "weight" and args.method is None):
            raise UsageError("a subcommand is required")
        if getattr(args, "seed", None) is None:
            args.seed = _default_seed()
        if args.cmd == "graph" and args.render:
            out.write(gr.render(parse_graph_selector(args.graph)) + "\n")
            return 0
        if args.cmd == "verify":
            inputs, results = _cmd_verify(args)
            command = f"verify --suite {args.suite}"
        elif args.cmd == "weight" and args.method == "mc":
            inputs, results = _cmd_weight_mc(args)
            command = "weight mc"
        elif args.cmd == "weight":
            inputs, results = _cmd_weight_pipeline(args)
            command = "weight pipeline"
        elif args.cmd == "fit":
            inputs, results = _cmd_fit(args)
            command = "fit"
        else:
            inputs, results = _cmd_graph(args)
            command = "graph"
    except UsageError as exc:
        err.write(f"kgweight: error: {exc}\n")
        return 2
    except (KGWeightError, ValueError) as exc:
        err.write(f"kgweight: error: {exc}\n")
        return 2
    report = build_report(command, inputs, results, args.seed)
    out.write(_format(report, args.fmt))
    if args.fmt == "json":
        out.write("\n")
    failed = any(r["pass"] is False for r in results)
    return 1 if failed else 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
