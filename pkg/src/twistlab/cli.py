"""Command-line front end.

Subcommands build the configured tower and contexts, run one experiment or
the whole verification batch, and emit machine-readable reports (JSON, or
CSV for growth tables).  Reports are deterministic: identical configuration
and seed give byte-identical output.  Exit codes: 0 all assertions passed,
1 an assertion failed, 2 invalid configuration or usage.

The field-order budget can be overridden with the TWISTLAB_FIELD_BUDGET
environment variable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .action import ActionConfig, PAdicExponent, default_action
from .center import kernel_lattice
from .errors import InternalFaultError, TwistlabError
from .growth import gk_estimate, growth_table
from .pi import pi_degree_scan, test_identity
from .quotient import CentralFraction, center_of_quotient_test, invert
from .ring import RingContext, parse_element
from .simplicity import replay_trace, unit_in_ideal
from .tower import DEFAULT_FIELD_BUDGET, TowerConfig, build_tower, tower_to_json
from .verify import run_all

EXIT_OK = 0
EXIT_ASSERTION = 1
EXIT_USAGE = 2


def _budget() -> int:
    return int(os.environ.get("TWISTLAB_FIELD_BUDGET", DEFAULT_FIELD_BUDGET))


def _canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _emit(text: str, out_path):
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _report(command: str, config: dict, result) -> dict:
    return {
        "command": command,
        "version": __version__,
        "config": config,
        "result": result,
    }


def _add_common(p: argparse.ArgumentParser, with_n=True, with_k=True):
    p.add_argument("--p", type=int, default=2, help="tower prime")
    p.add_argument("--q", type=int, default=2, help="base field order")
    if with_n:
        p.add_argument("--n", type=int, default=2, help="rank of the acting group")
    if with_k:
        p.add_argument("--k", type=int, default=1, help="working level")
    p.add_argument("--kmax", type=int, default=None, help="highest level to build")
    p.add_argument("--seed", type=int, default=0, help="random seed")
    p.add_argument("--out", type=str, default=None, help="output path (stdout)")
    p.add_argument(
        "--format", choices=("json", "csv"), default=None, help="output format"
    )
    p.add_argument(
        "--config", type=str, default=None,
        help="JSON file with defaults for any of the flags above",
    )
    p.add_argument(
        "--exponents", type=str, default=None,
        help="JSON list of digit-position lists overriding the default "
        "acting exponents, e.g. '[[0],[0,9]]'",
    )


def _apply_config_file(args, argv):
    """Config-file values override parser defaults; explicit flags win."""
    if not getattr(args, "config", None):
        return
    with open(args.config) as fh:
        data = json.load(fh)
    aliases = {"k_max": "kmax"}
    explicit = {
        tok[2:].split("=")[0].replace("-", "_")
        for tok in argv
        if tok.startswith("--")
    }
    for key, value in data.items():
        key = aliases.get(key, key)
        if key in explicit:
            continue
        if hasattr(args, key):
            setattr(args, key, value)


def _action(args, n=None) -> object:
    n = n if n is not None else args.n
    spec = getattr(args, "exponents", None)
    if spec:
        positions = json.loads(spec) if isinstance(spec, str) else spec
        return ActionConfig(
            n, args.p, [PAdicExponent.from_positions(ps) for ps in positions]
        )
    return default_action(n, args.p)


def _context(args, k=None, n=None) -> RingContext:
    k = args.k if k is None else k
    k_max = args.kmax if args.kmax is not None else max(k, 2)
    tower = build_tower(TowerConfig(args.p, args.q, k_max), budget=_budget())
    return RingContext(tower, _action(args, n), k)


def _resolved(args, **extra) -> dict:
    out = {"p": args.p, "q": args.q, "seed": args.seed}
    for key in ("n", "k", "kmax"):
        if hasattr(args, key):
            out[key] = getattr(args, key)
    out.update(extra)
    return out


def cmd_tower(args) -> int:
    k_max = args.kmax if args.kmax is not None else 2
    tower = build_tower(TowerConfig(args.p, args.q, k_max), budget=_budget())
    report = _report("tower", _resolved(args, kmax=k_max), tower_to_json(tower))
    _emit(_canonical_json(report), args.out)
    return EXIT_OK


def cmd_center(args) -> int:
    ctx = _context(args)
    lattice = kernel_lattice(ctx)
    report = _report("center", _resolved(args), lattice.to_json_dict())
    _emit(_canonical_json(report), args.out)
    return EXIT_OK


def cmd_simplicity(args) -> int:
    ctx = _context(args)
    element = parse_element(ctx, args.element)
    trace = unit_in_ideal(element)
    ok = replay_trace(trace) == trace.final_unit
    report = _report(
        "simplicity", _resolved(args, element=args.element),
        {"trace": trace.to_json_dict(), "audit_replay_ok": ok},
    )
    _emit(_canonical_json(report), args.out)
    return EXIT_OK if ok else EXIT_ASSERTION


def cmd_pi_test(args) -> int:
    ctx = _context(args)
    rep = test_identity(ctx, args.degree, args.trials, seed=args.seed)
    verdict = (
        f"degree {args.degree} vanished in all {rep.trials} trials"
        if rep.is_identity_evidence()
        else f"degree {args.degree} witness found (trial count {rep.trials})"
    )
    report = _report(
        "pi-test",
        _resolved(args, degree=args.degree, trials=args.trials),
        {"report": rep.to_json_dict(), "verdict": verdict},
    )
    _emit(_canonical_json(report), args.out)
    sys.stderr.write(verdict + "\n")
    return EXIT_OK


def cmd_pi_scan(args) -> int:
    contexts = [_context(args, k=k) for k in range(1, args.k + 1)]
    rows = pi_degree_scan(contexts, args.trials, seed=args.seed)
    frontier = [r.largest_failing_degree or 0 for r in rows]
    monotone = all(b >= a for a, b in zip(frontier, frontier[1:]))
    report = _report(
        "pi-scan",
        _resolved(args, trials=args.trials),
        {"rows": [r.to_json_dict() for r in rows], "frontier_monotone": monotone},
    )
    _emit(_canonical_json(report), args.out)
    return EXIT_OK if monotone else EXIT_ASSERTION


def cmd_growth(args) -> int:
    ctx = _context(args)
    table = growth_table(ctx, None, n_max=args.nmax)
    est = gk_estimate(table)
    if (args.format or "csv") == "csv":
        text = table.to_csv() + f"# gk_estimate,{est.slope:.6f},residual,{est.residual:.6f}\n"
        _emit(text, args.out)
    else:
        report = _report(
            "growth", _resolved(args, nmax=args.nmax),
            {
                "table": table.to_json_dict(),
                "gk_estimate": round(est.slope, 6),
                "residual": round(est.residual, 6),
            },
        )
        _emit(_canonical_json(report), args.out)
    return EXIT_OK


def cmd_invert(args) -> int:
    ctx = _context(args)
    lattice = kernel_lattice(ctx)
    num = parse_element(ctx, args.element)
    den = parse_element(ctx, args.den) if args.den else ctx.one()
    f = CentralFraction(ctx, num, den, lattice=lattice)
    g = invert(f, allow_large=args.allow_large)
    product = f * g
    one = CentralFraction(ctx, ctx.one(), ctx.one(), lattice=lattice)
    ok = product == one
    report = _report(
        "invert",
        _resolved(args, element=args.element, den=args.den),
        {
            "inverse_num": g.num.to_literal(),
            "inverse_den": g.den.to_literal(),
            "verification_product": product.to_literal(),
            "verification_product_equals_one": ok,
        },
    )
    _emit(_canonical_json(report), args.out)
    return EXIT_OK if ok else EXIT_ASSERTION


def cmd_center_probe(args) -> int:
    ctx = _context(args)
    lattice = kernel_lattice(ctx)
    num = parse_element(ctx, args.element)
    den = parse_element(ctx, args.den) if args.den else ctx.one()
    f = CentralFraction(ctx, num, den, lattice=lattice)
    outcome = center_of_quotient_test(f, args.probe_level)
    report = _report(
        "center-probe",
        _resolved(args, element=args.element, den=args.den,
                  probe_level=args.probe_level),
        {"commutes_at_probe_level": outcome},
    )
    _emit(_canonical_json(report), args.out)
    return EXIT_OK


def cmd_verify_all(args) -> int:
    k_max = args.kmax if args.kmax is not None else 2
    if k_max < 2:
        raise ValueError("verify-all needs k_max >= 2")
    results = run_all(args.p, args.q, args.n, k_max, seed=args.seed,
                      trials=args.trials, action=_action(args))
    all_ok = all(r.passed for r in results)
    report = _report(
        "verify-all",
        _resolved(args, kmax=k_max, trials=args.trials),
        {
            "checks": [r.to_json_dict() for r in results],
            "all_passed": all_ok,
        },
    )
    _emit(_canonical_json(report), args.out)
    for r in results:
        sys.stderr.write(f"{'PASS' if r.passed else 'FAIL'}  {r.name}: {r.detail}\n")
    return EXIT_OK if all_ok else EXIT_ASSERTION


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="twistlab",
        description="Exact experiments with twisted group rings over "
        "finite-field towers",
    )
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tower", help="build a tower and print its description")
    _add_common(p, with_n=False, with_k=False)
    p.set_defaults(func=cmd_tower)

    p = sub.add_parser("center", help="kernel lattice of the level action")
    _add_common(p)
    p.set_defaults(func=cmd_center)

    p = sub.add_parser("simplicity", help="shrink an element to a unit in its ideal")
    _add_common(p)
    p.add_argument("--element", type=str, required=True, help="element literal")
    p.set_defaults(func=cmd_simplicity)

    p = sub.add_parser("pi-test", help="sample one standard polynomial")
    _add_common(p)
    p.add_argument("--degree", type=int, required=True, help="even degree <= 8")
    p.add_argument("--trials", type=int, default=1000)
    p.set_defaults(func=cmd_pi_test)

    p = sub.add_parser("pi-scan", help="identity frontier for levels 1..k")
    _add_common(p)
    p.add_argument("--trials", type=int, default=200)
    p.set_defaults(func=cmd_pi_scan)

    p = sub.add_parser("growth", help="subalgebra growth table and slope")
    _add_common(p)
    p.add_argument("--nmax", type=int, default=16, help="largest product length")
    p.set_defaults(func=cmd_growth)

    p = sub.add_parser("invert", help="invert a central fraction")
    _add_common(p)
    p.add_argument("--element", type=str, required=True, help="numerator literal")
    p.add_argument("--den", type=str, default=None, help="central denominator literal")
    p.add_argument("--allow-large", action="store_true", dest="allow_large")
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("center-probe", help="commutation test at a higher level")
    _add_common(p)
    p.add_argument("--element", type=str, required=True)
    p.add_argument("--den", type=str, default=None)
    p.add_argument("--probe-level", type=int, required=True, dest="probe_level")
    p.set_defaults(func=cmd_center_probe)

    p = sub.add_parser("verify-all", help="run every module's invariant suite")
    _add_common(p, with_k=False)
    p.add_argument("--trials", type=int, default=200)
    p.set_defaults(func=cmd_verify_all)

    return ap


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        _apply_config_file(args, argv)
        return args.func(args)
    except InternalFaultError as exc:
        sys.stderr.write(f"internal consistency fault: {exc}\n")
        return EXIT_ASSERTION
    except (TwistlabError, ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
