"""capcolor command line: code build, verify, table, sim.

Exit codes: 0 all verdicts pass, 1 invalid input, 2 verification failure
(witness printed), 3 resource ceiling reached.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from pathlib import Path

from .circuits import (CircuitSchedule, D3_F_ORDERINGS, D5_F_ORDERINGS, capped_orderings, e_orderings,
                       orderings_d3, orderings_d5_nonflag, schedule_for)
from .codes import DomainError, build_code, code_to_json, rccc_n, table3
from .faults import ResourceError, enumerate_fault_set, is_distinguishable, is_distinguishable_via_2t, \
    sampled_zero_flag_logicals

EXIT_OK, EXIT_INPUT, EXIT_FAIL, EXIT_RESOURCE = 0, 1, 2, 3


class InputError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; that code means a failed verdict here
    def error(self, message):
        self.print_usage(sys.stderr)
        raise InputError(message)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _check_d(d: int) -> None:
    if d < 3 or d % 2 == 0:
        raise InputError(f"d must be an odd integer >= 3, got {d}")


def _check_t(t: int, d: int) -> None:
    if t < 0 or t > (d - 1) // 2:
        raise InputError(f"t must satisfy 0 <= t <= (d-1)/2 = {(d - 1) // 2}")


def _config_defaults(argv: list[str] | None) -> dict:
    """Keys of a JSON ``--config`` file become defaults; explicit flags win."""
    argv = sys.argv[1:] if argv is None else argv
    if "--config" not in argv:
        return {}
    i = argv.index("--config")
    if i + 1 >= len(argv):
        raise InputError("--config needs a path")
    path = Path(argv[i + 1])
    if not path.exists():
        raise InputError(f"config file {path} does not exist")
    return {k.replace("-", "_"): v for k, v in json.loads(path.read_text()).items()}


# ---------------------------------------------------------------------------
# code build


def cmd_code_build(args) -> int:
    _check_d(args.d)
    if args.family == "2d" and args.form != "H":
        raise InputError("the 2D color code has no gauge forms")
    code = build_code(args.family, args.d, args.form)
    nx = len(code.x_indices)
    nz = len(code.z_indices)
    expected = table3(args.d).get(args.family, (None,))[0]
    if args.family == "rccc":
        expected = rccc_n(args.d)
    lines = [f"code {code.name}", f"n={code.n}", f"k={code.k}", f"generators: {nx} X-type, {nz} Z-type"]
    if expected is not None:
        lines.append(f"qubit-count formula: {expected} ({'ok' if expected == code.n else 'MISMATCH'})")
    doc = json.dumps(code_to_json(code), indent=1, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(doc)
        sys.stdout.write("\n".join(lines) + "\n")
    else:
        sys.stdout.write("\n".join(lines) + "\n")
        if args.json:
            sys.stdout.write(doc)
    return EXIT_OK if expected in (None, code.n) else EXIT_FAIL


# ---------------------------------------------------------------------------
# verify


def _orderings(args, code):
    src = args.orderings
    ccc = code.meta.get("capped")
    if src == "file":
        if not args.orderings_file or not Path(args.orderings_file).exists():
            raise InputError("--orderings file needs an existing --orderings-file")
        data = json.loads(Path(args.orderings_file).read_text())
        return {k: [int(q) for q in v] for k, v in data.items()}
    if ccc is None:
        return None
    if src == "builtin_d3":
        if args.d != 3:
            raise InputError("builtin_d3 orderings need --d 3")
        return {**e_orderings(ccc), **orderings_d3()}
    if src == "builtin_d5":
        if args.d != 5:
            raise InputError("builtin_d5 orderings need --d 5")
        return {**e_orderings(ccc), **orderings_d5_nonflag()}
    if src == "search":
        from .conditions import search_orderings
        f = search_orderings(args.d, args.circuits)
        return {**e_orderings(ccc), **capped_orderings(ccc, f)}
    return None


def _witness_lines(v, sched: CircuitSchedule) -> list[str]:
    base = sched.code.label_base
    out = []
    for c in v.witness or ():
        out.append("  " + c.describe(sched, base))
    return out


def cmd_verify(args) -> int:
    if args.theorem2:
        return _verify_theorem2(args)
    if args.conditions:
        return _verify_conditions(args)
    family = "steane" if args.code == "steane" else args.code
    d = 3 if family == "steane" else args.d
    _check_d(d)
    t = (d - 1) // 2 if args.t is None else args.t
    _check_t(t, d)
    code = build_code(family, d, args.form)
    orderings = _orderings(args, code)
    sched = schedule_for(code, args.circuits, orderings)
    sectors = ("full",) if args.undivided else None
    fs = enumerate_fault_set(sched, t=t, sectors=sectors, budget=args.budget)
    lines, ok = [], True
    if args.method in ("direct", "both"):
        v = is_distinguishable(fs)
        lines.append(f"direct check: {'PASS' if v else 'FAIL'}")
        if not v:
            ok = False
            lines.append(f" witness (sector {v.sector}):")
            lines += _witness_lines(v, sched)
    if args.method in ("scan", "both"):
        v2 = is_distinguishable_via_2t(fs)
        lines.append(f"F_2t scan: {'PASS' if v2 else 'FAIL'}")
        if not v2:
            ok = False
            lines.append(f" witness (sector {v2.sector}):")
            lines += _witness_lines(v2, sched)
    if args.sampled:
        bad = sampled_zero_flag_logicals(fs, 2 * t, args.sampled, args.seed)
        lines.append(f"sampled F_2t audit: {args.sampled} samples per sector, {bad} zero-flag logicals: "
                     f"{'PASS' if bad == 0 else 'FAIL'}")
        ok &= bad == 0
    head = f"{code.name} {args.circuits} t={t}: {'PASS' if ok else 'FAIL'}"
    _emit("\n".join([head] + lines) + "\n", args.out)
    return EXIT_OK if ok else EXIT_FAIL


def _verify_theorem2(args) -> int:
    from .conditions import check_condition_6, random_plaquette_orderings

    _check_d(args.d)
    rng = random.Random(args.seed)
    lines, ok = [], True
    for k in range(args.random_orderings):
        orders = random_plaquette_orderings(args.d, rng)
        v = check_condition_6(args.d, "flag", orders)
        lines.append(f"orderings {k + 1}: {'PASS' if v else 'FAIL'}")
        ok &= bool(v)
        if not v:
            lines += ["  " + " + ".join(map(str, v.witness or ()))]
    _emit("\n".join([f"condition 6 d={args.d}: {'PASS' if ok else 'FAIL'}"] + lines) + "\n", args.out)
    return EXIT_OK if ok else EXIT_FAIL


def _verify_conditions(args) -> int:
    from .conditions import check_conditions_2d

    _check_d(args.d)
    f = D3_F_ORDERINGS if args.d == 3 else None
    if args.d == 5:
        f = D5_F_ORDERINGS
    if f is None:
        from .conditions import search_orderings
        f = search_orderings(args.d, "nonflag")
    res = check_conditions_2d(args.d, f)
    ok = all(res.values())
    lines = [f"condition {k}: {'PASS' if v else 'FAIL'}" for k, v in res.items()]
    _emit("\n".join([f"conditions d={args.d}: {'PASS' if ok else 'FAIL'}"] + lines) + "\n", args.out)
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------------------
# tables


def cmd_table(args) -> int:
    from . import tables

    which = {"1": "errors", "2": "signatures", "3": "qubits"}.get(args.which, args.which)
    if which == "errors":
        _check_d(args.d)
        if args.d != 3:
            raise InputError("the single-fault error table is defined for d = 3")
        rows = tables.table1(args.d)
        text = tables.table1_csv(rows) if args.format == "csv" else tables.table1_json(rows) + "\n"
    elif which == "signatures":
        _check_d(args.d)
        counts = tables.table2_audit(args.d, args.circuits)
        text = tables.table2_csv(counts) if args.format == "csv" else json.dumps(counts, indent=1) + "\n"
    else:
        rows = tables.table3_rows(args.d_max)
        text = tables.table3_csv(rows) if args.format == "csv" else json.dumps(rows, indent=1) + "\n"
    _emit(text, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# sim


def _write_trace(path: str | None, records) -> None:
    if not path:
        return
    with open(path, "w") as fh:
        for r in records:
            fh.write(json.dumps(r, sort_keys=True) + "\n")


def cmd_sim(args) -> int:
    from . import audits
    from .pauli import Pauli
    from .protocols import run_ftec, run_t_gate, t_gate_setup

    _check_d(args.d)
    t = (args.d - 1) // 2 if args.t is None else args.t
    _check_t(t, args.d)
    proto = args.protocol
    if args.shots is not None:
        if proto != "ftec":
            raise InputError("Monte Carlo runs are implemented for ftec")
        return _sim_monte_carlo(args, t)
    if proto == "tgate":
        if args.d != 3:
            raise InputError("the T-gate audit is implemented for rccc(3)")
        rep, f3 = audits.audit_t_gate(args.d, t, args.seed)
        reports = [rep, f3]
        if args.trace:
            setup = t_gate_setup(build_code("rccc", args.d, "H"), t)
            _write_trace(args.trace, run_t_gate(Pauli(setup.code_H.n), setup, rng=random.Random(args.seed)).trace)
    else:
        h = audits.harness(args.family, args.d, args.circuits, t)
        if args.trace:
            _write_trace(args.trace, run_ftec(Pauli(h.code.n), h.schedule, h.decoder, t).trace)
        exhaustive = args.exhaustive or not args.samples
        if proto == "ftec":
            reports = [audits.audit_ftec_single(h) if exhaustive and t == 1 else
                       audits.audit_ftec_sampled(h, args.samples or 10_000, seed=args.seed)]
        elif proto == "ftm":
            reports = [audits.audit_ftm(h)]
        elif proto == "ftp":
            reports = [audits.audit_ftp(h)]
        else:
            reports = [audits.audit_exrec(h, g) for g in ("H", "S", "CNOT")]
    ok = all(r.ok for r in reports)
    lines = [r.line() for r in reports]
    for r in reports:
        lines += ["  " + e for e in r.examples]
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if ok else EXIT_FAIL


def _sim_monte_carlo(args, t: int) -> int:
    from .montecarlo import FTECExperiment, monte_carlo_logical_rate

    code = build_code(args.family, args.d, "H")
    exp = FTECExperiment(schedule_for(code, args.circuits), t, overflow=args.overflow)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=["p", "shots", "failures", "rate", "ci_low", "ci_high", "seed"],
                       lineterminator="\n")
    w.writeheader()
    for p in args.p:
        w.writerow(monte_carlo_logical_rate(exp, p, args.shots, args.seed, args.workers).row())
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="capcolor", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    ap.leaves = []

    code = sub.add_parser("code", help="build and serialize codes")
    csub = code.add_subparsers(dest="sub", required=True)
    b = csub.add_parser("build")
    b.add_argument("--family", choices=("2d", "ccc", "rccc", "steane"), default="ccc")
    b.add_argument("--d", type=int, default=3)
    b.add_argument("--form", choices=("H", "T"), default="H")
    b.add_argument("--out")
    b.add_argument("--json", action="store_true", help="also print the code JSON")
    b.add_argument("--config")
    ap.leaves.append(b)
    b.set_defaults(func=cmd_code_build)

    v = sub.add_parser("verify", help="distinguishability and condition checks")
    v.add_argument("--code", choices=("ccc", "rccc", "2d", "steane"), default="ccc")
    v.add_argument("--d", type=int, default=3)
    v.add_argument("--form", choices=("H", "T"), default="H")
    v.add_argument("--t", type=int)
    v.add_argument("--circuits", choices=("nonflag", "flag"), default="nonflag")
    v.add_argument("--orderings", choices=("builtin_d3", "builtin_d5", "file", "search", "default"),
                   default="default")
    v.add_argument("--orderings-file")
    v.add_argument("--method", choices=("direct", "scan", "both"), default="both")
    v.add_argument("--undivided", action="store_true", help="skip the CSS sector split")
    v.add_argument("--sampled", type=int, default=0, help="sampled F_2t combinations per sector")
    v.add_argument("--budget", type=int, help="maximum enumerated combinations")
    v.add_argument("--theorem2", action="store_true", help="condition 6 under random orderings")
    v.add_argument("--conditions", action="store_true", help="conditions 0-5 of the plane universe")
    v.add_argument("--random-orderings", type=int, default=3)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--out")
    v.add_argument("--config")
    ap.leaves.append(v)
    v.set_defaults(func=cmd_verify)

    tb = sub.add_parser("table", help="reproducible tables")
    tb.add_argument("which", nargs="?", default="1", choices=("1", "2", "3", "errors", "signatures", "qubits"))
    tb.add_argument("--d", type=int, default=3)
    tb.add_argument("--d-max", type=int, default=11)
    tb.add_argument("--circuits", choices=("nonflag", "flag"), default="nonflag")
    tb.add_argument("--format", choices=("csv", "json"), default="csv")
    tb.add_argument("--out")
    tb.add_argument("--config")
    ap.leaves.append(tb)
    tb.set_defaults(func=cmd_table)

    s = sub.add_parser("sim", help="fault-injection audits and Monte Carlo")
    s.add_argument("protocol", choices=("ftec", "ftm", "ftp", "exrec", "tgate"))
    s.add_argument("--family", choices=("ccc", "rccc"), default="ccc")
    s.add_argument("--d", type=int, default=3)
    s.add_argument("--t", type=int)
    s.add_argument("--circuits", choices=("nonflag", "flag"), default="nonflag")
    s.add_argument("--exhaustive", action="store_true")
    s.add_argument("--samples", type=int, help="sampled t-fault injections")
    s.add_argument("--shots", type=int)
    s.add_argument("--p", type=float, nargs="+", default=[1e-3])
    s.add_argument("--overflow", type=int, help="extra rounds allowed beyond (t+1)^2")
    s.add_argument("--workers", type=int)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--trace", help="JSON-lines trace of a fault-free run")
    s.add_argument("--out")
    s.add_argument("--config")
    ap.leaves.append(s)
    s.set_defaults(func=cmd_sim)
    return ap


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        cfg = _config_defaults(argv)
        for leaf in parser.leaves:
            leaf.set_defaults(**cfg)
        args = parser.parse_args(argv)
        return args.func(args)
    except (InputError, DomainError) as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_INPUT
    except ResourceError as e:
        sys.stderr.write(f"resource ceiling reached after {e.progress} combinations: partial verdict, "
                         f"no violation found so far\n")
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
