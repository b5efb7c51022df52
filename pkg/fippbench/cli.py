"""
Batch command line over the workbench.

Exit codes:
    0: verified or decided
    1: fails, violated or refuted
    2: unknown or budget exhausted
   64: usage error
"""
import argparse
import logging
import sys
from typing import Callable, Dict, List, Optional, Tuple

from . import codec, cub, fipp, setfn, sigma00, storage, streams
from .fan import NeighborhoodViolation
from .fipp import CounterexampleViolation
from .util import parse_env, parse_ev_periodic, parse_finset, parse_infinite_set, parse_nats, parse_setfn

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_UNKNOWN = 2
EXIT_USAGE = 64

GRAMMAR = """\
Input formats:
  set function   const:C | parity | coloring:PREFIX;PERIOD:N
  function       PREFIX;PERIOD          e.g. "1,1,0;1" or ";0,1"
  infinite set   evens | odds | naturals | PREFIX;PERIOD over {0,1}
  sequence/set   comma separated naturals, e.g. "0,2,5" ("" is empty)
  bindings       NAME=NATURAL[,NAME=NATURAL...]
Formulas:
  formula := quant | iff
  quant   := ("forall" | "exists") var "<" term "." formula
  iff     := imp ("<->" imp)*      imp := or ("->" or)*
  or      := and ("|" and)*        and := not ("&" not)*
  not     := "!" not | quant | atom | "(" formula ")"
  atom    := term ("in f" | "=" term | "<=" term | "<" term)
  term    := prod ("+" prod)*      prod := factor ("*" factor)*
  factor  := nat | var | "pair(" term "," term ")" | "(" term ")"
"""

# f(y) = 0 -> f(x) = 0: no uniform bound on x over [1]^ℕ
NOCONT_FORMULA = "pair(w,0) in f -> pair(x,0) in f"

Outcome = Tuple[int, Dict, List[str]]


class UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _nat(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a natural: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"not a natural: {text!r}")
    return value


# fipp

def _cmd_fipp_verify_ce(args, settings) -> Outcome:
    report = fipp.verify_fipp1_ce(args.max_k)
    payload = fipp.report_to_dict(report)
    if args.plot:
        from .report import plot_counterexample
        plot_counterexample(payload, args.plot)
    lines = [f"k={row['k']:>3}  sizes={row['sizes']}  F={row['F']}" for row in payload["rows"][:16]]
    if len(payload["rows"]) > 16:
        lines.append(f"... {len(payload['rows']) - 16} more rows")
    lines.append(f"no color class is big for k <= {args.max_k}: the coloring family refutes FIPP1")
    return EXIT_OK, payload, lines


def _cmd_fipp_check(args, settings) -> Outcome:
    F = parse_setfn(args.setfn)
    threads = settings.threads(args.threads)
    budget = args.budget if args.budget is not None else settings["budget"]
    if args.principle == 2:
        result = fipp.fipp2_check(args.colors, F, args.k, args.strategy, threads)
    else:
        result = fipp.fipp3_check(args.colors, F, args.k, budget, threads)
    report = fipp.check_report(f"FIPP{args.principle}", args.colors, F, args.k, result)
    payload = fipp.report_to_dict(report, settings["max_witnesses"])
    code = {"holds": EXIT_OK, "fails": EXIT_FAIL}.get(report.verdict, EXIT_UNKNOWN)
    line = f"FIPP{args.principle} n={args.colors} F={F.name} k={args.k}: {report.verdict}"
    if report.counterexample:
        line += f" (coloring {report.counterexample['coloring']})"
    return code, payload, [line]


def _cmd_fipp_threshold(args, settings) -> Outcome:
    F = parse_setfn(args.setfn)
    threads = settings.threads(args.threads)
    budget = args.budget if args.budget is not None else settings["budget"]
    if args.principle == 2:
        result = fipp.fipp2_threshold(args.colors, F, args.max_k, args.strategy, threads)
    else:
        result = fipp.fipp3_threshold(args.colors, F, args.max_k, budget, threads)
    report = fipp.threshold_report(f"FIPP{args.principle}", args.colors, F, args.max_k, result)
    payload = fipp.report_to_dict(report)
    payload["strategy"] = args.strategy if args.principle == 2 else "cylinder"
    if isinstance(result, fipp.Least):
        return EXIT_OK, payload, [f"least k = {result.k}"]
    if isinstance(result, fipp.UnknownAt):
        return EXIT_UNKNOWN, payload, [f"oracle undecided at k = {result.k}"]
    return EXIT_UNKNOWN, payload, [f"no threshold up to k = {args.max_k}"]


def _cmd_fipp_grid(args, settings) -> Outcome:
    rows = fipp.threshold_grid(parse_nats(args.colors), parse_nats(args.consts), args.strategy,
                               settings.threads(args.threads))
    if args.plot:
        from .report import plot_thresholds
        plot_thresholds(rows, args.plot)
    agree = all(row["threshold"] == row["expected"] for row in rows)
    payload = {"principle": "FIPP2", "strategy": args.strategy, "rows": rows, "matches_pigeonhole": agree}
    lines = [f"n={row['n']} c={row['c']}: threshold {row['threshold']} (expected {row['expected']})"
             for row in rows]
    return (EXIT_OK if agree else EXIT_FAIL), payload, lines


# setfn

def _stability_payload(F: setfn.SetFunction, seq_name: str, depth: int, verdict) -> Outcome:
    payload = {"setfn": F.name, "sequence": seq_name, "depth": depth}
    if isinstance(verdict, setfn.Stable):
        payload.update(verdict="stable", index=verdict.index, value=verdict.value)
        return EXIT_OK, payload, [f"stable from index {verdict.index} with value {verdict.value}"]
    if isinstance(verdict, setfn.Violated):
        payload.update(verdict="violated", witness=[verdict.i, verdict.j],
                       values=[verdict.value_i, verdict.value_j])
        return EXIT_FAIL, payload, [f"violated: F changes from {verdict.value_i} to {verdict.value_j} "
                                    f"between indices {verdict.i} and {verdict.j}"]
    payload.update(verdict="inconclusive")
    return EXIT_UNKNOWN, payload, [f"inconclusive at depth {depth}"]


def _cmd_setfn_eval(args, settings) -> Outcome:
    F = parse_setfn(args.setfn)
    s = codec.encode_seq(parse_nats(args.seq))
    value = setfn.eval_setfn(F, s)
    payload = {"setfn": F.name, "sequence": list(s.items), "set": list(codec.set_of(s).elements), "value": value}
    return EXIT_OK, payload, [f"F({codec.set_of(s)}) = {value}"]


def _cmd_setfn_probe_as(args, settings) -> Outcome:
    F = parse_setfn(args.setfn)
    A = parse_infinite_set(args.set)
    depth = args.depth if args.depth is not None else settings["depth"]
    chain = streams.padded_chain(A, parse_nats(args.extra), args.stride, args.lag)
    return _stability_payload(F, chain.name, depth, setfn.probe_AS(F, chain, depth))


def _cmd_setfn_probe_asnis(args, settings) -> Outcome:
    F = parse_setfn(args.setfn)
    depth = args.depth if args.depth is not None else settings["depth"]
    if args.sequence == "asnis-parity":
        seq = setfn.asnis_witness_parity()
    elif args.sequence == "window":
        seq = streams.window_sequence()
    else:
        if not args.set:
            raise ValueError("--sequence chain needs --set")
        seq = streams.canonical_chain_sequence(parse_infinite_set(args.set))
    return _stability_payload(F, seq.name, depth, setfn.probe_ASNIS(F, seq, depth))


def _cmd_setfn_stability_point(args, settings) -> Outcome:
    F = parse_setfn(args.setfn)
    A = parse_infinite_set(args.set)
    budget = args.budget if args.budget is not None else settings["budget"]
    result = setfn.stability_point(F, A, budget)
    payload = {"setfn": F.name, "set": str(A), "budget": budget}
    if isinstance(result, setfn.Point):
        payload.update(verdict="point", value=result.value, d=result.d)
        return EXIT_OK, payload, [f"F is {result.value} around A ∩ [{result.d}]"]
    payload.update(verdict="not-found")
    return EXIT_UNKNOWN, payload, [f"no stability point up to {budget}"]


def _cmd_setfn_limit(args, settings) -> Outcome:
    F = parse_setfn(args.setfn)
    A = parse_infinite_set(args.set)
    depth = args.depth if args.depth is not None else settings["depth"]
    result = setfn.limit_value(F, A, depth)
    payload = {"setfn": F.name, "set": str(A), "depth": depth}
    if isinstance(result, setfn.Value):
        payload.update(verdict="value", value=result.value)
        return EXIT_OK, payload, [f"F(A) = {result.value}"]
    payload.update(verdict="unstable")
    return EXIT_FAIL, payload, [f"F has no limit along A up to depth {depth}"]


def _cmd_setfn_cylinder(args, settings) -> Outcome:
    F = parse_setfn(args.setfn)
    S = parse_finset(args.subset)
    budget = args.budget if args.budget is not None else settings["budget"]
    verdict = setfn.cylinder_bigness(F, S, args.k, budget)
    payload = {"setfn": F.name, "subset": list(S.elements), "k": args.k}
    if isinstance(verdict, setfn.AllBig):
        payload["verdict"] = "all-big"
        return EXIT_OK, payload, [f"every A with A ∩ [{args.k}] = {S} has |A| > F(A)"]
    if isinstance(verdict, setfn.RefutedBy):
        payload.update(verdict="refuted", witness=list(verdict.witness.items))
        return EXIT_FAIL, payload, [f"refuted by {codec.set_of(verdict.witness)}"]
    payload.update(verdict="unknown", reason=verdict.reason)
    return EXIT_UNKNOWN, payload, [f"unknown: {verdict.reason}"]


# sigma00

def _cmd_sigma00_eval(args, settings) -> Outcome:
    env = parse_env(args.env)
    phi = sigma00.parse(args.formula, env.keys())
    f = parse_ev_periodic(args.f)
    value = sigma00.evaluate(phi, env, f)
    payload = {"formula": sigma00.pretty(phi), "f": str(f), "env": env, "value": value}
    return EXIT_OK, payload, [str(value).lower()]


def _cmd_sigma00_modulus(args, settings) -> Outcome:
    phi = sigma00.parse(args.formula)
    y = sigma00.modulus(phi, args.z)
    payload = {"formula": sigma00.pretty(phi), "z": args.z, "modulus": y}
    return EXIT_OK, payload, [str(y)]


def _cmd_sigma00_compile_bar(args, settings) -> Outcome:
    env = parse_env(args.env)
    phi = sigma00.parse(args.formula, env.keys())
    bar = sigma00.compile_bar(phi)
    bound = bar.certified_bound(env)
    payload = {
        "formula": sigma00.pretty(phi),
        "threshold": sigma00.pretty_term(bar.threshold),
        "threshold_value": bar.threshold_value(env),
        "certified_bound": bound,
    }
    lines = [f"threshold {payload['threshold']} = {payload['threshold_value']}, certified bound {bound}"]
    if args.f:
        f = parse_ev_periodic(args.f)
        decisions = [bar.decide(f.values(m), env) for m in range(bound + 1)]
        payload.update(f=str(f), decisions=decisions, holds=all(decisions))
        lines.append(f"C(f̄m) for m <= {bound}: " + "".join("1" if d else "0" for d in decisions))
    return EXIT_OK, payload, lines


# cub

def _fan_payload(result, pred: cub.SecurePrefix) -> Outcome:
    payload = {"predicate": pred.name, "n": pred.n, "telemetry": result.telemetry}
    if isinstance(result, cub.AllSecured):
        payload.update(verdict="all-secured", z=result.z, depth=result.depth)
        return EXIT_OK, payload, [f"all secured: witnesses <= {result.z} by depth {result.depth}"]
    payload.update(verdict="budget-exceeded", path=list(result.path))
    return EXIT_UNKNOWN, payload, [f"unsecured prefix at budget: {codec.render_seq(result.path)}"]


def _cmd_cub_fan_bound(args, settings) -> Outcome:
    F = parse_setfn(args.setfn)
    depth = args.depth if args.depth is not None else settings["depth"]
    budget = args.budget if args.budget is not None else settings["budget"]
    if args.adapter == "fipp2":
        pred = cub.fipp2_secure_adapter(args.colors, F)
    else:
        pred = cub.fipp3_secure_adapter(args.colors, F, budget)
    return _fan_payload(cub.fan_bound(pred, depth), pred)


def _cmd_cub_formula_bound(args, settings) -> Outcome:
    xvars = [v.strip() for v in args.xvars.split(",") if v.strip()]
    phi = sigma00.parse(args.formula, xvars)
    depth = args.depth if args.depth is not None else settings["depth"]
    pred = cub.formula_secure_adapter(phi, args.colors, xvars)
    code, payload, lines = _fan_payload(cub.fan_bound(pred, depth), pred)
    payload["formula"] = sigma00.pretty(phi)
    return code, payload, lines


def _cmd_cub_pi01_search(args, settings) -> Outcome:
    phi = sigma00.parse(args.formula, [args.xvar, args.wvar])
    family = cub.formula_family(phi, args.xvar, args.wvar)
    result = cub.pi01_bound_search(family, args.colors, args.x_max, args.w_max, args.depth)
    payload = {"formula": sigma00.pretty(phi), "n": args.colors, "x_max": args.x_max, "w_max": args.w_max,
               "depth": args.depth}
    if isinstance(result, cub.Found):
        payload.update(verdict="found", z=result.z, certified=False)
        return EXIT_OK, payload, [f"bound z = {result.z} within these budgets (not a proof)"]
    if isinstance(result, cub.Refuted):
        payload.update(verdict="refuted", path=list(result.path), failures=[list(p) for p in result.failures])
        return EXIT_FAIL, payload, [f"every x <= {args.x_max} fails along {codec.render_seq(result.path)}"]
    payload.update(verdict="unknown", reason=result.reason)
    return EXIT_UNKNOWN, payload, [f"unknown: {result.reason}"]


def _cmd_cub_nocont_demo(args, settings) -> Outcome:
    f = cub.nocont_demo(args.z)
    refuted = cub.refutes_bound(f, args.z, args.z + 1)
    payload = {"z": args.z, "f": str(f), "first_zero": args.z + 1, "refutes_bound": refuted}
    return EXIT_FAIL, payload, [f"f = {f}: f({args.z + 1}) = 0 but f(x) = 1 for every x <= {args.z}"]


# codec

def _cmd_codec_encode(args, settings) -> Outcome:
    s = codec.encode_seq(parse_nats(args.seq))
    payload = {"sequence": list(s.items), "code": s.value}
    return EXIT_OK, payload, [str(s.value)]


def _cmd_codec_decode(args, settings) -> Outcome:
    items = codec.decode_seq(args.code)
    payload = {"code": args.code, "sequence": items}
    return EXIT_OK, payload, [codec.render_seq(items)]


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--json", action="store_true", help="Print the JSON report instead of text")
    parser.add_argument("--output", metavar="FILE", help="Also write the JSON report to FILE (old file kept as FILE.bak)")
    parser.add_argument("--threads", type=_nat, help="Worker threads (overrides FIPP_THREADS and settings)")
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging on stderr")


def _leaf(group, name: str, handler: Callable, help_text: str) -> argparse.ArgumentParser:
    p = group.add_parser(name, help=help_text, description=help_text)
    _common(p)
    p.set_defaults(handler=handler)
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="fippbench", description="Finitary infinite pigeonhole workbench",
                             epilog=GRAMMAR, formatter_class=argparse.RawDescriptionHelpFormatter)
    top = parser.add_subparsers(dest="module", metavar="MODULE")
    top.required = True

    fp = top.add_parser("fipp", help="Colorings, FIPP checks and thresholds").add_subparsers(dest="op", metavar="OP")
    fp.required = True
    p = _leaf(fp, "verify-ce", _cmd_fipp_verify_ce, "Verify the parity counterexample to FIPP1")
    p.add_argument("--max-k", type=_nat, default=7)
    p.add_argument("--plot", metavar="PNG", help="Save a chart of class sizes against F")
    for name, handler in (("check", _cmd_fipp_check), ("threshold", _cmd_fipp_threshold)):
        p = _leaf(fp, name, handler, f"FIPP2 / FIPP3 {name}")
        p.add_argument("--principle", type=int, choices=(2, 3), default=2)
        p.add_argument("--colors", type=_nat, required=True, help="n: colorings map into [n]")
        p.add_argument("--setfn", required=True)
        if name == "check":
            p.add_argument("--k", type=_nat, required=True)
        else:
            p.add_argument("--max-k", type=_nat, required=True)
        p.add_argument("--strategy", choices=("enumerate", "fan"), default="enumerate")
        p.add_argument("--budget", type=_nat, help="Refutation budget of the FIPP3 cylinder search")
    p = _leaf(fp, "grid", _cmd_fipp_grid, "FIPP2 thresholds of const:c against (n+1)c")
    p.add_argument("--colors", default="0,1,2", help="Values of n")
    p.add_argument("--consts", default="0,1,2,3", help="Values of c")
    p.add_argument("--strategy", choices=("enumerate", "fan"), default="enumerate")
    p.add_argument("--plot", metavar="PNG", help="Save a chart of the grid")

    sp = top.add_parser("setfn", help="Set functions and stability probes").add_subparsers(dest="op", metavar="OP")
    sp.required = True
    p = _leaf(sp, "eval", _cmd_setfn_eval, "Evaluate F on a sequence code")
    p.add_argument("--setfn", required=True)
    p.add_argument("--seq", required=True)
    p = _leaf(sp, "probe-as", _cmd_setfn_probe_as, "Probe F along a nested chain")
    p.add_argument("--setfn", required=True)
    p.add_argument("--set", default="naturals")
    p.add_argument("--extra", default="", help="Finite set joined to every chain member")
    p.add_argument("--stride", type=int, default=1)
    p.add_argument("--lag", type=_nat, default=0)
    p.add_argument("--depth", type=_nat)
    p = _leaf(sp, "probe-asnis", _cmd_setfn_probe_asnis, "Probe F along a weakly convergent sequence")
    p.add_argument("--setfn", required=True)
    p.add_argument("--sequence", choices=("asnis-parity", "window", "chain"), default="asnis-parity")
    p.add_argument("--set")
    p.add_argument("--depth", type=_nat)
    for name, handler, text in (("stability-point", _cmd_setfn_stability_point, "Search a stability point of F at A"),
                                ("limit", _cmd_setfn_limit, "Limit of F along the canonical chain of A")):
        p = _leaf(sp, name, handler, text)
        p.add_argument("--setfn", required=True)
        p.add_argument("--set", required=True)
        p.add_argument("--budget" if name == "stability-point" else "--depth", type=_nat)
    p = _leaf(sp, "cylinder", _cmd_setfn_cylinder, "Is every A with A ∩ [k] = S big for F?")
    p.add_argument("--setfn", required=True)
    p.add_argument("--subset", required=True)
    p.add_argument("--k", type=_nat, required=True)
    p.add_argument("--budget", type=_nat)

    zp = top.add_parser("sigma00", help="Bounded formulas").add_subparsers(dest="op", metavar="OP")
    zp.required = True
    p = _leaf(zp, "eval", _cmd_sigma00_eval, "Evaluate a formula at f")
    p.add_argument("--formula", required=True)
    p.add_argument("--f", required=True, help="PREFIX;PERIOD")
    p.add_argument("--env", action="append")
    p = _leaf(zp, "modulus", _cmd_sigma00_modulus, "Modulus of continuity at z")
    p.add_argument("--formula", required=True)
    p.add_argument("--z", type=_nat, default=0)
    p = _leaf(zp, "compile-bar", _cmd_sigma00_compile_bar, "Bar form C with A(f) <-> forall m C(f̄m)")
    p.add_argument("--formula", required=True)
    p.add_argument("--f", help="Decide C along this function")
    p.add_argument("--env", action="append")

    cp = top.add_parser("cub", help="Uniform bounds over [n]^N").add_subparsers(dest="op", metavar="OP")
    cp.required = True
    p = _leaf(cp, "fan-bound", _cmd_cub_fan_bound, "Fan search over a FIPP securing predicate")
    p.add_argument("--adapter", choices=("fipp2", "fipp3"), default="fipp2")
    p.add_argument("--colors", type=_nat, required=True)
    p.add_argument("--setfn", required=True)
    p.add_argument("--depth", type=_nat)
    p.add_argument("--budget", type=_nat)
    p = _leaf(cp, "formula-bound", _cmd_cub_formula_bound, "Fan search for a uniform bound of exists x A(f, x)")
    p.add_argument("--formula", required=True)
    p.add_argument("--xvars", default="x")
    p.add_argument("--colors", type=_nat, default=1)
    p.add_argument("--depth", type=_nat)
    p = _leaf(cp, "pi01-search", _cmd_cub_pi01_search, "Budgeted bound search for exists x forall w A(f, x, w)")
    p.add_argument("--formula", default=NOCONT_FORMULA)
    p.add_argument("--xvar", default="x")
    p.add_argument("--wvar", default="w")
    p.add_argument("--colors", type=_nat, default=1)
    p.add_argument("--x-max", type=_nat, default=3)
    p.add_argument("--w-max", type=_nat, default=3)
    p.add_argument("--depth", type=_nat, default=10)
    p = _leaf(cp, "nocont-demo", _cmd_cub_nocont_demo, "Coloring that defeats the candidate bound z")
    p.add_argument("--z", type=_nat, required=True)

    dp = top.add_parser("codec", help="Sequence codes").add_subparsers(dest="op", metavar="OP")
    dp.required = True
    p = _leaf(dp, "encode", _cmd_codec_encode, "Code of a finite sequence")
    p.add_argument("--seq", required=True)
    p = _leaf(dp, "decode", _cmd_codec_decode, "Sequence of a code")
    p.add_argument("--code", type=_nat, required=True)
    return parser


def _usage_error(parser: argparse.ArgumentParser, message: str) -> int:
    print(parser.format_usage().rstrip(), file=sys.stderr)
    print(f"error: {message}", file=sys.stderr)
    print(GRAMMAR, file=sys.stderr)
    return EXIT_USAGE


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        return _usage_error(parser, str(e))
    except SystemExit as e:
        # --help
        return EXIT_OK if not e.code else EXIT_USAGE

    settings = storage.load_settings()
    try:
        logging.getLogger().setLevel(logging.DEBUG if args.verbose else str(settings["log_level"]).upper())
    except ValueError:
        logger.warning("Unknown log_level %r in settings", settings["log_level"])
    logger.debug("running %s %s", args.module, args.op)

    try:
        code, payload, lines = args.handler(args, settings)
    except (NeighborhoodViolation, CounterexampleViolation) as e:
        logger.error("%s", e)
        return EXIT_FAIL
    except ValueError as e:
        return _usage_error(parser, str(e))

    if args.json:
        print(storage.dump_report(payload))
    else:
        for line in lines:
            print(line)
    if args.output:
        storage.save_report(payload, args.output)
    return code
