"""Command-line front end: JSON files in, one JSON result on stdout.

Exit status is 0 whenever a decision was reached (including obstructions and
undecided answers), 2 for unreadable input or bad flags, 3 when an internal
consistency check fails.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from fractions import Fraction

from . import serialize as ser
from .duality import check_relatively_prime, dual_presentation, membership_roundtrip
from .errors import BudgetExhausted, InvariantBreach, NotRelativelyPrime, RoundtripFailure, SolenoidError
from .exactnum import covering_degree, parse_rational, snf
from .flows import VerdictKind, decide_equivalence_2d
from .multipliers import continuity_probe, is_proper_multiplier
from .products import aut_group_form_2d, is_automorphism
from .supernatural import compare, proper_arrangement, to_supernatural
from .trajectories import density_search, write_samples_csv

log = logging.getLogger("solenoid")

EXIT_OK, EXIT_USAGE, EXIT_INTERNAL = 0, 2, 3


class UsageError(Exception):
    pass


def _load(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {path}: {exc}") from exc


def _rational(text):
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from exc


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, float) and math.isinf(obj):
        return "inf" if obj > 0 else "-inf"
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "value") and isinstance(getattr(obj, "value"), str):  # enums
        return obj.value
    return obj


# --- subcommands ----------------------------------------------------------

def cmd_compare(args):
    P = ser.solenoid_from_json(_load(args.P))
    Q = ser.solenoid_from_json(_load(args.Q))
    v = compare(P, Q)

    def side(w):
        out = {"holds": w.holds}
        if w.holds:
            out["excess"] = {str(p): e for p, e in w.excess.items()}
        else:
            out["obstruction"] = w.obstruction.to_json()
        return out

    return "ok", {"verdict": v.relation.value, "forward": side(v.forward), "backward": side(v.backward)}


def cmd_arrange(args):
    items = [ser.solenoid_from_json(_load(p)) for p in args.files]
    arr = proper_arrangement(items, args.terms)
    return "ok", {
        "terms": [list(t) for t in arr.prefixes],
        "coordinates": [ser.supernatural_to_json(s) for s in arr.supernaturals],
    }


def _pair(args):
    return ser.solenoid_from_json(_load(args.P)), ser.solenoid_from_json(_load(args.Q))


def _multiplier(args):
    if (args.r is None) == (args.r_flag is None):
        raise UsageError("give the multiplier once, positionally or as --r")
    return args.r if args.r is not None else args.r_flag


def cmd_mult_check(args):
    args.r = _multiplier(args)
    P, Q = _pair(args)
    v = is_proper_multiplier(args.r, P, Q)
    return ("ok" if v.proper else "obstruction"), {"r": str(args.r), **v.to_json()}


def cmd_mult_probe(args):
    args.r = _multiplier(args)
    P, Q = _pair(args)
    res = continuity_probe(args.r, P, Q, args.depth)
    payload = {"r": str(args.r), "depth": args.depth, **res.to_json()}
    payload["error_bound"] = 0.0  # distances are evaluated exactly at this depth
    return "ok", payload


def cmd_aut_check(args):
    A = ser.matrix_from_json(_load(args.A))
    P = ser.product_from_json(_load(args.solenoid))
    v = is_automorphism(A, P)
    return ("ok" if v else "obstruction"), v.to_json()


def cmd_aut_form(args):
    P, Q = _pair(args)
    return "ok", aut_group_form_2d(P, Q).to_json()


def cmd_flow_classify(args):
    P = ser.product_from_json(_load(args.solenoid))
    w, _ = ser.frequency_from_json(_load(args.omega))
    w2, _ = ser.frequency_from_json(_load(args.omega_prime))
    v = decide_equivalence_2d(P, w, w2, prime_bound=args.prime_bound)
    status = {
        VerdictKind.EQUIVALENT: "ok",
        VerdictKind.NOT_EQUIVALENT: "obstruction",
        VerdictKind.UNDECIDED: "undecided",
    }[v.kind]
    return status, v.to_json()


def cmd_flow_density(args):
    P = ser.product_from_json(_load(args.solenoid))
    w, values = ser.frequency_from_json(_load(args.omega))
    target = ser.point_from_json(_load(args.target))
    try:
        rep = density_search(P, w, target, args.eps, int(args.budget), values)
    except BudgetExhausted as exc:
        best = None
        if exc.best is not None:
            best = {"t": exc.best[0], "distance": exc.best[1]}
        return "undecided", {"reason": str(exc), "search_effort": exc.effort, "best": best, "error_bound": 0.0}
    if args.csv:
        write_samples_csv(rep, args.csv)
    return "ok", rep.to_json()


def cmd_snf(args):
    M = ser.matrix_from_json(_load(args.M))
    dec = snf(M)
    return "ok", {
        "U": ser.matrix_to_json(dec.U),
        "D": ser.matrix_to_json(dec.D),
        "V": ser.matrix_to_json(dec.V),
        "invariant_factors": list(dec.invariant_factors),
        "covering_degree": covering_degree(M),
    }


def cmd_dualize(args):
    G = ser.gens_from_json(_load(args.gens))
    rp = check_relatively_prime(G)
    if not rp:
        return "obstruction", {"relatively_prime": False, "generator": rp.generator, "index": rp.index}
    D = dual_presentation(G, args.depth)
    payload = {"relatively_prime": True, **ser.dual_to_json(D)}
    try:
        membership_roundtrip(G, args.depth)
        payload["roundtrip"] = True
    except RoundtripFailure as exc:
        payload["roundtrip"] = False
        payload["roundtrip_failure"] = exc.index
    return "ok", payload


# --- parser ---------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="solenoid", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("compare", help="order between two 1-solenoids")
    c.add_argument("P")
    c.add_argument("Q")
    c.set_defaults(func=cmd_compare)

    c = sub.add_parser("arrange", help="proper arrangement of several sequences")
    c.add_argument("files", nargs="+")
    c.add_argument("--terms", type=int, default=20)
    c.set_defaults(func=cmd_arrange)

    mult = sub.add_parser("mult", help="rational multipliers").add_subparsers(
        dest="action", required=True, parser_class=_Parser
    )
    for name, func in (("check", cmd_mult_check), ("probe", cmd_mult_probe)):
        c = mult.add_parser(name)
        c.add_argument("r", nargs="?", type=_rational, help="c/d; write negatives as --r=-c/d")
        c.add_argument("--r", dest="r_flag", type=_rational)
        c.add_argument("--from", dest="P", required=True, metavar="P.json")
        c.add_argument("--to", dest="Q", required=True, metavar="Q.json")
        if name == "probe":
            c.add_argument("--depth", type=int, default=12)
        c.set_defaults(func=func)

    aut = sub.add_parser("aut", help="automorphisms of products").add_subparsers(
        dest="action", required=True, parser_class=_Parser
    )
    c = aut.add_parser("check")
    c.add_argument("A")
    c.add_argument("--solenoid", required=True)
    c.set_defaults(func=cmd_aut_check)
    c = aut.add_parser("form")
    c.add_argument("P")
    c.add_argument("Q")
    c.set_defaults(func=cmd_aut_form)

    flow = sub.add_parser("flow", help="linear flows").add_subparsers(
        dest="action", required=True, parser_class=_Parser
    )
    c = flow.add_parser("classify")
    c.add_argument("--solenoid", required=True)
    c.add_argument("--omega", required=True)
    c.add_argument("--omega-prime", required=True)
    c.add_argument("--prime-bound", type=int, default=10_000)
    c.set_defaults(func=cmd_flow_classify)
    c = flow.add_parser("density")
    c.add_argument("--solenoid", required=True)
    c.add_argument("--omega", required=True)
    c.add_argument("--target", required=True)
    c.add_argument("--eps", type=float, required=True)
    c.add_argument("--budget", type=float, default=1e7)
    c.add_argument("--csv")
    c.set_defaults(func=cmd_flow_density)

    c = sub.add_parser("snf", help="Smith normal form and covering degree")
    c.add_argument("M")
    c.set_defaults(func=cmd_snf)

    c = sub.add_parser("dualize", help="product presentation of a presented group")
    c.add_argument("gens")
    c.add_argument("--depth", type=int, default=5)
    c.set_defaults(func=cmd_dualize)
    return p


def _configure_logging():
    level = {"quiet": logging.ERROR, "info": logging.INFO, "trace": logging.DEBUG}.get(
        os.environ.get("SOLENOID_LOG", "quiet").lower(), logging.ERROR
    )
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(message)s"))
    log.handlers[:] = [handler]
    log.setLevel(level)


def _emit(status, payload, out):
    doc = {"status": status, "payload": _jsonable(payload)}
    out.write(json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n")


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    _configure_logging()
    try:
        args = build_parser().parse_args(argv)
        log.info("running %s", " ".join(argv if argv is not None else sys.argv[1:]))
        status, payload = args.func(args)
    except InvariantBreach as exc:
        log.error("internal invariant breach: %s", exc)
        _emit("error", {"kind": "internal", "message": str(exc)}, out)
        return EXIT_INTERNAL
    except NotRelativelyPrime as exc:
        _emit("obstruction", {"relatively_prime": False, "generator": exc.generator, "index": exc.index}, out)
        return EXIT_OK
    except (UsageError, SolenoidError, ValueError, KeyError, TypeError, ZeroDivisionError) as exc:
        log.error("%s", exc)
        _emit("error", {"kind": "usage", "message": str(exc) or type(exc).__name__}, out)
        return EXIT_USAGE
    log.debug("status %s", status)
    _emit(status, payload, out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
