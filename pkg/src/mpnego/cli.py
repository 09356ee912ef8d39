"""Command line front end.

Every command prints a table by default and a JSON document with ``--json``:

    {"command", "input_digest", "result", "certificate"?, "timings"}

Exit status: 0 success (or YES), 1 NO, 2 error.  A FILE argument may also be
``example:NAME`` to load a built-in game.  Vectors starting with a minus sign
need the ``--opt=VALUE`` form, e.g. ``--lower=-1,0``.
"""

import argparse
import hashlib
import json
import sys
import time
from fractions import Fraction

from .decision import ThresholdQuery, decide_threshold
from .ext import fmt, rat
from .fixpoint import least_fixed_point, negotiation_sequence
from .formats import (FormatError, dump_game, parse_dimacs, parse_game, parse_requirement,
                      parse_vector)
from .game import GameError, Requirement
from .library import EXAMPLES, UnknownExample, example, sat_to_game
from .nego import METHODS, nego_map
from .pwaffine import build_representation
from .report import plot_regions, plot_sequence, region_dump, to_dot
from .solver import BudgetExceeded
from .worstcase import antagonistic_requirement

EXIT_OK, EXIT_NO, EXIT_ERROR = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _load_text(path):
    if path.startswith("example:"):
        g, _ = example(path.split(":", 1)[1])
        text = dump_game(g)
        return text, text.encode()
    with open(path, "rb") as fh:
        data = fh.read()
    return data.decode("utf-8"), data


def _load_game(path, digests):
    text, data = _load_text(path)
    digests.append(data)
    return parse_game(text, source=path)


def _digest(chunks):
    h = hashlib.sha256()
    for c in chunks:
        h.update(hashlib.sha256(c).digest())
    return "sha256:" + h.hexdigest()


def _req_dict(game, lam):
    return {v: fmt(lam[v]) for v in game.vertices}


def _eps(s):
    x = rat(s)
    if not isinstance(x, Fraction) or x < 0:
        raise UsageError("epsilon must be a nonnegative rational, got %r" % s)
    return x


def _table(headers, rows):
    cols = [[str(h)] + [str(r[k]) for r in rows] for k, h in enumerate(headers)]
    width = [max(map(len, c)) for c in cols]
    line = lambda cells: "  ".join(c.ljust(w) for c, w in zip(cells, width)).rstrip()
    out = [line(headers), line(["-" * w for w in width])]
    out += [line([str(x) for x in r]) for r in rows]
    return "\n".join(out)


def _req_table(game, rows, labels):
    return _table(["" ] + list(game.vertices),
                  [[lab] + [fmt(r[v]) for v in game.vertices] for lab, r in zip(labels, rows)])


# each command returns (result, certificate or None, human text, exit code)

def cmd_validate(a, dig):
    g = _load_game(a.file, dig)
    res = {"name": g.name, "players": list(g.players), "vertices": len(g.vertices),
           "edges": len(g.edges), "initial": g.initial, "valid": True}
    text = _table(["field", "value"], [[k, v] for k, v in res.items()])
    return res, None, text, EXIT_OK


def cmd_worstcase(a, dig):
    g = _load_game(a.file, dig)
    lam = antagonistic_requirement(g)
    return {"requirement": _req_dict(g, lam)}, None, _req_table(g, [lam], ["worst case"]), EXIT_OK


def cmd_nego(a, dig):
    g = _load_game(a.file, dig)
    if a.lam:
        text, data = _load_text(a.lam)
        dig.append(data)
        lam = parse_requirement(text, g, source=a.lam)
    else:
        lam = Requirement.vacuous(g)
    img = nego_map(g, lam, method=a.method)
    res = {"lambda": _req_dict(g, lam), "nego": _req_dict(g, img), "method": a.method}
    return res, None, _req_table(g, [lam, img], ["lambda", "nego(lambda)"]), EXIT_OK


def cmd_seq(a, dig):
    g = _load_game(a.file, dig)
    seq = negotiation_sequence(g, a.max)
    res = {"rows": [_req_dict(g, r) for r in seq], "fixed_point_reached": seq.fixed_point_reached}
    text = _req_table(g, seq, ["lambda_%d" % k for k in range(len(seq))])
    text += "\nfixed point reached: %s" % ("yes" if seq.fixed_point_reached else "no")
    if a.plot:
        res["figure"] = plot_sequence(g, seq, a.plot)
        text += "\nfigure: %s" % a.plot
    return res, None, text, EXIT_OK


def cmd_fixpoint(a, dig):
    g = _load_game(a.file, dig)
    rep = least_fixed_point(g, _eps(a.eps), max_iter=a.max_iter)
    res = rep.as_dict()
    cert = None
    if rep.jump:
        cert = {"jump": _json_safe(rep.jump)}
    text = _req_table(g, [rep.lambda_star], ["lambda*"])
    text += "\nepsilon %s, method %s, iterations %d, verified %s" % (
        fmt(rep.epsilon), rep.method, rep.iterations_used, rep.verified)
    return res, cert, text, EXIT_OK


def cmd_decide(a, dig):
    g = _load_game(a.file, dig)
    origin = a.origin or g.initial
    if origin is None:
        raise UsageError("--from is required when the game has no initial vertex")
    n = g.n_players
    try:
        lower, upper = parse_vector(a.lower, n), parse_vector(a.upper, n)
    except ValueError as e:
        raise UsageError(str(e))
    q = ThresholdQuery(g, origin, lower, upper, _eps(a.eps), a.mode)
    cert = decide_threshold(q)
    d = cert.as_dict()
    res = {"answer": d.pop("answer"), "mode": q.mode, "origin": origin,
           "lower": [fmt(x) for x in lower], "upper": [fmt(x) for x in upper],
           "epsilon": fmt(q.epsilon)}
    if cert.fixed_point is not None:
        d["fixed_point"] = cert.fixed_point.as_dict()
    rows = [["answer", res["answer"]], ["examined (W, K)", cert.examined]]
    if cert.answer:
        rows += [["payoff", "(" + ", ".join(fmt(x) for x in cert.payoff) + ")"],
                 ["W", " ".join(cert.W)], ["K", " ".join(cert.K)]]
    else:
        rows.append(["note", cert.note])
    text = _table(["field", "value"], rows) + "\n" + _req_table(g, [cert.requirement], ["requirement"])
    return res, d, text, EXIT_OK if cert.answer else EXIT_NO


def cmd_gen(a, dig):
    if a.kind == "example":
        g, meta = example(a.name)
    else:
        text, data = _load_text(a.name)
        dig.append(data)
        g, _ = sat_to_game(parse_dimacs(text, source=a.name), name=a.game_name)
    out = dump_game(g)
    res = {"game": out, "name": g.name, "vertices": len(g.vertices)}
    if a.kind == "example" and meta.get("rows"):
        res["rows"] = [_req_dict(g, r) for r in meta["rows"]]
    if a.output:
        with open(a.output, "w") as fh:
            fh.write(out)
        res["written"] = a.output
    return res, None, out.rstrip("\n"), EXIT_OK


def cmd_export(a, dig):
    g = _load_game(a.file, dig)
    dot = to_dot(g)
    if a.output:
        with open(a.output, "w") as fh:
            fh.write(dot)
    return {"dot": dot}, None, dot.rstrip("\n"), EXIT_OK


def cmd_regions(a, dig):
    g = _load_game(a.file, dig)
    free = [v.strip() for v in a.free.split(",")]
    fixed = {}
    for item in a.fix or []:
        if "=" not in item:
            raise UsageError("--fix expects V=P/Q, got %r" % item)
        v, x = item.split("=", 1)
        if v not in g.index:
            raise UsageError("unknown vertex %r in --fix" % v)
        fixed[v] = rat(x)
    box = None
    if a.box:
        try:
            box = parse_vector(a.box, 2)
        except ValueError as e:
            raise UsageError(str(e))
    rep = build_representation(g, budget=a.budget)
    try:
        dump = region_dump(rep, free, fixed, box=box, steps=a.steps)
    except ValueError as e:
        raise UsageError(str(e))
    res = {"free": free, "fixed": {v: fmt(x) for v, x in fixed.items()},
           "box": [fmt(x) for x in dump["box"]], "steps": a.steps,
           "formulas": {v: [{"coeffs": [fmt(c) for c in co], "const": fmt(k), "hits": h}
                            for (co, k), h in fs] for v, fs in dump["formulas"].items()},
           "pieces": {v: [p.as_dict() for p in ps] for v, ps in dump["pieces"].items()}}
    rows = []
    for v, fs in dump["formulas"].items():
        for (co, k), h in fs:
            if h or a.all:
                rows.append([v, _formula(free, co, k), h])
    text = _table(["vertex", "formula", "grid hits"], rows)
    if a.plot:
        res["figure"] = plot_regions(dump, a.plot)
        text += "\nfigure: %s" % a.plot
    return res, None, text, EXIT_OK


def _formula(free, coeffs, const):
    terms = []
    for v, c in zip(free, coeffs):
        if c == 0:
            continue
        terms.append("%s*lam(%s)" % (fmt(c), v) if c != 1 else "lam(%s)" % v)
    if const != 0 or not terms:
        terms.append(fmt(const))
    return " + ".join(terms).replace("+ -", "- ")


def _json_safe(x):
    if isinstance(x, dict):
        return {str(k): _json_safe(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        return [_json_safe(v) for v in x]
    if isinstance(x, Fraction):
        return fmt(x)
    if isinstance(x, float):
        return fmt(x)
    return x if isinstance(x, (str, bool, int)) or x is None else str(x)


def build_parser():
    p = _Parser(prog="mpnego", description="Negotiation, fixed points and equilibrium "
                                          "threshold decisions for mean-payoff games.")
    p.add_argument("--json", action="store_true", help="print the JSON document")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("validate", help="check a game file")
    s.add_argument("file")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("worstcase", help="antagonistic value of every vertex")
    s.add_argument("file")
    s.set_defaults(func=cmd_worstcase)

    s = sub.add_parser("nego", help="one application of the negotiation function")
    s.add_argument("file")
    s.add_argument("--lambda", dest="lam", metavar="REQFILE")
    s.add_argument("--method", choices=METHODS, default="regions")
    s.set_defaults(func=cmd_nego)

    s = sub.add_parser("seq", help="negotiation sequence from the vacuous requirement")
    s.add_argument("file")
    s.add_argument("--max", type=int, required=True)
    s.add_argument("--plot", metavar="PNG")
    s.set_defaults(func=cmd_seq)

    s = sub.add_parser("fixpoint", help="least eps-fixed point, verified")
    s.add_argument("file")
    s.add_argument("--eps", default="0")
    s.add_argument("--max-iter", type=int, default=64)
    s.set_defaults(func=cmd_fixpoint)

    s = sub.add_parser("decide", help="NE / eps-SPE threshold problem")
    s.add_argument("file")
    s.add_argument("--mode", choices=["ne", "spe", "NE", "SPE"], default="spe")
    s.add_argument("--from", dest="origin")
    s.add_argument("--lower", required=True)
    s.add_argument("--upper", required=True)
    s.add_argument("--eps", default="0")
    s.set_defaults(func=cmd_decide)

    s = sub.add_parser("gen", help="generate a game file")
    s.add_argument("kind", choices=["sat", "example"])
    s.add_argument("name", help="CNF file for sat, example name for example")
    s.add_argument("-o", "--output")
    s.add_argument("--game-name", default="sat")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("export", help="export a game")
    s.add_argument("format", choices=["dot"])
    s.add_argument("file")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_export)

    s = sub.add_parser("regions", help="affine pieces over two free coordinates")
    s.add_argument("file")
    s.add_argument("--free", required=True, metavar="V1,V2")
    s.add_argument("--fix", action="append", metavar="V=P/Q")
    s.add_argument("--box", metavar="LO,HI")
    s.add_argument("--steps", type=int, default=12)
    s.add_argument("--budget", type=int, default=100_000)
    s.add_argument("--all", action="store_true", help="also list formulas with no grid hits")
    s.add_argument("--plot", metavar="PNG")
    s.set_defaults(func=cmd_regions)
    return p


def run(argv=None):
    """Run one command; returns (exit code, JSON document, human text)."""
    argv = list(sys.argv[1:] if argv is None else argv)
    t0 = time.perf_counter()
    dig = []
    command = next((x for x in argv if not x.startswith("-")), None)
    argv = [x for x in argv if x != "--json"]   # accepted anywhere on the line
    try:
        args = build_parser().parse_args(argv)
        command = args.command
        result, cert, text, code = args.func(args, dig)
    except (UsageError, FormatError, GameError, UnknownExample, BudgetExceeded,
            ValueError, OSError) as e:
        kind = type(e).__name__
        msg = str(e) if not isinstance(e, UnknownExample) else \
            "unknown example %s (known: %s)" % (e, ", ".join(EXAMPLES))
        doc = {"command": command, "input_digest": _digest(dig),
               "result": {"error": kind, "message": msg},
               "timings": {"total_s": round(time.perf_counter() - t0, 6)}}
        return EXIT_ERROR, doc, "error (%s): %s" % (kind, msg)
    doc = {"command": command, "input_digest": _digest(dig), "result": _json_safe(result)}
    if cert is not None:
        doc["certificate"] = _json_safe(cert)
    doc["timings"] = {"total_s": round(time.perf_counter() - t0, 6)}
    return code, doc, text


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    code, doc, text = run(argv)
    if "--json" in argv:
        print(json.dumps(doc, indent=2))
    elif code == EXIT_ERROR:
        print(text, file=sys.stderr)
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
