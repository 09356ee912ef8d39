"""Text formats: games, requirements and simplified DIMACS.

Game files are line based.  ``#`` starts a comment; blank lines are ignored.

    name sans-spe
    players circle square
    initial a
    vertex a circle
    vertex b square
    edge a b 0 3
    edge a c 0 0

An edge line carries one reward per player, in player order, each an
integer or ``p/q``.  Requirement files hold ``vertex value`` lines where the
value may also be ``inf`` or ``-inf``.
"""

import re

from .ext import fmt, rat
from .game import GameError, Requirement, validate_game

_KEYWORDS = ("name", "players", "initial", "vertex", "edge")
_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")
_EXT = re.compile(r"^([+-]?\d+(/\d+)?|[+-]?inf)$", re.IGNORECASE)


class FormatError(ValueError):
    """A syntax problem at a 1-based line and column."""

    def __init__(self, message, line=None, column=None, source="<input>"):
        self.line, self.column, self.source = line, column, source
        where = "%s:%d:%d: " % (source, line, column) if line is not None else ""
        super().__init__(where + message)


def _tokens(line):
    """Split on whitespace, keeping 1-based start columns."""
    body = line.split("#", 1)[0]
    return [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", body)]


def parse_game(text, source="<input>"):
    """Parse a game file.  Syntax errors carry line/column; invariant errors come from validation."""
    raw = {"players": [], "vertices": [], "edges": []}
    seen = {}
    where = {}
    for ln, line in enumerate(text.splitlines(), 1):
        toks = _tokens(line)
        if not toks:
            continue
        key, col = toks[0]
        args = toks[1:]
        if key not in _KEYWORDS:
            raise FormatError("unknown field %r" % key, ln, col, source)
        if key in ("name", "players", "initial"):
            if key in seen:
                raise FormatError("field %r given twice (first on line %d)" % (key, seen[key]),
                                  ln, col, source)
            seen[key] = ln
        if key == "name":
            if len(args) != 1:
                raise FormatError("name takes one token", ln, col, source)
            raw["name"] = args[0][0]
        elif key == "players":
            if not args:
                raise FormatError("players needs at least one name", ln, col, source)
            names = []
            for a, c in args:
                if a in names:
                    raise FormatError("duplicate player %r" % a, ln, c, source)
                names.append(a)
            raw["players"] = names
        elif key == "initial":
            if len(args) != 1:
                raise FormatError("initial takes one vertex", ln, col, source)
            raw["initial"] = args[0][0]
        elif key == "vertex":
            if len(args) != 2:
                raise FormatError("expected 'vertex ID OWNER'", ln, col, source)
            if args[0][0] in where:
                raise FormatError("vertex %r declared twice" % args[0][0], ln, args[0][1], source)
            where[args[0][0]] = ln
            raw["vertices"].append((args[0][0], args[1][0]))
        else:
            if len(args) < 2:
                raise FormatError("expected 'edge FROM TO REWARD...'", ln, col, source)
            rewards = []
            for tok, c in args[2:]:
                if not _RATIONAL.match(tok):
                    raise FormatError("reward %r is not an integer or p/q" % tok, ln, c, source)
                try:
                    rewards.append(rat(tok))
                except ValueError:
                    raise FormatError("reward %r has a zero denominator" % tok, ln, c, source) from None
            if "players" in seen and len(rewards) > len(raw["players"]):
                raise FormatError("edge has %d rewards for %d players"
                                  % (len(rewards), len(raw["players"])), ln, args[2][1], source)
            raw["edges"].append((args[0][0], args[1][0], rewards))
    if "players" not in seen:
        raise FormatError("missing 'players' line", source=source)
    game = validate_game(raw)
    if game.initial is not None and game.initial not in game.index:
        raise GameError("initial vertex %r is not declared" % game.initial)
    return game


def dump_game(game):
    """Canonical text; ``parse_game(dump_game(g)) == g`` and dumping again is identical."""
    lines = ["name %s" % game.name, "players %s" % " ".join(game.players)]
    if game.initial is not None:
        lines.append("initial %s" % game.initial)
    for v in game.vertices:
        lines.append("vertex %s %s" % (v, game.players[game.owner[v]]))
    for u, v in game.edges:
        lines.append("edge %s %s %s" % (u, v, " ".join(fmt(x) for x in game.rewards[(u, v)])))
    return "\n".join(lines) + "\n"


def parse_requirement(text, game, source="<input>"):
    """``vertex value`` lines, one per vertex of ``game``."""
    vals = {}
    for ln, line in enumerate(text.splitlines(), 1):
        toks = _tokens(line)
        if not toks:
            continue
        if len(toks) != 2:
            raise FormatError("expected 'VERTEX VALUE'", ln, toks[0][1], source)
        (v, c), (x, cx) = toks
        if v not in game.index:
            raise FormatError("unknown vertex %r" % v, ln, c, source)
        if v in vals:
            raise FormatError("vertex %r given twice" % v, ln, c, source)
        if not _EXT.match(x):
            raise FormatError("value %r is not p/q, inf or -inf" % x, ln, cx, source)
        vals[v] = rat(x)
    missing = [v for v in game.vertices if v not in vals]
    if missing:
        raise FormatError("no value for vertices %s" % ", ".join(missing), source=source)
    return Requirement({v: vals[v] for v in game.vertices})


def dump_requirement(lam, game):
    return "".join("%s %s\n" % (v, fmt(lam[v])) for v in game.vertices)


def parse_vector(text, n=None):
    """Comma separated ext-rationals, e.g. ``0,1/2,inf``."""
    parts = [p.strip() for p in str(text).split(",")]
    if any(not _EXT.match(p) for p in parts):
        raise ValueError("bad vector %r (expected comma separated p/q, inf, -inf)" % text)
    out = tuple(rat(p) for p in parts)
    if n is not None and len(out) != n:
        raise ValueError("vector %r has %d entries, expected %d" % (text, len(out), n))
    return out


def parse_dimacs(text, source="<input>"):
    """Simplified DIMACS: ``c`` comments, a ``p cnf V C`` header, clauses ended by 0.

    Returns the clauses as lists of nonzero ints.
    """
    header = None
    clauses, current = [], []
    for ln, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        if not s or s.startswith("c") or s.startswith("%"):
            continue
        if s.startswith("p"):
            parts = s.split()
            if header is not None:
                raise FormatError("second header", ln, 1, source)
            if len(parts) != 4 or parts[1] != "cnf" or not all(p.isdigit() for p in parts[2:]):
                raise FormatError("header must be 'p cnf VARS CLAUSES'", ln, 1, source)
            header = (int(parts[2]), int(parts[3]))
            continue
        if header is None:
            raise FormatError("clause before the 'p cnf' header", ln, 1, source)
        for tok, col in _tokens(s.replace("#", " ")):
            try:
                lit = int(tok)
            except ValueError:
                raise FormatError("literal %r is not an integer" % tok, ln, col, source) from None
            if lit == 0:
                if not current:
                    raise FormatError("empty clause", ln, col, source)
                clauses.append(current)
                current = []
            elif abs(lit) > header[0]:
                raise FormatError("variable %d exceeds the declared %d" % (abs(lit), header[0]),
                                  ln, col, source)
            else:
                current.append(lit)
    if header is None:
        raise FormatError("missing 'p cnf' header", source=source)
    if current:
        clauses.append(current)
    if len(clauses) != header[1]:
        raise FormatError("header announces %d clauses, found %d" % (header[1], len(clauses)),
                          source=source)
    return clauses


def dump_dimacs(clauses):
    n = max((abs(l) for c in clauses for l in c), default=0)
    lines = ["p cnf %d %d" % (n, len(clauses))]
    lines += [" ".join(map(str, c)) + " 0" for c in clauses]
    return "\n".join(lines) + "\n"
