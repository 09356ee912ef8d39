"""Built-in example games with their known negotiation rows, and the CNF gadget."""

from .ext import INF, NEG_INF, rat
from .game import Game, Requirement

CIRCLE, SQUARE, DIAMOND = "circle", "square", "diamond"


class UnknownExample(KeyError):
    pass


def make_game(name, players, owners, edges, initial=None):
    """owners: list of (vertex, player); edges: list of (u, v, reward tuple)."""
    vertices = [v for v, _ in owners]
    owner = {v: players.index(p) for v, p in owners}
    es = [(u, v) for u, v, _ in edges]
    rewards = {(u, v): tuple(rat(x) for x in r) for u, v, r in edges}
    return Game(players, vertices, owner, es, rewards, name=name, initial=initial)


def _rows(game, rows):
    return [Requirement(dict(zip(game.vertices, [rat(x) for x in row]))) for row in rows]


def _sans_spe():
    g = make_game("sans-spe", [CIRCLE, SQUARE],
                  [("a", CIRCLE), ("b", SQUARE), ("c", CIRCLE), ("d", SQUARE)],
                  [("a", "b", (0, 3)), ("a", "c", (0, 0)), ("b", "a", (0, 3)),
                   ("b", "d", (0, 0)), ("c", "c", (1, 1)), ("d", "d", (2, 2))], initial="a")
    rows = _rows(g, [[NEG_INF] * 4, [1, 2, 1, 2], [2, 2, 1, 2], [2, 3, 1, 2], [INF, INF, 1, 2]])
    return g, {"rows": rows, "stationary_from": 4, "fixed_point": {0: rows[4]}}


def _inf_spe():
    g = make_game("inf-spe", [CIRCLE, SQUARE], [("a", CIRCLE), ("b", SQUARE)],
                  [("a", "a", (0, 1)), ("a", "b", (2, 2)), ("b", "a", (2, 2)), ("b", "b", (1, 0))],
                  initial="a")
    return g, {"rows": None, "fixed_point": {0: _rows(g, [[1, 1]])[0]}}


def _propagation():
    g = make_game("propagation", [CIRCLE, SQUARE],
                  [("a", CIRCLE), ("b", SQUARE), ("c", CIRCLE), ("d", SQUARE)],
                  [("a", "a", (1, 1)), ("a", "b", (0, 0)), ("b", "a", (0, 0)), ("b", "c", (0, 0)),
                   ("c", "b", (0, 0)), ("c", "d", (0, 0)), ("d", "c", (0, 0)), ("d", "d", (0, 0))],
                  initial="a")
    rows = _rows(g, [[NEG_INF] * 4, [1, 0, 0, 0], [1, 1, 0, 0], [1, 1, 1, 0], [1, 1, 1, 1]])
    return g, {"rows": rows, "stationary_from": 4, "fixed_point": {0: rows[4]}}


def _not_stationary():
    z = (0, 0, 0)
    g = make_game("not-stationary", [CIRCLE, SQUARE, DIAMOND],
                  [("a", CIRCLE), ("b", SQUARE), ("c", DIAMOND), ("d", DIAMOND),
                   ("e", DIAMOND), ("f", DIAMOND)],
                  [("a", "b", (2, 2, 0)), ("a", "c", z), ("b", "a", (2, 2, 0)), ("b", "e", z),
                   ("c", "d", (0, 1, 0)), ("d", "c", (0, 1, 0)), ("d", "d", (2, 2, 0)),
                   ("e", "f", (1, 0, 0)), ("f", "e", (1, 0, 0)), ("f", "f", (2, 2, 0))], initial="a")
    rows = [Requirement.vacuous(g)]
    for n in range(1, 11):
        x = 2 - rat("1/%d" % 2 ** (n - 1))
        rows.append(_rows(g, [[x, x, 0, 0, 0, 0]])[0])
    return g, {"rows": rows, "stationary_from": None,
               "fixed_point": {0: _rows(g, [[2, 2, 0, 0, 0, 0]])[0]}}


def _strongly_connected_no_spe():
    z = (0, 0)
    g = make_game("strongly-connected-no-spe", [CIRCLE, SQUARE],
                  [("a", SQUARE), ("b", SQUARE), ("c", CIRCLE), ("d", CIRCLE),
                   ("e", CIRCLE), ("f", SQUARE)],
                  [("a", "b", z), ("a", "d", (3, 0)), ("b", "b", (1, 1)), ("b", "c", z),
                   ("c", "a", z), ("c", "c", (3, 0)), ("d", "a", (3, 0)), ("d", "e", z),
                   ("e", "e", (2, 2)), ("e", "f", z), ("f", "d", z), ("f", "f", (0, 4))],
                  initial="a")
    rows = _rows(g, [[NEG_INF] * 6, [1, 1, 3, 2, 2, 4], [2, 1, 3, 2, 2, 4], [2, 1, 3, 3, 2, 4],
                     [INF] * 6])
    return g, {"rows": rows, "stationary_from": 4, "fixed_point": {0: rows[4]}}


def _big():
    z = (0, 0)
    g = make_game("big", [CIRCLE, SQUARE],
                  [("a", CIRCLE), ("b", CIRCLE), ("c", SQUARE), ("d", CIRCLE), ("e", CIRCLE),
                   ("f", SQUARE), ("g", CIRCLE)],
                  [("a", "a", (1, 3)), ("a", "b", z), ("b", "a", z), ("b", "c", (2, 3)),
                   ("c", "b", (2, 3)), ("c", "c", z), ("c", "d", (1, 3)), ("c", "e", z),
                   ("d", "c", (1, 3)), ("d", "d", z), ("e", "c", z), ("e", "f", z),
                   ("f", "e", z), ("f", "g", z), ("g", "f", z), ("g", "g", (3, 2))], initial="a")
    rows = _rows(g, [[NEG_INF] * 7, [1, 1, 0, 0, 0, 0, 3], [1, 1, "3/2", 0, 0, 2, 3],
                     [1, 1, "3/2", "1/2", 3, 2, 3], [1, 1, 2, "1/2", 3, 2, 3],
                     [1, 1, 2, "2/3", 3, 2, 3]])
    return g, {"rows": rows, "stationary_from": 5, "fixed_point": {0: rows[5]}}


def sat_to_game(clauses, variables=None, name="sat"):
    """Game of the CNF reduction.  ``clauses``: lists of nonzero ints (DIMACS literals).

    Solver owns the clause states and the sink; each literal state belongs to its
    variable's player.  Returns (game, origin).
    """
    if not clauses or any(not c for c in clauses):
        raise ValueError("clauses must be nonempty")
    used = sorted({abs(l) for c in clauses for l in c})
    variables = variables or {k: "x%d" % k for k in used}
    solver = "solver"
    players = [solver] + [variables[k] for k in used]
    n = len(clauses)
    owners, edges = [], []

    def lit_state(i, l):
        return "C%d:%s%s" % (i + 1, "" if l > 0 else "~", variables[abs(l)])

    def rew(target):
        r = [1] * len(players)
        if target.startswith("C") and ":" in target and "~" not in target:
            r[players.index(target.split(":")[1])] = 0
        return tuple(r)

    for i, clause in enumerate(clauses):
        owners.append(("C%d" % (i + 1), solver))
        for l in clause:
            owners.append((lit_state(i, l), variables[abs(l)]))
    owners.append(("bot", solver))
    for i, clause in enumerate(clauses):
        here, nxt = "C%d" % (i + 1), "C%d" % ((i + 1) % n + 1)
        for l in clause:
            s = lit_state(i, l)
            if (here, s) not in [(u, v) for u, v, _ in edges]:
                edges.append((here, s, rew(s)))
            edges.append((s, nxt, rew(nxt)))
            if l < 0:
                edges.append((s, "bot", rew("bot")))
    bot = [1] * len(players)
    bot[0] = 0
    edges.append(("bot", "bot", tuple(bot)))
    seen, owners_u = set(), []
    for v, p in owners:
        if v not in seen:
            seen.add(v)
            owners_u.append((v, p))
    return make_game(name, players, owners_u, edges, initial="C1"), "C1"


def _sat_tautology():
    g, _ = sat_to_game([[k, -k] for k in range(1, 7)], name="sat-tautology")
    return g, {"rows": None, "fixed_point": {}}


EXAMPLES = {
    "sans-spe": _sans_spe,
    "inf-spe": _inf_spe,
    "propagation": _propagation,
    "not-stationary": _not_stationary,
    "big": _big,
    "strongly-connected-no-spe": _strongly_connected_no_spe,
    "sat-tautology": _sat_tautology,
}


def example(name):
    """Return (game, metadata) where metadata holds the known rows and fixed points."""
    try:
        return EXAMPLES[name]()
    except KeyError:
        raise UnknownExample(name) from None
