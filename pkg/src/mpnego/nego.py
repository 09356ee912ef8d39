"""The negotiation function: nego(lam)(v) for one vertex or the whole map.

Three independent routes compute the same value:

``regions``
    threshold regions on the bound-vector quotient (default, fast);
``search``
    branch and bound over memoryless Challenger strategies on the quotient;
``enumerate``
    the literal max-min over every strategy of the subset arena (tiny games).
"""

from .arena import nego_value_enumerated
from .game import Requirement, check_requirement
from .quotient import nego_values_for
from .solver import nego_value_fast

METHODS = ("regions", "search", "enumerate")


def _req(game, lam):
    lam = lam if isinstance(lam, Requirement) else Requirement(lam)
    check_requirement(game, lam)
    return lam


def nego_value(game, lam, v, method="regions", budget=None):
    """Best payoff the owner of ``v`` can enforce against lam-rational opponents."""
    lam = _req(game, lam)
    if method == "regions":
        return nego_values_for(game, lam, game.owner[v])[0][v]
    if method == "search":
        return nego_value_fast(game, lam, v) if budget is None else \
            nego_value_fast(game, lam, v, node_budget=budget)
    if method == "enumerate":
        return nego_value_enumerated(game, lam, v) if budget is None else \
            nego_value_enumerated(game, lam, v, budget=budget)
    raise ValueError("unknown method %r (expected one of %s)" % (method, ", ".join(METHODS)))


def nego_map(game, lam, method="regions", budget=None):
    """nego(lam) at every vertex, each vertex judged by its owner."""
    lam = _req(game, lam)
    if method != "regions":
        return Requirement({v: nego_value(game, lam, v, method, budget) for v in game.vertices})
    out = {}
    for i in range(game.n_players):
        if game.vertices_of(i):
            out.update(nego_values_for(game, lam, i)[0])
    return Requirement({v: out[v] for v in game.vertices})
