"""Zero-sum worst-case values by exhaustive memoryless strategy enumeration.

Both sides of a two-player mean-payoff game have optimal memoryless
strategies, so max over protagonist choices of min over coalition
choices of the lasso reached from v is the value.
"""

from fractions import Fraction
from itertools import product

from .cycles import reachable
from .game import Requirement


def _lasso_mean(game, choice, v, i):
    seen = {}
    path = []
    while v not in seen:
        seen[v] = len(path)
        path.append(v)
        v = choice[v]
    cyc = path[seen[v]:]
    steps = zip(cyc, cyc[1:] + cyc[:1])
    return sum((game.rewards[e][i] for e in steps), Fraction(0)) / len(cyc)


def antagonistic_value(game, v):
    i = game.owner[v]
    relevant = [u for u in game.vertices if u in reachable(game.succ, [v])]
    mine = [u for u in relevant if game.owner[u] == i]
    theirs = [u for u in relevant if game.owner[u] != i]
    best = None
    for pick in product(*(game.succ[u] for u in mine)):
        choice = dict(zip(mine, pick))
        worst = None
        for other in product(*(game.succ[u] for u in theirs)):
            choice.update(zip(theirs, other))
            m = _lasso_mean(game, choice, v, i)
            if worst is None or m < worst:
                worst = m
                if best is not None and worst <= best:
                    break
        if best is None or worst > best:
            best = worst
    return best


def antagonistic_requirement(game):
    return Requirement({v: antagonistic_value(game, v) for v in game.vertices})
