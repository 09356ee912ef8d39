import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from mpnego.game import Game, Requirement
from mpnego.library import EXAMPLES, example

settings.register_profile("default", deadline=None, max_examples=50,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

SMALL_EXAMPLES = ["sans-spe", "inf-spe", "propagation", "not-stationary"]


def random_game(seed, max_vertices=5, max_players=3, rewards=range(-2, 3), min_players=1):
    """A game with every vertex having 1..3 successors and integer rewards."""
    rng = random.Random(seed)
    n = rng.randint(1, max_vertices)
    k = rng.randint(min_players, max_players)
    players = ["p%d" % j for j in range(k)]
    vertices = ["v%d" % j for j in range(n)]
    owner = {v: rng.randrange(k) for v in vertices}
    edges, rew = [], {}
    for u in vertices:
        for w in rng.sample(vertices, rng.randint(1, min(3, n))):
            edges.append((u, w))
            rew[(u, w)] = tuple(Fraction(rng.choice(list(rewards))) for _ in players)
    return Game(players, vertices, owner, edges, rew, name="rand%d" % seed)


def random_requirement(game, seed, infinite=True):
    rng = random.Random(seed)
    lo, hi = -3, 3
    out = {}
    for v in game.vertices:
        r = rng.random()
        if infinite and r < 0.15:
            out[v] = -float("inf")
        elif infinite and r < 0.2:
            out[v] = float("inf")
        else:
            out[v] = Fraction(rng.randint(lo * 4, hi * 4), 4)
    return Requirement(out)


@pytest.fixture(params=list(EXAMPLES))
def any_example(request):
    return example(request.param)


@pytest.fixture(params=SMALL_EXAMPLES)
def small_example(request):
    return example(request.param)
