"""Multiplayer mean-payoff games, requirements and lasso plays."""

from dataclasses import dataclass
from fractions import Fraction

from .ext import INF, NEG_INF, fmt, rat


class GameError(ValueError):
    """Base class for malformed games.  ``violations`` lists every problem found."""

    def __init__(self, message, violations=None):
        super().__init__(message)
        self.violations = violations if violations is not None else [message]


class VertexWithoutSuccessor(GameError):
    pass


class UnknownOwner(GameError):
    pass


class DanglingEdge(GameError):
    pass


class MissingReward(GameError):
    pass


class DuplicateEdge(GameError):
    pass


class InvalidLasso(ValueError):
    pass


@dataclass(frozen=True)
class PlayerId:
    index: int
    name: str


class Game:
    """A finite game graph with one owner per vertex and one reward vector per edge.

    Vertices keep their declaration order; that order is the canonical
    ordering used everywhere (cycle rotation, arena states, output).
    """

    def __init__(self, players, vertices, owner, edges, rewards, name="game", initial=None):
        self.name = name
        self.players = tuple(players)
        self.vertices = tuple(vertices)
        self.owner = dict(owner)
        self.edges = tuple(edges)
        self.rewards = {e: tuple(rewards[e]) for e in self.edges}
        self.initial = initial
        self.index = {v: k for k, v in enumerate(self.vertices)}
        self.succ = {v: [] for v in self.vertices}
        for u, v in self.edges:
            self.succ[u].append(v)
        self.succ = {v: tuple(ws) for v, ws in self.succ.items()}

    @property
    def n_players(self):
        return len(self.players)

    def player_ids(self):
        return [PlayerId(k, p) for k, p in enumerate(self.players)]

    def player_index(self, p):
        if isinstance(p, PlayerId):
            return p.index
        if isinstance(p, int):
            return p
        return self.players.index(p)

    def vertices_of(self, i):
        return [v for v in self.vertices if self.owner[v] == i]

    def reward(self, u, v, i):
        return self.rewards[(u, v)][i]

    def reward_bounds(self, i):
        vals = [r[i] for r in self.rewards.values()]
        return min(vals), max(vals)

    def __eq__(self, other):
        return (isinstance(other, Game) and self.players == other.players
                and self.vertices == other.vertices and self.owner == other.owner
                and self.edges == other.edges and self.rewards == other.rewards)

    def __hash__(self):
        return hash((self.players, self.vertices, self.edges))

    def __repr__(self):
        return "Game(%r, %d vertices, %d edges)" % (self.name, len(self.vertices), len(self.edges))


def validate_game(raw):
    """Build a Game from a plain description, reporting every violation at once.

    ``raw`` has keys ``players`` (names), ``vertices`` (pairs id, owner name),
    ``edges`` (triples from, to, reward list) and optionally ``name``/``initial``.
    The raised exception has the class of the first violation and carries the
    full list in ``.violations``.
    """
    players = [str(p) for p in raw.get("players", [])]
    problems = []
    owner = {}
    vertices = []
    for v, p in raw.get("vertices", []):
        v = str(v)
        vertices.append(v)
        if p not in players:
            problems.append(UnknownOwner("vertex %s has unknown owner %r" % (v, p)))
        else:
            owner[v] = players.index(p)
    vset = set(vertices)
    edges, rewards = [], {}
    for item in raw.get("edges", []):
        u, v, rs = str(item[0]), str(item[1]), list(item[2]) if len(item) > 2 else []
        if u not in vset or v not in vset:
            problems.append(DanglingEdge("edge %s->%s has an undeclared endpoint" % (u, v)))
            continue
        if (u, v) in rewards:
            problems.append(DuplicateEdge("edge %s->%s declared twice" % (u, v)))
            continue
        if len(rs) < len(players):
            for k in range(len(rs), len(players)):
                problems.append(MissingReward("edge %s->%s lacks a reward for %s" % (u, v, players[k])))
            continue
        edges.append((u, v))
        rewards[(u, v)] = tuple(rat(r) for r in rs[:len(players)])
    has_succ = {u for u, _ in edges}
    for v in vertices:
        if v not in has_succ and not any(str(e[0]) == v for e in raw.get("edges", [])):
            problems.append(VertexWithoutSuccessor("vertex %s has no outgoing edge" % v))
    if problems:
        first = problems[0]
        raise type(first)("; ".join(str(p) for p in problems), problems)
    return Game(players, vertices, owner, edges, rewards,
                name=raw.get("name", "game"), initial=raw.get("initial"))


class Requirement:
    """Immutable map vertex -> extended rational."""

    def __init__(self, values):
        self._v = {k: rat(x) for k, x in dict(values).items()}

    @classmethod
    def vacuous(cls, game):
        return cls({v: NEG_INF for v in game.vertices})

    @classmethod
    def constant(cls, game, x):
        return cls({v: x for v in game.vertices})

    def __getitem__(self, v):
        return self._v[v]

    def __iter__(self):
        return iter(self._v)

    def __len__(self):
        return len(self._v)

    def items(self):
        return self._v.items()

    def keys(self):
        return self._v.keys()

    def values(self):
        return self._v.values()

    def as_dict(self):
        return dict(self._v)

    def replace(self, **changes):
        d = dict(self._v)
        d.update({k: rat(x) for k, x in changes.items()})
        return Requirement(d)

    def __le__(self, other):
        return all(self._v[v] <= other[v] for v in self._v)

    def __eq__(self, other):
        if isinstance(other, Requirement):
            return self._v == other._v
        if isinstance(other, dict):
            return self._v == {k: rat(x) for k, x in other.items()}
        return NotImplemented

    def __hash__(self):
        return hash(tuple(sorted(self._v.items(), key=lambda kv: kv[0])))

    def __repr__(self):
        return "Requirement(%s)" % ", ".join("%s:%s" % (k, fmt(x)) for k, x in self._v.items())


def check_requirement(game, lam):
    if set(lam.keys()) != set(game.vertices):
        raise ValueError("requirement must be defined on exactly the game's vertices")


@dataclass(frozen=True)
class LassoPlay:
    prefix: tuple
    cycle: tuple

    def __init__(self, prefix, cycle):
        object.__setattr__(self, "prefix", tuple(prefix))
        object.__setattr__(self, "cycle", tuple(cycle))
        if not self.cycle:
            raise InvalidLasso("cycle must be nonempty")

    def occ(self):
        return set(self.prefix) | set(self.cycle)


def _check_lasso(g, rho):
    path = list(rho.prefix) + list(rho.cycle) + [rho.cycle[0]]
    for u, v in zip(path, path[1:]):
        if (u, v) not in g.rewards:
            raise InvalidLasso("%s->%s is not an edge" % (u, v))


def mean_payoff(g, rho):
    """Per-player mean of the repeated cycle; the prefix never matters."""
    _check_lasso(g, rho)
    cyc = list(rho.cycle)
    steps = list(zip(cyc, cyc[1:] + cyc[:1]))
    return tuple(sum((g.rewards[e][i] for e in steps), Fraction(0)) / len(steps)
                 for i in range(g.n_players))


def is_consistent(g, lam, rho):
    mp = mean_payoff(g, rho)
    return all(mp[g.owner[v]] >= lam[v] for v in rho.occ())
