"""The Prover/Challenger arena over (vertex, memory subset) states.

This is the literal construction: memories are subsets of V, the graph
does not depend on the requirement, and ``nego_value_enumerated`` takes
the max over every memoryless Challenger strategy.  It is exponential and
serves as the reference oracle for the quotient solver in ``solver``.
"""

from dataclasses import dataclass, field
from itertools import product

from .cycles import min_cycle_mean, reachable, tarjan_scc
from .ext import INF, NEG_INF
from .geometry import CyclePointSet, cycle_mean, min_coordinate, simple_cycles
from .solver import BudgetExceeded

PROP, ACC, DEV = "Prop", "Acc", "Dev"


class OriginNotOwned(ValueError):
    pass


@dataclass
class ConcreteArena:
    game: object
    protagonist: int
    origin: str
    prover_states: list
    challenger_states: list
    transitions: list          # (source, target, tag)
    initial: tuple
    succ: dict = field(default_factory=dict)

    def choices(self, c):
        return self.succ[c]


def _mem_key(game, m):
    return tuple(sorted(game.index[v] for v in m))


def build_arena(game, i, v0, max_states=None):
    """Reachable fragment of the arena from (v0, {v0}), states in lexicographic order.

    Prover states are ``(v, M)``, Challenger states ``((u, v), M)``, with M a frozenset.
    Raises BudgetExceeded when more than ``max_states`` states are reachable.
    """
    i = game.player_index(i)
    if game.owner[v0] != i:
        raise OriginNotOwned("%s is not owned by player %s" % (v0, game.players[i]))
    s0 = (v0, frozenset([v0]))
    succ, trans = {}, []
    todo, seen = [s0], {s0}
    while todo:
        s = todo.pop()
        if isinstance(s[0], tuple):
            (u, v), m = s
            out = [((v, m | {v}), ACC)]
            if game.owner[u] == i:
                out += [((w, frozenset([w])), DEV) for w in game.succ[u] if w != v]
        else:
            v, m = s
            out = [(((v, w), m), PROP) for w in game.succ[v]]
        succ[s] = [t for t, _ in out]
        for t, tag in out:
            trans.append((s, t, tag))
            if t not in seen:
                seen.add(t)
                todo.append(t)
        if max_states is not None and len(seen) > max_states:
            raise BudgetExceeded("arena from %s has more than %d states" % (v0, max_states))

    def key(s):
        if isinstance(s[0], tuple):
            return (1, game.index[s[0][0]], game.index[s[0][1]], _mem_key(game, s[1]))
        return (0, game.index[s[0]], -1, _mem_key(game, s[1]))

    states = sorted(seen, key=key)
    provers = [s for s in states if not isinstance(s[0], tuple)]
    challengers = [s for s in states if isinstance(s[0], tuple)]
    trans.sort(key=lambda t: (key(t[0]), key(t[1])))
    return ConcreteArena(game, i, v0, provers, challengers, trans, s0, succ)


def strategy_count(arena):
    n = 1
    for c in arena.challenger_states:
        n *= len(arena.succ[c])
    return n


def challenger_strategies(arena, budget=None):
    """Every memoryless Challenger strategy, as a dict state -> successor."""
    if budget is not None and strategy_count(arena) > budget:
        raise BudgetExceeded("%d strategies exceed the budget %d" % (strategy_count(arena), budget))
    free = [c for c in arena.challenger_states if len(arena.succ[c]) > 1]
    fixed = {c: arena.succ[c][0] for c in arena.challenger_states if len(arena.succ[c]) == 1}
    for pick in product(*(arena.succ[c] for c in free)):
        tau = dict(fixed)
        tau.update(zip(free, pick))
        yield tau


@dataclass
class InducedComponent:
    states: tuple
    has_deviation: bool
    memory: frozenset
    prover_graph: dict         # prover state -> list of prover states
    game: object = None

    def g_edges(self):
        return sorted({(p[0], q[0]) for p, qs in self.prover_graph.items() for q in qs})

    @property
    def cycle_points(self):
        """Projected simple cycles of the component (on prover states)."""
        g = self.game
        nodes = sorted(self.prover_graph, key=lambda p: (g.index[p[0]], _mem_key(g, p[1])))
        rank = {p: k for k, p in enumerate(nodes)}
        from .cycles import simple_cycles as johnson
        cyc = johnson(self.prover_graph, key=rank.__getitem__)
        proj = sorted({tuple(p[0] for p in c) for c in cyc},
                      key=lambda c: [g.index[v] for v in c])
        return CyclePointSet(tuple(proj), tuple(cycle_mean(g, list(c)) for c in proj))


def induced_components(arena, tau):
    """Cyclic SCCs of the graph induced by ``tau``, reachable from the initial state."""
    g = arena.game

    def nxt(s):
        return [tau[s]] if isinstance(s[0], tuple) else arena.succ[s]

    reach = reachable({s: nxt(s) for s in arena.succ}, [arena.initial])
    graph = {s: [t for t in nxt(s) if t in reach] for s in reach}
    out = []
    for comp in tarjan_scc(graph):
        if len(comp) == 1 and comp[0] not in graph[comp[0]]:
            continue
        cset = set(comp)
        dev = False
        pg = {}
        for s in comp:
            if isinstance(s[0], tuple):
                t = graph[s][0]
                if t in cset:
                    if t != arena.succ[s][0]:
                        dev = True
                    (u, _), m = s
                    pg.setdefault((u, m), []).append(t)
        for p in list(pg):
            for q in pg[p]:
                pg.setdefault(q, [])
        mem = frozenset() if dev else next(iter(comp))[1]
        out.append(InducedComponent(tuple(comp), dev, mem, pg, g))
    return out


def component_lower(game, memory, lam):
    """Per-player lower bound max{lam(u) : u in memory owned by that player}."""
    low = {}
    for u in memory:
        j = game.owner[u]
        low[j] = max(low.get(j, NEG_INF), lam[u])
    return low


def opt_component(k, lam, i):
    g = k.game
    if k.has_deviation:
        return min_cycle_mean(k.prover_graph, lambda p, q: g.rewards[(p[0], q[0])][i])
    low = component_lower(g, k.memory, lam)
    if any(x == INF for x in low.values()):
        return INF
    return min_coordinate(k.cycle_points, low, i)


def nego_value_enumerated(game, lam, v, budget=200_000):
    """max over all memoryless Challenger strategies of min over components of opt."""
    i = game.owner[v]
    arena = build_arena(game, i, v)
    best = NEG_INF
    for tau in challenger_strategies(arena, budget):
        val = min((opt_component(k, lam, i) for k in induced_components(arena, tau)), default=INF)
        best = max(best, val)
    return best
