"""Exact value of the Prover/Challenger negotiation game, by branch and bound.

Memory sets only matter through the per-player maximum of the requirement
over them, so states here are (vertex, bound-vector) instead of
(vertex, subset).  The quotient is a bisimulation of the subset arena, and
the value is max over memoryless Challenger strategies of the min over the
reachable cyclic SCCs of their ``opt``.  Adding edges to a graph can only
merge SCCs and lower their ``opt``, so the min over SCCs of a partially
decided strategy bounds every completion from above; that is the pruning rule.
"""

from fractions import Fraction

from .cycles import min_cycle_mean, tarjan_scc
from .ext import INF, NEG_INF
from .geometry import flow_min


class BudgetExceeded(RuntimeError):
    pass


DEFAULT_NODE_BUDGET = 2_000_000


class NegotiationSolver:
    """Solve the negotiation game for one protagonist and one requirement."""

    def __init__(self, game, lam, i, node_budget=DEFAULT_NODE_BUDGET, subsets=False):
        self.subsets = subsets
        self.g = game
        self.lam = lam
        self.i = i
        self.n_players = game.n_players
        self.node_budget = node_budget
        self.nodes = 0
        self._opt_cache = {}
        self._succ_cache = {}

    # -- arena -----------------------------------------------------------
    def bump(self, l, w):
        if self.subsets:
            return l | {w}
        j = self.g.owner[w]
        x = self.lam[w]
        if x <= l[j]:
            return l
        l = list(l)
        l[j] = x
        return tuple(l)

    def single(self, w):
        if self.subsets:
            return frozenset([w])
        return self.bump((NEG_INF,) * self.n_players, w)

    def bounds_of(self, memory):
        l = [NEG_INF] * self.n_players
        for u in memory:
            l[self.g.owner[u]] = max(l[self.g.owner[u]], self.lam[u])
        return tuple(l)

    def initial(self, v0):
        return (v0, self.single(v0))

    def options(self, c):
        """Successors of a challenger state: index 0 accepts, the rest deviate."""
        got = self._succ_cache.get(c)
        if got is None:
            u, v, l = c
            got = [(v, self.bump(l, v))]
            if self.g.owner[u] == self.i:
                got += [(w, self.single(w)) for w in self.g.succ[u] if w != v]
            self._succ_cache[c] = got
        return got

    # -- components ------------------------------------------------------
    def explore(self, s0, tau):
        """Reachable graph under the partial strategy; undecided choices are frontier."""
        graph = {}
        frontier = []
        todo = [s0]
        graph[s0] = None
        while todo:
            s = todo.pop()
            if len(s) == 2:
                v, l = s
                nxt = [(v, w, l) for w in self.g.succ[v]]
            else:
                opts = self.options(s)
                if len(opts) == 1:
                    nxt = [opts[0]]
                elif s in tau:
                    nxt = [opts[tau[s]]]
                else:
                    nxt = []
                    frontier.append(s)
            graph[s] = nxt
            for t in nxt:
                if t not in graph:
                    graph[t] = None
                    todo.append(t)
        return graph, frontier

    def component_opt(self, comp, graph):
        cset = set(comp)
        edges = []
        deviation = False
        for s in comp:
            if len(s) == 3:
                t = graph[s][0]
                if t in cset:
                    edges.append((s, t))
                    if t != self.options(s)[0]:
                        deviation = True
        if deviation:
            key = ("dev", frozenset((s[0], s[2], t) for s, t in edges))
            got = self._opt_cache.get(key)
            if got is None:
                pg = {}
                for s, t in edges:
                    pg.setdefault((s[0], s[2]), []).append(t)
                for p in list(pg):
                    for t in pg[p]:
                        pg.setdefault(t, [])
                got = min_cycle_mean(pg, lambda p, q: self.g.rewards[(p[0], q[0])][self.i])
                self._opt_cache[key] = got
            return got, True
        l = comp[0][-1]
        if self.subsets:
            l = self.bounds_of(l)
        gedges = frozenset((s[0], s[1]) for s, _ in edges)
        key = ("acc", gedges, l)
        got = self._opt_cache.get(key)
        if got is None:
            lower = {j: x for j, x in enumerate(l) if x != NEG_INF}
            got = flow_min(sorted(gedges), self.g.rewards, self.i, lower)[0]
            self._opt_cache[key] = got
        return got, False

    def bound(self, graph):
        """min opt over cyclic SCCs, plus the arg-min component."""
        best, arg = INF, None
        g = {s: (nxt or []) for s, nxt in graph.items()}
        for comp in tarjan_scc(g):
            if len(comp) == 1 and comp[0] not in g[comp[0]]:
                continue
            val, _ = self.component_opt(comp, g)
            if val < best or arg is None:
                best, arg = val, comp
        return best, arg

    # -- search ----------------------------------------------------------
    def value(self, v0, known_lower=None):
        """Return (value, strategy).  ``known_lower`` must be a proven lower bound."""
        s0 = self.initial(v0)
        self.best = known_lower
        self.best_tau = None
        self._search(s0, {})
        if self.best_tau is None and known_lower is not None:
            return known_lower, None
        return self.best, self.best_tau

    def _search(self, s0, tau):
        self.nodes += 1
        if self.nodes > self.node_budget:
            raise BudgetExceeded("negotiation search exceeded %d nodes" % self.node_budget)
        graph, frontier = self.explore(s0, tau)
        b, _ = self.bound(graph)
        if self.best is not None and b <= self.best:
            return
        if not frontier:
            self.best = b
            self.best_tau = dict(tau)
            return
        c = min(frontier, key=self._order)
        scored = []
        for k in range(len(self.options(c))):
            tau[c] = k
            gr, _ = self.explore(s0, tau)
            scored.append((self.bound(gr)[0], -k, k))
            del tau[c]
        scored.sort(reverse=True)
        for sb, _, k in scored:
            if self.best is not None and sb <= self.best:
                break
            tau[c] = k
            self._search(s0, tau)
            del tau[c]

    def _order(self, c):
        u, v, l = c
        if self.subsets:
            return (self.g.index[u], self.g.index[v], sorted(self.g.index[x] for x in l))
        return (self.g.index[u], self.g.index[v], tuple((x == NEG_INF, x if x not in (INF, NEG_INF) else 0) for x in l))


def nego_value_fast(game, lam, v, known_lower=None, node_budget=DEFAULT_NODE_BUDGET, subsets=False):
    i = game.owner[v]
    return NegotiationSolver(game, lam, i, node_budget, subsets).value(v, known_lower)[0]
