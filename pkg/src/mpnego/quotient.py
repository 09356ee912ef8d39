"""Negotiation values on the bound-vector quotient, by threshold regions.

A Prover state is ``(v, l)`` and a Challenger state ``(u, v, l)``, where
``l`` holds, per player, the largest requirement over the current memory.
Challenger option 0 accepts the proposed edge; the others deviate to a
fresh state ``(w, l_w)``.

For a threshold ``t`` the Challenger region (value > t) is computed by
peeling layers off the arena:

* states where Challenger wins the plain mean-payoff game with mean > t
  (every cycle he allows then has mean > t, whatever its type);
* states from which, with Challenger always accepting, Prover cannot reach
  an accepting component whose optimum is <= t, together with their
  Challenger attractor.

When neither layer is empty Prover wins every remaining state.  Exact
values follow by raising ``t`` to the value of the strategy just found
until the start state drops out of the region.
"""

import math
from fractions import Fraction

from .cycles import tarjan_scc
from .ext import INF, NEG_INF
from .geometry import flow_min
from .mpg import reachable_cycle_means, solve_mean_payoff


class QuotientArena:
    """The quotient arena for protagonist ``i``, with integer state ids."""

    def __init__(self, game, lam, i):
        self.g = game
        self.lam = lam
        self.i = i
        # bound vectors hold ranks into ``levels``; -1 stands for -inf
        self.levels = sorted({x for x in lam.values() if x != NEG_INF})
        rank = {x: k for k, x in enumerate(self.levels)}
        self.rank = {v: rank.get(lam[v], -1) for v in game.vertices}
        self.den = 1
        for e in game.edges:
            self.den = math.lcm(self.den, Fraction(game.rewards[e][i]).denominator)
        self.ids = {}
        self.states = []
        self.succ = []
        self.weight = []  # scaled reward of player i on the edge a Challenger move commits to
        self.fresh = {}
        todo = []
        for w in game.vertices:
            self.fresh[w] = self._intern((w, self._single(w)), todo)
        while todo:
            s = todo.pop()
            st = self.states[s]
            if len(st) == 2:
                v, l = st
                nxt = [(v, w, l) for w in game.succ[v]]
                wts = [0] * len(nxt)
            else:
                u, v, l = st
                nxt = [(v, self._bump(l, v))]
                if game.owner[u] == i:
                    nxt += [(w, self._single(w)) for w in game.succ[u] if w != v]
                # the edge actually taken is u -> target
                wts = [int(game.rewards[(u, t[0])][i] * self.den) for t in nxt]
            self.succ[s] = [self._intern(t, todo) for t in nxt]
            self.weight[s] = wts
        self.n = len(self.states)
        self.is_challenger = [len(st) == 3 for st in self.states]
        self._opt_cache = {}
        self._mpg_cache = {}

    def _intern(self, st, todo):
        k = self.ids.get(st)
        if k is None:
            k = self.ids[st] = len(self.states)
            self.states.append(st)
            self.succ.append(None)
            self.weight.append(None)
            todo.append(k)
        return k

    def _bump(self, l, w):
        j = self.g.owner[w]
        x = self.rank[w]
        if x <= l[j]:
            return l
        l = list(l)
        l[j] = x
        return tuple(l)

    def _single(self, w):
        return self._bump((-1,) * self.g.n_players, w)

    def state(self, s):
        """State ``s`` with its bound vector spelled out."""
        st = self.states[s]
        return st[:-1] + (self.bounds(s),)

    def bounds(self, s):
        return tuple(self.levels[r] if r >= 0 else NEG_INF for r in self.states[s][-1])

    # -- component optima ------------------------------------------------
    def accept_opt(self, comp):
        """Optimum of a component whose Challenger states all accept."""
        gedges = frozenset(self.states[s][:2] for s in comp if self.is_challenger[s])
        key = (gedges, self.states[comp[0]][-1])
        got = self._opt_cache.get(key)
        if got is None:
            l = self.bounds(comp[0])
            lower = {j: x for j, x in enumerate(l) if x != NEG_INF}
            got = flow_min(sorted(gedges, key=str), self.g.rewards, self.i, lower)[0]
            self._opt_cache[key] = got
        return got

    def strategy_value(self, s0, tau):
        """Exact value of a memoryless Challenger strategy ``tau`` (id -> option index)."""
        graph = {}
        todo = [s0]
        graph[s0] = None
        while todo:
            s = todo.pop()
            if self.is_challenger[s]:
                nxt = [self.succ[s][tau.get(s, 0)]]
            else:
                nxt = self.succ[s]
            graph[s] = nxt
            for t in nxt:
                if t not in graph:
                    graph[t] = None
                    todo.append(t)
        best = INF
        for comp in tarjan_scc(graph):
            cset = set(comp)
            if len(comp) == 1 and comp[0] not in graph[comp[0]]:
                continue
            deviates = any(self.is_challenger[s] and tau.get(s, 0) != 0 for s in comp)
            if deviates:
                val = self._cycle_min(comp, graph, cset)
            else:
                val = self.accept_opt(comp)
            best = min(best, val)
        return best

    def _cycle_min(self, comp, graph, cset):
        pos = {s: k for k, s in enumerate(comp)}
        adj = []
        for s in comp:
            row = []
            for k, t in enumerate(self.succ[s]):
                if t in cset and t in graph[s]:
                    row.append((pos[t], self.weight[s][k]))
            adj.append(row)
        # bipartite cycles carry two edges per move
        return 2 * reachable_cycle_means(adj, 1)[0] / self.den

    # -- threshold regions ----------------------------------------------
    def _mean_payoff(self, alive):
        key = frozenset(alive)
        got = self._mpg_cache.get(key)
        if got is None:
            order = sorted(alive)
            pos = {s: k for k, s in enumerate(order)}
            succ = []
            opt_index = []
            for s in order:
                row, idx = [], []
                for k, t in enumerate(self.succ[s]):
                    if t in pos:
                        row.append((pos[t], self.weight[s][k]))
                        idx.append(k)
                succ.append(row)
                opt_index.append(idx)
            res = solve_mean_payoff(succ, [self.is_challenger[s] for s in order])
            got = {}
            for k, s in enumerate(order):
                got[s] = (2 * res.values[k] / self.den, opt_index[k][res.strategy[k]])
            self._mpg_cache[key] = got
        return got

    def challenger_region(self, t):
        """States with value > t and a memoryless Challenger strategy achieving it there."""
        alive = set(range(self.n))
        tau = {}
        if t == INF:
            return set(), tau
        while alive:
            mp = self._mean_payoff(alive)
            z = {s for s in alive if mp[s][0] > t}
            if z:
                for s in z:
                    if self.is_challenger[s]:
                        tau[s] = mp[s][1]
                alive -= z
                continue
            stuck = self._accept_losers(alive, t)
            if not stuck:
                break
            for s in stuck:
                if self.is_challenger[s]:
                    tau[s] = 0
            alive -= self._attract(stuck, alive, tau)
        return set(range(self.n)) - alive, tau

    def _accept_losers(self, alive, t):
        graph = {}
        for s in alive:
            if self.is_challenger[s]:
                graph[s] = [self.succ[s][0]]
            else:
                graph[s] = [x for x in self.succ[s] if x in alive]
        good = set()
        for comp in tarjan_scc(graph):
            if len(comp) == 1 and comp[0] not in graph[comp[0]]:
                continue
            if self.accept_opt(comp) <= t:
                good.update(comp)
        pred = {s: [] for s in graph}
        for s, nxt in graph.items():
            for x in nxt:
                pred[x].append(s)
        todo = list(good)
        while todo:
            s = todo.pop()
            for p in pred[s]:
                if p not in good:
                    good.add(p)
                    todo.append(p)
        return alive - good

    def _attract(self, target, alive, tau):
        """Challenger attractor of ``target`` inside ``alive``; records his choices."""
        attr = set(target)
        pred = {s: [] for s in alive}
        count = {}
        for s in alive:
            nxt = [x for x in self.succ[s] if x in alive]
            count[s] = len(nxt)
            for x in nxt:
                pred[x].append(s)
        todo = list(attr)
        while todo:
            x = todo.pop()
            for p in pred[x]:
                if p in attr:
                    continue
                if self.is_challenger[p]:
                    tau[p] = self.succ[p].index(x)
                    attr.add(p)
                    todo.append(p)
                else:
                    count[p] -= 1
                    if count[p] == 0:
                        attr.add(p)
                        todo.append(p)
        return attr

    # -- exact values ----------------------------------------------------
    def values(self, starts):
        """Exact value and an optimal strategy for each start state id."""
        _, tau = self.challenger_region(NEG_INF)
        lo = {s: self.strategy_value(s, tau) for s in starts}
        strat = {s: dict(tau) for s in starts}
        open_ = {s for s in starts if lo[s] != INF}
        while open_:
            t = min(lo[s] for s in open_)
            region, tau = self.challenger_region(t)
            for s in list(open_):
                if s in region:
                    val = self.strategy_value(s, tau)
                    if val > lo[s]:
                        lo[s], strat[s] = val, dict(tau)
                    elif lo[s] == t:
                        raise AssertionError("region strategy failed to beat the threshold")
                elif lo[s] == t:
                    open_.discard(s)
                if lo[s] == INF:
                    open_.discard(s)
        return lo, strat


def nego_values_for(game, lam, i):
    """Negotiation value at every vertex of player ``i``, with the arena used."""
    arena = QuotientArena(game, lam, i)
    mine = [v for v in game.vertices if game.owner[v] == i]
    vals, strat = arena.values([arena.fresh[v] for v in mine])
    return {v: vals[arena.fresh[v]] for v in mine}, arena, {v: strat[arena.fresh[v]] for v in mine}
