"""Two-player mean-payoff games with exact, certified values.

Nodes are ``0..n-1``; ``succ[s]`` lists ``(target, weight)`` pairs with
rational weights.  The maximizer owns the nodes flagged in ``is_max``.

Strategies come from discounted strategy iteration with a discount factor
close to 1, which yields mean-payoff optimal positional strategies for both
players.  The iteration runs in floating point first; the answer is only
returned once an exact check confirms that the maximizer's strategy
guarantees, and the minimizer's strategy concedes, the same cycle mean from
every node.  If the float pass fails that check, the same iteration is
repeated in exact arithmetic.
"""

import math
from fractions import Fraction

from .cycles import tarjan_scc


class MeanPayoffResult:
    __slots__ = ("values", "strategy")

    def __init__(self, values, strategy):
        self.values = values  # exact mean per edge, indexed by node
        self.strategy = strategy  # chosen successor index for every node

    def choice(self, succ, s):
        return succ[s][self.strategy[s]][0]


def _scale(succ):
    if all(type(w) is int for edges in succ for _, w in edges):
        return succ, 1
    den = 1
    for edges in succ:
        for _, w in edges:
            den = den * Fraction(w).denominator // math.gcd(den, Fraction(w).denominator)
    isucc = [[(t, int(Fraction(w) * den)) for t, w in edges] for edges in succ]
    return isucc, den


def _karp(nodes, adj, sign):
    """Min (sign=1) or max (sign=-1) cycle mean inside one SCC, integer weights."""
    pos = {v: k for k, v in enumerate(nodes)}
    n = len(nodes)
    inf = None
    d = [[inf] * n for _ in range(n + 1)]
    d[0][0] = 0
    for k in range(1, n + 1):
        prev, cur = d[k - 1], d[k]
        for a in range(n):
            x = prev[a]
            if x is None:
                continue
            for t, w in adj[nodes[a]]:
                b = pos.get(t)
                if b is None:
                    continue
                y = x + sign * w
                if cur[b] is None or y < cur[b]:
                    cur[b] = y
    best = None
    for a in range(n):
        if d[n][a] is None:
            continue
        worst = None
        for k in range(n):
            if d[k][a] is not None:
                x = Fraction(d[n][a] - d[k][a], n - k)
                if worst is None or x > worst:
                    worst = x
        if worst is not None and (best is None or worst < best):
            best = worst
    return sign * best


def reachable_cycle_means(adj, sign):
    """For every node, the min (sign=1) or max (sign=-1) mean over reachable cycles.

    ``adj[s]`` is a list of ``(target, int weight)``; every node must have a successor.
    """
    n = len(adj)
    graph = {s: [t for t, _ in adj[s]] for s in range(n)}
    comps = tarjan_scc(graph)
    comp_of = {}
    out = [None] * n
    for k, comp in enumerate(comps):
        for s in comp:
            comp_of[s] = k
    cval = []
    for k, comp in enumerate(comps):
        best = None
        cyclic = len(comp) > 1 or any(t == comp[0] for t, _ in adj[comp[0]])
        if cyclic:
            best = _karp(comp, adj, sign)
        for s in comp:
            for t, _ in adj[s]:
                j = comp_of[t]
                if j != k:
                    x = cval[j]
                    if best is None or sign * x < sign * best:
                        best = x
        cval.append(best)
        for s in comp:
            out[s] = best
    return out


def _evaluate(nxt, wt, beta, exact):
    """Discounted value of every node when each node has a single successor."""
    n = len(nxt)
    val = [None] * n
    state = [0] * n  # 0 new, 1 on path, 2 done
    for s0 in range(n):
        if state[s0]:
            continue
        path = []
        s = s0
        while state[s] == 0:
            state[s] = 1
            path.append(s)
            s = nxt[s]
        if state[s] == 1:
            k = path.index(s)
            cyc = path[k:]
            acc = 0
            p = 1
            for c in cyc:
                acc += p * wt[c]
                p *= beta
            if exact:
                denom = 1 - p
            else:
                denom = -math.expm1(len(cyc) * math.log1p(-(1 - beta)))
            val[cyc[0]] = acc / denom
            for c in reversed(cyc[1:]):
                val[c] = wt[c] + beta * val[nxt[c]]
            for c in cyc:
                state[c] = 2
            path = path[:k]
        for c in reversed(path):
            val[c] = wt[c] + beta * val[nxt[c]]
            state[c] = 2
    return val


def _iterate(isucc, is_max, beta, exact, start=None):
    n = len(isucc)
    wmax = max(abs(w) for edges in isucc for _, w in edges) or 1
    eps = 0 if exact else wmax * 1e-6
    strat = list(start) if start else [0] * n
    conv = (lambda w: Fraction(w)) if exact else float

    def values():
        nxt = [isucc[s][strat[s]][0] for s in range(n)]
        wt = [conv(isucc[s][strat[s]][1]) for s in range(n)]
        return _evaluate(nxt, wt, beta, exact)

    def improve(owner_max, val):
        changed = False
        for s in range(n):
            if is_max[s] != owner_max or len(isucc[s]) == 1:
                continue
            cur = val[s]
            best_k, best = strat[s], cur
            for k, (t, w) in enumerate(isucc[s]):
                x = conv(w) + beta * val[t]
                if (x > best + eps) if owner_max else (x < best - eps):
                    best_k, best = k, x
            if best_k != strat[s]:
                strat[s] = best_k
                changed = True
        return changed

    for _ in range(10000):
        # minimizer best response to the current maximizer strategy
        for _ in range(10000):
            if not improve(False, values()):
                break
        if not improve(True, values()):
            return strat
    raise RuntimeError("strategy iteration did not converge")


def _certify(isucc, is_max, strat):
    n = len(isucc)
    fix_max = [[isucc[s][strat[s]]] if is_max[s] else isucc[s] for s in range(n)]
    fix_min = [isucc[s] if is_max[s] else [isucc[s][strat[s]]] for s in range(n)]
    lo = reachable_cycle_means(fix_max, 1)
    hi = reachable_cycle_means(fix_min, -1)
    return lo if lo == hi else None


def solve_mean_payoff(succ, is_max, start=None):
    """Exact values (mean weight per edge) and optimal positional strategies."""
    n = len(succ)
    if n == 0:
        return MeanPayoffResult([], [])
    isucc, den = _scale(succ)
    wmax = max(abs(w) for edges in isucc for _, w in edges) or 1
    strat = _iterate(isucc, is_max, 1.0 - 1e-7, False, start)
    vals = _certify(isucc, is_max, strat)
    if vals is None:
        beta = 1 - Fraction(1, 4 * n ** 3 * wmax + 1)
        strat = _iterate(isucc, is_max, beta, True, strat)
        vals = _certify(isucc, is_max, strat)
        if vals is None:
            raise RuntimeError("mean-payoff strategies failed the exact check")
    return MeanPayoffResult([v / den for v in vals], strat)
