"""Threshold problems: is there an NE (or eps-SPE) whose payoff lies in a box?

A play is an outcome of the equilibrium kind asked for exactly when it is
consistent with the relevant requirement: nego(lam0) for NE, the least
eps-fixed point for eps-SPE.  With W the set of vertices a play visits and
K the strongly connected set it ends in, the reachable payoffs are the
downward sealing of the cycle means of K, cut by the requirement bounds of
W.  So the answer is YES iff some (W, K) gives a feasible sealed-box LP.

Only the per-player bound over W matters, so instead of every subset W we
enumerate bound vectors c: W_c is everything reachable from v0 through
vertices whose requirement is at most c for their owner.  Any witness W
fits inside the W_c of its own bounds, with the same or smaller bounds and
a larger SCC, so both enumerations answer alike.  A YES witness is then
trimmed to K plus a shortest path from v0.
"""

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .cycles import tarjan_scc
from .ext import INF, NEG_INF, fmt, rat
from .game import Requirement
from .geometry import sealed_box_feasible, sealed_point, simple_cycles
from .lp import OPTIMAL
from .nego import nego_map

NE, SPE = "NE", "SPE"


@dataclass
class ThresholdQuery:
    game: object
    origin: str
    lower: tuple
    upper: tuple
    epsilon: Fraction = Fraction(0)
    mode: str = NE

    def __post_init__(self):
        self.lower = tuple(rat(x) for x in self.lower)
        self.upper = tuple(rat(x) for x in self.upper)
        self.epsilon = Fraction(self.epsilon)
        self.mode = self.mode.upper()
        if self.mode not in (NE, SPE):
            raise ValueError("mode must be NE or SPE")
        n = self.game.n_players
        if len(self.lower) != n or len(self.upper) != n:
            raise ValueError("box vectors need one entry per player (%d)" % n)
        if self.origin not in self.game.index:
            raise ValueError("unknown origin vertex %r" % self.origin)


@dataclass
class DecisionCertificate:
    answer: bool
    requirement: Requirement
    W: tuple = None
    K: tuple = None
    cycles: tuple = None
    weights: list = None
    payoff: tuple = None
    bounds: tuple = None
    note: str = ""
    examined: int = 0
    fixed_point: object = field(default=None, repr=False)

    def as_dict(self):
        out = {"answer": "YES" if self.answer else "NO",
               "requirement": {v: fmt(x) for v, x in self.requirement.items()},
               "examined": self.examined}
        if self.answer:
            out.update({"W": list(self.W), "K": list(self.K),
                        "cycles": [list(c) for c in self.cycles],
                        "weights": [[fmt(x) for x in w] for w in self.weights],
                        "payoff": [fmt(x) for x in self.payoff],
                        "bounds": [fmt(x) for x in self.bounds]})
        else:
            out["note"] = self.note
        return out


@dataclass
class RegionEntry:
    W: tuple
    K: tuple
    points: object
    bounds: tuple


def _bound(game, lam, vertices):
    b = [NEG_INF] * game.n_players
    for v in vertices:
        j = game.owner[v]
        b[j] = max(b[j], lam[v])
    return tuple(b)


def _closures(game, v0, lam):
    """Distinct maximal W for every bound vector, ordered by size then vertex order."""
    ix = game.index
    levels = []
    for j in range(game.n_players):
        vals = {lam[v] for v in game.vertices if game.owner[v] == j and lam[v] != INF}
        levels.append(sorted(vals | {NEG_INF}))
    seen = set()
    out = []
    if lam[v0] == INF:
        return out
    for c in product(*levels):
        if lam[v0] > c[game.owner[v0]]:
            continue
        ok = {v for v in game.vertices if lam[v] <= c[game.owner[v]]}
        w = {v0}
        todo = [v0]
        while todo:
            for x in game.succ[todo.pop()]:
                if x in ok and x not in w:
                    w.add(x)
                    todo.append(x)
        key = frozenset(w)
        if key not in seen:
            seen.add(key)
            out.append(tuple(sorted(w, key=ix.__getitem__)))
    out.sort(key=lambda w: (len(w), [ix[v] for v in w]))
    return out


def _sccs(game, w):
    ws = set(w)
    graph = {v: [x for x in game.succ[v] if x in ws] for v in w}
    comps = []
    for comp in tarjan_scc(graph):
        if len(comp) > 1 or comp[0] in graph[comp[0]]:
            comps.append(tuple(sorted(comp, key=game.index.__getitem__)))
    comps.sort(key=lambda k: (len(k), [game.index[v] for v in k]))
    return comps


def consistent_payoff_region(game, v0, lam):
    """Every (W, K, cycle points, per-player bounds) the decision quantifies over."""
    lam = lam if isinstance(lam, Requirement) else Requirement(lam)
    out = []
    for w in _closures(game, v0, lam):
        bounds = _bound(game, lam, w)
        for k in _sccs(game, w):
            out.append(RegionEntry(w, k, simple_cycles(game, vertices=k), bounds))
    return out


def _path(game, v0, inside, target):
    prev = {v0: None}
    dq = deque([v0])
    while dq:
        v = dq.popleft()
        if v in target:
            path = []
            while v is not None:
                path.append(v)
                v = prev[v]
            return path
        for x in game.succ[v]:
            if x in inside and x not in prev:
                prev[x] = v
                dq.append(x)
    return None


def requirement_for(q):
    """nego(lam0) for NE; the least eps-fixed point for SPE (with its report)."""
    if q.mode == NE:
        return nego_map(q.game, Requirement.vacuous(q.game)), None
    from .fixpoint import least_fixed_point
    rep = least_fixed_point(q.game, q.epsilon)
    return rep.lambda_star, rep


def decide_threshold(q, lam=None):
    """YES with a cycle-combination witness, or NO after exhausting every (W, K)."""
    g = q.game
    report = None
    if lam is None:
        lam, report = requirement_for(q)
    if any(lo > hi for lo, hi in zip(q.lower, q.upper)):
        return DecisionCertificate(False, lam, note="empty box", fixed_point=report)
    examined = 0
    for entry in consistent_payoff_region(g, q.origin, lam):
        if any(b == INF for b in entry.bounds):
            continue
        examined += 1
        lower = tuple(max(x, b) for x, b in zip(q.lower, entry.bounds))
        res = sealed_box_feasible(entry.points, lower, q.upper)
        if res.status != OPTIMAL:
            continue
        m, _ = sealed_point(entry.points, res.witness)
        path = _path(g, q.origin, set(entry.W), set(entry.K))
        w = tuple(sorted(set(path) | set(entry.K), key=g.index.__getitem__))
        bounds = _bound(g, lam, w)
        # exact re-validation of the implied payoff before answering YES
        if not all(lo <= x <= hi for lo, x, hi in zip(q.lower, m, q.upper)) or \
                not all(x >= b for x, b in zip(m, bounds)):
            raise AssertionError("sealed witness failed validation")
        return DecisionCertificate(True, lam, w, entry.K, entry.points.cycles, res.witness,
                                   m, bounds, examined=examined, fixed_point=report)
    return DecisionCertificate(False, lam, note="every (W, K) polytope is infeasible",
                               examined=examined, fixed_point=report)
