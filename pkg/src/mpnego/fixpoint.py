"""The negotiation sequence and the least epsilon-fixed point.

The least lam with nego(lam) <= lam + eps is the least fixed point of the
monotone map g(lam) = nego(lam) - eps, reached from below by iterating g
from the vacuous requirement.  When the iterates stop moving we are done.
When they keep creeping towards a limit we jump:

1. at the current iterate y take, per vertex, an optimal Challenger strategy
   and its worst component; the dual of that component's LP gives an affine
   map h_v with h_v(y) = g(y)(v) and h_v <= opt of that component everywhere;
2. L = least x >= y with h(x) <= x (an LP; h is monotone);
3. certify h <= g on the box [y, L] by one exact LP per component reached
   by the lifted strategy, and check g(L) <= L directly.

If all three hold, L is the least fixed point: for the true one lam*, the
point min(lam*, L) lies in the box and is a pre-fixed point of h, so it is
above L.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from . import lp
from .arena import build_arena
from .cycles import min_cycle_mean, tarjan_scc
from .ext import INF, NEG_INF, fmt, is_finite
from .game import Requirement
from .nego import nego_map
from .quotient import nego_values_for
from .solver import BudgetExceeded

DEFAULT_MAX_ITER = 64


class VerificationFailed(RuntimeError):
    pass


@dataclass
class FixedPointReport:
    epsilon: Fraction
    lambda_star: Requirement
    method: str                 # "iteration" or "accelerated"
    iterations_used: int
    verified: bool
    jump: dict = field(default=None, repr=False)   # affine rows used by an accelerated jump

    def as_dict(self):
        return {"epsilon": fmt(self.epsilon),
                "lambda_star": {v: fmt(x) for v, x in self.lambda_star.items()},
                "method": self.method, "iterations_used": self.iterations_used,
                "verified": self.verified}


class NegotiationSequence(list):
    """lam_0, lam_1, ...; ``fixed_point_reached`` tells whether the last one is stationary."""
    fixed_point_reached = False


def _shift(lam, eps):
    if not eps:
        return lam
    return Requirement({v: x - eps if is_finite(x) else x for v, x in lam.items()})


def negotiation_sequence(game, n_max, nego=nego_map):
    """lam_0 = vacuous, lam_{n+1} = nego(lam_n), at most ``n_max`` steps; stops at a fixed point."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    seq = NegotiationSequence([Requirement.vacuous(game)])
    for _ in range(n_max):
        nxt = nego(game, seq[-1])
        if nxt == seq[-1]:
            seq.fixed_point_reached = True
            break
        seq.append(nxt)
    return seq


def verify_fixed_point(game, lam, eps):
    """nego(lam) <= lam + eps and lam <= nego(lam), by direct evaluation."""
    img = nego_map(game, lam)
    for v in game.vertices:
        x, y = lam[v], img[v]
        if y < x:
            return False
        if is_finite(x) and y > x + eps:
            return False
        if x == NEG_INF and y != NEG_INF:
            return False
    return True


def least_fixed_point(game, eps=0, max_iter=DEFAULT_MAX_ITER, accelerate=True):
    """Least lam with nego(lam) <= lam + eps, verified; raises rather than guess."""
    eps = Fraction(eps)
    if eps < 0:
        raise ValueError("epsilon must be nonnegative")
    y = Requirement.vacuous(game)
    for n in range(1, max_iter + 1):
        nxt = _shift(nego_map(game, y), eps)
        if nxt == y:
            return _report(game, y, eps, "iteration", n - 1)
        y = nxt
        if accelerate and n >= 2:
            got = _jump(game, y, eps)
            if got is not None:
                lam, rows = got
                rep = _report(game, lam, eps, "accelerated", n)
                rep.jump = rows
                return rep
    raise BudgetExceeded("no certified fixed point within %d iterations" % max_iter)


def _report(game, lam, eps, method, n):
    if not verify_fixed_point(game, lam, eps):
        raise VerificationFailed("candidate %r is not an %s-fixed point" % (lam, fmt(eps)))
    return FixedPointReport(eps, lam, method, n, True)


# -- acceleration ---------------------------------------------------------

class _Minorant:
    """h(x) = const + sum coeffs[u] x(u), with nonnegative coefficients."""

    def __init__(self, const, coeffs):
        self.const = const
        self.coeffs = coeffs

    def at(self, x):
        return self.const + sum((a * x[u] for u, a in self.coeffs.items()), Fraction(0))


def _rank_vector(qa, memory):
    l = (-1,) * qa.g.n_players
    for u in memory:
        l = qa._bump(l, u)
    return l


def _lifted_components(game, y, v, qa, tau, max_states):
    """Cyclic SCCs reached from (v, {v}) in the subset arena when Challenger
    plays the quotient strategy ``tau`` read through each memory's bound vector."""
    arena = build_arena(game, game.owner[v], v, max_states=max_states)
    graph = {}
    for s, nxt in arena.succ.items():
        if isinstance(s[0], tuple):
            (u, w), m = s
            q = qa.ids[(u, w, _rank_vector(qa, m))]
            graph[s] = [nxt[tau.get(q, 0)]]
        else:
            graph[s] = list(nxt)
    reach = {arena.initial}
    todo = [arena.initial]
    while todo:
        for t in graph[todo.pop()]:
            if t not in reach:
                reach.add(t)
                todo.append(t)
    graph = {s: graph[s] for s in reach}
    out = []
    for comp in tarjan_scc(graph):
        if len(comp) == 1 and comp[0] not in graph[comp[0]]:
            continue
        cset = set(comp)
        dev = any(isinstance(s[0], tuple) and graph[s][0] != arena.succ[s][0] for s in comp)
        if dev:
            pg = {}
            for s in comp:
                if isinstance(s[0], tuple) and graph[s][0] in cset:
                    p = (s[0][0], s[1])
                    pg.setdefault(p, []).append(graph[s][0])
            for p in list(pg):
                for q in pg[p]:
                    pg.setdefault(q, [])
            i = game.owner[v]
            out.append(("dev", min_cycle_mean(pg, lambda p, q: game.rewards[(p[0], q[0])][i])))
        else:
            edges = sorted({s[0] for s in comp if isinstance(s[0], tuple)}, key=str)
            out.append(("acc", edges, comp[0][1]))
    return out


def _flow_rows(edges):
    nodes = sorted({u for u, _ in edges} | {w for _, w in edges}, key=str)
    rows = []
    for x in nodes[1:]:
        rows.append([(1 if a == x else 0) - (1 if b == x else 0) for a, b in edges])
    rows.append([1] * len(edges))
    return nodes, rows


def _dual_minorant(game, i, edges, memory, y):
    """Optimal dual of min r_i.f over the component's circulations with
    r_owner(u).f >= y(u); it yields an affine lower bound on opt, tight at y."""
    mem = sorted((u for u in memory if y[u] != NEG_INF), key=game.index.__getitem__)
    if any(y[u] == INF for u in mem):
        return None
    nodes = sorted({a for a, _ in edges} | {b for _, b in edges}, key=str)
    pos = {x: k for k, x in enumerate(nodes)}
    nv = 1 + len(nodes) + len(mem)   # mu, pi..., z...
    a_ub, b_ub = [], []
    for a, b in edges:
        row = [Fraction(0)] * nv
        row[0] = 1
        row[1 + pos[a]] += 1
        row[1 + pos[b]] -= 1
        for k, u in enumerate(mem):
            row[1 + len(nodes) + k] = game.rewards[(a, b)][game.owner[u]]
        a_ub.append(row)
        b_ub.append(game.rewards[(a, b)][i])
    c = [1] + [0] * len(nodes) + [y[u] for u in mem]
    res = lp.solve(c, a_ub=a_ub, b_ub=b_ub, free=range(1 + len(nodes)), maximize=True)
    if res.status != lp.OPTIMAL:
        return None
    z = res.witness[1 + len(nodes):]
    coeffs = {}
    for u, zu in zip(mem, z):
        if zu:
            coeffs[u] = coeffs.get(u, 0) + zu
    return _Minorant(res.witness[0], coeffs)


def _component_value(game, i, comp, y):
    if comp[0] == "dev":
        return comp[1]
    _, edges, memory = comp
    if any(y[u] == INF for u in memory):
        return INF
    low = {}
    for u in memory:
        if y[u] != NEG_INF:
            j = game.owner[u]
            low[j] = max(low.get(j, NEG_INF), y[u])
    from .geometry import flow_min
    return flow_min(edges, game.rewards, i, low)[0]


def _below_on_box(game, i, comp, h, lo, hi):
    """min over x in [lo, hi] of opt_comp(x) - h(x) >= 0 ?"""
    if comp[0] == "dev":
        return comp[1] >= h.at(hi)
    _, edges, memory = comp
    if any(lo[u] == INF for u in memory):
        return True
    mem = sorted((u for u in memory if lo[u] != NEG_INF), key=game.index.__getitem__)
    xs = sorted(set(mem) | set(h.coeffs), key=game.index.__getitem__)
    xpos = {u: k for k, u in enumerate(xs)}
    m = len(edges)
    nv = m + len(xs)
    _, flow = _flow_rows(edges)
    a_eq = [row + [0] * len(xs) for row in flow]
    b_eq = [0] * (len(flow) - 1) + [1]
    a_ge, b_ge, a_ub, b_ub = [], [], [], []
    for u in mem:
        j = game.owner[u]
        row = [game.rewards[e][j] for e in edges] + [0] * len(xs)
        row[m + xpos[u]] = -1
        a_ge.append(row)
        b_ge.append(0)
    for u in xs:
        row = [0] * nv
        row[m + xpos[u]] = 1
        a_ge.append(row)
        b_ge.append(lo[u])
        a_ub.append(list(row))
        b_ub.append(hi[u])
    c = [game.rewards[e][i] for e in edges] + [-h.coeffs.get(u, 0) for u in xs]
    res = lp.solve(c, a_ub=a_ub, b_ub=b_ub, a_eq=a_eq, b_eq=b_eq, a_ge=a_ge, b_ge=b_ge,
                   free=range(m, nv))
    if res.status == lp.INFEASIBLE:
        return True
    return res.status == lp.OPTIMAL and res.optimum - h.const >= 0


def _jump(game, y, eps, max_states=20_000):
    finite = [v for v in game.vertices if is_finite(y[v])]
    if any(y[v] == NEG_INF for v in game.vertices) or not finite:
        return None
    gy = nego_map(game, y)
    minorants = {}
    lifted = {}
    for i in range(game.n_players):
        mine = [v for v in finite if game.owner[v] == i]
        if not mine:
            continue
        vals, qa, strat = nego_values_for(game, y, i)
        for v in mine:
            try:
                comps = _lifted_components(game, y, v, qa, strat[v], max_states)
            except BudgetExceeded:
                return None
            best, h = INF, None
            for comp in comps:
                val = _component_value(game, i, comp, y)
                if val < best:
                    best = val
                    h = _Minorant(val, {}) if comp[0] == "dev" else \
                        _dual_minorant(game, i, comp[1], comp[2], y)
            if h is None or best != gy[v] or h.at(y) != best:
                return None
            if any(u not in finite for u in h.coeffs):
                return None
            minorants[v] = h
            lifted[v] = comps
    # least x >= y with h(x) - eps <= x on the finite coordinates
    pos = {v: k for k, v in enumerate(finite)}
    n = len(finite)
    a_ge, b_ge, a_ub, b_ub = [], [], [], []
    for v in finite:
        row = [0] * n
        row[pos[v]] = 1
        a_ge.append(row)
        b_ge.append(y[v])
        h = minorants[v]
        row = [Fraction(0)] * n
        for u, a in h.coeffs.items():
            row[pos[u]] += a
        row[pos[v]] -= 1
        a_ub.append(row)
        b_ub.append(eps - h.const)
    res = lp.solve([1] * n, a_ub=a_ub, b_ub=b_ub, a_ge=a_ge, b_ge=b_ge, free=range(n))
    if res.status != lp.OPTIMAL:
        return None
    target = dict(y.items())
    target.update({v: res.witness[pos[v]] for v in finite})
    target = Requirement(target)
    if target == y:
        return None
    for v in finite:
        i = game.owner[v]
        for comp in lifted[v]:
            if not _below_on_box(game, i, comp, minorants[v], y, target):
                return None
    if not verify_fixed_point(game, target, eps):
        return None
    rows = {v: (minorants[v].const, dict(minorants[v].coeffs)) for v in finite}
    return target, rows
