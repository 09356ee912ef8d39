"""A finite piecewise-affine representation of the negotiation function.

For a vertex ``v`` owned by ``i`` the value is

    sup over Challenger strategies  inf over induced components  inf over pieces

where the strategies and components come from the subset arena (which does
not depend on the requirement) and every piece is an affine function of the
requirement restricted to a polyhedral guard.

A piece of an accepting component ``K`` is indexed by a set ``C`` of cycle
points and a set ``W`` of remembered vertices with ``|C| = |W| + 1``.  It is
the point of the affine hull of ``C`` where ``x_owner(w) = lam(w)`` for every
``w`` in ``W``, provided that point is unique (the square matrix ``A`` below
is invertible), lies in the convex hull of ``C`` (guard rows ``alpha >= 0``)
and meets every remembered requirement (guard rows ``x_j >= lam(u)``).  The
minimum of ``x_i`` over a polytope is reached at a vertex, and every vertex
arises this way, so the inf over pieces is the component optimum.  A
component with a deviation has no memory and its pieces are constants, one
per cycle point.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .arena import build_arena
from .cycles import min_cycle_mean, tarjan_scc
from .ext import INF, NEG_INF, is_finite
from .game import Requirement
from .geometry import Polyhedron, cycle_mean, simple_cycles
from .cycles import simple_cycles as _johnson
from .solver import BudgetExceeded

DEFAULT_BUDGET = 100_000


def invert(matrix):
    """Exact inverse of a square Fraction matrix, or None when singular."""
    n = len(matrix)
    m = [list(map(Fraction, row)) + [Fraction(int(r == k)) for k in range(n)]
         for r, row in enumerate(matrix)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        p = m[col][col]
        m[col] = [x / p for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return [row[n:] for row in m]


@dataclass
class AffinePiece:
    """``row(lam) = coeffs . lam + const`` on ``guard``; +inf elsewhere."""
    guard: Polyhedron
    coeffs: dict                 # vertex -> Fraction, only nonzero entries
    const: Fraction
    provenance: dict
    # evaluation data
    alpha: list = field(repr=False, default_factory=list)    # per cycle point: (coeffs, const)
    point_rows: list = field(repr=False, default_factory=list)  # per player: (coeffs, const)
    checks: tuple = field(repr=False, default=())           # (player, vertex) pairs from memory

    def row_vector(self, vertices):
        return tuple(self.coeffs.get(v, Fraction(0)) for v in vertices), self.const

    def __call__(self, lam):
        w_set = self.provenance["W"]
        for w in w_set:
            if not is_finite(lam[w]):
                return INF
        for coeffs, c in self.alpha:
            if _affine(coeffs, c, lam) < 0:
                return INF
        for j, u in self.checks:
            bound = lam[u]
            if bound == NEG_INF:
                continue
            if bound == INF:
                return INF
            coeffs, c = self.point_rows[j]
            if _affine(coeffs, c, lam) < bound:
                return INF
        return _affine(self.coeffs, self.const, lam)


def _affine(coeffs, const, lam):
    return const + sum((a * lam[v] for v, a in coeffs.items()), Fraction(0))


def _pieces_for_points(game, i, points, memory, provenance, budget):
    """Every invertible (C, W) piece of a component with the given cycle points and memory."""
    verts = tuple(game.vertices)
    pts = sorted(set(points))
    mem = sorted(memory, key=game.index.__getitem__)
    checks = tuple((game.owner[u], u) for u in mem)
    out = []
    max_w = min(game.n_players, len(pts) - 1, len(mem))
    for size in range(max_w + 1):
        for ws in combinations(mem, size):
            owners = [game.owner[w] for w in ws]
            if len(set(owners)) < size:
                continue  # two rows of the same player make A singular
            for cs in combinations(range(len(pts)), size + 1):
                a = [[pts[c][j] for c in cs] for j in owners] + [[1] * (size + 1)]
                inv = invert(a)
                if inv is None:
                    continue
                # alpha_c = sum_w inv[c][w] lam(w) + inv[c][sum]
                alpha = []
                for r in range(size + 1):
                    co = {w: inv[r][k] for k, w in enumerate(ws) if inv[r][k] != 0}
                    alpha.append((co, inv[r][size]))
                rows = []
                for j in range(game.n_players):
                    co, c0 = {}, Fraction(0)
                    for r, c in enumerate(cs):
                        pj = pts[c][j]
                        if pj == 0:
                            continue
                        for w, x in alpha[r][0].items():
                            co[w] = co.get(w, 0) + pj * x
                        c0 += pj * alpha[r][1]
                    rows.append(({w: x for w, x in co.items() if x != 0}, c0))
                guard = Polyhedron(verts)
                for co, c0 in alpha:
                    guard.add(co, ">=", -c0)
                for j, u in checks:
                    co = dict(rows[j][0])
                    co[u] = co.get(u, 0) - 1
                    guard.add(co, ">=", -rows[j][1])
                prov = dict(provenance, C=tuple(pts[c] for c in cs), W=ws)
                out.append(AffinePiece(guard, rows[i][0], rows[i][1], prov, alpha, rows, checks))
                if budget is not None and len(out) > budget:
                    raise BudgetExceeded("component has more than %d pieces" % budget)
    return out


@dataclass
class ComponentPieces:
    key: tuple
    has_deviation: bool
    memory: frozenset
    pieces: list

    def value(self, lam):
        return min((p(lam) for p in self.pieces), default=INF)


class PiecewiseAffineMap:
    """Per vertex: a list of strategies, each a tuple of component ids."""

    def __init__(self, game, components, strategies, strategy_counts):
        self.game = game
        self.components = components            # list of ComponentPieces
        self.strategies = strategies            # vertex -> list of tuples of component ids
        self.strategy_counts = strategy_counts  # vertex -> strategy search nodes visited

    def value(self, v, lam, cache=None):
        cache = {} if cache is None else cache
        best = NEG_INF
        for fam in self.strategies[v]:
            worst = INF
            for k in fam:
                x = cache.get(k)
                if x is None:
                    x = cache[k] = self.components[k].value(lam)
                if x < worst:
                    worst = x
                    if worst <= best:
                        break
            if worst > best:
                best = worst
        return best

    def evaluate(self, lam):
        lam = lam if isinstance(lam, Requirement) else Requirement(lam)
        cache = {}
        return Requirement({v: self.value(v, lam, cache) for v in self.game.vertices})

    def pieces(self, v):
        """Distinct pieces that can define the value at ``v``."""
        seen = set()
        for fam in self.strategies[v]:
            for k in fam:
                if k not in seen:
                    seen.add(k)
                    yield from self.components[k].pieces


def _is_challenger(s):
    return isinstance(s[0], tuple)


def _state_key(game, s):
    ix = game.index
    mem = sorted(ix[u] for u in s[1])
    if _is_challenger(s):
        return (1, ix[s[0][0]], ix[s[0][1]], mem)
    return (0, ix[s[0]], -1, mem)


def _comp_key(game, key):
    ix = game.index
    if key[0] == "dev":
        return (1, sorted((_state_key(game, p), _state_key(game, q)) for p, q in key[1]), [])
    return (0, sorted((ix[u], ix[v]) for u, v in key[1]), sorted(ix[u] for u in key[2]))


class _CompInfo:
    """What the search needs to compare components without a requirement."""
    __slots__ = ("key", "dev", "edges", "memory", "low")

    def __init__(self, game, i, key):
        self.key = key
        self.dev = key[0] == "dev"
        if self.dev:
            graph = {}
            for p, q in key[1]:
                graph.setdefault(p, []).append(q)
                graph.setdefault(q, [])
            self.low = min_cycle_mean(graph, lambda p, q: game.rewards[(p[0], q[0])][i])
            self.edges, self.memory = None, frozenset()
        else:
            _, self.edges, self.memory = key
            graph = {}
            for u, v in self.edges:
                graph.setdefault(u, []).append(v)
                graph.setdefault(v, [])
            self.low = min_cycle_mean(graph, lambda u, v: game.rewards[(u, v)][i])

    def below(self, other):
        """opt(self) <= opt(other) for every requirement (sufficient test)."""
        if self.dev:
            return self.low <= other.low
        if other.dev:
            return False
        return self.edges >= other.edges and self.memory <= other.memory


def _beaten(comps, fam):
    """Every component of ``fam`` lies above one of ``comps``: min over comps <= min over fam."""
    return all(any(p.below(k) for p in comps) for k in fam)


def _strategy_families(arena, budget):
    """Component families that suffice for the sup over Challenger strategies.

    Only choices at reachable states are branched on.  Every cyclic SCC of a
    partially decided strategy ends up inside an SCC of any completion, whose
    optimum is no larger (more edges, or a deviation whose cycle means
    include the old ones).  So once each component of a family already found
    lies above some current SCC, no completion can beat that family and the
    subtree is skipped.  Returns the kept families and the search node count.
    """
    game = arena.game
    i = arena.protagonist
    succ = arena.succ
    s0 = arena.initial
    tau = {}
    info = {}

    def comp_info(key):
        got = info.get(key)
        if got is None:
            got = info[key] = _CompInfo(game, i, key)
        return got

    def explore():
        seen = {s0}
        todo = [s0]
        graph = {}
        open_ = []
        while todo:
            s = todo.pop()
            nxt = succ[s]
            if _is_challenger(s) and len(nxt) > 1:
                k = tau.get(s)
                if k is None:
                    open_.append(s)
                    graph[s] = []
                    continue
                nxt = [nxt[k]]
            graph[s] = nxt
            for t in nxt:
                if t not in seen:
                    seen.add(t)
                    todo.append(t)
        return graph, open_

    kept = []
    nodes = 0
    stack = []
    while True:
        nodes += 1
        if budget is not None and nodes > budget:
            raise BudgetExceeded("more than %d strategy search nodes from %s"
                                 % (budget, arena.origin))
        graph, open_ = explore()
        comps = [comp_info(k) for k in _components_of(graph, succ)]
        if not open_:
            if not any(_beaten(comps, fam) for fam in kept):
                kept = [fam for fam in kept if not _beaten(fam, comps)] + [comps]
            prune = True
        else:
            prune = bool(comps) and any(_beaten(comps, fam) for fam in kept)
        if not prune:
            f = min(open_, key=lambda x: _state_key(game, x))
            stack.append(f)
            tau[f] = 0
            continue
        while stack:
            s = stack[-1]
            if tau[s] + 1 < len(succ[s]):
                tau[s] += 1
                break
            stack.pop()
            del tau[s]
        else:
            return [frozenset(c.key for c in fam) for fam in kept], nodes


def _components_of(graph, succ):
    """Keys of the cyclic SCCs: ("dev", arena edges) or ("acc", game edges, memory)."""
    comps = []
    for comp in tarjan_scc(graph):
        if len(comp) == 1 and comp[0] not in graph[comp[0]]:
            continue
        cset = set(comp)
        dev = False
        edges = []
        for s in comp:
            if _is_challenger(s):
                t = graph[s][0]
                if t in cset:
                    if t != succ[s][0]:
                        dev = True
                    (u, _), m = s
                    edges.append(((u, m), t))
        if dev:
            comps.append(("dev", frozenset(edges)))
        else:
            comps.append(("acc", frozenset((p[0], q[0]) for p, q in edges), comp[0][1]))
    return frozenset(comps)


def _component_pieces(game, i, key, budget):
    if key[0] == "dev":
        pg = {}
        for p, q in key[1]:
            pg.setdefault(p, []).append(q)
            pg.setdefault(q, [])
        order = sorted(pg, key=lambda p: (game.index[p[0]], sorted(game.index[x] for x in p[1])))
        rank = {p: k for k, p in enumerate(order)}
        cycles = _johnson(pg, key=rank.__getitem__)
        points = {cycle_mean(game, [p[0] for p in c]) for c in cycles}
        return ComponentPieces(key, True, frozenset(),
                               _pieces_for_points(game, i, points, (), {"player": i, "component": key}, budget))
    _, edges, mem = key
    points = simple_cycles(game, vertices={u for u, _ in edges}, edges=edges).points
    return ComponentPieces(key, False, mem,
                           _pieces_for_points(game, i, points, mem, {"player": i, "component": key}, budget))


def build_representation(game, budget=DEFAULT_BUDGET, max_arena_states=50_000):
    """Enumerate strategies, components and pieces for every vertex.

    ``budget`` caps the strategy search nodes per vertex and the pieces per
    component; exceeding either raises BudgetExceeded.
    """
    comp_ids = {}
    components = []
    strategies = {}
    counts = {}
    for v in game.vertices:
        i = game.owner[v]
        arena = build_arena(game, i, v, max_states=max_arena_states)
        fams, n = _strategy_families(arena, budget)
        counts[v] = n
        kept = []
        ck = lambda key: _comp_key(game, key)
        for fam in sorted(fams, key=lambda f: (len(f), sorted(map(ck, f)))):
            ids = []
            for key in sorted(fam, key=ck):
                k = comp_ids.get((i, key))
                if k is None:
                    k = comp_ids[(i, key)] = len(components)
                    components.append(_component_pieces(game, i, key, budget))
                ids.append(k)
            kept.append(tuple(ids))
        strategies[v] = kept
    return PiecewiseAffineMap(game, components, strategies, counts)


def evaluate_representation(rep, lam):
    """sup over strategies of inf over components of inf over pieces, at ``lam``."""
    return rep.evaluate(lam)
