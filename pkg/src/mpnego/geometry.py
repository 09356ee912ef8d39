"""Exact LPs over mean-payoff points of simple cycles."""

from dataclasses import dataclass, field
from fractions import Fraction

from . import lp
from .cycles import simple_cycles as _johnson
from .ext import INF, NEG_INF, is_finite
from .lp import INFEASIBLE, OPTIMAL, UNBOUNDED, LpResult

__all__ = ["CyclePointSet", "Polyhedron", "LpResult", "EmptyPointSet", "DimensionMismatch",
           "simple_cycles", "min_coordinate", "sealed_box_feasible", "exact_lp", "flow_min"]


class EmptyPointSet(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


@dataclass(frozen=True)
class CyclePointSet:
    cycles: tuple
    points: tuple

    def __len__(self):
        return len(self.cycles)

    @property
    def dim(self):
        return len(self.points[0]) if self.points else 0


def cycle_mean(game, cyc):
    steps = list(zip(cyc, cyc[1:] + cyc[:1]))
    return tuple(sum((game.rewards[e][i] for e in steps), Fraction(0)) / len(steps)
                 for i in range(game.n_players))


def simple_cycles(game, vertices=None, edges=None):
    """Simple cycles of the game graph (or of the subgraph given by vertices/edges)."""
    vs = list(game.vertices) if vertices is None else [v for v in game.vertices if v in set(vertices)]
    vset = set(vs)
    es = set(game.edges) if edges is None else set(edges)
    graph = {v: [w for w in game.succ[v] if w in vset and (v, w) in es] for v in vs}
    cycles = sorted(_johnson(graph, key=game.index.__getitem__),
                    key=lambda c: [game.index[v] for v in c])
    return CyclePointSet(tuple(cycles), tuple(cycle_mean(game, list(c)) for c in cycles))


def min_coordinate(points, lower, objective):
    """inf { x_objective : x in Conv(points), x_j >= lower_j }; +inf when infeasible.

    ``lower`` maps player index -> ext-rational; missing or -inf entries are vacuous.
    """
    if not len(points):
        raise EmptyPointSet("no cycles")
    lower = dict(lower) if not isinstance(lower, (list, tuple)) else dict(enumerate(lower))
    if any(x == INF for x in lower.values()):
        return INF
    pts = points.points
    n = len(pts)
    a_ge, b_ge = [], []
    for j, bound in lower.items():
        if is_finite(bound):
            a_ge.append([p[j] for p in pts])
            b_ge.append(bound)
    res = lp.solve([p[objective] for p in pts], a_eq=[[1] * n], b_eq=[1], a_ge=a_ge, b_ge=b_ge)
    return res.optimum if res.status == OPTIMAL else INF


def sealed_box_feasible(points, lower, upper):
    """Is the downward sealing of Conv(points) hitting the box [lower, upper]?

    One weight vector per dimension d gives z^(d) in Conv with z^(d)_d <= upper_d
    and every z^(e)_d >= lower_d; the coordinatewise minimum of the z's is then a
    sealed point inside the box.  Witness: the list of weight vectors.
    """
    if not len(points):
        raise EmptyPointSet("no cycles")
    dim = points.dim
    if len(lower) != dim or len(upper) != dim:
        raise DimensionMismatch("box has wrong dimension")
    if any(lo > hi for lo, hi in zip(lower, upper)) or any(lo == INF for lo in lower) \
            or any(hi == NEG_INF for hi in upper):
        return LpResult(INFEASIBLE, None, [])
    pts = points.points
    n = len(pts)
    nv = n * dim
    a_eq, b_eq, a_ge, b_ge, a_ub, b_ub = [], [], [], [], [], []
    for d in range(dim):
        row = [0] * nv
        for c in range(n):
            row[d * n + c] = 1
        a_eq.append(row)
        b_eq.append(1)
        if is_finite(upper[d]):
            row = [0] * nv
            for c in range(n):
                row[d * n + c] = pts[c][d]
            a_ub.append(row)
            b_ub.append(upper[d])
        if is_finite(lower[d]):
            for e in range(dim):
                row = [0] * nv
                for c in range(n):
                    row[e * n + c] = pts[c][d]
                a_ge.append(row)
                b_ge.append(lower[d])
    res = lp.solve([0] * nv, a_ub=a_ub, b_ub=b_ub, a_eq=a_eq, b_eq=b_eq, a_ge=a_ge, b_ge=b_ge)
    if res.status != OPTIMAL:
        return LpResult(INFEASIBLE, None, [])
    w = [tuple(res.witness[d * n:(d + 1) * n]) for d in range(dim)]
    return LpResult(OPTIMAL, Fraction(0), w)


def sealed_point(points, weights):
    """Coordinatewise minimum of the points z^(d) described by the weight vectors."""
    zs = [tuple(sum((a * p[k] for a, p in zip(w, points.points)), Fraction(0))
                for k in range(points.dim)) for w in weights]
    return tuple(min(z[k] for z in zs) for k in range(points.dim)), zs


@dataclass
class Polyhedron:
    """Conjunction of affine constraints ``coeffs . x (<=|>=|==) rhs`` over named variables."""
    variables: tuple
    constraints: list = field(default_factory=list)

    def add(self, coeffs, sense, rhs):
        if isinstance(coeffs, dict):
            coeffs = [coeffs.get(v, 0) for v in self.variables]
        if len(coeffs) != len(self.variables):
            raise DimensionMismatch("constraint has %d coefficients, expected %d"
                                    % (len(coeffs), len(self.variables)))
        if sense not in ("<=", ">=", "=="):
            raise ValueError("bad sense %r" % sense)
        self.constraints.append((tuple(Fraction(c) for c in coeffs), sense, Fraction(rhs)))
        return self

    def contains(self, point):
        for coeffs, sense, rhs in self.constraints:
            s = sum((c * x for c, x in zip(coeffs, point)), Fraction(0))
            if (sense == "<=" and s > rhs) or (sense == ">=" and s < rhs) or (sense == "==" and s != rhs):
                return False
        return True

    def intersect(self, other):
        if tuple(other.variables) != tuple(self.variables):
            raise DimensionMismatch("polyhedra over different variables")
        return Polyhedron(self.variables, list(self.constraints) + list(other.constraints))


def exact_lp(poly, objective, direction="min", constant=0):
    """Optimise ``objective . x + constant`` over ``poly``; all variables are free."""
    const = Fraction(constant)
    if isinstance(objective, dict):
        objective = [objective.get(v, 0) for v in poly.variables]
    if len(objective) != len(poly.variables):
        raise DimensionMismatch("objective has %d coefficients, expected %d"
                                % (len(objective), len(poly.variables)))
    blocks = {"<=": ([], []), ">=": ([], []), "==": ([], [])}
    for coeffs, sense, rhs in poly.constraints:
        blocks[sense][0].append(list(coeffs))
        blocks[sense][1].append(rhs)
    res = lp.solve(list(objective), a_ub=blocks["<="][0], b_ub=blocks["<="][1],
                   a_eq=blocks["=="][0], b_eq=blocks["=="][1],
                   a_ge=blocks[">="][0], b_ge=blocks[">="][1],
                   free=range(len(poly.variables)), maximize=(direction == "max"))
    if res.status == OPTIMAL:
        res.optimum += Fraction(const)
    return res


def flow_min(edges, rewards, objective, lower):
    """min over normalised circulations f on ``edges`` of sum f_e r_objective(e),
    subject to sum f_e r_j(e) >= lower_j.

    For a strongly connected edge set this equals ``min_coordinate`` over its
    simple cycles (a circulation splits into cycles), without listing them.
    Returns (value or INF, flow dict).
    """
    if any(x == INF for x in lower.values()):
        return INF, None
    edges = list(edges)
    nodes = sorted({u for u, _ in edges} | {v for _, v in edges}, key=str)
    m = len(edges)
    a_eq, b_eq = [], []
    for x in nodes[1:]:
        a_eq.append([(1 if u == x else 0) - (1 if v == x else 0) for u, v in edges])
        b_eq.append(0)
    a_eq.append([1] * m)
    b_eq.append(1)
    a_ge, b_ge = [], []
    for j, bound in lower.items():
        if is_finite(bound):
            a_ge.append([rewards[e][j] for e in edges])
            b_ge.append(bound)
    res = lp.solve([rewards[e][objective] for e in edges], a_eq=a_eq, b_eq=b_eq, a_ge=a_ge, b_ge=b_ge)
    if res.status != OPTIMAL:
        return INF, None
    return res.optimum, dict(zip(edges, res.witness))
