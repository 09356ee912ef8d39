"""Reporting: DOT export, two-coordinate region dumps and figures written to files."""

from dataclasses import dataclass
from fractions import Fraction

from .ext import INF, NEG_INF, fmt, is_finite
from .game import Requirement
from .geometry import Polyhedron, exact_lp
from .lp import OPTIMAL

SHAPES = ("circle", "box", "diamond", "hexagon", "triangle", "octagon", "house", "pentagon")


def _quote(s):
    return '"%s"' % str(s).replace("\\", "\\\\").replace('"', '\\"')


def to_dot(game, lam=None):
    """Graphviz source; the owner picks the node shape, edges carry reward vectors."""
    out = ["digraph %s {" % _quote(game.name), "  rankdir=LR;"]
    legend = ", ".join("%s=%s" % (p, SHAPES[k % len(SHAPES)]) for k, p in enumerate(game.players))
    out.append("  label=%s;" % _quote("players: " + legend))
    for v in game.vertices:
        label = v if lam is None else "%s\\n%s" % (v, fmt(lam[v]))
        attrs = ["shape=%s" % SHAPES[game.owner[v] % len(SHAPES)], "label=%s" % _quote(label)]
        if v == game.initial:
            attrs.append("penwidth=2")
        out.append("  %s [%s];" % (_quote(v), ", ".join(attrs)))
    for u, v in game.edges:
        r = ",".join(fmt(x) for x in game.rewards[(u, v)])
        out.append("  %s -> %s [label=%s];" % (_quote(u), _quote(v), _quote("(" + r + ")")))
    out.append("}")
    return "\n".join(out) + "\n"


@dataclass
class RegionPiece:
    """An affine formula over the two free coordinates and where it applies."""
    vertex: str
    coeffs: tuple          # one coefficient per free coordinate
    const: Fraction
    guard: list            # (coeffs, ">=", rhs) over the free coordinates
    component: int
    hits: int = 0          # grid samples where this formula gives the value

    def at(self, point):
        return self.const + sum((a * x for a, x in zip(self.coeffs, point)), Fraction(0))

    def as_dict(self):
        return {"vertex": self.vertex, "coeffs": [fmt(a) for a in self.coeffs],
                "const": fmt(self.const), "component": self.component, "hits": self.hits,
                "guard": [{"coeffs": [fmt(a) for a in c], "sense": s, "rhs": fmt(r)}
                          for c, s, r in self.guard]}


def _restrict(piece, free, fixed, variables):
    """Substitute the fixed coordinates; None when the piece can never apply."""
    if any(w in fixed and not is_finite(fixed[w]) for w in piece.provenance["W"]):
        return None
    guard = []
    for coeffs, sense, rhs in piece.guard.constraints:
        row = dict(zip(variables, coeffs))
        inf_part = 0
        for v, a in row.items():
            if v in free or a == 0:
                continue
            x = fixed[v]
            if is_finite(x):
                rhs -= a * x
            else:
                inf_part += 1 if (a > 0) == (x == INF) else -1
        if inf_part > 0:
            continue        # the infinite side already satisfies >=
        if inf_part < 0:
            return None
        guard.append((tuple(row.get(v, Fraction(0)) for v in free), sense, rhs))
    const = piece.const
    for v, a in piece.coeffs.items():
        if v not in free:
            x = fixed[v]
            if not is_finite(x):
                return None
            const += a * x
    poly = Polyhedron(tuple(free))
    for c, s, r in guard:
        if any(c):
            poly.add(list(c), s, r)
        elif (s == ">=" and r > 0) or (s == "<=" and r < 0):
            return None
    if exact_lp(poly, [0] * len(free)).status != OPTIMAL:
        return None
    guard = [g for g in guard if any(g[0])]
    return tuple(piece.coeffs.get(v, Fraction(0)) for v in free), const, guard


def grid(lo, hi, steps):
    lo, hi = Fraction(lo), Fraction(hi)
    return [lo + (hi - lo) * k / steps for k in range(steps + 1)]


def region_dump(rep, free, fixed=None, vertices=None, box=None, steps=12):
    """Pieces of the value at each vertex, as functions of the two ``free`` coordinates.

    Every other vertex must be fixed.  ``hits`` counts the grid samples (over
    ``box`` with ``steps`` subdivisions per axis) where the piece is exactly
    the value, which separates the formulas that matter from dormant ones.
    """
    game = rep.game
    free = tuple(free)
    fixed = dict(fixed or {})
    if len(free) != 2 or len(set(free)) != 2:
        raise ValueError("exactly two distinct free coordinates are needed")
    for v in free:
        if v not in game.index:
            raise ValueError("unknown vertex %r" % v)
        if v in fixed:
            raise ValueError("vertex %r is both free and fixed" % v)
    missing = [v for v in game.vertices if v not in free and v not in fixed]
    if missing:
        raise ValueError("fix every other vertex (missing: %s)" % ", ".join(missing))
    vertices = list(vertices or game.vertices)
    if box is None:
        lo = min(min(r) for r in game.rewards.values()) - 1
        hi = max(max(r) for r in game.rewards.values()) + 1
        box = (lo, hi)
    axis = grid(box[0], box[1], steps)
    pieces = {v: [] for v in vertices}
    for v in vertices:
        seen = {}
        fams = rep.strategies[v]
        for k in sorted({k for f in fams for k in f}):
            for p in rep.components[k].pieces:
                r = _restrict(p, free, fixed, game.vertices)
                if r is None:
                    continue
                key = (r[0], r[1], tuple(r[2]))
                if key not in seen:
                    seen[key] = RegionPiece(v, r[0], r[1], r[2], k)
                    pieces[v].append(seen[key])
    values = {}
    for x in axis:
        for y in axis:
            lam = dict(fixed)
            lam[free[0]], lam[free[1]] = x, y
            lam = Requirement(lam)
            cache = {}
            for v in vertices:
                val = rep.value(v, lam, cache)
                values[(v, x, y)] = val
                if is_finite(val):
                    for p in pieces[v]:
                        if p.at((x, y)) == val and all(
                                sum((a * t for a, t in zip(c, (x, y))), Fraction(0)) >= r
                                for c, _, r in p.guard):
                            p.hits += 1
    formulas = {}
    for v in vertices:
        merged = {}
        for p in pieces[v]:
            key = (p.coeffs, p.const)
            merged[key] = merged.get(key, 0) + p.hits
        formulas[v] = sorted(merged.items(), key=lambda kv: (-kv[1], kv[0]))
    return {"free": free, "fixed": fixed, "box": tuple(box), "axis": axis,
            "pieces": pieces, "formulas": formulas, "values": values}


def plot_regions(dump, path):
    """Heat map of each vertex's value over the free plane; +inf is drawn hatched."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    import numpy as np

    free, axis = dump["free"], dump["axis"]
    vertices = list(dump["pieces"])
    fig, axes = plt.subplots(1, len(vertices), figsize=(3.2 * len(vertices), 3.0), squeeze=False)
    xs = [float(x) for x in axis]
    for ax, v in zip(axes[0], vertices):
        z = np.array([[dump["values"][(v, x, y)] for x in axis] for y in axis], dtype=float)
        finite = np.isfinite(z)
        shown = np.where(finite, z, np.nan)
        mesh = ax.pcolormesh(xs, xs, shown, shading="nearest", cmap="viridis")
        if (~finite).any():
            ax.contourf(xs, xs, (~finite).astype(float), levels=[0.5, 1.5],
                        colors="none", hatches=["//"])
        fig.colorbar(mesh, ax=ax, fraction=0.046)
        ax.set_title("nego at %s" % v)
        ax.set_xlabel(free[0])
        ax.set_ylabel(free[1])
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_sequence(game, rows, path):
    """One line per vertex across the negotiation rows; infinite entries are clipped markers."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    finite = [float(r[v]) for r in rows for v in game.vertices if is_finite(r[v])]
    lo, hi = (min(finite), max(finite)) if finite else (0.0, 1.0)
    pad = max(1.0, (hi - lo) * 0.15)
    fig, ax = plt.subplots(figsize=(5, 3.2))
    for v in game.vertices:
        ys = []
        for r in rows:
            x = r[v]
            ys.append(hi + pad if x == INF else lo - pad if x == NEG_INF else float(x))
        ax.plot(range(len(rows)), ys, marker="o", label=v)
    ax.axhline(hi + pad, color="grey", lw=0.5, ls=":")
    ax.axhline(lo - pad, color="grey", lw=0.5, ls=":")
    ax.set_xlabel("n")
    ax.set_ylabel("requirement")
    ax.legend(fontsize="small", ncol=2)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
