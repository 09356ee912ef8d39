"""Graph utilities: Tarjan SCCs, Johnson simple cycles, Karp minimum cycle mean.

Graphs are dicts ``node -> iterable of successors``; every node that
appears as a successor must also be a key.
"""

from fractions import Fraction


def tarjan_scc(graph):
    """Strongly connected components in reverse topological order (sinks first)."""
    index, low, on_stack = {}, {}, set()
    stack, out = [], []
    counter = 0
    for root in graph:
        if root in index:
            continue
        work = [(root, iter(graph[root]))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, it = work[-1]
            pushed = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(graph[w])))
                    pushed = True
                    break
                if w in on_stack:
                    low[node] = min(low[node], index[w])
            if pushed:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == node:
                        break
                out.append(comp)
    return out


def has_cycle(comp, graph):
    """A component is cyclic if it has two nodes or a self-loop."""
    if len(comp) > 1:
        return True
    v = comp[0]
    return v in graph[v]


def cyclic_components(graph):
    return [c for c in tarjan_scc(graph) if has_cycle(c, graph)]


def reachable(graph, sources):
    seen = set(sources)
    todo = list(sources)
    while todo:
        v = todo.pop()
        for w in graph[v]:
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return seen


def simple_cycles(graph, key=None):
    """All simple cycles, each once, rotated so its smallest node (by ``key``) comes first.

    Johnson's algorithm: for each start node s (in key order) search the
    subgraph of nodes >= s, blocking nodes that cannot currently reach s.
    """
    key = key or (lambda v: v)
    order = sorted(graph, key=key)
    rank = {v: k for k, v in enumerate(order)}
    found = []
    for s in order:
        sub = {v: [w for w in graph[v] if rank[w] >= rank[s]] for v in order if rank[v] >= rank[s]}
        comp = next((c for c in tarjan_scc(sub) if s in c), [s])
        comp = set(comp)
        adj = {v: [w for w in sub[v] if w in comp] for v in comp}
        blocked = set()
        bmap = {v: set() for v in comp}
        path = [s]

        def unblock(u):
            todo = [u]
            while todo:
                x = todo.pop()
                if x in blocked:
                    blocked.discard(x)
                    todo.extend(bmap[x])
                    bmap[x].clear()

        def circuit(v):
            closed = False
            blocked.add(v)
            for w in adj[v]:
                if w == s:
                    found.append(tuple(path))
                    closed = True
                elif w not in blocked:
                    path.append(w)
                    if circuit(w):
                        closed = True
                    path.pop()
            if closed:
                unblock(v)
            else:
                for w in adj[v]:
                    bmap[w].add(v)
            return closed

        circuit(s)
    return found


def min_cycle_mean(graph, weight):
    """Karp's algorithm on every SCC; ``weight(u, v)`` is an exact rational.

    Returns None when the graph has no cycle.
    """
    best = None
    for comp in cyclic_components(graph):
        cset = set(comp)
        nodes = list(comp)
        n = len(nodes)
        src = nodes[0]
        d = [{src: Fraction(0)}]
        for _ in range(n):
            prev, cur = d[-1], {}
            for u, du in prev.items():
                for v in graph[u]:
                    if v in cset:
                        x = du + weight(u, v)
                        if v not in cur or x < cur[v]:
                            cur[v] = x
            d.append(cur)
        for v in nodes:
            if v not in d[n]:
                continue
            worst = None
            for k in range(n):
                if v in d[k]:
                    x = (d[n][v] - d[k][v]) / (n - k)
                    if worst is None or x > worst:
                        worst = x
            if worst is not None and (best is None or worst < best):
                best = worst
    return best
