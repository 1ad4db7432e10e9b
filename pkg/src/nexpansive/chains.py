"""Chain reachability graphs and chain-recurrent classes over finite samples.

A node u steps to v when one application of the map lands strictly within
eps of v, so walks in the graph are exactly the finite eps-pseudo-orbits
through the sample. Two nodes share a class when each reaches the other
through at least one step; nodes that cannot return to themselves are
reported separately as transient at this resolution.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from nexpansive.space import ExtraPoint, aug_dist, aug_map, canonical_key


@dataclass(frozen=True)
class ChainGraph:
    epsilon: Fraction
    nodes: tuple
    adjacency: tuple   # adjacency[u] = tuple of successor indices

    def edge_count(self):
        return sum(len(a) for a in self.adjacency)


def build_chain_graph(sample, eps):
    """Exact one-step reachability graph of the sample at resolution eps."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    nodes = tuple(sorted(set(sample), key=canonical_key))
    images = [aug_map(u) for u in nodes]
    adjacency = tuple(
        tuple(vi for vi, v in enumerate(nodes) if aug_dist(images[ui], v) < eps)
        for ui in range(len(nodes)))
    return ChainGraph(epsilon=eps, nodes=nodes, adjacency=adjacency)


def _tarjan_sccs(adjacency):
    """Strongly connected components, iterative, in reverse topological order."""
    n = len(adjacency)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack = []
    sccs = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, pi = work.pop()
            if pi == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            recursed = False
            for i in range(pi, len(adjacency[v])):
                w = adjacency[v][i]
                if index[w] == -1:
                    work.append((v, i + 1))
                    work.append((w, 0))
                    recursed = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if recursed:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                sccs.append(comp)
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return sccs


@dataclass(frozen=True)
class ClassPartition:
    epsilon: Fraction
    classes: tuple     # tuple of tuples of AugPoint
    transient: tuple   # nodes with no returning pseudo-orbit in the sample

    def class_count(self):
        return len(self.classes)


def chain_classes(graph):
    """Partition the graph's recurrent part into chain classes.

    A strongly connected component is a class when it carries at least one
    edge (a larger component always does; a singleton needs a self loop).
    Classes are ordered by their least node index, nodes inside a class by
    index, so the output is deterministic for a fixed sample.
    """
    sccs = _tarjan_sccs(graph.adjacency)
    classes = []
    transient = []
    for comp in sccs:
        comp = sorted(comp)
        if len(comp) > 1 or comp[0] in graph.adjacency[comp[0]]:
            classes.append(comp)
        else:
            transient.append(comp[0])
    classes.sort(key=lambda comp: comp[0])
    return ClassPartition(
        epsilon=graph.epsilon,
        classes=tuple(tuple(graph.nodes[i] for i in comp) for comp in classes),
        transient=tuple(graph.nodes[i] for i in sorted(transient)))


def isolation_certificate(q, eps, sample):
    """Certify that no eps-chain can leave the orbit of a satellite point.

    Every other point of the space sits at distance at least 1/k from a
    level-k satellite, so for eps below 1/k the orbit is unreachable from
    and cannot reach the rest of the sample. The check is the exact
    distance bound over the sample; equality is allowed since pseudo-orbit
    jumps are strict.
    """
    if not isinstance(q, ExtraPoint):
        raise ValueError("isolation applies to satellite points")
    floor = Fraction(1, q.k)
    if eps >= floor:
        raise ValueError(f"eps must be below 1/{q.k} for the isolation bound")
    return all(aug_dist(q, y) >= floor for y in sample if y != q)


def edges_csv(graph):
    """Edge list as CSV lines (u_index, v_index), header included."""
    lines = ["u,v"]
    for u, succs in enumerate(graph.adjacency):
        lines.extend(f"{u},{v}" for v in succs)
    return "\n".join(lines) + "\n"
