"""Dependency graph over a validated catena and its deterministic execution order."""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from watchtower.errors import CycleError
from watchtower.model.instances import Catena, binding_entries


@dataclass(frozen=True)
class DependencyGraph:
    """Producer→consumer edges mirroring the catena's bindings exactly.

    Nodes are data entry ids and function instance ids. There is one edge
    per binding: (entry, function, port) for inputs, (function, entry, port)
    for outputs, so the edge count always equals the binding count.
    """

    nodes: frozenset[str]
    function_ids: frozenset[str]
    edges: tuple[tuple[str, str, str], ...]

    def successors(self, node: str) -> list[str]:
        return sorted({dst for src, dst, _ in self.edges if src == node})

    def function_edges(self) -> dict[str, set[str]]:
        """Function-level projection: f -> g iff g consumes an output entry of f."""
        produced_by: dict[str, str] = {}
        consumers: dict[str, set[str]] = {f: set() for f in self.function_ids}
        for src, dst, _ in self.edges:
            if src in self.function_ids:
                produced_by[dst] = src
        for src, dst, _ in self.edges:
            if dst in self.function_ids and src in produced_by:
                consumers[produced_by[src]].add(dst)
        return consumers


def build_dependency_graph(catena: Catena) -> DependencyGraph:
    """Edges: (e→f) iff f binds e; (f→e) iff e is f's derived output."""
    nodes = {e.id for e in catena.entries} | {f.id for f in catena.functions}
    edges: list[tuple[str, str, str]] = []
    for instance in catena.functions:
        for port, entry_id in binding_entries(instance.bindings):
            edges.append((entry_id, instance.id, port))
        for port in sorted(instance.outputs):
            edges.append((instance.id, instance.outputs[port], port))
    return DependencyGraph(
        nodes=frozenset(nodes),
        function_ids=frozenset(f.id for f in catena.functions),
        edges=tuple(sorted(edges)),
    )


def execution_order(graph: DependencyGraph) -> list[str]:
    """Topological order of function instances, lexicographic among ready ties."""
    edges = graph.function_edges()
    indegree = {node: 0 for node in edges}
    for targets in edges.values():
        for target in targets:
            indegree[target] += 1
    ready = [node for node, deg in indegree.items() if deg == 0]
    heapq.heapify(ready)
    order: list[str] = []
    while ready:
        node = heapq.heappop(ready)
        order.append(node)
        for target in sorted(edges[node]):
            indegree[target] -= 1
            if indegree[target] == 0:
                heapq.heappush(ready, target)
    if len(order) != len(edges):
        stuck = sorted(set(edges) - set(order))
        raise CycleError("cycle among function instances: " + ", ".join(stuck))
    return order
