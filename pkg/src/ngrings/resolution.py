"""
Weighted dual graphs of star-shaped resolutions.

The good resolution of Spec R(C, D) has a central curve C with C^2 = -deg B
and, for each fractional point (p/q)P of D = B - sum (p_i/q_i) P_i, a chain of
rational curves whose weights are the Hirzebruch-Jung expansion of q/p.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from math import gcd

from .divisors import SchemaError
from .linalg import determinant, iter_leading_minors


class NotNegativeDefinite(ValueError):
    pass


class Unsupported(ValueError):
    pass


class PreconditionError(ValueError):
    pass


def hj_expand(q: int, p: int) -> list:
    """Hirzebruch-Jung continued fraction q/p = b_1 - 1/(b_2 - 1/(...)), b_j >= 2."""
    if not (0 < p < q) or gcd(p, q) != 1:
        raise ValueError(f"need 0 < p < q coprime, got q={q}, p={p}")
    out = []
    while p:
        b = -(-q // p)
        out.append(b)
        q, p = p, b * p - q
    return out


def hj_evaluate(bs) -> Fraction:
    val = Fraction(bs[-1])
    for b in reversed(bs[:-1]):
        val = b - 1 / val
    return val


@dataclass(frozen=True)
class ResolutionGraph:
    """``vertices``: (id, self-intersection, genus); ``edges``: sorted id pairs, repeated for multiplicity."""

    vertices: tuple
    edges: tuple = ()

    def __post_init__(self):
        ids = [v[0] for v in self.vertices]
        if len(set(ids)) != len(ids):
            raise SchemaError("vertex ids must be distinct")
        for _, _, g in self.vertices:
            if g < 0:
                raise SchemaError("vertex genus must be non-negative")
        idset = set(ids)
        for u, v in self.edges:
            if u not in idset or v not in idset:
                raise SchemaError(f"edge ({u}, {v}) uses an unknown vertex")
        object.__setattr__(self, "edges", tuple(sorted(tuple(sorted(e)) for e in self.edges)))
        if ids and not self._connected():
            raise SchemaError("resolution graph must be connected")

    @classmethod
    def build(cls, vertices, edges=()):
        return cls(tuple((int(i), int(w), int(g)) for i, w, g in vertices),
                   tuple(tuple(e) for e in edges))

    def _connected(self):
        adj = self._adjacency
        start = self.vertices[0][0]
        seen, todo = {start}, [start]
        while todo:
            u = todo.pop()
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    todo.append(v)
        return len(seen) == len(self.vertices)

    @property
    def ids(self):
        return [v[0] for v in self.vertices]

    def weight(self, vid):
        return next(w for i, w, _ in self.vertices if i == vid)

    def genus(self, vid):
        return next(g for i, _, g in self.vertices if i == vid)

    def adjacency(self):
        """id -> {neighbour id: multiplicity}; a loop counts twice at its vertex."""
        return {i: dict(nb) for i, nb in self._adjacency.items()}

    @cached_property
    def _adjacency(self):
        adj = {i: {} for i in self.ids}
        for u, v in self.edges:
            adj[u][v] = adj[u].get(v, 0) + 1
            if u != v:
                adj[v][u] = adj[v].get(u, 0) + 1
        return adj

    def matrix(self):
        ids = self.ids
        pos = {v: k for k, v in enumerate(ids)}
        M = [[0] * len(ids) for _ in ids]
        for i, w, _ in self.vertices:
            M[pos[i]][pos[i]] = w
        for u, v in self.edges:
            if u == v:
                M[pos[u]][pos[u]] += 2
            else:
                M[pos[u]][pos[v]] += 1
                M[pos[v]][pos[u]] += 1
        return M

    def pairing(self, Z: "Cycle", vid) -> int:
        """Z . E_v."""
        adj = self._adjacency
        total = Z[vid] * self.weight(vid)
        for u, mult in adj[vid].items():
            total += mult * Z[u]
        return total

    def to_json(self):
        return {"vertices": [{"id": i, "w": w, "g": g} for i, w, g in self.vertices],
                "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, obj):
        try:
            verts = [(v["id"], v["w"], v.get("g", 0)) for v in obj["vertices"]]
            edges = [tuple(e) for e in obj.get("edges", [])]
        except (KeyError, TypeError) as exc:
            raise SchemaError(f"bad graph JSON: {exc}") from None
        for e in edges:
            if len(e) != 2:
                raise SchemaError("edges must be pairs of vertex ids")
        return cls.build(verts, edges)


@dataclass(frozen=True)
class Cycle:
    coeffs: tuple  # sorted (id, coefficient) pairs

    @classmethod
    def of(cls, mapping):
        if any(c < 0 for c in mapping.values()):
            raise ValueError("cycle coefficients must be non-negative")
        return cls(tuple(sorted((int(k), int(v)) for k, v in mapping.items())))

    def __getitem__(self, vid):
        return dict(self.coeffs).get(vid, 0)

    def as_dict(self):
        return dict(self.coeffs)

    def to_json(self):
        return {str(k): v for k, v in self.coeffs}


def star_graph(normal_form, central_genus: int = 0) -> ResolutionGraph:
    """Star graph from ``(B, arms)`` as produced by ``normalize``."""
    B, arms = normal_form
    verts = [(0, -int(B.degree), central_genus)]
    edges = []
    nxt = 1
    for _, p, q in arms:
        prev = 0
        for b in hj_expand(q, p):
            verts.append((nxt, -b, 0))
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
    graph = ResolutionGraph.build(verts, edges)
    if not is_negative_definite(graph):
        raise NotNegativeDefinite("intersection matrix is not negative definite")
    return graph


def is_negative_definite(graph: ResolutionGraph) -> bool:
    """Sylvester: every leading principal minor of -M is positive."""
    if not graph.vertices:
        return True
    neg = [[-x for x in row] for row in graph.matrix()]
    return all(m > 0 for m in iter_leading_minors(neg))


def fundamental_cycle(graph: ResolutionGraph) -> Cycle:
    """Laufer's loop: from the reduced cycle, add E_v while Z.E_v > 0 (lowest id first)."""
    if not is_negative_definite(graph):
        raise PreconditionError("fundamental cycle needs a negative definite graph")
    ids = sorted(graph.ids)
    adj = graph._adjacency
    weight = {i: w for i, w, _ in graph.vertices}
    Z = {i: 1 for i in ids}
    while True:
        for v in ids:
            pair = Z[v] * weight[v] + sum(m * Z[u] for u, m in adj[v].items())
            if pair > 0:
                Z[v] += 1
                break
        else:
            return Cycle.of(Z)


def intersection(graph, Z1: Cycle, Z2: Cycle) -> int:
    return sum(Z1[v] * graph.pairing(Z2, v) for v in graph.ids)


def canonical_pairing(graph, vid) -> int:
    """K . E_v by adjunction."""
    return -graph.weight(vid) + 2 * graph.genus(vid) - 2


def cycle_pa(graph: ResolutionGraph, Z: Cycle) -> int:
    z2 = intersection(graph, Z, Z)
    kz = sum(Z[v] * canonical_pairing(graph, v) for v in graph.ids)
    if (z2 + kz) % 2:
        raise ArithmeticError("Z^2 + K.Z must be even")
    return (z2 + kz) // 2 + 1


def _contractible(graph, adj):
    for i, w, g in sorted(graph.vertices):
        if g == 0 and w == -1 and i not in adj[i] and sum(adj[i].values()) <= 2:
            return i
    return None


def blow_down(graph: ResolutionGraph) -> ResolutionGraph:
    """Contract rational (-1)-curves with at most two simple neighbours until none is left.

    A rational (-1)-curve meeting three or more curves (or itself) cannot be
    contracted within simple normal-crossing graphs and raises ``Unsupported``.
    """
    while True:
        adj = graph.adjacency()
        v = _contractible(graph, adj)
        if v is None:
            stuck = [i for i, w, g in graph.vertices if g == 0 and w == -1]
            if stuck:
                raise Unsupported(f"(-1)-vertex {stuck[0]} meets {sum(adj[stuck[0]].values())} "
                                  "curves; contracting it breaks normal crossings")
            return graph
        if any(m > 1 for m in adj[v].values()):
            raise Unsupported(f"(-1)-vertex {v} meets a neighbour more than once")
        nbrs = sorted(adj[v])
        verts = [(i, w + (1 if i in nbrs else 0), g) for i, w, g in graph.vertices if i != v]
        edges = [e for e in graph.edges if v not in e]
        if len(nbrs) == 2:
            u1, u2 = nbrs
            if u2 in adj[u1]:
                raise Unsupported(f"contracting {v} would join {u1} and {u2} twice")
            edges.append((u1, u2))
        graph = ResolutionGraph.build(verts, edges)


def is_minimal(graph) -> bool:
    return not any(g == 0 and w == -1 for _, w, g in graph.vertices)


def mowy_ng(graph: ResolutionGraph) -> bool:
    """Nearly Gorenstein test for a rational singularity: K + Z_f anti-nef on the minimal resolution."""
    if not graph.vertices:
        return True  # smooth point
    if not is_negative_definite(graph):
        raise PreconditionError("graph is not negative definite")
    if not is_minimal(graph):
        raise PreconditionError("graph is not minimal; blow down first")
    Z = fundamental_cycle(graph)
    pa = cycle_pa(graph, Z)
    if pa != 0:
        raise PreconditionError(f"singularity is not rational: p_a(Z_f) = {pa}")
    return all(canonical_pairing(graph, v) + graph.pairing(Z, v) <= 0 for v in graph.ids)


def abs_det(graph) -> int:
    if not graph.vertices:
        return 1
    return abs(int(determinant(graph.matrix())))
