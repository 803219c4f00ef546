"""Exact cohomology of finite graphs over a configurable coefficient field.

The dual graph of a semi-stable model is simple (no loops, no multi-edges)
and connected; both are enforced. Cochains are antisymmetric edge functions:
a value is stored on the chosen orientation and the accessor negates on the
reversed one. Coefficients are duck-typed: anything with exact +, -, int
multiples and exact division by int works, so the same solver runs over
Fraction and over branch-parameter polynomials.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import PreconditionError
from .linalg import bareiss_solve


@dataclass(frozen=True)
class Edge:
    id: str
    tail: object
    head: object


@dataclass(frozen=True)
class DualGraph:
    vertices: tuple
    edges: tuple
    connected: bool = field(init=False, default=False)

    def __post_init__(self):
        if not self.vertices:
            raise PreconditionError("graph needs at least one vertex")
        if len(set(self.vertices)) != len(self.vertices):
            raise PreconditionError("duplicate vertex ids")
        seen_ids = set()
        seen_pairs = set()
        vset = set(self.vertices)
        for e in self.edges:
            if e.id in seen_ids:
                raise PreconditionError(f"duplicate edge id {e.id!r}")
            seen_ids.add(e.id)
            if e.tail not in vset or e.head not in vset:
                raise PreconditionError(f"edge {e.id!r} references unknown vertex")
            if e.tail == e.head:
                raise PreconditionError(f"self-loop at {e.tail!r} rejected")
            pair = frozenset((e.tail, e.head))
            if pair in seen_pairs:
                raise PreconditionError(
                    f"multiple edges between {e.tail!r} and {e.head!r} rejected"
                )
            seen_pairs.add(pair)
        object.__setattr__(self, "connected", self._is_connected())

    def _is_connected(self) -> bool:
        if len(self.vertices) == 1:
            return True
        adj = {v: [] for v in self.vertices}
        for e in self.edges:
            adj[e.tail].append(e.head)
            adj[e.head].append(e.tail)
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)

    def degree(self, v) -> int:
        return sum(1 for e in self.edges if v in (e.tail, e.head))

    def incident(self, v):
        """Oriented edges with tail v as (edge, sign on the stored orientation)."""
        out = []
        for e in self.edges:
            if e.tail == v:
                out.append((e, 1))
            elif e.head == v:
                out.append((e, -1))
        return out

    def edge_by_id(self, edge_id) -> Edge:
        for e in self.edges:
            if e.id == edge_id:
                return e
        raise PreconditionError(f"no edge with id {edge_id!r}")

    def require_connected(self):
        if not self.connected:
            raise PreconditionError("graph is not connected")


def graph(vertices, edges) -> DualGraph:
    """Build a DualGraph from vertex ids and (id, tail, head) triples."""
    return DualGraph(tuple(vertices), tuple(Edge(i, t, h) for i, t, h in edges))


def cycle_graph(n: int) -> DualGraph:
    """Oriented n-cycle on vertices 0..n-1 with edges i -> i+1 mod n."""
    if n < 3:
        raise PreconditionError("a simple cycle needs at least 3 vertices")
    return graph(range(n), [(f"e{i}", i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> DualGraph:
    return graph(range(n), [(f"e{i}", i, i + 1) for i in range(n - 1)])


@dataclass(frozen=True)
class VertexFn:
    """Coefficient-valued function on all vertices."""

    graph: DualGraph
    values: dict

    def __post_init__(self):
        if set(self.values) != set(self.graph.vertices):
            raise PreconditionError("vertex function must be supported on all of V")

    def __call__(self, v):
        return self.values[v]

    def __add__(self, other):
        self._same_graph(other)
        return VertexFn(self.graph, {v: self.values[v] + other.values[v] for v in self.values})

    def __sub__(self, other):
        self._same_graph(other)
        return VertexFn(self.graph, {v: self.values[v] - other.values[v] for v in self.values})

    def __mul__(self, scalar):
        return VertexFn(self.graph, {v: self.values[v] * scalar for v in self.values})

    def _same_graph(self, other):
        if self.graph is not other.graph and self.graph != other.graph:
            raise PreconditionError("vertex functions live on different graphs")

    def map_values(self, fn) -> "VertexFn":
        return VertexFn(self.graph, {v: fn(x) for v, x in self.values.items()})

    def __eq__(self, other):
        return isinstance(other, VertexFn) and all(
            self.values[v] == other.values[v] for v in self.graph.vertices
        )

    __hash__ = None


@dataclass(frozen=True)
class Cochain:
    """Antisymmetric edge function; stored on the graph's chosen orientations."""

    graph: DualGraph
    values: dict

    def __post_init__(self):
        if set(self.values) != {e.id for e in self.graph.edges}:
            raise PreconditionError("cochain must be supported on all of E")

    def value(self, edge_id, sign=1):
        v = self.values[edge_id]
        return v if sign == 1 else -v

    def _same_graph(self, other):
        if self.graph is not other.graph and self.graph != other.graph:
            raise PreconditionError("cochains live on different graphs")

    def __add__(self, other):
        self._same_graph(other)
        return Cochain(self.graph, {k: self.values[k] + other.values[k] for k in self.values})

    def __sub__(self, other):
        self._same_graph(other)
        return Cochain(self.graph, {k: self.values[k] - other.values[k] for k in self.values})

    def __mul__(self, scalar):
        return Cochain(self.graph, {k: self.values[k] * scalar for k in self.values})

    def map_values(self, fn) -> "Cochain":
        return Cochain(self.graph, {k: fn(v) for k, v in self.values.items()})

    def __eq__(self, other):
        return isinstance(other, Cochain) and all(
            self.values[e.id] == other.values[e.id] for e in self.graph.edges
        )

    __hash__ = None


def d(f: VertexFn) -> Cochain:
    """Coboundary: df(e) = f(tail) - f(head)."""
    g = f.graph
    return Cochain(g, {e.id: f.values[e.tail] - f.values[e.head] for e in g.edges})


def d_star(c: Cochain) -> VertexFn:
    """Adjoint coboundary: sum of c over oriented edges with tail v."""
    g = c.graph
    out = {}
    for v in g.vertices:
        acc = 0
        for e, sign in g.incident(v):
            acc = acc + c.value(e.id, sign)
        out[v] = acc
    return VertexFn(g, out)


def laplacian(f: VertexFn) -> VertexFn:
    """deg(v) f(v) - sum of f over neighbours; equals d_star(d(f))."""
    g = f.graph
    out = {}
    for v in g.vertices:
        acc = g.degree(v) * f.values[v]
        for e in g.edges:
            if e.tail == v:
                acc = acc - f.values[e.head]
            elif e.head == v:
                acc = acc - f.values[e.tail]
        out[v] = acc
    return VertexFn(g, out)


def _is_zero(x) -> bool:
    z = getattr(x, "is_zero", None)
    if z is not None:
        return z
    return x == 0


def solve_poisson(g_fn: VertexFn, anchor=None) -> VertexFn:
    """Unique f with laplacian(f) = g and f(anchor) = 0.

    Requires a connected graph and total sum zero (the image of the Laplacian
    is the mean-zero hyperplane). Solved by fraction-free elimination on the
    integer Laplacian with the anchor row and column deleted.
    """
    g = g_fn.graph
    g.require_connected()
    anchor = g.vertices[0] if anchor is None else anchor
    if anchor not in g.vertices:
        raise PreconditionError(f"anchor {anchor!r} is not a vertex")
    total = 0
    for v in g.vertices:
        total = total + g_fn.values[v]
    if not _is_zero(total):
        raise PreconditionError("Poisson data does not sum to zero over V")
    others = [v for v in g.vertices if v != anchor]
    zero = g_fn.values[anchor] - g_fn.values[anchor]
    if not others:
        return VertexFn(g, {anchor: zero})
    index = {v: i for i, v in enumerate(others)}
    n = len(others)
    mat = [[0] * n for _ in range(n)]
    for v in others:
        mat[index[v]][index[v]] = g.degree(v)
    for e in g.edges:
        if e.tail in index and e.head in index:
            mat[index[e.tail]][index[e.head]] -= 1
            mat[index[e.head]][index[e.tail]] -= 1
    rhs = [g_fn.values[v] for v in others]
    sol = bareiss_solve(mat, rhs)
    out = {anchor: zero}
    for v in others:
        out[v] = sol[index[v]]
    return VertexFn(g, out)


def harmonic_project(c: Cochain, anchor=None):
    """Split c = harmonic + d(gamma) with d_star(harmonic) = 0.

    gamma solves the Poisson problem for d_star(c); the split is the
    orthogonal decomposition of the edge space, computed exactly.
    """
    gamma = solve_poisson(d_star(c), anchor)
    harmonic = c - d(gamma)
    return harmonic, gamma


def edge_inner(c1: Cochain, c2: Cochain):
    """Sum over unoriented edges of the product (orientation-independent)."""
    acc = 0
    for e in c1.graph.edges:
        acc = acc + c1.values[e.id] * c2.values[e.id]
    return acc


def vertex_inner(f1: VertexFn, f2: VertexFn):
    acc = 0
    for v in f1.graph.vertices:
        acc = acc + f1.values[v] * f2.values[v]
    return acc


def constant_vertex_fn(g: DualGraph, value) -> VertexFn:
    return VertexFn(g, {v: value for v in g.vertices})


def rational_vertex_fn(g: DualGraph, values: dict) -> VertexFn:
    return VertexFn(g, {v: Fraction(values[v]) for v in g.vertices})


def rational_cochain(g: DualGraph, values: dict) -> Cochain:
    return Cochain(g, {e.id: Fraction(values[e.id]) for e in g.edges})


# -- JSON ------------------------------------------------------------------


def graph_to_json(g: DualGraph) -> dict:
    return {
        "vertices": list(g.vertices),
        "edges": [{"id": e.id, "tail": e.tail, "head": e.head} for e in g.edges],
    }


def graph_from_json(obj: dict) -> DualGraph:
    return graph(
        obj["vertices"], [(e["id"], e["tail"], e["head"]) for e in obj["edges"]]
    )
