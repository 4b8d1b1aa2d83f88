"""Hypergraphs, NAE-3-SAT instances and the structural queries shared by the
solvers.

Identifiers are dense integers ``0..n-1``. Every surgery operation returns a
new object together with an :class:`IndexMap` that records where each
surviving variable (vertex) and clause (edge) came from, so solutions of the
reduced object can be lifted back to the parent.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Optional, Sequence, Tuple

from .errors import DanglingVariable, NonUniformEdge

# A partial assignment holds True / False / None (unassigned) per variable.
PartialAssignment = Tuple[Optional[bool], ...]
# A partial coloring holds 1 / 2 / None (uncolored) per vertex.
PartialColoring = Tuple[Optional[int], ...]


class Literal(NamedTuple):
    var: int
    negated: bool = False

    def __neg__(self) -> "Literal":
        return Literal(self.var, not self.negated)

    def value(self, var_value: bool) -> bool:
        return var_value != self.negated

    def __str__(self):
        return ("~x%d" if self.negated else "x%d") % self.var


def pos(var: int) -> Literal:
    return Literal(var, False)


def neg(var: int) -> Literal:
    return Literal(var, True)


@dataclass(frozen=True)
class Clause:
    """Three literals over pairwise distinct variables."""

    literals: Tuple[Literal, Literal, Literal]

    def __post_init__(self):
        lits = tuple(l if isinstance(l, Literal) else Literal(*l) for l in self.literals)
        if len(lits) != 3:
            raise ValueError(f"clause needs exactly 3 literals, got {len(lits)}")
        if len({l.var for l in lits}) != 3:
            raise ValueError(f"clause has a repeated variable: {lits}")
        if any(l.var < 0 for l in lits):
            raise ValueError(f"negative variable index in {lits}")
        object.__setattr__(self, "literals", lits)

    @property
    def vars(self) -> Tuple[int, int, int]:
        return tuple(l.var for l in self.literals)

    def literal_of(self, var: int) -> Literal:
        for l in self.literals:
            if l.var == var:
                return l
        raise KeyError(var)

    def negate(self) -> "Clause":
        """Complement every literal; NAE status is unchanged under this."""
        return Clause(tuple(-l for l in self.literals))

    def __iter__(self):
        return iter(self.literals)

    def __str__(self):
        return "(" + ",".join(str(l) for l in self.literals) + ")"


def clause(*lits) -> Clause:
    """Build a clause from signed 1-based integers or Literals.

    >>> clause(1, -2, 3)
    Clause(literals=(Literal(var=0, negated=False), Literal(var=1, negated=True), Literal(var=2, negated=False)))
    """
    out = []
    for l in lits:
        if isinstance(l, Literal):
            out.append(l)
        elif isinstance(l, int) and l != 0:
            out.append(Literal(abs(l) - 1, l < 0))
        else:
            raise ValueError(f"bad literal {l!r}")
    return Clause(tuple(out))


@dataclass(frozen=True)
class NaeInstance:
    var_count: int
    clauses: Tuple[Clause, ...] = ()

    def __post_init__(self):
        cl = tuple(c if isinstance(c, Clause) else Clause(tuple(c)) for c in self.clauses)
        if self.var_count < 0:
            raise ValueError("var_count must be non-negative")
        for c in cl:
            for v in c.vars:
                if v >= self.var_count:
                    raise ValueError(f"variable {v} out of range in {c}")
        object.__setattr__(self, "clauses", cl)

    def degree(self, v: int) -> int:
        return degree(self, v)

    def degrees(self) -> list:
        d = [0] * self.var_count
        for c in self.clauses:
            for v in c.vars:
                d[v] += 1
        return d


@dataclass(frozen=True)
class Hypergraph:
    vertex_count: int
    edges: Tuple[Tuple[int, ...], ...] = ()

    def __post_init__(self):
        es = []
        for e in self.edges:
            t = tuple(sorted(e))
            if len(set(t)) != len(t):
                raise ValueError(f"edge {e} repeats a vertex")
            if t and (t[0] < 0 or t[-1] >= self.vertex_count):
                raise ValueError(f"edge {e} out of range for {self.vertex_count} vertices")
            es.append(t)
        object.__setattr__(self, "edges", tuple(es))

    def degrees(self) -> list:
        d = [0] * self.vertex_count
        for e in self.edges:
            for u in e:
                d[u] += 1
        return d

    def degree(self, u: int) -> int:
        return degree(self, u)

    def is_uniform(self, k: int) -> bool:
        return all(len(e) == k for e in self.edges)

    def is_regular(self, k: int) -> bool:
        return all(d == k for d in self.degrees())

    def edge_multiset(self) -> Counter:
        return Counter(self.edges)


@dataclass(frozen=True)
class NaeCertificate:
    assignment: PartialAssignment
    free_var: Optional[int] = None


@dataclass(frozen=True)
class ColoringCertificate:
    coloring: PartialColoring
    free_vertex: Optional[int] = None


# -- conversions -------------------------------------------------------------


def instance_from_hypergraph(h: Hypergraph, require_3_uniform: bool = True) -> NaeInstance:
    """One all-positive clause per edge, over the same index space."""
    clauses = []
    for i, e in enumerate(h.edges):
        if len(e) != 3:
            if require_3_uniform:
                raise NonUniformEdge(f"edge {i} has size {len(e)}, expected 3")
            raise NonUniformEdge(f"edge {i} of size {len(e)} cannot become a 3-literal clause")
        clauses.append(Clause(tuple(pos(u) for u in e)))
    return NaeInstance(h.vertex_count, tuple(clauses))


def hypergraph_from_instance(i: NaeInstance) -> Hypergraph:
    """Forget polarities; each clause becomes the edge on its variables."""
    return Hypergraph(i.var_count, tuple(c.vars for c in i.clauses))


_TO_COLOR = {True: 1, False: 2, None: None}
_TO_VALUE = {1: True, 2: False, None: None}


def coloring_from_assignment(a: Sequence[Optional[bool]]) -> PartialColoring:
    return tuple(_TO_COLOR[x] for x in a)


def assignment_from_coloring(c: Sequence[Optional[int]]) -> PartialAssignment:
    return tuple(_TO_VALUE[x] for x in c)


# -- structure ---------------------------------------------------------------


def degree(obj, v: int) -> int:
    """Number of clauses (edges) containing ``v``, counted with multiplicity."""
    if isinstance(obj, NaeInstance):
        if not 0 <= v < obj.var_count:
            raise IndexError(v)
        return sum(1 for c in obj.clauses if v in c.vars)
    if not 0 <= v < obj.vertex_count:
        raise IndexError(v)
    return sum(1 for e in obj.edges if v in e)


def associated_graph(i: NaeInstance) -> dict:
    """Adjacency sets: two variables are adjacent iff some clause holds both."""
    adj = {v: set() for v in range(i.var_count)}
    for c in i.clauses:
        a, b, d = c.vars
        adj[a] |= {b, d}
        adj[b] |= {a, d}
        adj[d] |= {a, b}
    return adj


class UnionFind:
    """Disjoint sets over ``0..n-1``; the representative is the smallest member."""

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: int, y: int) -> None:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return
        if rx < ry:
            self.parent[ry] = rx
        else:
            self.parent[rx] = ry


@dataclass(frozen=True)
class Component:
    """Vertex (variable) indices and edge (clause) positions of one component."""

    members: Tuple[int, ...]
    parts: Tuple[int, ...]


def _components(n: int, groups: Sequence[Sequence[int]]) -> list:
    uf = UnionFind(n)
    for g in groups:
        for x in g[1:]:
            uf.union(g[0], x)
    members, parts = {}, {}
    for x in range(n):
        members.setdefault(uf.find(x), []).append(x)
    for j, g in enumerate(groups):
        if g:
            parts.setdefault(uf.find(g[0]), []).append(j)
    # roots are the smallest member, so sorting roots orders by smallest index
    return [Component(tuple(members[r]), tuple(parts.get(r, ()))) for r in sorted(members)]


def components(obj) -> list:
    """Connected components ordered by smallest contained index.

    Isolated variables (vertices) form singleton components with no clauses.
    """
    if isinstance(obj, NaeInstance):
        return _components(obj.var_count, [c.vars for c in obj.clauses])
    return _components(obj.vertex_count, obj.edges)


def is_connected(obj) -> bool:
    return len(components(obj)) == 1


# -- surgery -----------------------------------------------------------------


@dataclass(frozen=True)
class IndexMap:
    """Where each index of a derived object lives in its parent.

    ``var_origin[j]`` is the parent index of child variable/vertex ``j``;
    ``part_origin[j]`` the parent position of child clause/edge ``j``, or
    ``None`` for a clause that did not exist in the parent.
    """

    parent_var_count: int
    var_origin: Tuple[int, ...]
    part_origin: Tuple[Optional[int], ...] = field(default=())

    @classmethod
    def identity(cls, n_vars: int, n_parts: int) -> "IndexMap":
        return cls(n_vars, tuple(range(n_vars)), tuple(range(n_parts)))

    def lift_index(self, j: Optional[int]) -> Optional[int]:
        return None if j is None else self.var_origin[j]

    def lift_values(self, values: Sequence, fill=None) -> tuple:
        out = [fill] * self.parent_var_count
        for j, x in enumerate(values):
            out[self.var_origin[j]] = x
        return tuple(out)

    def lift_nae(self, cert: NaeCertificate) -> NaeCertificate:
        return NaeCertificate(self.lift_values(cert.assignment), self.lift_index(cert.free_var))

    def lift_coloring(self, cert: ColoringCertificate) -> ColoringCertificate:
        return ColoringCertificate(self.lift_values(cert.coloring), self.lift_index(cert.free_vertex))

    def compose(self, inner: "IndexMap") -> "IndexMap":
        """Map for ``inner``'s child straight to this map's parent."""
        parts = tuple(None if p is None else self.part_origin[p] for p in inner.part_origin)
        return IndexMap(self.parent_var_count,
                        tuple(self.var_origin[j] for j in inner.var_origin), parts)


def delete_clause(i: NaeInstance, pos_: int):
    if not 0 <= pos_ < len(i.clauses):
        raise IndexError(pos_)
    keep = [j for j in range(len(i.clauses)) if j != pos_]
    child = NaeInstance(i.var_count, tuple(i.clauses[j] for j in keep))
    return child, IndexMap(i.var_count, tuple(range(i.var_count)), tuple(keep))


def delete_variable(i: NaeInstance, v: int):
    if not 0 <= v < i.var_count:
        raise IndexError(v)
    if any(v in c.vars for c in i.clauses):
        raise DanglingVariable(f"variable {v} still occurs in a clause")
    origin = tuple(x for x in range(i.var_count) if x != v)
    new_of = {x: j for j, x in enumerate(origin)}
    clauses = tuple(Clause(tuple(Literal(new_of[l.var], l.negated) for l in c)) for c in i.clauses)
    return NaeInstance(i.var_count - 1, clauses), IndexMap(i.var_count, origin, tuple(range(len(clauses))))


def substitute_literal(i: NaeInstance, pos_: int, old_var: int, new: Literal):
    """Replace the literal on ``old_var`` in clause ``pos_`` with ``new``."""
    c = i.clauses[pos_]
    lits = tuple(new if l.var == old_var else l for l in c)
    if lits == c.literals and c.literal_of(old_var) != new:
        raise KeyError(old_var)
    clauses = list(i.clauses)
    clauses[pos_] = Clause(lits)
    parts = tuple(j if j != pos_ else None for j in range(len(clauses)))
    return NaeInstance(i.var_count, tuple(clauses)), IndexMap(i.var_count, tuple(range(i.var_count)), parts)


def add_clause(i: NaeInstance, c: Clause):
    child = NaeInstance(i.var_count, i.clauses + (c,))
    return child, IndexMap(i.var_count, tuple(range(i.var_count)), tuple(range(len(i.clauses))) + (None,))


def delete_edge(h: Hypergraph, pos_: int):
    if not 0 <= pos_ < len(h.edges):
        raise IndexError(pos_)
    keep = [j for j in range(len(h.edges)) if j != pos_]
    child = Hypergraph(h.vertex_count, tuple(h.edges[j] for j in keep))
    return child, IndexMap(h.vertex_count, tuple(range(h.vertex_count)), tuple(keep))


def add_edge(h: Hypergraph, e: Iterable[int]):
    child = Hypergraph(h.vertex_count, h.edges + (tuple(e),))
    return child, IndexMap(h.vertex_count, tuple(range(h.vertex_count)),
                           tuple(range(len(h.edges))) + (None,))


def sub_hypergraph(h: Hypergraph, vertices: Sequence[int], edges: Sequence[int]):
    """Densely re-indexed sub-hypergraph on ``vertices`` using edge positions ``edges``."""
    origin = tuple(sorted(vertices))
    new_of = {x: j for j, x in enumerate(origin)}
    es = tuple(tuple(new_of[u] for u in h.edges[j]) for j in edges)
    return Hypergraph(len(origin), es), IndexMap(h.vertex_count, origin, tuple(edges))


def sub_instance(i: NaeInstance, variables: Sequence[int], clauses: Sequence[int]):
    origin = tuple(sorted(variables))
    new_of = {x: j for j, x in enumerate(origin)}
    cl = tuple(Clause(tuple(Literal(new_of[l.var], l.negated) for l in i.clauses[j])) for j in clauses)
    return NaeInstance(len(origin), cl), IndexMap(i.var_count, origin, tuple(clauses))
