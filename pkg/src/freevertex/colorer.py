"""Hypergraph colorings with free vertices.

* :func:`two_color` finds a proper 2-coloring by backtracking search.
* :func:`lemma_two_free` turns the NAE free-variable solver into two distinct
  free vertices of a sparse 3-uniform hypergraph.
* :func:`solve_free_vertex` produces a coloring with one uncolored vertex for
  any 4-regular 4-uniform hypergraph.

Colors are ``1`` and ``2``; ``None`` means uncolored.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .core import (
    ColoringCertificate,
    Hypergraph,
    PartialColoring,
    coloring_from_assignment,
    components,
    instance_from_hypergraph,
    sub_hypergraph,
)
from .errors import InternalInvariant, InvalidColoring, NotTwoColorable, PreconditionViolated
from .nae import solve_free
from .oracle import fixed_vertices, verify_coloring_certificate


def _fail(msg):
    raise InternalInvariant(msg)


# -- plain 2-coloring --------------------------------------------------------


class _Backtracker:
    def __init__(self, h: Hypergraph):
        self.edges = h.edges
        self.incident = [[] for _ in range(h.vertex_count)]
        for j, e in enumerate(h.edges):
            for u in e:
                self.incident[u].append(j)
        self.color: List[Optional[int]] = [None] * h.vertex_count
        self.trail: List[int] = []

    def assign(self, u: int, c: int) -> bool:
        """Color ``u`` and propagate forced colors; False on a conflict."""
        todo = [(u, c)]
        while todo:
            u, c = todo.pop()
            if self.color[u] is not None:
                if self.color[u] != c:
                    return False
                continue
            self.color[u] = c
            self.trail.append(u)
            for j in self.incident[u]:
                seen, open_ = set(), []
                for w in self.edges[j]:
                    if self.color[w] is None:
                        open_.append(w)
                    else:
                        seen.add(self.color[w])
                if len(seen) == 2:
                    continue
                if not open_:
                    return False
                if len(open_) == 1:
                    (only,) = seen
                    todo.append((open_[0], 3 - only))
        return True

    def undo(self, mark: int) -> None:
        while len(self.trail) > mark:
            self.color[self.trail.pop()] = None

    def search(self, start: int = 0) -> bool:
        u = start
        while u < len(self.color) and self.color[u] is not None:
            u += 1
        if u == len(self.color):
            return True
        for c in (1, 2):
            mark = len(self.trail)
            if self.assign(u, c) and self.search(u + 1):
                return True
            self.undo(mark)
        return False


def two_color(h: Hypergraph) -> PartialColoring:
    """Total coloring with no monochromatic edge.

    Branches on the lowest-index uncolored vertex, color 1 first; an edge
    whose colored vertices share one color and which has a single uncolored
    vertex forces that vertex. Raises NotTwoColorable when none exists.
    """
    if any(len(e) < 2 for e in h.edges):
        raise NotTwoColorable("an edge with fewer than two vertices is always monochromatic")
    bt = _Backtracker(h)
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 4 * h.vertex_count + 1000))
    try:
        found = bt.search()
    finally:
        sys.setrecursionlimit(old)
    if not found:
        raise NotTwoColorable(f"no proper 2-coloring of a {h.vertex_count}-vertex hypergraph")
    return tuple(bt.color)


# -- two free vertices -------------------------------------------------------


def check_lemma_input(h: Hypergraph) -> None:
    if not h.is_uniform(3):
        raise PreconditionViolated("3-uniform")
    degs = h.degrees()
    if h.vertex_count == 0 or min(degs) == 0:
        raise PreconditionViolated("no isolated vertex")
    if max(degs) > 3:
        raise PreconditionViolated("max degree 3")
    if len(h.edges) >= h.vertex_count:
        raise PreconditionViolated("fewer edges than vertices",
                                   f"{len(h.edges)} edges, {h.vertex_count} vertices")
    if len(components(h)) != 1:
        raise PreconditionViolated("connected")


def lemma_two_free(h: Hypergraph, traces: Optional[list] = None):
    """Two distinct free vertices of a sparse 3-uniform hypergraph.

    ``h`` must be connected with no isolated vertex, fewer edges than vertices
    and maximum degree 3. Returns ``(cert_v, u, cert_u)``: ``cert_v`` leaves
    the vertex found by the NAE solver uncolored, ``u`` is the smallest other
    vertex that is the unique vertex of its color in no edge avoiding ``v``,
    and ``cert_u`` moves ``u``'s color onto ``v`` and uncolors ``u``.
    """
    check_lemma_input(h)
    cert, trace = solve_free(instance_from_hypergraph(h))
    if traces is not None:
        traces.append(trace)
    v = cert.free_var
    coloring = coloring_from_assignment(cert.assignment)
    around_v = [j for j, e in enumerate(h.edges) if v in e]
    fixed = fixed_vertices(h, coloring, excluded=around_v)
    loose = [x for x in range(h.vertex_count) if x != v and x not in fixed]
    if not loose:
        _fail("fewer than two vertices are not fixed")
    u = loose[0]
    moved = list(coloring)
    moved[v], moved[u] = moved[u], None
    cert_v = ColoringCertificate(coloring, v)
    cert_u = ColoringCertificate(tuple(moved), u)
    for c in (cert_v, cert_u):
        verdict = verify_coloring_certificate(h, c)
        if not verdict:
            _fail("lemma certificate failed: " + "; ".join(verdict.reasons[:3]))
    return cert_v, u, cert_u


# -- all-fixed structure -----------------------------------------------------


@dataclass(frozen=True)
class StarMaps:
    """``v_star[j]``: the vertex of unique color in edge ``j`` (or None).
    ``e_star[u]``: the edge in which ``u`` is the unique-color vertex (or None)."""

    v_star: Tuple[Optional[int], ...]
    e_star: Tuple[Optional[int], ...]

    @property
    def total(self) -> bool:
        return all(x is not None for x in self.v_star) and all(x is not None for x in self.e_star)


def star_maps(h: Hypergraph, coloring: Sequence[Optional[int]]) -> StarMaps:
    v_star: List[Optional[int]] = []
    e_star: List[Optional[int]] = [None] * h.vertex_count
    for j, e in enumerate(h.edges):
        ones = [u for u in e if coloring[u] == 1]
        twos = [u for u in e if coloring[u] == 2]
        if not ones or not twos:
            raise InvalidColoring(f"edge {j} is monochromatic")
        unique = [grp[0] for grp in (ones, twos) if len(grp) == 1]
        # a 4-edge has at most one unique-color vertex (3+1 split)
        v_star.append(unique[0] if len(unique) == 1 else None)
        if len(unique) == 1 and e_star[unique[0]] is None:
            e_star[unique[0]] = j
    return StarMaps(tuple(v_star), tuple(e_star))


@dataclass(frozen=True)
class DerivedPair:
    """The 3-uniform hypergraphs on the two color classes.

    For each vertex ``u`` the edge ``e_u`` is its star edge minus ``u``; it
    lives in ``h2`` when ``u`` has color 1 and in ``h1`` when ``u`` has color 2.
    ``h1`` and ``h2`` are densely indexed; ``origin1[j]`` / ``origin2[j]``
    give the vertex of ``H`` behind local index ``j``. ``apex1[k]`` is the
    vertex ``u`` whose ``e_u`` is edge ``k`` of ``h1`` and ``source1[k]`` the
    4-edge of ``H`` it came from; likewise for side 2.
    """

    h1: Hypergraph
    h2: Hypergraph
    origin1: Tuple[int, ...]
    origin2: Tuple[int, ...]
    apex1: Tuple[int, ...]
    apex2: Tuple[int, ...]
    source1: Tuple[int, ...]
    source2: Tuple[int, ...]

    def side(self, s: int):
        if s == 1:
            return self.h1, self.origin1, self.apex1, self.source1
        return self.h2, self.origin2, self.apex2, self.source2

    def full_edge(self, s: int, k: int) -> Tuple[int, ...]:
        """The 4-edge of H that produced edge ``k`` on side ``s``."""
        h, origin, apex, _ = self.side(s)
        return tuple(sorted([origin[x] for x in h.edges[k]] + [apex[k]]))


def _check_regular_uniform(h: Hypergraph, k: int = 4) -> None:
    if not h.is_uniform(k):
        raise PreconditionViolated(f"{k}-uniform")
    if not h.is_regular(k):
        raise PreconditionViolated(f"{k}-regular")


def derive_pair(h: Hypergraph, coloring: Sequence[Optional[int]],
                maps: Optional[StarMaps] = None) -> DerivedPair:
    _check_regular_uniform(h)
    if any(c not in (1, 2) for c in coloring) or len(coloring) != h.vertex_count:
        raise PreconditionViolated("total coloring")
    if maps is None:
        try:
            maps = star_maps(h, coloring)
        except InvalidColoring as exc:
            raise PreconditionViolated("proper coloring", str(exc)) from None
    if not maps.total:
        raise PreconditionViolated("every vertex fixed")
    classes = {s: tuple(u for u in range(h.vertex_count) if coloring[u] == s) for s in (1, 2)}
    if len(classes[1]) != len(classes[2]):
        _fail("all vertices fixed but the color classes differ in size")
    parts = {}
    for s in (1, 2):
        origin = classes[s]
        local = {u: j for j, u in enumerate(origin)}
        edges, apex, source = [], [], []
        # e_u for u of the other color lies inside this class
        for u in classes[3 - s]:
            j = maps.e_star[u]
            e = [x for x in h.edges[j] if x != u]
            if any(coloring[x] != s for x in e):
                _fail(f"star edge of vertex {u} is not a 3+1 split")
            edges.append(tuple(local[x] for x in e))
            apex.append(u)
            source.append(j)
        parts[s] = (Hypergraph(len(origin), tuple(edges)), origin, tuple(apex), tuple(source))
    (h1, o1, a1, s1), (h2, o2, a2, s2) = parts[1], parts[2]
    pair = DerivedPair(h1, h2, o1, o2, a1, a2, s1, s2)
    for hh in (h1, h2):
        if not (hh.is_uniform(3) and hh.is_regular(3)):
            _fail("derived hypergraph is not 3-regular 3-uniform")
    return pair


# -- the component walk ------------------------------------------------------


@dataclass
class WalkStep:
    side: int
    component: int
    free: int
    removed_apex: Optional[int]
    coloring: Optional[Dict[int, int]] = None


@dataclass
class WalkState:
    """Sequence of visited derived components and the detected cycle."""

    steps: List[WalkStep] = field(default_factory=list)
    registry: Dict[Tuple[int, int], int] = field(default_factory=dict)
    cycle: Optional[Tuple[int, int]] = None
    absorbed: List[Tuple[int, int]] = field(default_factory=list)


class _Construction:
    """Free-vertex construction for one connected hypergraph whose base
    coloring fixes every vertex."""

    def __init__(self, h: Hypergraph, coloring, traces=None):
        self.h = h
        self.traces = traces
        self.pair = derive_pair(h, coloring)
        self.comps = {}
        self.key_of_vertex = {}
        self.key_of_apex = {}
        self.local_edge_of_apex = {}
        for s in (1, 2):
            hh, origin, apex, _ = self.pair.side(s)
            self.comps[s] = components(hh)
            for ci, comp in enumerate(self.comps[s]):
                for x in comp.members:
                    self.key_of_vertex[origin[x]] = (s, ci)
                for k in comp.parts:
                    self.key_of_apex[apex[k]] = (s, ci)
                    self.local_edge_of_apex[apex[k]] = k
        self.color: Dict[int, int] = {}
        self.free: Optional[int] = None
        self.done_edges: List[int] = []
        self.walk = WalkState()

    def comp_vertices(self, key) -> List[int]:
        s, ci = key
        origin = self.pair.side(s)[1]
        return [origin[x] for x in self.comps[s][ci].members]

    def derived_edge(self, apex: int) -> Tuple[int, ...]:
        s, _ = self.key_of_apex[apex]
        hh, origin, _, _ = self.pair.side(s)
        return tuple(origin[x] for x in hh.edges[self.local_edge_of_apex[apex]])

    def color_without(self, key, apex: int, avoid: Optional[int] = None):
        """Color component ``key`` minus the derived edge of ``apex``.

        Every piece left after the deletion gets two free vertices from
        :func:`lemma_two_free`. The smallest of them other than ``avoid``
        stays uncolored; the other pieces are colored totally.
        """
        s, ci = key
        hh, origin, _, _ = self.pair.side(s)
        comp = self.comps[s][ci]
        drop = self.local_edge_of_apex[apex]
        rest = [k for k in comp.parts if k != drop]
        sub, smap = sub_hypergraph(hh, comp.members, rest)
        options = []
        for piece in components(sub):
            ph, pmap = sub_hypergraph(sub, piece.members, piece.parts)
            try:
                cert_v, u, cert_u = lemma_two_free(ph, self.traces)
            except PreconditionViolated as exc:
                _fail(f"piece of a derived component violates the lemma hypotheses: {exc}")
            lift = smap.compose(pmap)
            to_h = [origin[x] for x in lift.var_origin]
            certs = {}
            for cert in (cert_v, cert_u):
                col = {to_h[j]: c for j, c in enumerate(cert.coloring)}
                certs[to_h[cert.free_vertex]] = col
            options.append(certs)
        choices = sorted(x for certs in options for x in certs if x != avoid)
        if not choices:
            _fail("no admissible free vertex in a derived component")
        chosen = choices[0]
        coloring = {}
        for certs in options:
            if chosen in certs:
                coloring.update(certs[chosen])
            else:
                first = min(certs)
                col = dict(certs[first])
                col[first] = 1
                coloring.update(col)
        return coloring, chosen

    def _edge_colors(self, vertices) -> set:
        return {self.color[x] for x in vertices if self.color.get(x) is not None}

    def _check_done(self):
        for j in self.done_edges:
            seen = {self.color.get(x) for x in self.h.edges[j] if x != self.free} - {None}
            if seen != {1, 2}:
                _fail(f"edge {j} became monochromatic during stitching")

    def _mark_done(self, key):
        s, ci = key
        source = self.pair.side(s)[3]
        self.done_edges.extend(source[k] for k in self.comps[s][ci].parts)
        self.walk.absorbed.append(key)

    def run_walk(self):
        start = (1, 0)
        u1 = min(self.comp_vertices(start))
        w = self.walk
        w.steps.append(WalkStep(1, 0, u1, None))
        w.registry[start] = 0
        limit = 2 * (len(self.comps[1]) + len(self.comps[2])) + 2
        while True:
            if len(w.steps) > limit:
                _fail("component walk did not close")
            cur = w.steps[-1]
            key = self.key_of_apex[cur.free]
            if key[0] == cur.side:
                _fail("walk did not alternate sides")
            if key in w.registry:
                ell = w.registry[key]
                coloring, uk = self.color_without(key, cur.free, avoid=w.steps[ell].free)
                w.steps.append(WalkStep(key[0], key[1], uk, cur.free, coloring))
                w.cycle = (ell, len(w.steps) - 1)
                return
            coloring, y = self.color_without(key, cur.free)
            w.registry[key] = len(w.steps)
            w.steps.append(WalkStep(key[0], key[1], y, cur.free, coloring))

    def stitch_cycle(self):
        ell, k = self.walk.cycle
        cyc = self.walk.steps[ell:k + 1]
        # cyc[0] is the root component whose final coloring is cyc[-1]'s
        root, members, close = cyc[0], cyc[1:-1], cyc[-1]
        w1 = root.free
        for st in members:
            self.color.update(st.coloring)
            self.color[st.free] = None
        self.color.update(close.coloring)
        self.color[close.free] = None
        if self.color.get(w1) is None:
            _fail("root vertex of the cycle is uncolored")
        seen = self._edge_colors(self.derived_edge(w1))
        if not seen:
            _fail("derived edge without colored vertices")
        if seen == {self.color[w1]}:
            for x in self.comp_vertices((root.side, root.component)):
                if self.color.get(x) is not None:
                    self.color[x] = 3 - self.color[x]
        for st in members:
            seen = self._edge_colors(self.derived_edge(st.free))
            if not seen:
                _fail("derived edge without colored vertices")
            self.color[st.free] = 3 - next(iter(seen)) if len(seen) == 1 else 1
        self.free = close.free
        for st in [root] + members:
            self._mark_done((st.side, st.component))
        self._check_done()

    def absorb_component(self, v: int, key) -> None:
        """Bring component ``key`` in through the derived edge of ``v``."""
        coloring, x = self.color_without(key, v)
        seen = {coloring[y] for y in self.derived_edge(v) if coloring.get(y) is not None}
        if not seen:
            _fail("derived edge without colored vertices")
        if self.color.get(v) is None:
            if v != self.free:
                _fail("connecting vertex is uncolored but not the free vertex")
            self.color[v] = 3 - next(iter(seen)) if len(seen) == 1 else 1
        else:
            if seen == {self.color[v]}:
                coloring = {y: (None if c is None else 3 - c) for y, c in coloring.items()}
            # the old free vertex lies in no pending edge, so any color is safe
            self.color[self.free] = 1
        self.color.update(coloring)
        self.color[x] = None
        self.free = x
        self._mark_done(key)
        self._check_done()

    def absorb_all(self):
        total = len(self.comps[1]) + len(self.comps[2])
        while len(self.walk.absorbed) < total:
            done = set(self.walk.absorbed)
            inside = sorted(x for x in range(self.h.vertex_count) if self.key_of_vertex[x] in done)
            link = next((x for x in inside if self.key_of_apex[x] not in done), None)
            if link is None:
                _fail("no connecting vertex although the hypergraph is connected")
            self.absorb_component(link, self.key_of_apex[link])

    def run(self) -> ColoringCertificate:
        self.run_walk()
        self.stitch_cycle()
        self.absorb_all()
        coloring = tuple(self.color.get(x) for x in range(self.h.vertex_count))
        return ColoringCertificate(coloring, self.free)


def _free_vertex_connected(h: Hypergraph, base: Optional[Sequence[int]] = None, traces=None):
    """Returns ``(certificate, WalkState or None)`` for a connected input."""
    coloring = tuple(base) if base is not None else two_color(h)
    fixed = fixed_vertices(h, coloring)
    loose = [x for x in range(h.vertex_count) if x not in fixed]
    if loose:
        col = list(coloring)
        col[loose[0]] = None
        return ColoringCertificate(tuple(col), loose[0]), None
    job = _Construction(h, coloring, traces)
    return job.run(), job.walk


def solve_free_vertex(h: Hypergraph, base_coloring: Optional[Sequence[int]] = None,
                      traces: Optional[list] = None, walks: Optional[list] = None) -> ColoringCertificate:
    """Coloring of a 4-regular 4-uniform hypergraph with exactly one uncolored vertex.

    Each component is handled separately starting from ``base_coloring``
    (default: :func:`two_color`). If some vertex is never the unique vertex of
    its color in an edge it is simply uncolored. Otherwise the derived pair is
    built, a walk through its components finds a cycle, the cycle's colorings
    are stitched together and the remaining components are absorbed one by
    one. With several components, the smallest free vertex is kept and the
    others are colored 1.

    ``traces`` collects the NAE reduction traces of all sub-solves and
    ``walks`` the WalkState of each component that needed the walk.
    """
    _check_regular_uniform(h)
    if base_coloring is not None:
        if len(base_coloring) != h.vertex_count or any(c not in (1, 2) for c in base_coloring):
            raise PreconditionViolated("base coloring must be total")
        bad = [j for j, e in enumerate(h.edges) if len({base_coloring[x] for x in e}) < 2]
        if bad:
            raise PreconditionViolated("base coloring must be proper", f"edge {bad[0]} monochromatic")
    coloring: List[Optional[int]] = [None] * h.vertex_count
    frees = []
    for comp in components(h):
        sub, smap = sub_hypergraph(h, comp.members, comp.parts)
        base = None if base_coloring is None else [base_coloring[x] for x in smap.var_origin]
        cert, walk = _free_vertex_connected(sub, base, traces)
        if walks is not None and walk is not None:
            walks.append(walk)
        lifted = smap.lift_coloring(cert)
        for x in comp.members:
            coloring[x] = lifted.coloring[x]
        frees.append(lifted.free_vertex)
    free = min(frees) if frees else None
    for x in frees:
        if x != free:
            coloring[x] = 1
    cert = ColoringCertificate(tuple(coloring), free)
    verdict = verify_coloring_certificate(h, cert)
    if not verdict:
        raise InternalInvariant("free-vertex certificate failed: " + "; ".join(verdict.reasons[:3]))
    return cert
