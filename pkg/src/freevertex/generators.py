"""Named hypergraphs, the extremal instance family, and seeded random inputs.

Random generators draw from :class:`random.Random` (Mersenne Twister) seeded
with the given integer, so an output is a pure function of its parameters
and seed.
"""

from __future__ import annotations

import random
from itertools import combinations

from .core import Clause, Hypergraph, Literal, NaeInstance, components, instance_from_hypergraph, neg, pos
from .errors import GenerationFailed, InvalidParams

# Lines of PG(2,2) on points 0..6.
FANO_LINES = ((0, 1, 2), (0, 3, 4), (0, 5, 6), (1, 3, 5), (1, 4, 6), (2, 3, 6), (2, 4, 5))

EDGE_RETRIES = 10_000
RESTARTS = 100


def fano() -> Hypergraph:
    return Hypergraph(7, FANO_LINES)


def complement(h: Hypergraph) -> Hypergraph:
    """Same vertices; each edge replaced by its complement in the vertex set."""
    every = set(range(h.vertex_count))
    return Hypergraph(h.vertex_count, tuple(tuple(sorted(every - set(e))) for e in h.edges))


def complete_uniform(n: int, k: int) -> Hypergraph:
    if not 1 <= k <= n:
        raise InvalidParams(f"need 1 <= k <= n, got n={n}, k={k}")
    return Hypergraph(n, tuple(combinations(range(n), k)))


def prop_index(i: int, j: int) -> int:
    """Index of variable v_i^j (both 1-based) in :func:`proposition_family`."""
    return 3 * (i - 1) + (j - 1)


def proposition_family(s: int) -> NaeInstance:
    """Connected instance on ``3s`` variables and ``3s - 1`` clauses whose
    only free variable is ``v_s^1``.

    Clauses, in order: for each block ``i`` the pair ``(v_i^1, v_i^2, v_i^3)``
    and ``(~v_i^1, v_i^2, v_i^3)``; then the links
    ``(v_i^1, v_{i+1}^2, ~v_{i+1}^3)`` for ``i < s``.
    """
    if s < 1:
        raise InvalidParams(f"s must be >= 1, got {s}")
    v = prop_index
    clauses = []
    for i in range(1, s + 1):
        clauses.append(Clause((pos(v(i, 1)), pos(v(i, 2)), pos(v(i, 3)))))
        clauses.append(Clause((neg(v(i, 1)), pos(v(i, 2)), pos(v(i, 3)))))
    for i in range(1, s):
        clauses.append(Clause((pos(v(i, 1)), pos(v(i + 1, 2)), neg(v(i + 1, 3)))))
    return NaeInstance(3 * s, tuple(clauses))


def random_regular_uniform(n: int, k: int, seed: int) -> Hypergraph:
    """Connected k-regular k-uniform hypergraph on ``n`` vertices.

    Configuration model: ``n*k`` stubs are grouped into k-sets one edge at a
    time; a candidate edge repeating a vertex is redrawn. A dead end or a
    disconnected result restarts from scratch.
    """
    if k < 2 or n < k + 1:
        raise InvalidParams(f"need k >= 2 and n >= k+1, got n={n}, k={k}")
    rng = random.Random(seed)
    for _ in range(RESTARTS):
        stubs = [u for u in range(n) for _ in range(k)]
        edges = []
        while stubs:
            if len(set(stubs)) < k:
                break
            for _ in range(EDGE_RETRIES):
                pick = rng.sample(range(len(stubs)), k)
                if len({stubs[p] for p in pick}) == k:
                    break
            else:
                break
            edges.append(tuple(sorted(stubs[p] for p in pick)))
            for p in sorted(pick, reverse=True):
                stubs[p] = stubs[-1]
                stubs.pop()
        if stubs:
            continue
        h = Hypergraph(n, tuple(sorted(edges)))
        if len(components(h)) == 1:
            return h
    raise GenerationFailed(f"no connected {k}-regular {k}-uniform hypergraph on {n} vertices", seed)


def _sparse_triples(n: int, m: int, rng: random.Random):
    """One attempt at a connected 3-uniform edge list, max degree 3, ``m`` edges."""
    if n == 1:
        return [] if m == 0 else None
    if n < 3 or m < 1:
        return None
    order = list(range(n))
    rng.shuffle(order)
    deg = [0] * n
    covered = order[:3]
    rest = order[3:]
    edges = [tuple(covered)]
    for u in covered:
        deg[u] += 1
    while rest:
        r, budget = len(rest), m - len(edges)
        if (r + 1) // 2 > budget:
            return None
        if r == 1:
            fresh = 1
        elif r // 2 > budget - 1:
            fresh = 2
        else:
            fresh = rng.choice((1, 2))
        old = [u for u in covered if deg[u] < 3]
        if len(old) < 3 - fresh:
            return None
        e = rng.sample(old, 3 - fresh) + rest[:fresh]
        covered += rest[:fresh]
        rest = rest[fresh:]
        for u in e:
            deg[u] += 1
        edges.append(tuple(e))
    while len(edges) < m:
        open_ = [u for u in range(n) if deg[u] < 3]
        if len(open_) < 3:
            return None
        e = rng.sample(open_, 3)
        for u in e:
            deg[u] += 1
        edges.append(tuple(e))
    return edges


def _min_edges(n: int) -> int:
    return 0 if n == 1 else 1 + (n - 2) // 2


def is_lemma_input(h: Hypergraph) -> bool:
    """Connected, 3-uniform, no isolated vertex, |E| < |V|, max degree <= 3."""
    degs = h.degrees()
    return (h.vertex_count >= 1 and h.is_uniform(3) and len(h.edges) < h.vertex_count
            and all(1 <= d <= 3 for d in degs) and len(components(h)) == 1)


def is_solver_input(i: NaeInstance) -> bool:
    degs = i.degrees()
    return (i.var_count >= 1 and len(i.clauses) < i.var_count and max(degs) <= 3
            and len(components(i)) == 1)


def random_nae_instance(n: int, m: int, seed: int) -> NaeInstance:
    """Connected instance, ``n`` variables, ``m < n`` clauses, max degree 3,
    uniformly random literal polarities."""
    if m >= n or m < 0:
        raise InvalidParams(f"need 0 <= m < n, got n={n}, m={m}")
    if m < _min_edges(n) or n == 2:
        raise GenerationFailed(f"{m} clauses cannot connect {n} variables", seed)
    rng = random.Random(seed)
    for _ in range(RESTARTS * 10):
        triples = _sparse_triples(n, m, rng)
        if triples is None:
            continue
        clauses = tuple(Clause(tuple(Literal(u, rng.random() < 0.5) for u in t)) for t in triples)
        inst = NaeInstance(n, clauses)
        if is_solver_input(inst):
            return inst
    raise GenerationFailed(f"no valid instance with n={n}, m={m}", seed)


def random_lemma_instance(n: int, seed: int) -> Hypergraph:
    """Connected 3-uniform hypergraph on ``n >= 3`` vertices with fewer edges
    than vertices, max degree 3 and no isolated vertex."""
    if n < 3:
        raise InvalidParams(f"need n >= 3, got {n}")
    rng = random.Random(seed)
    for _ in range(RESTARTS * 10):
        m = rng.randint(_min_edges(n), n - 1)
        triples = _sparse_triples(n, m, rng)
        if triples is None:
            continue
        h = Hypergraph(n, tuple(triples))
        if is_lemma_input(h):
            return h
    raise GenerationFailed(f"no valid lemma input with n={n}", seed)


def fano_instance() -> NaeInstance:
    return instance_from_hypergraph(fano())


def random_all_fixed(sizes1, sizes2, seed: int):
    """4-regular 4-uniform hypergraph with a coloring that fixes every vertex.

    Each color class is a disjoint union of connected 3-regular 3-uniform
    pieces of the given sizes (each >= 4, equal totals). Every 3-edge of one
    class is completed to a 4-edge by a distinct vertex of the other class,
    so each 4-edge splits 3+1 and every vertex is the unique-color vertex of
    exactly one edge. Vertex labels are shuffled. Returns ``(h, coloring)``.
    """
    if sum(sizes1) != sum(sizes2) or min(list(sizes1) + list(sizes2)) < 4:
        raise InvalidParams("need equal class sizes and pieces of at least 4 vertices")
    rng = random.Random(seed)
    m = sum(sizes1)
    for _ in range(RESTARTS):
        label = list(range(2 * m))
        rng.shuffle(label)
        side_edges = {}
        for s, sizes, offset in ((1, sizes1, 0), (2, sizes2, m)):
            edges, base = [], offset
            for size in sizes:
                piece = random_regular_uniform(size, 3, rng.getrandbits(64))
                edges += [tuple(base + x for x in e) for e in piece.edges]
                base += size
            side_edges[s] = edges
        apex1 = list(range(m, 2 * m))
        apex2 = list(range(m))
        rng.shuffle(apex1)
        rng.shuffle(apex2)
        raw = [e + (a,) for e, a in zip(side_edges[1], apex1)]
        raw += [e + (a,) for e, a in zip(side_edges[2], apex2)]
        h = Hypergraph(2 * m, tuple(sorted(tuple(label[x] for x in e) for e in raw)))
        if len(components(h)) != 1:
            continue
        coloring = [0] * (2 * m)
        for x in range(2 * m):
            coloring[label[x]] = 1 if x < m else 2
        return h, tuple(coloring)
    raise GenerationFailed("no connected all-fixed construction", seed)
