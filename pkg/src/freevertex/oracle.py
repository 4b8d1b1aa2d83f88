"""Exhaustive ground truth for small instances, plus certificate verifiers.

Enumeration walks assignments as integer bitmasks in a fixed order: bit ``j``
of mask ``a`` is the value of variable ``j`` (True) or the color of vertex
``j`` (1 when set, 2 when clear). A clause over variable mask ``m`` with
negation mask ``n`` is nae-satisfied by ``a`` iff ``(a ^ n) & m`` is neither
``0`` nor ``m``; the same test with ``n = 0`` decides bichromatic edges.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional, Sequence

import numpy as np

from .core import (
    ColoringCertificate,
    Hypergraph,
    NaeCertificate,
    NaeInstance,
    PartialAssignment,
    PartialColoring,
)
from .errors import InvalidColoring, TooLarge

DEFAULT_LIMIT = 24
_CHUNK = 1 << 20


def exhaustive_limit() -> int:
    env = os.environ.get("FREEVERTEX_LIMIT")
    return int(env) if env else DEFAULT_LIMIT


def _check_size(n: int, limit: Optional[int]) -> None:
    limit = exhaustive_limit() if limit is None else limit
    if n > limit:
        raise TooLarge(f"{n} variables exceeds the exhaustive limit {limit}")


def _mask_chunks(n: int):
    total = 1 << n
    for start in range(0, total, _CHUNK):
        yield np.arange(start, min(total, start + _CHUNK), dtype=np.int64)


def _clause_masks(i: NaeInstance):
    out = []
    for c in i.clauses:
        m = n = 0
        for l in c:
            m |= 1 << l.var
            if l.negated:
                n |= 1 << l.var
        out.append((m, n))
    return out


def _nae(a, m: int, n: int):
    t = (a ^ n) & m
    return (t != 0) & (t != m)


def _values(mask: int, n: int):
    return [bool(mask >> j & 1) for j in range(n)]


@dataclass
class FreeReport:
    """Exact free elements with one witness per element.

    For instances the witnesses are partial assignments; for hypergraphs they
    are partial colorings.
    """

    satisfiable: bool
    free: set
    max_free_set_size_checked: int = 1
    witnesses: dict = field(default_factory=dict)

    @property
    def free_variables(self) -> set:
        return self.free

    @property
    def free_vertices(self) -> set:
        return self.free


def is_nae_satisfiable(i: NaeInstance, limit: Optional[int] = None) -> bool:
    return nae_witness(i, limit) is not None


def nae_witness(i: NaeInstance, limit: Optional[int] = None) -> Optional[PartialAssignment]:
    """The first total nae-satisfying assignment in mask order, or None."""
    _check_size(i.var_count, limit)
    masks = _clause_masks(i)
    for a in _mask_chunks(i.var_count):
        ok = np.ones(a.shape, dtype=bool)
        for m, n in masks:
            ok &= _nae(a, m, n)
        hit = np.flatnonzero(ok)
        if hit.size:
            return tuple(_values(int(a[hit[0]]), i.var_count))
    return None


def free_variables(i: NaeInstance, limit: Optional[int] = None) -> FreeReport:
    """Every variable that can stay unassigned in some nae-satisfying assignment."""
    n = i.var_count
    _check_size(n, limit)
    masks = _clause_masks(i)
    touching = [[] for _ in range(n)]
    for j, c in enumerate(i.clauses):
        for v in c.vars:
            touching[v].append(j)
    witnesses = {}
    satisfiable = False
    for a in _mask_chunks(n):
        full = [_nae(a, m, ng) for m, ng in masks]
        count = np.zeros(a.shape, dtype=np.int32)
        for f in full:
            count += f
        if not satisfiable and np.any(count == len(masks)):
            satisfiable = True
        for v in range(n):
            if v in witnesses:
                continue
            bit = 1 << v
            # other clauses fully nae, and v's clauses nae on the remaining two literals
            ok = (count - sum((full[j] for j in touching[v]), np.zeros(a.shape, np.int32))
                  == len(masks) - len(touching[v]))
            for j in touching[v]:
                m, ng = masks[j]
                ok &= _nae(a, m & ~bit, ng & ~bit)
            hit = np.flatnonzero(ok)
            if hit.size:
                vals = _values(int(a[hit[0]]), n)
                vals[v] = None
                witnesses[v] = tuple(vals)
        if satisfiable and len(witnesses) == n:
            break
    # a free variable implies satisfiability: its witness extends either way
    return FreeReport(satisfiable or bool(witnesses), set(witnesses), 1, witnesses)


def _edge_masks(h: Hypergraph):
    return [sum(1 << u for u in e) for e in h.edges]


def _bichromatic(a, m: int):
    t = a & m
    return (t != 0) & (t != m)


def _coloring(mask: int, n: int, uncolored=()) -> PartialColoring:
    col = [1 if mask >> j & 1 else 2 for j in range(n)]
    for x in uncolored:
        col[x] = None
    return tuple(col)


def free_set_witness(h: Hypergraph, xs: Sequence[int], limit: Optional[int] = None,
                     ) -> Optional[PartialColoring]:
    """A coloring leaving ``xs`` uncolored with every edge bichromatic, or None."""
    n = h.vertex_count
    _check_size(n, limit)
    xmask = sum(1 << x for x in xs)
    reduced = [m & ~xmask for m in _edge_masks(h)]
    # an edge with fewer than two colored vertices can never see both colors
    if any(bin(m).count("1") < 2 for m in reduced):
        return None
    for a in _mask_chunks(n):
        ok = np.ones(a.shape, dtype=bool)
        for m in reduced:
            ok &= _bichromatic(a, m)
        hit = np.flatnonzero(ok)
        if hit.size:
            return _coloring(int(a[hit[0]]), n, xs)
    return None


def is_two_colorable(h: Hypergraph, limit: Optional[int] = None) -> bool:
    return free_set_witness(h, (), limit) is not None


def free_sets(h: Hypergraph, size: int, limit: Optional[int] = None) -> list:
    """All vertex sets of the given size that can be left uncolored."""
    _check_size(h.vertex_count, limit)
    return [xs for xs in combinations(range(h.vertex_count), size)
            if free_set_witness(h, xs, limit) is not None]


def free_vertices(h: Hypergraph, limit: Optional[int] = None) -> FreeReport:
    witnesses = {}
    for v in range(h.vertex_count):
        w = free_set_witness(h, (v,), limit)
        if w is not None:
            witnesses[v] = w
    sat = bool(witnesses) or is_two_colorable(h, limit)
    return FreeReport(sat, set(witnesses), 1, witnesses)


# -- verification ------------------------------------------------------------


@dataclass
class Verdict:
    """Boolean outcome plus the reasons it failed, if it did."""

    ok: bool
    reasons: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def verify_nae_certificate(i: NaeInstance, cert: NaeCertificate) -> Verdict:
    a = cert.assignment
    reasons = []
    if len(a) != i.var_count:
        return Verdict(False, [f"assignment has length {len(a)}, instance has {i.var_count} variables"])
    for v, x in enumerate(a):
        if x is not None and not isinstance(x, bool):
            reasons.append(f"variable {v} has non-boolean value {x!r}")
    f = cert.free_var
    if f is not None and not 0 <= f < i.var_count:
        return Verdict(False, [f"free variable {f} out of range"])
    if f is not None and a[f] is not None:
        reasons.append(f"free variable {f} is assigned")
    for v, x in enumerate(a):
        if x is None and v != f:
            reasons.append(f"variable {v} is unassigned but not the free variable")
    for j, c in enumerate(i.clauses):
        seen = {l.value(a[l.var]) for l in c if a[l.var] is not None and l.var != f}
        if seen != {True, False}:
            reasons.append(f"clause {j} {c} is not nae-satisfied")
    return Verdict(not reasons, reasons)


def verify_coloring_certificate(h: Hypergraph, cert: ColoringCertificate) -> Verdict:
    col = cert.coloring
    reasons = []
    if len(col) != h.vertex_count:
        return Verdict(False, [f"coloring has length {len(col)}, hypergraph has {h.vertex_count} vertices"])
    for u, x in enumerate(col):
        if x not in (1, 2, None):
            reasons.append(f"vertex {u} has invalid color {x!r}")
    f = cert.free_vertex
    if f is not None and not 0 <= f < h.vertex_count:
        return Verdict(False, [f"free vertex {f} out of range"])
    if f is not None and col[f] is not None:
        reasons.append(f"free vertex {f} is colored")
    for u, x in enumerate(col):
        if x is None and u != f:
            reasons.append(f"vertex {u} is uncolored but not the free vertex")
    for j, e in enumerate(h.edges):
        if {col[u] for u in e if u != f and col[u] is not None} != {1, 2}:
            reasons.append(f"edge {j} {e} is not bichromatic")
    return Verdict(not reasons, reasons)


def fixed_vertices(h: Hypergraph, coloring: Sequence[Optional[int]], excluded=()) -> set:
    """Vertices that are the only one of their color in some scanned edge.

    Edges whose positions are in ``excluded`` are skipped; uncolored vertices
    never count.
    """
    skip = set(excluded)
    fixed = set()
    for j, e in enumerate(h.edges):
        if j in skip:
            continue
        by_color = {1: [], 2: []}
        for u in e:
            if coloring[u] is not None:
                by_color[coloring[u]].append(u)
        if not by_color[1] or not by_color[2]:
            raise InvalidColoring(f"edge {j} {e} is monochromatic")
        for members in by_color.values():
            if len(members) == 1:
                fixed.add(members[0])
    return fixed


def all_fixed_colorings(h: Hypergraph, limit: Optional[int] = None) -> list:
    """Every proper total coloring in which each vertex is the unique vertex
    of its color in some edge, in mask order.

    Only meaningful for hypergraphs with as many edges as vertices; the
    colorings come back as tuples of 1/2.
    """
    n = h.vertex_count
    _check_size(n, limit)
    masks = _edge_masks(h)
    if len(masks) != n:
        return []
    found = []
    for a in _mask_chunks(n):
        ok = np.ones(a.shape, dtype=bool)
        for m in masks:
            t = np.bitwise_count((a & m).astype(np.uint64)) if hasattr(np, "bitwise_count") else None
            if t is None:
                t = np.zeros(a.shape, dtype=np.int64)
                for x in range(n):
                    if m >> x & 1:
                        t += (a >> x) & 1
            size = bin(m).count("1")
            ok &= (t == 1) | (t == size - 1)
        for idx in np.flatnonzero(ok):
            mask = int(a[idx])
            col = _coloring(mask, n)
            unique = set()
            for e in h.edges:
                ones = [u for u in e if col[u] == 1]
                twos = [u for u in e if col[u] == 2]
                unique.add(ones[0] if len(ones) == 1 else twos[0])
            if len(unique) == n:
                found.append(col)
    return found
