"""Acceptance criteria, one test each, printing a PASS/FAIL line with counts and time."""

import time

import pytest

from freevertex.colorer import derive_pair, lemma_two_free, solve_free_vertex, two_color
from freevertex.core import instance_from_hypergraph
from freevertex.errors import GenerationFailed, NotTwoColorable
from freevertex.formats import format_certificate
from freevertex.generators import (
    complement,
    complete_uniform,
    fano,
    prop_index,
    proposition_family,
    random_all_fixed,
    random_lemma_instance,
    random_nae_instance,
    random_regular_uniform,
)
from freevertex.nae import solve_free
from freevertex.oracle import (
    all_fixed_colorings,
    free_sets,
    free_variables,
    is_nae_satisfiable,
    verify_coloring_certificate,
    verify_nae_certificate,
)


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail, elapsed, budget=None):
        within = budget is None or elapsed < budget
        status = "PASS" if ok and within else "FAIL"
        limit = "" if budget is None else f" (budget {budget:g}s)"
        with capsys.disabled():
            print(f"\n[{status}] criterion {number}: {title}: {detail}; {elapsed:.2f}s{limit}")
        assert ok, detail
        assert within, f"took {elapsed:.2f}s, budget {budget}s"

    return emit


def nae_corpus(count):
    out, seed = [], 0
    while len(out) < count:
        n = 3 + seed % 10
        m = 1 + (seed // 10) % (n - 1)
        try:
            out.append(random_nae_instance(n, m, seed))
        except GenerationFailed:
            pass
        seed += 1
    return out


def test_c1_solver_soundness(report):
    t0 = time.perf_counter()
    corpus = nae_corpus(1000)
    bad = 0
    for i in corpus:
        cert, _ = solve_free(i)
        if not verify_nae_certificate(i, cert) or cert.free_var not in free_variables(i).free:
            bad += 1
    report(1, "free-variable solver vs oracle", bad == 0,
           f"{len(corpus)} instances, {bad} failures", time.perf_counter() - t0, 60)


def test_c2_extremal_family(report):
    t0 = time.perf_counter()
    got = {s: free_variables(proposition_family(s)).free for s in (1, 2, 3, 4)}
    ok = all(got[s] == {prop_index(s, 1)} for s in got)
    report(2, "extremal family has one free variable", ok,
           ", ".join(f"s={s}: {sorted(v)}" for s, v in got.items()), time.perf_counter() - t0, 10)


def test_c3_fano(report):
    t0 = time.perf_counter()
    try:
        two_color(fano())
        refused = False
    except NotTwoColorable:
        refused = True
    sat = is_nae_satisfiable(instance_from_hypergraph(fano()))
    report(3, "Fano plane not 2-colorable", refused and not sat,
           f"two_color refused={refused}, nae-satisfiable={sat}", time.perf_counter() - t0, 1)


def test_c4_tightness_pair(report):
    t0 = time.perf_counter()
    parts = []
    ok = True
    for name, h in (("complement(fano)", complement(fano())), ("K(5,4)", complete_uniform(5, 4))):
        cert = solve_free_vertex(h)
        singles = free_sets(h, 1)
        pairs = free_sets(h, 2)
        good = (bool(verify_coloring_certificate(h, cert))
                and singles == [(u,) for u in range(h.vertex_count)] and pairs == [])
        ok &= good
        parts.append(f"{name}: free={cert.free_vertex}, singletons={len(singles)}, pairs={len(pairs)}")
    report(4, "tightness pair", ok, "; ".join(parts), time.perf_counter() - t0, 30)


def test_c5_at_scale(report):
    t0 = time.perf_counter()
    total = bad = 0
    walks = []
    for n in (12, 16, 20, 28, 40):
        for seed in range(20):
            h = random_regular_uniform(n, 4, seed)
            total += 1
            bad += not verify_coloring_certificate(h, solve_free_vertex(h, walks=walks))
    report(5, "random 4-regular 4-uniform hypergraphs", bad == 0 and total >= 100,
           f"{total} hypergraphs, {bad} failures, {len(walks)} needed the component walk",
           time.perf_counter() - t0, 300)


def test_c6_two_free_vertices(report):
    t0 = time.perf_counter()
    total = bad = checked = 0
    for seed in range(500):
        n = 3 + seed % 16
        h = random_lemma_instance(n, seed)
        cv, u, cu = lemma_two_free(h)
        total += 1
        ok = (cv.free_vertex != u and cu.free_vertex == u
              and verify_coloring_certificate(h, cv) and verify_coloring_certificate(h, cu))
        if ok and n <= 14:
            checked += 1
            singles = {x for (x,) in free_sets(h, 1)}
            ok = cv.free_vertex in singles and u in singles
        bad += not ok
    report(6, "two distinct free vertices", bad == 0,
           f"{total} inputs, {checked} oracle-checked, {bad} failures", time.perf_counter() - t0, 120)


def test_c7_structural_accounting(report):
    t0 = time.perf_counter()
    colorings = []
    # constructed all-fixed colorings of several shapes
    for shape in (([4], [4]), ([5], [5]), ([4, 4], [8]), ([4, 5], [5, 4]), ([4, 4, 4], [6, 6]), ([10], [4, 6])):
        for seed in range(20):
            colorings.append(random_all_fixed(*shape, seed=seed))
    # exhaustive search for all-fixed colorings at small even order
    enumerated = 0
    for n in (8, 10, 12, 14, 16):
        for seed in range(4):
            h = random_regular_uniform(n, 4, seed)
            for col in all_fixed_colorings(h):
                colorings.append((h, col))
                enumerated += 1
        h, _ = random_all_fixed([n // 2], [n // 2], seed=n)
        for col in all_fixed_colorings(h):
            colorings.append((h, col))
            enumerated += 1
    bad = 0
    for h, col in colorings:
        pair = derive_pair(h, col)
        good = (pair.h1.vertex_count == pair.h2.vertex_count
                and all(x.is_uniform(3) and x.is_regular(3) for x in (pair.h1, pair.h2))
                and len(pair.h1.edges) == pair.h2.vertex_count)
        good = good and bool(verify_coloring_certificate(h, solve_free_vertex(h, base_coloring=col)))
        bad += not good
    report(7, "derived pair is 3-regular 3-uniform with equal sides", bad == 0 and enumerated > 0,
           f"{len(colorings)} all-fixed colorings ({enumerated} by enumeration), {bad} failures",
           time.perf_counter() - t0)


def _corpus_run():
    certs, dumps, depth_ok = [], [], True
    for i in nae_corpus(200) + [proposition_family(s) for s in range(1, 20)]:
        cert, trace = solve_free(i)
        certs.append(format_certificate(cert))
        dumps.append(trace.dump())
        depth_ok &= trace.depth <= len(i.clauses)
    for seed in range(40):
        h = random_lemma_instance(3 + seed % 16, seed)
        traces = []
        cv, u, cu = lemma_two_free(h, traces)
        certs += [format_certificate(cv), format_certificate(cu)]
        dumps += [t.dump() for t in traces]
        depth_ok &= all(t.depth <= len(h.edges) for t in traces)
    for shape, seed in ((([4, 4], [8]), 1), (([4, 5], [5, 4]), 2)):
        h, col = random_all_fixed(*shape, seed=seed)
        traces = []
        certs.append(format_certificate(solve_free_vertex(h, base_coloring=col, traces=traces)))
        dumps += [t.dump() for t in traces]
        depth_ok &= all(t.depth < h.vertex_count for t in traces)
    for n in (12, 20, 40):
        h = random_regular_uniform(n, 4, 7)
        certs.append(format_certificate(solve_free_vertex(h)))
    return certs, dumps, depth_ok


def test_c8_determinism_and_depth(report):
    t0 = time.perf_counter()
    a = _corpus_run()
    b = _corpus_run()
    same = a[0] == b[0] and a[1] == b[1]
    report(8, "determinism and depth bound", same and a[2],
           f"{len(a[0])} certificates and {len(a[1])} traces identical={same}, depth<=clauses={a[2]}",
           time.perf_counter() - t0)
