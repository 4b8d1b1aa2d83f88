"""``freevertex`` command line: gen, solve, verify, oracle, bench.

Exit codes: 0 ok, 1 certificate rejected, 2 bad input or parameters,
3 generation failed, 4 precondition violated, 5 not 2-colorable,
6 internal invariant broken (or unverified bench row), 7 too large for the
exhaustive oracle.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor

from . import generators as gen
from .colorer import lemma_two_free, solve_free_vertex, two_color
from .core import (
    ColoringCertificate,
    Hypergraph,
    NaeCertificate,
    NaeInstance,
    hypergraph_from_instance,
    instance_from_hypergraph,
)
from .errors import (
    FormatError,
    GenerationFailed,
    InternalInvariant,
    InvalidColoring,
    InvalidParams,
    NonUniformEdge,
    NotTwoColorable,
    PreconditionViolated,
    TooLarge,
)
from .formats import (
    format_certificate,
    format_dimacs,
    format_hypergraph,
    load,
    parse_certificate,
)
from . import oracle
from .nae import solve_free

EXIT_OK, EXIT_REJECTED, EXIT_INPUT, EXIT_GEN, EXIT_PRE, EXIT_NOT2C, EXIT_INTERNAL, EXIT_TOO_LARGE = range(8)

GEN_KINDS = ("fano", "fano-complement", "complete", "prop-family",
             "random-regular", "random-lemma", "random-nae")

# default solve mode per generator kind, used by bench
BENCH_MODE = {
    "fano": "two-color",
    "fano-complement": "free-vertex",
    "complete": "free-vertex",
    "random-regular": "free-vertex",
    "random-lemma": "lemma",
    "prop-family": "nae-free",
    "random-nae": "nae-free",
}


class CliError(Exception):
    def __init__(self, code, msg):
        self.code = code
        super().__init__(msg)


def _err(msg):
    print(msg, file=sys.stderr)


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise InvalidParams(f"{args.kind} needs " + ", ".join("--" + n for n in missing))


def build(kind, n=None, k=None, m=None, s=None, seed=0):
    """The object a ``gen`` call would write, as a Hypergraph or NaeInstance."""
    if kind == "fano":
        return gen.fano()
    if kind == "fano-complement":
        return gen.complement(gen.fano())
    if kind == "complete":
        return gen.complete_uniform(5 if n is None else n, 4 if k is None else k)
    if kind == "prop-family":
        if s is None:
            raise InvalidParams("prop-family needs --s")
        return gen.proposition_family(s)
    if kind == "random-regular":
        if n is None:
            raise InvalidParams("random-regular needs --n")
        return gen.random_regular_uniform(n, 4 if k is None else k, seed)
    if kind == "random-lemma":
        if n is None:
            raise InvalidParams("random-lemma needs --n")
        return gen.random_lemma_instance(n, seed)
    if kind == "random-nae":
        if n is None or m is None:
            raise InvalidParams("random-nae needs --n and --m")
        return gen.random_nae_instance(n, m, seed)
    raise InvalidParams(f"unknown kind {kind!r}")


def _as_text(obj, fmt):
    if fmt is None:
        fmt = "hg" if isinstance(obj, Hypergraph) else "cnf"
    if fmt == "cnf":
        if isinstance(obj, Hypergraph):
            obj = instance_from_hypergraph(obj)
        return format_dimacs(obj)
    if isinstance(obj, NaeInstance):
        if any(l.negated for c in obj.clauses for l in c):
            raise InvalidParams("instance has negated literals; it has no .hg form")
        obj = hypergraph_from_instance(obj)
    return format_hypergraph(obj)


def _counts(obj):
    if isinstance(obj, Hypergraph):
        return {"vertices": obj.vertex_count, "edges": len(obj.edges)}
    return {"variables": obj.var_count, "clauses": len(obj.clauses)}


def cmd_gen(args):
    obj = build(args.kind, args.n, args.k, args.m, args.s, args.seed)
    _emit(_as_text(obj, args.format), args.out)
    report = json.dumps({"kind": args.kind, **_counts(obj)})
    # counts go to stdout unless the object itself went there
    print(report, file=sys.stdout if args.out else sys.stderr)
    return EXIT_OK


def _as_instance(obj):
    if isinstance(obj, NaeInstance):
        return obj
    try:
        return instance_from_hypergraph(obj)
    except NonUniformEdge as exc:
        raise CliError(EXIT_INPUT, f"nae-free needs 3-uniform edges: {exc}")


def _as_hypergraph(obj):
    if isinstance(obj, Hypergraph):
        return obj
    if any(l.negated for c in obj.clauses for l in c):
        raise CliError(EXIT_INPUT, "instance has negated literals; expected a hypergraph")
    return hypergraph_from_instance(obj)


def _fallback(obj, mode, limit):
    """Oracle-derived certificate with the smallest free element, or None."""
    try:
        if mode == "nae-free":
            rep = oracle.free_variables(obj, limit)
            if not rep.free:
                return None
            f = min(rep.free)
            return NaeCertificate(rep.witnesses[f], f)
        rep = oracle.free_vertices(obj, limit)
        if not rep.free:
            return None
        f = min(rep.free)
        return ColoringCertificate(rep.witnesses[f], f)
    except TooLarge:
        return None


def _solve(obj, mode, trace_out):
    if mode == "nae-free":
        inst = _as_instance(obj)
        cert, trace = solve_free(inst)
        trace_out.append(trace)
        return inst, cert
    h = _as_hypergraph(obj)
    if mode == "two-color":
        return h, ColoringCertificate(two_color(h), None)
    return h, solve_free_vertex(h, traces=trace_out)


def _verify(obj, cert):
    if isinstance(cert, NaeCertificate):
        return oracle.verify_nae_certificate(obj, cert)
    return oracle.verify_coloring_certificate(obj, cert)


def cmd_solve(args):
    obj = load(args.path, args.format)
    traces = []
    fallback = False
    try:
        target, cert = _solve(obj, args.mode, traces)
    except InternalInvariant as exc:
        partial = getattr(exc, "trace", None)
        if partial is not None:
            traces.append(partial)
        _err(f"internal invariant: {exc}")
        for t in traces:
            sys.stderr.write(t.dump())
        if not args.fallback_oracle:
            return EXIT_INTERNAL
        target = _as_instance(obj) if args.mode == "nae-free" else _as_hypergraph(obj)
        cert = _fallback(target, args.mode, args.limit)
        if cert is None:
            _err("oracle fallback unavailable for this input")
            return EXIT_INTERNAL
        _err(f"discrepancy: solver failed, oracle found free element {_free_of(cert)}")
        fallback = True
    verdict = _verify(target, cert)
    if not verdict:
        _err("certificate failed re-verification: " + "; ".join(verdict.reasons))
        return EXIT_INTERNAL
    if args.trace:
        for t in traces:
            sys.stderr.write(t.dump())
    _emit(format_certificate(cert, fallback), args.out)
    return EXIT_OK


def _free_of(cert):
    return cert.free_var if isinstance(cert, NaeCertificate) else cert.free_vertex


def cmd_verify(args):
    obj = load(args.path, args.format)
    try:
        with open(args.certificate) as fh:
            cert = parse_certificate(fh.read())
    except OSError as exc:
        raise FormatError(str(exc)) from None
    if isinstance(cert, NaeCertificate):
        obj = _as_instance(obj)
        size, length = obj.var_count, len(cert.assignment)
    else:
        obj = _as_hypergraph(obj)
        size, length = obj.vertex_count, len(cert.coloring)
    if size != length:
        raise CliError(EXIT_INPUT, f"certificate has {length} entries, input has {size}")
    verdict = _verify(obj, cert)
    if verdict:
        print(json.dumps({"verified": True}))
        return EXIT_OK
    for r in verdict.reasons:
        _err(r)
    print(json.dumps({"verified": False, "reasons": verdict.reasons}))
    return EXIT_REJECTED


def cmd_oracle(args):
    obj = load(args.path, args.format)
    limit = args.limit
    q = args.query
    if q == "sat":
        if isinstance(obj, NaeInstance):
            result = oracle.is_nae_satisfiable(obj, limit)
        else:
            result = oracle.is_two_colorable(obj, limit)
        report = {"query": q, "result": result}
    elif q == "free-vars":
        rep = oracle.free_variables(obj, limit) if isinstance(obj, NaeInstance) else oracle.free_vertices(obj, limit)
        report = {"query": q, "satisfiable": rep.satisfiable, "free": sorted(rep.free)}
    elif q == "free-sets":
        if args.size is None:
            raise InvalidParams("free-sets needs --size")
        h = _as_hypergraph(obj)
        report = {"query": q, "size": args.size, "free_sets": [list(x) for x in oracle.free_sets(h, args.size, limit)]}
    else:
        if args.coloring is None:
            raise InvalidParams("fixed needs --coloring")
        h = _as_hypergraph(obj)
        with open(args.coloring) as fh:
            cert = parse_certificate(fh.read())
        if not isinstance(cert, ColoringCertificate) or len(cert.coloring) != h.vertex_count:
            raise CliError(EXIT_INPUT, "coloring does not match the hypergraph")
        try:
            fixed = oracle.fixed_vertices(h, cert.coloring)
        except InvalidColoring as exc:
            raise CliError(EXIT_INPUT, str(exc))
        report = {"query": q, "fixed": sorted(fixed)}
    _emit(json.dumps(report) + "\n", args.out)
    return EXIT_OK


# -- bench -------------------------------------------------------------------

BENCH_FIELDS = ("index", "kind", "params", "seed", "mode", "size", "edges",
                "seconds", "depth", "cases", "verified")


def _expand_corpus(spec):
    """Corpus entries become ``(kind, params, seed, mode)`` items in order.

    Each entry: ``{"kind": ..., "params": {...}, "seeds": [start, stop]}``
    (stop exclusive) or ``"seed": s``; ``"mode"`` overrides the default.
    Deterministic kinds may omit seeds.
    """
    if isinstance(spec, dict):
        spec = spec.get("corpus", [])
    if not isinstance(spec, list):
        raise InvalidParams("corpus spec must be a list of entries")
    items = []
    for entry in spec:
        if not isinstance(entry, dict) or entry.get("kind") not in GEN_KINDS:
            raise InvalidParams(f"bad corpus entry {entry!r}")
        params = dict(entry.get("params", {}))
        if set(params) - {"n", "k", "m", "s"}:
            raise InvalidParams(f"unknown params in {entry!r}")
        if "seeds" in entry:
            lo, hi = entry["seeds"]
            seeds = range(lo, hi)
        else:
            seeds = [entry.get("seed", 0)]
        mode = entry.get("mode", BENCH_MODE[entry["kind"]])
        if mode not in ("nae-free", "free-vertex", "two-color", "lemma"):
            raise InvalidParams(f"unknown mode {mode!r}")
        for sd in seeds:
            items.append((entry["kind"], params, sd, mode))
    return items


def _bench_one(index, item):
    kind, params, seed, mode = item
    obj = build(kind, seed=seed, **params)
    traces = []
    t0 = time.perf_counter()
    try:
        if mode == "lemma":
            h = _as_hypergraph(obj)
            cv, u, cu = lemma_two_free(h, traces)
            ok = bool(oracle.verify_coloring_certificate(h, cv)) and bool(oracle.verify_coloring_certificate(h, cu))
        else:
            target, cert = _solve(obj, mode, traces)
            ok = bool(_verify(target, cert))
    except NotTwoColorable as exc:
        # a refusal counts as verified when the oracle confirms it
        try:
            ok = mode == "two-color" and not oracle.is_two_colorable(_as_hypergraph(obj))
        except TooLarge:
            ok = False
        if not ok:
            _err(f"row {index}: NotTwoColorable: {exc}")
    except (InternalInvariant, PreconditionViolated) as exc:
        _err(f"row {index}: {type(exc).__name__}: {exc}")
        ok = False
    elapsed = time.perf_counter() - t0
    hist = {}
    for t in traces:
        for case, c in t.histogram().items():
            hist[case] = hist.get(case, 0) + c
    counts = _counts(obj)
    size, edges = list(counts.values())
    return {
        "index": index,
        "kind": kind,
        "params": ";".join(f"{k}={v}" for k, v in sorted(params.items())),
        "seed": seed,
        "mode": mode,
        "size": size,
        "edges": edges,
        "seconds": f"{elapsed:.6f}",
        "depth": max((t.depth for t in traces), default=0),
        "cases": ";".join(f"{k}:{v}" for k, v in sorted(hist.items())),
        "verified": "true" if ok else "false",
    }


def cmd_bench(args):
    try:
        if args.corpus == "-":
            spec = json.load(sys.stdin)
        else:
            with open(args.corpus) as fh:
                spec = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"corpus: {exc}") from None
    items = _expand_corpus(spec)
    t0 = time.perf_counter()
    with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
        rows = list(pool.map(_bench_one, range(len(items)), items))
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=BENCH_FIELDS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    _emit(buf.getvalue(), args.out)
    bad = sum(r["verified"] != "true" for r in rows)
    _err(f"bench: {len(rows)} rows, {len(rows) - bad} verified, {bad} failed, "
         f"max depth {max((r['depth'] for r in rows), default=0)}, "
         f"{time.perf_counter() - t0:.3f}s")
    return EXIT_INTERNAL if bad else EXIT_OK


# -- argument parsing ----------------------------------------------------------


def make_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("hg", "cnf"), help="override the extension-based format")
    common.add_argument("--out", help="write the main output here instead of stdout")
    common.add_argument("--limit", type=int, default=None,
                        help="exhaustive oracle limit (default: $FREEVERTEX_LIMIT or %d)" % oracle.DEFAULT_LIMIT)

    p = argparse.ArgumentParser(prog="freevertex", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="generate a hypergraph or instance")
    g.add_argument("kind", choices=GEN_KINDS)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--n", type=int)
    g.add_argument("--k", type=int)
    g.add_argument("--m", type=int)
    g.add_argument("--s", type=int)
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("solve", parents=[common], help="produce a verified certificate")
    s.add_argument("path")
    s.add_argument("--mode", choices=("nae-free", "free-vertex", "two-color"), required=True)
    s.add_argument("--trace", action="store_true", help="dump reduction steps to stderr")
    s.add_argument("--fallback-oracle", action="store_true",
                   help="on an internal failure, answer from the exhaustive oracle if small enough")
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", parents=[common], help="check a certificate")
    v.add_argument("path")
    v.add_argument("certificate")
    v.set_defaults(func=cmd_verify)

    o = sub.add_parser("oracle", parents=[common], help="exact answers by enumeration")
    o.add_argument("path")
    o.add_argument("query", choices=("sat", "free-vars", "free-sets", "fixed"))
    o.add_argument("--size", type=int)
    o.add_argument("--coloring")
    o.set_defaults(func=cmd_oracle)

    b = sub.add_parser("bench", parents=[common], help="run a corpus and write CSV rows")
    b.add_argument("corpus", help="JSON corpus spec, or - for stdin")
    b.add_argument("--jobs", type=int, default=1)
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        _err(str(exc))
        return exc.code
    except (FormatError, InvalidParams, NonUniformEdge) as exc:
        _err(f"error: {exc}")
        return EXIT_INPUT
    except GenerationFailed as exc:
        _err(f"generation failed: {exc}")
        return EXIT_GEN
    except PreconditionViolated as exc:
        _err(f"precondition violated: {exc}")
        return EXIT_PRE
    except NotTwoColorable as exc:
        _err(f"not 2-colorable: {exc}")
        return EXIT_NOT2C
    except InternalInvariant as exc:
        _err(f"internal invariant: {exc}")
        return EXIT_INTERNAL
    except TooLarge as exc:
        _err(f"too large: {exc}")
        return EXIT_TOO_LARGE


if __name__ == "__main__":
    sys.exit(main())
