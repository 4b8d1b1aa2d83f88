"""Text formats: ``.hg`` hypergraphs, DIMACS ``.cnf`` NAE instances, JSON certificates.

``.hg``::

    # comment
    h <vertex_count> <edge_count>
    0 1 2
    0 3 4

DIMACS clauses use signed 1-based literals terminated by ``0`` and must hold
exactly three literals; they are read with not-all-equal semantics.
"""

from __future__ import annotations

import json
import os

from .core import (
    Clause,
    ColoringCertificate,
    Hypergraph,
    Literal,
    NaeCertificate,
    NaeInstance,
)
from .errors import FormatError


def parse_hypergraph(text: str) -> Hypergraph:
    header = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if header is None:
            if parts[0] != "h" or len(parts) != 3:
                raise FormatError(f"line {lineno}: expected 'h <vertices> <edges>' header")
            try:
                header = (int(parts[1]), int(parts[2]))
            except ValueError:
                raise FormatError(f"line {lineno}: non-integer header") from None
            continue
        try:
            edges.append(tuple(int(x) for x in parts))
        except ValueError:
            raise FormatError(f"line {lineno}: non-integer vertex") from None
    if header is None:
        raise FormatError("missing 'h' header line")
    n, m = header
    if len(edges) != m:
        raise FormatError(f"header promises {m} edges, found {len(edges)}")
    try:
        return Hypergraph(n, tuple(edges))
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def format_hypergraph(h: Hypergraph) -> str:
    lines = [f"h {h.vertex_count} {len(h.edges)}"]
    lines += [" ".join(map(str, e)) for e in h.edges]
    return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> NaeInstance:
    header = None
    clauses, current = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise FormatError(f"line {lineno}: expected 'p cnf <vars> <clauses>'")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise FormatError(f"line {lineno}: non-integer header") from None
            continue
        if header is None:
            raise FormatError(f"line {lineno}: clause before 'p cnf' header")
        for tok in line.split():
            try:
                x = int(tok)
            except ValueError:
                raise FormatError(f"line {lineno}: bad literal {tok!r}") from None
            if x != 0:
                current.append(x)
                continue
            if len(current) != 3:
                raise FormatError(f"line {lineno}: clause has {len(current)} literals, need exactly 3")
            if any(abs(l) > header[0] for l in current):
                raise FormatError(f"line {lineno}: literal out of range")
            try:
                clauses.append(Clause(tuple(Literal(abs(l) - 1, l < 0) for l in current)))
            except ValueError as exc:
                raise FormatError(f"line {lineno}: {exc}") from None
            current = []
    if header is None:
        raise FormatError("missing 'p cnf' header")
    if current:
        raise FormatError("last clause not terminated by 0")
    if len(clauses) != header[1]:
        raise FormatError(f"header promises {header[1]} clauses, found {len(clauses)}")
    return NaeInstance(header[0], tuple(clauses))


def format_dimacs(i: NaeInstance) -> str:
    lines = [f"p cnf {i.var_count} {len(i.clauses)}"]
    for c in i.clauses:
        lines.append(" ".join(str(-(l.var + 1) if l.negated else l.var + 1) for l in c) + " 0")
    return "\n".join(lines) + "\n"


_NAE_SYM = {True: "T", False: "F", None: "-"}
_COL_SYM = {1: "1", 2: "2", None: "-"}


def certificate_to_dict(cert, fallback: bool = False) -> dict:
    if isinstance(cert, NaeCertificate):
        d = {"kind": "nae", "values": [_NAE_SYM[x] for x in cert.assignment], "free": cert.free_var}
    else:
        d = {"kind": "coloring", "values": [_COL_SYM[x] for x in cert.coloring], "free": cert.free_vertex}
    if fallback:
        d["fallback"] = True
    return d


def format_certificate(cert, fallback: bool = False) -> str:
    return json.dumps(certificate_to_dict(cert, fallback)) + "\n"


def parse_certificate(text: str):
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"certificate is not JSON: {exc}") from None
    if not isinstance(d, dict) or "kind" not in d or "values" not in d:
        raise FormatError("certificate needs 'kind' and 'values'")
    free = d.get("free")
    if free is not None and not isinstance(free, int):
        raise FormatError("'free' must be an index or null")
    table = {"nae": {v: k for k, v in _NAE_SYM.items()},
             "coloring": {v: k for k, v in _COL_SYM.items()}}.get(d["kind"])
    if table is None:
        raise FormatError(f"unknown certificate kind {d['kind']!r}")
    try:
        values = tuple(table[str(x)] for x in d["values"])
    except KeyError as exc:
        raise FormatError(f"bad value {exc.args[0]!r} in certificate") from None
    if d["kind"] == "nae":
        return NaeCertificate(values, free)
    return ColoringCertificate(values, free)


def detect_format(path: str, override: str = None) -> str:
    if override:
        return override
    ext = os.path.splitext(path)[1].lower()
    if ext == ".hg":
        return "hg"
    if ext in (".cnf", ".dimacs"):
        return "cnf"
    raise FormatError(f"cannot tell the format of {path!r}; pass --format hg|cnf")


def load(path: str, fmt: str = None):
    """Read a ``.hg`` hypergraph or ``.cnf`` instance (``fmt`` overrides the extension)."""
    kind = detect_format(path, fmt)
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise FormatError(str(exc)) from None
    return parse_hypergraph(text) if kind == "hg" else parse_dimacs(text)
