import pytest
from hypothesis import given, strategies as st

from freevertex.core import ColoringCertificate, NaeCertificate
from freevertex.errors import FormatError
from freevertex.formats import (
    format_certificate,
    format_dimacs,
    format_hypergraph,
    load,
    parse_certificate,
    parse_dimacs,
    parse_hypergraph,
)
from freevertex.generators import complement, fano, proposition_family, random_nae_instance


def test_hypergraph_round_trip():
    h = complement(fano())
    assert parse_hypergraph(format_hypergraph(h)) == h


def test_hypergraph_comments_and_blank_lines():
    h = parse_hypergraph("# tiny\n\nh 3 1\n# edge\n0 1 2\n")
    assert h.edges == ((0, 1, 2),)


@pytest.mark.parametrize("text", [
    "0 1 2\n",
    "h 3 2\n0 1 2\n",
    "h 3 1\n0 1 x\n",
    "h 3 1\n0 1 3\n",
    "h 3 1\n0 0 1\n",
])
def test_bad_hypergraph(text):
    with pytest.raises(FormatError):
        parse_hypergraph(text)


@given(st.integers(0, 200))
def test_dimacs_round_trip(seed):
    i = random_nae_instance(9, 6, seed)
    assert parse_dimacs(format_dimacs(i)) == i


def test_dimacs_multiline_clause():
    i = parse_dimacs("c split\np cnf 3 1\n1 -2\n3 0\n")
    assert str(i.clauses[0]) == "(x0,~x1,x2)"


@pytest.mark.parametrize("text", [
    "1 2 3 0\n",
    "p cnf 3 1\n1 2 0\n",
    "p cnf 3 1\n1 2 3 4 0\n",
    "p cnf 3 1\n1 2 4 0\n",
    "p cnf 3 1\n1 2 3\n",
    "p cnf 3 2\n1 2 3 0\n",
    "p cnf 3 1\n1 -1 2 0\n",
])
def test_bad_dimacs(text):
    with pytest.raises(FormatError):
        parse_dimacs(text)


def test_certificate_round_trip():
    for cert in (NaeCertificate((True, None, False), 1), ColoringCertificate((1, 2, None, 2), 2),
                 ColoringCertificate((1, 2), None)):
        assert parse_certificate(format_certificate(cert)) == cert


def test_certificate_text():
    assert format_certificate(NaeCertificate((True, None), 1), fallback=True) == \
        '{"kind": "nae", "values": ["T", "-"], "free": 1, "fallback": true}\n'


@pytest.mark.parametrize("text", ['[1]', '{"kind": "x", "values": []}', '{"kind": "nae", "values": ["Q"]}',
                                  '{"kind": "nae", "values": [], "free": "a"}', 'nope'])
def test_bad_certificate(text):
    with pytest.raises(FormatError):
        parse_certificate(text)


def test_load_by_extension(tmp_path):
    p = tmp_path / "prop.cnf"
    p.write_text(format_dimacs(proposition_family(2)))
    assert load(str(p)) == proposition_family(2)
    q = tmp_path / "prop.txt"
    q.write_text(format_dimacs(proposition_family(2)))
    with pytest.raises(FormatError):
        load(str(q))
    assert load(str(q), "cnf") == proposition_family(2)
