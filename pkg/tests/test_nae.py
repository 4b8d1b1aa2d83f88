import pytest
from hypothesis import given, settings, strategies as st

from freevertex.core import NaeInstance, clause
from freevertex.errors import GenerationFailed, PreconditionViolated
from freevertex.generators import prop_index, proposition_family, random_nae_instance
from freevertex.nae import CASES, check_hypotheses, flip_component, solve_free, table1_value
from freevertex.oracle import free_variables, verify_nae_certificate


def solve(n, clauses, **kw):
    i = NaeInstance(n, tuple(clauses))
    cert, trace = solve_free(i, **kw)
    assert verify_nae_certificate(i, cert)
    return i, cert, trace


def cases_of(trace):
    return [s.case for s in trace.steps]


def test_table1():
    assert table1_value(True, True, True) is False
    assert table1_value(False, False, False) is True
    assert table1_value(True, True, False) is None
    assert table1_value(False, False, True) is None


def test_table1_defined_rows_oppose_l3():
    for l1 in (True, False):
        for l2 in (True, False):
            for l3 in (True, False):
                v = table1_value(l1, l2, l3)
                if v is not None:
                    assert v == (not l3)


def test_flip_component():
    a = (True, None, False, True)
    assert flip_component(a, range(4)) == (False, None, True, False)
    assert flip_component(flip_component(a, (0, 2)), (0, 2)) == a


def test_single_variable():
    _, cert, trace = solve(1, [])
    assert cert.assignment == (None,) and cert.free_var == 0
    assert cases_of(trace) == ["Base"] and trace.depth == 0


def test_one_clause_base():
    _, cert, trace = solve(3, [clause(1, 2, 3)])
    assert cases_of(trace) == ["Base"]
    assert cert.free_var in (0, 1, 2)


def test_pendant_keeps_rest_connected():
    _, _, trace = solve(4, [clause(1, 2, 3), clause(2, 3, 4)])
    assert cases_of(trace)[0] == "A-connected"


def test_bowtie_splits():
    i, cert, trace = solve(7, [clause(1, 2, 3), clause(2, 4, 5), clause(3, 6, 7)])
    assert cases_of(trace)[0] == "A-split"
    assert cert.free_var == 0 and 0 in free_variables(i).free


def test_two_clause_only():
    i, cert, trace = solve(3, [clause(1, 2, 3), clause(1, -2, 3)])
    assert cases_of(trace) == ["E-only"]
    assert cert.free_var == 1 and free_variables(i).free == {1}


def test_shared_neighbour_case_d():
    i, cert, trace = solve(4, [clause(-3, 1, -2), clause(-1, -2, -4), clause(4, 2, 3)])
    assert cases_of(trace) == ["D", "E-only"]
    # the bridging clause takes the next free id and one variable fewer
    assert trace.steps[0].add_c[0] == 3
    assert cert.free_var in free_variables(i).free


def test_bridging_clause_case_c():
    i, cert, trace = solve(5, [clause(3, -2, -4), clause(-4, 2, 5), clause(4, 5, -1), clause(-2, -3, -1)])
    assert cases_of(trace)[0] == "C-main"
    assert trace.steps[0].add_c[0] == 4
    assert cert.free_var in free_variables(i).free


def test_four_components_case_c():
    cls = [clause(1, 2, 5), clause(-1, 8, -11)]
    for q in (2, 5, 8, 11):
        cls += [clause(q, q + 1, q + 2), clause(q, -(q + 1), q + 2)]
    i, cert, trace = solve(13, cls)
    assert cases_of(trace)[0] == "C-4comp"
    assert cert.free_var == 0 and 0 in free_variables(i).free


def test_third_clause_holds_both_partners():
    i, cert, trace = solve(6, [clause(1, 2, 3), clause(1, -2, 3), clause(2, 3, 4),
                               clause(4, 5, 6), clause(4, 5, -6)])
    assert cases_of(trace)[0] == "F"
    assert cert.free_var in (0, 1, 2)
    assert cert.free_var in free_variables(i).free


def test_partner_substitution_keeps_v_free():
    i, cert, trace = solve(5, [clause(-2, -1, -3), clause(-1, 4, 5), clause(2, -3, 1), clause(4, -2, -5)])
    assert cases_of(trace)[0] == "G"
    assert cert.free_var in free_variables(i).free


def test_partner_substitution_endgame():
    i, cert, trace = solve(5, [clause(4, 5, -1), clause(4, -3, -2), clause(-1, -5, 4), clause(5, 3, 2)])
    assert cases_of(trace)[0] == "G-final"
    assert cert.free_var in free_variables(i).free


def test_trace_format():
    _, _, trace = solve(4, [clause(-3, 1, -2), clause(-1, -2, -4), clause(4, 2, 3)])
    assert trace.dump().splitlines() == [
        "STEP 0 CASE D DEL-C 0,1 DEL-V 0 ADD-C 3:~x1,~x2,~x3 NORM 1",
        "STEP 1 CASE E-only DEL-C 2,3 DEL-V 1,2,3 ADD-C - NORM 2",
    ]


@pytest.mark.parametrize("s", [1, 2, 3, 4, 5, 8])
def test_proposition_family_free_variable(s):
    cert, trace = solve_free(proposition_family(s))
    assert cert.free_var == prop_index(s, 1)
    assert trace.depth <= 3 * s - 1


@pytest.mark.parametrize("inst,hyp", [
    (NaeInstance(0, ()), "non-trivial"),
    (NaeInstance(3, (clause(1, 2, 3), clause(1, -2, 3), clause(-1, 2, 3))), "fewer clauses than variables"),
    (NaeInstance(9, (clause(1, 2, 3), clause(1, 4, 5), clause(1, 6, 7), clause(1, 8, 9))), "max degree 3"),
    (NaeInstance(7, (clause(1, 2, 3), clause(4, 5, 6))), "connected"),
])
def test_hypotheses(inst, hyp):
    with pytest.raises(PreconditionViolated) as info:
        check_hypotheses(inst)
    assert info.value.hypothesis == hyp
    with pytest.raises(PreconditionViolated):
        solve_free(inst)


@settings(max_examples=300, deadline=None)
@given(st.integers(3, 12).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, n - 1), st.integers(0, 2**32))))
def test_random_instances_against_oracle(params):
    n, m, seed = params
    try:
        i = random_nae_instance(n, m, seed)
    except GenerationFailed:
        return
    cert, trace = solve_free(i, debug=True)
    assert verify_nae_certificate(i, cert)
    assert cert.free_var in free_variables(i).free
    assert trace.depth <= len(i.clauses)
    assert set(trace.histogram()) <= set(CASES)


def test_deterministic():
    i = random_nae_instance(12, 9, 4)
    a, b = solve_free(i), solve_free(i)
    assert a[0] == b[0] and a[1].dump() == b[1].dump()
