"""Constructive free-variable solver for sparse NAE-3-SAT.

Input: a connected instance with at least one variable, fewer clauses than
variables and every variable in at most three clauses. Output: an
assignment of every variable but one, the free one, under which every clause
has a true and a false literal among its assigned literals.

The solver is a recursion on the number of clauses. Each call picks the
smallest-index variable of degree 1 (or, failing that, degree 2), removes a
small neighbourhood, possibly adds one bridging clause, solves the smaller
instance and extends its solution. Variable labels are never renamed: a
sub-instance is just a subset of the parent's variables plus a list of
``(clause id, Clause)`` pairs, where new bridging clauses get fresh ids.

Case labels recorded in the trace:

``Base``        no clause left (single variable), or one clause of three
                degree-1 variables
``A-connected`` degree-1 variable whose clause removal keeps the rest connected
``A-split``     degree-1 variable whose clause removal splits the rest in two
``C-4comp``     degree-2 variable, five distinct variables in its two clauses,
                rest splits into four components
``C-main``      as above, fewer components; a bridging clause joins them
``D``           degree-2 variable, its clauses share one other variable
``E-only``      the whole instance is the two clauses on three variables
``F``           a third clause contains both partner variables
``G``           partner substitution in the third clause, degree-2 var free
``G-final``     partner substitution, free variable taken from the sub-solve
"""

from __future__ import annotations

import sys
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .core import Clause, Literal, NaeCertificate, NaeInstance, PartialAssignment, UnionFind
from .errors import InternalInvariant, PreconditionViolated
from .oracle import verify_nae_certificate

CASES = ("Base", "A-connected", "A-split", "C-4comp", "C-main", "D",
         "E-only", "F", "G", "G-final")

# (l1, l2, l3) -> value of v; None marks the two combinations the bridging
# clause rules out.
_TABLE1 = {
    (True, True, True): False,
    (True, True, False): None,
    (True, False, True): False,
    (True, False, False): True,
    (False, True, True): False,
    (False, True, False): True,
    (False, False, True): None,
    (False, False, False): True,
}


def table1_value(l1: bool, l2: bool, l3: bool) -> Optional[bool]:
    """Value of ``v`` making ``{v, l1, l2}`` and ``{v, l3, *}`` nae.

    Returns ``None`` for the impossible rows ``(T, T, F)`` and ``(F, F, T)``.
    """
    return _TABLE1[(bool(l1), bool(l2), bool(l3))]


def flip_component(a: Sequence[Optional[bool]], variables) -> PartialAssignment:
    """Negate every assigned value in ``variables``; unassigned stays unassigned."""
    vs = set(variables)
    return tuple((not x) if (j in vs and x is not None) else x for j, x in enumerate(a))


@dataclass
class TraceStep:
    n: int
    case: str
    del_c: Tuple[int, ...] = ()
    del_v: Tuple[int, ...] = ()
    add_c: Optional[Tuple[int, Clause]] = None
    norm: Tuple[int, ...] = ()

    def __str__(self):
        def ids(xs):
            return ",".join(map(str, xs)) if xs else "-"
        add = "-" if self.add_c is None else "%d:%s" % (self.add_c[0], ",".join(map(str, self.add_c[1])))
        line = f"STEP {self.n} CASE {self.case} DEL-C {ids(self.del_c)} DEL-V {ids(self.del_v)} ADD-C {add}"
        if self.norm:
            line += f" NORM {ids(self.norm)}"
        return line


@dataclass
class ReductionTrace:
    steps: List[TraceStep] = field(default_factory=list)
    depth: int = 0

    def dump(self) -> str:
        return "".join(str(s) + "\n" for s in self.steps)

    def histogram(self) -> Counter:
        return Counter(s.case for s in self.steps)


def check_hypotheses(i: NaeInstance) -> None:
    """Raise PreconditionViolated naming the first hypothesis ``i`` fails."""
    if i.var_count < 1:
        raise PreconditionViolated("non-trivial", "instance has no variables")
    if len(i.clauses) >= i.var_count:
        raise PreconditionViolated("fewer clauses than variables",
                                   f"{len(i.clauses)} clauses, {i.var_count} variables")
    degs = i.degrees()
    if max(degs) > 3:
        v = max(range(i.var_count), key=degs.__getitem__)
        raise PreconditionViolated("max degree 3", f"variable {v} has degree {degs[v]}")
    vs = tuple(range(i.var_count))
    if len(_components(vs, list(enumerate(i.clauses)))) != 1:
        raise PreconditionViolated("connected")


# -- internal instance helpers ---------------------------------------------

Cl = Tuple[int, Clause]


def _components(vs: Sequence[int], cs: Sequence[Cl]) -> List[Tuple[Tuple[int, ...], List[Cl]]]:
    index = {x: j for j, x in enumerate(vs)}
    uf = UnionFind(len(vs))
    for _, c in cs:
        a, b, d = (index[x] for x in c.vars)
        uf.union(a, b)
        uf.union(a, d)
    groups: Dict[int, list] = {}
    for x in vs:
        groups.setdefault(uf.find(index[x]), []).append(x)
    parts: Dict[int, list] = {}
    for cl in cs:
        parts.setdefault(uf.find(index[cl[1].vars[0]]), []).append(cl)
    order = sorted(groups, key=lambda r: min(groups[r]))
    return [(tuple(sorted(groups[r])), parts.get(r, [])) for r in order]


def _val(l: Literal, a: Dict[int, bool]) -> bool:
    return a[l.var] != l.negated


def _oppose(l: Literal, target: bool) -> bool:
    """Variable value making ``l`` evaluate to ``not target``."""
    return (not target) != l.negated


def _nae_ok(vs, cs: Sequence[Cl], a: Dict[int, bool], free: Optional[int]) -> bool:
    if set(a) | ({free} if free is not None else set()) != set(vs):
        return False
    for _, c in cs:
        seen = {_val(l, a) for l in c if l.var != free}
        if seen != {True, False}:
            return False
    return True


def _fail(msg):
    raise InternalInvariant(msg)


class _Solver:
    def __init__(self, next_cid: int, debug: bool = False):
        self.next_cid = next_cid
        self.debug = debug
        self.steps: List[TraceStep] = []

    def _step(self, case, del_c=(), del_v=(), add_c=None, norm=()):
        self.steps.append(TraceStep(len(self.steps), case, tuple(del_c), tuple(sorted(del_v)),
                                    add_c, tuple(norm)))

    def _new_clause(self, c: Clause) -> Cl:
        cl = (self.next_cid, c)
        self.next_cid += 1
        return cl

    def _assert_hypotheses(self, vs, cs):
        if not vs:
            _fail("sub-instance has no variables")
        if len(cs) >= len(vs):
            _fail(f"sub-instance has {len(cs)} clauses on {len(vs)} variables")
        deg = Counter(x for _, c in cs for x in c.vars)
        if deg and max(deg.values()) > 3:
            _fail("sub-instance has a variable of degree > 3")
        if len(_components(vs, cs)) != 1:
            _fail("sub-instance is not connected")

    def solve(self, vs: Tuple[int, ...], cs: List[Cl]):
        """Returns (assignment dict without the free variable, free var, depth)."""
        self._assert_hypotheses(vs, cs)
        a, f, d = self._dispatch(vs, cs)
        if self.debug and not _nae_ok(vs, cs, a, f):
            _fail(f"level with {len(cs)} clauses produced an invalid certificate")
        return a, f, d

    def solve_total(self, vs, cs):
        """Solve, then give the free variable the value True."""
        a, f, d = self.solve(vs, cs)
        if f is not None:
            a[f] = True
        return a, d

    def _dispatch(self, vs, cs):
        if not cs:
            if len(vs) != 1:
                _fail("clause-free connected instance with more than one variable")
            self._step("Base", del_v=vs)
            return {}, vs[0], 0
        deg = Counter(x for _, c in cs for x in c.vars)
        if any(deg[x] == 0 for x in vs):
            _fail("isolated variable in a connected instance")
        ones = [x for x in vs if deg[x] == 1]
        if ones:
            return self._degree_one(vs, cs, deg, min(ones))
        twos = [x for x in vs if deg[x] == 2]
        if not twos:
            _fail("no degree-2 variable although |C| < |V|")
        return self._degree_two(vs, cs, min(twos))

    # -- degree one ---------------------------------------------------------

    def _degree_one(self, vs, cs, deg, v):
        (cid, c), = [cl for cl in cs if v in cl[1].vars]
        lv = c.literal_of(v)
        x1, x2 = [l for l in c if l.var != v]
        if all(deg[l.var] == 1 for l in c):
            if len(cs) != 1 or len(vs) != 3:
                _fail("three degree-1 variables in a clause of a larger instance")
            self._step("Base", del_c=(cid,), del_v=vs)
            a = {x1.var: True}
            a[x2.var] = _oppose(x2, x1.value(True))
            return a, v, 1
        rest_vs = tuple(x for x in vs if x != v)
        rest_cs = [cl for cl in cs if cl[0] != cid]
        parts = _components(rest_vs, rest_cs)
        if len(parts) == 1:
            self._step("A-connected", del_c=(cid,), del_v=(v,))
            a, f, d = self.solve(rest_vs, rest_cs)
            anchor = x1 if x1.var != f else x2
            a[v] = _oppose(lv, _val(anchor, a))
            return a, f, d + 1
        where = {x: j for j, (pv, _) in enumerate(parts) for x in pv}
        if len(parts) != 2 or where[x1.var] == where[x2.var]:
            _fail(f"removing a degree-1 clause left {len(parts)} components")
        self._step("A-split", del_c=(cid,), del_v=(v,))
        a, depth = {}, 0
        for pv, pc in parts:
            sub, d = self.solve_total(pv, pc)
            a.update(sub)
            depth = max(depth, d)
        if _val(x1, a) == _val(x2, a):
            for x in parts[where[x2.var]][0]:
                a[x] = not a[x]
        return a, v, depth + 1

    # -- degree two ---------------------------------------------------------

    def _degree_two(self, vs, cs, v):
        (id1, c1), (id2, c2) = [cl for cl in cs if v in cl[1].vars]
        q = set(c1.vars) | set(c2.vars)
        if len(q) == 5:
            return self._five_vars(vs, cs, v, (id1, c1), (id2, c2))
        if len(q) == 4:
            return self._four_vars(vs, cs, v, (id1, c1), (id2, c2))
        return self._q3(vs, cs, v, (id1, c1), (id2, c2))

    @staticmethod
    def _normalize(v, cl):
        """Complement the clause if ``v`` appears negated; returns (clause, flipped?)."""
        cid, c = cl
        if c.literal_of(v).negated:
            return c.negate(), True
        return c, False

    def _five_vars(self, vs, cs, v, cl1, cl2):
        c1, n1 = self._normalize(v, cl1)
        c2, n2 = self._normalize(v, cl2)
        norm = tuple(cid for cid, flag in ((cl1[0], n1), (cl2[0], n2)) if flag)
        rest_vs = tuple(x for x in vs if x != v)
        rest_cs = [cl for cl in cs if cl[0] not in (cl1[0], cl2[0])]
        parts = _components(rest_vs, rest_cs)
        where = {x: j for j, (pv, _) in enumerate(parts) for x in pv}
        others1 = [l for l in c1 if l.var != v]
        others2 = [l for l in c2 if l.var != v]

        if len(parts) == 4:
            if len({where[l.var] for l in others1 + others2}) != 4:
                _fail("four components not separated by the clause variables")
            self._step("C-4comp", del_c=(cl1[0], cl2[0]), del_v=(v,), norm=norm)
            a, depth = {}, 0
            for pv, pc in parts:
                sub, d = self.solve_total(pv, pc)
                a.update(sub)
                depth = max(depth, d)
            for la, lb in (others1, others2):
                if _val(la, a) == _val(lb, a):
                    for x in parts[where[lb.var]][0]:
                        a[x] = not a[x]
            return a, v, depth + 1

        # name q1, q2 in one clause and q3, q4 in the other so that q4 shares
        # a component with one of q1, q2, q3
        naming = None
        for first, second in ((others1, others2), (others2, others1)):
            for l3, l4 in ((second[0], second[1]), (second[1], second[0])):
                if where[l4.var] in {where[first[0].var], where[first[1].var], where[l3.var]}:
                    naming = (first[0], first[1], l3, l4)
                    break
            if naming:
                break
        if naming is None:
            _fail("no naming puts q4 in a component with q1, q2 or q3")
        l1, l2, l3, l4 = naming
        bridge = self._new_clause(Clause((l1, l2, -l3)))
        self._step("C-main", del_c=(cl1[0], cl2[0]), del_v=(v,), add_c=bridge, norm=norm)
        a, f, d = self.solve(rest_vs, rest_cs + [bridge])
        q1, q2, q3 = l1.var, l2.var, l3.var
        if f not in (q1, q2, q3):
            x = table1_value(_val(l1, a), _val(l2, a), _val(l3, a))
            if x is None:
                _fail("bridging clause admitted an impossible row of the v-value table")
            a[v] = x
        elif f == q1:
            if _val(l2, a) != _val(l3, a):
                _fail("q1 free but l2, l3 differ")
            a[v] = not _val(l2, a)
        elif f == q2:
            if _val(l1, a) != _val(l3, a):
                _fail("q2 free but l1, l3 differ")
            a[v] = not _val(l1, a)
        else:
            if _val(l1, a) == _val(l2, a):
                _fail("q3 free but l1, l2 agree")
            a[v] = not _val(l4, a)
        return a, f, d + 1

    def _four_vars(self, vs, cs, v, cl1, cl2):
        c1, n1 = self._normalize(v, cl1)
        c2, n2 = self._normalize(v, cl2)
        norm = tuple(cid for cid, flag in ((cl1[0], n1), (cl2[0], n2)) if flag)
        (q1,) = (set(c1.vars) & set(c2.vars)) - {v}
        (q2,) = set(c1.vars) - {v, q1}
        (q3,) = set(c2.vars) - {v, q1}
        l1, l2, l3 = c1.literal_of(q1), c1.literal_of(q2), c2.literal_of(q3)
        m1 = c2.literal_of(q1)
        rest_vs = tuple(x for x in vs if x != v)
        rest_cs = [cl for cl in cs if cl[0] not in (cl1[0], cl2[0])]
        bridge = self._new_clause(Clause((l1, l2, -l3)))
        self._step("D", del_c=(cl1[0], cl2[0]), del_v=(v,), add_c=bridge, norm=norm)
        a, f, d = self.solve(rest_vs, rest_cs + [bridge])
        if f not in (q1, q2, q3):
            x = table1_value(_val(l1, a), _val(l2, a), _val(l3, a))
            if x is None:
                _fail("bridging clause admitted an impossible row of the v-value table")
            a[v] = x
        elif f == q1:
            if _val(l2, a) != _val(l3, a):
                _fail("q1 free but l2, l3 differ")
            a[v] = not _val(l2, a)
        elif f == q2:
            if _val(l1, a) != _val(l3, a):
                _fail("q2 free but l1, l3 differ")
            a[v] = not _val(l1, a)
        else:
            if _val(l1, a) == _val(l2, a):
                _fail("q3 free but l1, l2 agree")
            a[v] = not _val(m1, a)
        return a, f, d + 1

    # -- three variables in both clauses ------------------------------------

    @staticmethod
    def _two_clause_solution(c1: Clause, c2: Clause, triple):
        """Solve the instance made of just ``c1``, ``c2`` over ``triple``.

        ``c1`` must already agree with ``c2`` in at least two literal slots.
        Returns (assignment of two variables, free variable); the free
        variable is ``triple[0]`` whenever both other slots agree.
        """
        same = [x for x in triple if c1.literal_of(x) == c2.literal_of(x)]
        if len(same) < 2:
            _fail("fewer than two identical literal slots after normalization")
        v, q1, q2 = triple
        if q1 in same and q2 in same:
            pair, free = (q1, q2), v
        else:
            pair = tuple(same)
            (free,) = set(triple) - set(pair)
        la, lb = c1.literal_of(pair[0]), c1.literal_of(pair[1])
        a = {pair[0]: True}
        a[pair[1]] = _oppose(lb, la.value(True))
        return a, free

    def _q3(self, vs, cs, v, cl1, cl2):
        (id1, c1), (id2, c2) = cl1, cl2
        q1, q2 = [x for x in c1.vars if x != v]
        norm = ()
        if sum(c1.literal_of(x) == c2.literal_of(x) for x in c1.vars) <= 1:
            c1, norm = c1.negate(), (id1,)

        def same(x):
            return c1.literal_of(x) == c2.literal_of(x)

        if len(cs) == 2:
            if len(vs) != 3:
                _fail("two clauses on three variables in a larger connected instance")
            self._step("E-only", del_c=(id1, id2), del_v=vs, norm=norm)
            a, f = self._two_clause_solution(c1, c2, (v, q1, q2))
            return a, f, 1

        third = [cl for cl in cs if cl[0] not in (id1, id2) and (q1 in cl[1].vars or q2 in cl[1].vars)]
        if not third:
            _fail("no third clause on q1 or q2 in a connected instance")
        id3, c3 = third[0]
        if q2 not in c3.vars:
            q1, q2 = q2, q1

        if q1 in c3.vars:
            (q3,) = set(c3.vars) - {q1, q2}
            rest_vs = tuple(x for x in vs if x not in (v, q1, q2))
            rest_cs = [cl for cl in cs if cl[0] not in (id1, id2, id3)]
            self._step("F", del_c=(id1, id2, id3), del_v=(v, q1, q2), norm=norm)
            a, d = self.solve_total(rest_vs, rest_cs)
            star, free = self._two_clause_solution(c1, c2, (v, q1, q2))
            qa = q1 if q1 in star else q2
            if c3.literal_of(qa).value(star[qa]) == _val(c3.literal_of(q3), a):
                for x in rest_vs:
                    a[x] = not a[x]
            a.update(star)
            return a, free, d + 1

        rest_vs = tuple(x for x in vs if x not in (v, q2))
        rest_cs = [cl for cl in cs if cl[0] not in (id1, id2, id3)]
        l2_in_c3 = c3.literal_of(q2)
        if same(q1) and same(q2):
            # v can stay free: tie q2 to q1 so c3 behaves like the substituted clause
            one_negated = c1.literal_of(q1).negated != c1.literal_of(q2).negated
            sub_neg = l2_in_c3.negated if one_negated else not l2_in_c3.negated
            c3p = self._new_clause(Clause(tuple(Literal(q1, sub_neg) if l.var == q2 else l for l in c3)))
            self._step("G", del_c=(id1, id2, id3), del_v=(v, q2), add_c=c3p, norm=norm)
            a, d = self.solve_total(rest_vs, rest_cs + [c3p])
            a[q2] = a[q1] if one_negated else not a[q1]
            return a, v, d + 1

        if not same(v):
            _fail("v's literal slot differs although v is not free in the two-clause instance")
        (ident,) = [x for x in (q1, q2) if same(x)]
        c3p = self._new_clause(Clause(tuple(Literal(q1, l2_in_c3.negated) if l.var == q2 else l for l in c3)))
        self._step("G-final", del_c=(id1, id2, id3), del_v=(v, q2), add_c=c3p, norm=norm)
        a, f, d = self.solve(rest_vs, rest_cs + [c3p])
        lv = c1.literal_of(v)
        if f == q1:
            # exactly one of q1, q2 is free in the two-clause instance: the one whose slot differs
            keep = ident
            other = q2 if keep == q1 else q1
            a[keep] = True
            a[v] = _oppose(lv, c1.literal_of(keep).value(True))
            return a, other, d + 1
        a[q2] = a[q1]
        a[v] = _oppose(lv, _val(c1.literal_of(ident), a))
        return a, f, d + 1


def solve_free(i: NaeInstance, debug: bool = False):
    """Nae-satisfying assignment with exactly one free variable.

    Returns ``(NaeCertificate, ReductionTrace)``. Raises PreconditionViolated
    if ``i`` is empty, disconnected, has ``|C| >= |V|`` or a variable of
    degree above 3, and InternalInvariant if the construction breaks down
    (a bug, never expected on valid input).
    """
    check_hypotheses(i)
    solver = _Solver(len(i.clauses), debug=debug)
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 8 * len(i.clauses) + 1000))
    try:
        a, f, depth = solver.solve(tuple(range(i.var_count)), list(enumerate(i.clauses)))
    except InternalInvariant as exc:
        # keep the steps taken so far for diagnostics
        exc.trace = ReductionTrace(list(solver.steps), 0)
        raise
    finally:
        sys.setrecursionlimit(old)
    cert = NaeCertificate(tuple(a.get(x) for x in range(i.var_count)), f)
    verdict = verify_nae_certificate(i, cert)
    trace = ReductionTrace(solver.steps, depth)
    if not verdict:
        exc = InternalInvariant("solver output failed verification: " + "; ".join(verdict.reasons[:3]))
        exc.trace = trace
        raise exc
    return cert, trace
