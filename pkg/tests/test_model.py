import pytest

from crispc.chain import Chain
from crispc.errors import ValidationError
from crispc.model import (
    BOT, GEQ, LEQ, TOP, And, ConceptAssertion, Exists, GCI, Name, Neq, Ontology, Or, RIA, Role, RoleAssertion,
    Trans, big_and, big_or, check_valid, disjuncts, fuzzy_occurrences, mk_and, mk_or, occurrences, rewrite_strict,
    subconcepts, validate,
)
from crispc.textio import parse_ontology

A, B = Name("A"), Name("B")


def _onto(*axioms, chain=Chain(3), **kw):
    return Ontology(chain=chain, concepts=("A", "B"), roles=("r",), individuals=("a", "b"), **kw).with_axioms(axioms)


def test_smart_constructors():
    assert mk_and(TOP, A) == A and mk_and(A, BOT) == BOT
    assert mk_or(BOT, A) == A and mk_or(A, TOP) == TOP
    assert big_and([]) == TOP and big_or([]) == BOT
    assert big_and([A, B]) == And(A, B)
    assert disjuncts(Or(Or(A, B), A)) == [A, B, A] and disjuncts(BOT) == []


def test_subconcepts_preorder():
    c = And(A, Exists(Role("r"), B))
    assert list(subconcepts(c)) == [c, A, Exists(Role("r"), B), B]


def test_occurrences_count_names_only():
    axioms = [GCI(And(A, Exists(Role("r"), TOP)), B, 2), RIA((Role("r"), Role("r")), Role("r"), 2),
              ConceptAssertion(A, "a", GEQ, 1)]
    assert occurrences(axioms) == 3 + 3 + 1
    assert fuzzy_occurrences(axioms[0], crisp_concepts={"A"}) == 2


def test_with_axioms_groups_boxes_and_extends_signature():
    o = Ontology(chain=Chain(3)).with_axioms(
        [GCI(A, B, 2), ConceptAssertion(A, "a", GEQ, 1), Trans(Role("r")), Neq("a", "b")]
    )
    assert [type(x).__name__ for x in o.axioms] == ["ConceptAssertion", "Neq", "GCI", "Trans"]
    assert o.concepts == ("A", "B") and o.roles == ("r",) and o.individuals == ("a", "b")


@pytest.mark.parametrize("ax,msg", [
    (ConceptAssertion(A, "a", GEQ, 0), "Geq degree must be positive"),
    (ConceptAssertion(A, "a", LEQ, 2), "Leq degree must be below 1"),
    (GCI(A, B, 2, LEQ), "only lower bounds"),
    (ConceptAssertion(A, "a", GEQ, 7), "not on chain"),
])
def test_validate_reports(ax, msg):
    assert any(msg in line for line in validate(_onto(ax)))


def test_crisp_names_need_crisp_degrees():
    o = _onto(ConceptAssertion(A, "a", GEQ, 1), crisp_concepts=frozenset({"A"}))
    with pytest.raises(ValidationError, match="crisp name A"):
        check_valid(o)
    assert validate(_onto(ConceptAssertion(A, "a", GEQ, 2), crisp_concepts=frozenset({"A"}))) == []


def test_undeclared_crisp_name():
    o = Ontology(chain=Chain(3), concepts=("A",), crisp_concepts=frozenset({"Z"}))
    assert validate(o) == ["crisp concept Z is not declared"]


def test_strict_bounds_are_rewritten():
    o = parse_ontology("chain 5 lukasiewicz\nconcept A\nindividual a\nassert A(a) > 0.5\nassert A(a) < 0.5\n")
    (lo, hi) = o.abox
    assert (lo.op, lo.degree, hi.op, hi.degree) == (GEQ, 3, LEQ, 1)


def test_negated_role_assertions_are_rewritten():
    text = "chain 5 lukasiewicz\nrole r\nindividual a\nindividual b\nassert not r(a, b) >= 0.75\n"
    (ax,) = parse_ontology(text).abox
    # 1 - r >= 3/4 iff r <= 1/4
    assert isinstance(ax, RoleAssertion) and (ax.op, ax.degree, ax.negated) == (LEQ, 1, False)
    text = text.replace(">= 0.75", "<= 0.25")
    (ax,) = parse_ontology(text).abox
    assert (ax.op, ax.degree) == (GEQ, 3)


def test_rewrite_strict_rejects_impossible_bounds():
    o = parse_ontology("chain 3 goedel\nconcept A\nindividual a\nassert A(a) > 1\n", strict=False)
    with pytest.raises(ValidationError, match="> 1"):
        rewrite_strict(o)
