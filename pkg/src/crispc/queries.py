"""Query forms and their translation into classical (unions of) conjunctive queries."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence, Union

from .chain import Chain, pareto_minimal
from .errors import DomainError, ValidationError

EQ = "=="


def is_var(t: str) -> bool:
    return t.startswith("?")


@dataclass(frozen=True)
class Atom:
    """``pred(args)``; equality atoms use the predicate ``==``."""

    pred: str
    args: tuple[str, ...]

    @property
    def is_eq(self) -> bool:
        return self.pred == EQ

    @property
    def kind(self) -> str:
        if self.is_eq:
            return "eq"
        return "concept" if len(self.args) == 1 else "role"


@dataclass(frozen=True)
class ThresholdCQ:
    """Degree atoms; ``degrees[i]`` is ``None`` exactly when ``atoms[i]`` is an equality."""

    head: tuple[str, ...]
    atoms: tuple[Atom, ...]
    degrees: tuple[int | None, ...]


@dataclass(frozen=True)
class FuzzyCQ:
    head: tuple[str, ...]
    atoms: tuple[Atom, ...]


# -- scoring expressions ---------------------------------------------------------


@dataclass(frozen=True)
class Placeholder:
    index: int  # 1-based atom reference


@dataclass(frozen=True)
class Const:
    value: Fraction


@dataclass(frozen=True)
class Op:
    op: str  # one of + * min max
    args: tuple["Expr", ...]


Expr = Union[Placeholder, Const, Op]


def eval_expr(e: Expr, values: Sequence[Fraction]) -> Fraction:
    if isinstance(e, Placeholder):
        return Fraction(values[e.index - 1])
    if isinstance(e, Const):
        return e.value
    vals = [eval_expr(a, values) for a in e.args]
    if e.op == "+":
        return sum(vals, Fraction(0))
    if e.op == "*":
        acc = Fraction(1)
        for v in vals:
            acc *= v
        return acc
    return min(vals) if e.op == "min" else max(vals)


@dataclass(frozen=True)
class ScoringQuery:
    """Atoms combined by a monotone score built from ``@i``, constants, ``+``, ``*``, ``min``, ``max``."""

    head: tuple[str, ...]
    atoms: tuple[Atom, ...]
    score: Expr


# -- classical side ----------------------------------------------------------------


@dataclass(frozen=True)
class CQ:
    head: tuple[str, ...]
    atoms: tuple[Atom, ...]


@dataclass(frozen=True)
class UCQ:
    """A union of CQs; no members means the source is unsatisfiable at the degree asked."""

    head: tuple[str, ...]
    members: tuple[CQ, ...]


TOP_PRED, UNIV_PRED = "top", "U"


def _classical_atom(a: Atom, d: int | None, cuts) -> Atom | None:
    if a.is_eq:
        return a if d is None or d > 0 else None
    if d == 0:
        return Atom(TOP_PRED if a.kind == "concept" else UNIV_PRED, a.args)
    return Atom(cuts.name_for(a.pred, a.kind, d), a.args)


def _member(head, atoms, tup, cuts) -> CQ:
    out = []
    for a, d in zip(atoms, tup):
        c = _classical_atom(a, d, cuts)
        if c is not None and c not in out:
            out.append(c)
    return CQ(head, tuple(out))


def kappa_threshold(q: ThresholdCQ, cuts) -> CQ:
    """Replace every degree atom ``A(x) >= d`` by the cut atom ``A_{>=d}(x)``."""
    _check_preds(q.atoms, cuts)
    return _member(q.head, q.atoms, q.degrees, cuts)


def _value_sets(atoms: Sequence[Atom], chain: Chain, cuts) -> list[tuple[int, ...]]:
    full = tuple(chain.degrees)
    out = []
    for a in atoms:
        if a.is_eq or cuts.is_crisp(a.pred, a.kind):
            out.append((0, chain.top))
        else:
            out.append(full)
    return out


def _ucq(head, atoms, tuples, cuts) -> UCQ:
    members: list[CQ] = []
    seen = set()
    for t in tuples:
        m = _member(head, atoms, t, cuts)
        key = frozenset(m.atoms)
        if key not in seen:
            seen.add(key)
            members.append(m)
    return UCQ(head, tuple(members))


def fuzzy_tuples(atoms: Sequence[Atom], d: int, chain: Chain, cuts, all_tuples: bool = False) -> list[tuple[int, ...]]:
    """Degree tuples whose t-norm reaches ``d`` (only the minimal ones unless ``all_tuples``)."""
    sets = _value_sets(atoms, chain, cuts)
    found: list[tuple[int, ...]] = []

    def rec(i: int, acc: int, prefix: tuple[int, ...]) -> None:
        if acc < d:
            return  # the t-norm only decreases as atoms are added
        if i == len(sets):
            found.append(prefix)
            return
        for v in sets[i]:
            rec(i + 1, chain.tnorm(acc, v), prefix + (v,))

    rec(0, chain.top, ())
    if not all_tuples:
        found = pareto_minimal(found)
    return sorted(found)


def kappa_fuzzy(q: FuzzyCQ, d: int, chain: Chain, cuts, all_tuples: bool = False) -> UCQ:
    if not (isinstance(d, int) and 0 < d < chain.n):
        raise DomainError("fuzzy query translation needs a positive degree on the chain")
    _check_preds(q.atoms, cuts)
    if chain.family in ("goedel", "zadeh") and not all_tuples:
        # min-conjunction: every atom must individually reach d
        return _ucq(q.head, q.atoms, [tuple(d for _ in q.atoms)], cuts)
    return _ucq(q.head, q.atoms, fuzzy_tuples(q.atoms, d, chain, cuts, all_tuples), cuts)


def scoring_tuples(q: ScoringQuery, d: Fraction, chain: Chain, cuts, all_tuples: bool = False) -> list[tuple[int, ...]]:
    sets = _value_sets(q.atoms, chain, cuts)
    d = Fraction(d)
    found = [
        t for t in itertools.product(*sets)
        if eval_expr(q.score, [chain.value(v) for v in t]) >= d
    ]
    if not all_tuples:
        found = pareto_minimal(found)
    return sorted(found)


def kappa_scoring(q: ScoringQuery, d: Fraction, chain: Chain, cuts, all_tuples: bool = False) -> UCQ:
    """UCQ whose members are the minimal degree tuples scoring at least ``d``."""
    _check_preds(q.atoms, cuts)
    return _ucq(q.head, q.atoms, scoring_tuples(q, d, chain, cuts, all_tuples), cuts)


def _check_preds(atoms: Iterable[Atom], cuts) -> None:
    for a in atoms:
        if not a.is_eq and not cuts.knows(a.pred, a.kind):
            raise ValidationError(f"query atom {a.pred} is not a {a.kind} name of the ontology")


# -- instantiation and ranking ---------------------------------------------------------

AnyQuery = Union[ThresholdCQ, FuzzyCQ, ScoringQuery, CQ, UCQ]


def instantiate(q: AnyQuery, answer: Sequence[str]) -> AnyQuery:
    """Bind the distinguished variables to ``answer``.

    A variable listed twice in the head but filled with two different
    individuals is bound to the first and an equality atom between the two
    individuals is added. Scoring queries multiply their score by that atom.
    """
    answer = tuple(answer)
    if len(answer) != len(q.head):
        raise ValidationError(f"answer has {len(answer)} entries, query has arity {len(q.head)}")
    if isinstance(q, UCQ):
        return UCQ((), tuple(instantiate(m, answer) for m in q.members))
    binding: dict[str, str] = {}
    extra: list[Atom] = []
    for v, a in zip(q.head, answer):
        if v not in binding:
            binding[v] = a
        elif binding[v] != a:
            eq = Atom(EQ, (binding[v], a))
            if eq not in extra:
                extra.append(eq)
    atoms = tuple(Atom(x.pred, tuple(binding.get(t, t) for t in x.args)) for x in q.atoms)
    if isinstance(q, ThresholdCQ):
        return ThresholdCQ((), atoms + tuple(extra), q.degrees + tuple(None for _ in extra))
    if isinstance(q, FuzzyCQ):
        return FuzzyCQ((), atoms + tuple(extra))
    if isinstance(q, ScoringQuery):
        score = q.score
        for j in range(len(extra)):
            score = Op("*", (score, Placeholder(len(atoms) + j + 1)))
        return ScoringQuery((), atoms + tuple(extra), score)
    return CQ((), atoms + tuple(extra))


def top_k(
    q: FuzzyCQ,
    k: int,
    entails: Callable[[UCQ, tuple], bool],
    candidates: Iterable[Sequence[str]],
    chain: Chain,
    cuts,
) -> list[tuple[tuple[str, ...], int]]:
    """Naive top-k: translate at each degree from 1 downwards until k answers are found."""
    if k <= 0:
        return []
    cands = [tuple(c) for c in candidates]
    answers: list[tuple[tuple[str, ...], int]] = []
    found: set[tuple[str, ...]] = set()
    for d in range(chain.top, 0, -1):
        u = kappa_fuzzy(q, d, chain, cuts)
        for c in cands:
            if c not in found and entails(u, c):
                found.add(c)
                answers.append((c, d))
                if len(answers) == k:
                    return answers
    return answers
