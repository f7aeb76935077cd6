"""Abstract syntax for fuzzy and classical ontologies.

All nodes are frozen dataclasses, so ontologies are immutable values that can be
shared freely. Degrees inside axioms are chain indices (see :mod:`crispc.chain`).
Classical ontologies reuse the same node types over the two-valued chain.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Iterator, Union

from .chain import Chain
from .errors import ValidationError

# ---------------------------------------------------------------------------
# roles


@dataclass(frozen=True)
class Role:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Inv:
    name: str

    def __str__(self) -> str:
        return f"inv({self.name})"


@dataclass(frozen=True)
class Universal:
    def __str__(self) -> str:
        return "U"


UNIV = Universal()
RoleExpr = Union[Role, Inv, Universal]


def role_base(r: RoleExpr) -> str | None:
    """The role name underneath ``r`` (``None`` for the universal role)."""
    return None if isinstance(r, Universal) else r.name


def inverse(r: RoleExpr) -> RoleExpr:
    if isinstance(r, Role):
        return Inv(r.name)
    if isinstance(r, Inv):
        return Role(r.name)
    return r


# ---------------------------------------------------------------------------
# concepts


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bottom:
    pass


TOP = Top()
BOT = Bottom()


@dataclass(frozen=True)
class Name:
    name: str


@dataclass(frozen=True)
class Not:
    arg: "Concept"


@dataclass(frozen=True)
class And:
    left: "Concept"
    right: "Concept"


@dataclass(frozen=True)
class Or:
    left: "Concept"
    right: "Concept"


@dataclass(frozen=True)
class Exists:
    role: RoleExpr
    arg: "Concept"


@dataclass(frozen=True)
class Forall:
    role: RoleExpr
    arg: "Concept"


@dataclass(frozen=True)
class Nominal:
    """Fuzzy nominal ``{d1/o1, ..., dm/om}``; ``items`` holds ``(degree, individual)``."""

    items: tuple[tuple[int, str], ...]


@dataclass(frozen=True)
class AtLeast:
    m: int
    role: RoleExpr


@dataclass(frozen=True)
class AtMost:
    m: int
    role: RoleExpr


@dataclass(frozen=True)
class AtLeastQ:
    m: int
    role: RoleExpr
    arg: "Concept"


@dataclass(frozen=True)
class AtMostQ:
    m: int
    role: RoleExpr
    arg: "Concept"


@dataclass(frozen=True)
class Self:
    role: RoleExpr


Concept = Union[Top, Bottom, Name, Not, And, Or, Exists, Forall, Nominal, AtLeast, AtMost, AtLeastQ, AtMostQ, Self]

ATOMIC = (Top, Bottom, Name, Nominal)


def is_atomic(c: Concept) -> bool:
    """Names, ``top``, ``bot`` and nominals need no fresh abbreviation."""
    return isinstance(c, ATOMIC)


def children(c: Concept) -> tuple[Concept, ...]:
    if isinstance(c, (And, Or)):
        return (c.left, c.right)
    if isinstance(c, (Not, Exists, Forall, AtLeastQ, AtMostQ)):
        return (c.arg,)
    return ()


def subconcepts(c: Concept) -> Iterator[Concept]:
    """Pre-order walk over ``c`` and all its subterms."""
    yield c
    for k in children(c):
        yield from subconcepts(k)


def concept_role(c: Concept) -> RoleExpr | None:
    return getattr(c, "role", None)


def names_in(c: Concept) -> tuple[list[str], list[str]]:
    """Concept and role name occurrences in ``c``, in pre-order, with repeats."""
    cs: list[str] = []
    rs: list[str] = []
    for s in subconcepts(c):
        if isinstance(s, Name):
            cs.append(s.name)
        r = concept_role(s)
        if r is not None and not isinstance(r, Universal):
            rs.append(r.name)
    return cs, rs


def individuals_in(c: Concept) -> list[str]:
    return [o for s in subconcepts(c) if isinstance(s, Nominal) for _, o in s.items]


# -- smart constructors used when building classical images -------------------


def mk_and(a: Concept, b: Concept) -> Concept:
    if isinstance(a, Bottom) or isinstance(b, Bottom):
        return BOT
    if isinstance(a, Top):
        return b
    if isinstance(b, Top):
        return a
    return And(a, b)


def mk_or(a: Concept, b: Concept) -> Concept:
    if isinstance(a, Top) or isinstance(b, Top):
        return TOP
    if isinstance(a, Bottom):
        return b
    if isinstance(b, Bottom):
        return a
    return Or(a, b)


def big_and(cs: Iterable[Concept]) -> Concept:
    acc: Concept = TOP
    for c in cs:
        acc = mk_and(acc, c)
    return acc


def big_or(cs: Iterable[Concept]) -> Concept:
    acc: Concept = BOT
    for c in cs:
        acc = mk_or(acc, c)
    return acc


def disjuncts(c: Concept) -> list[Concept]:
    """Flatten a top-level union; ``bot`` has no disjuncts."""
    if isinstance(c, Bottom):
        return []
    if isinstance(c, Or):
        return disjuncts(c.left) + disjuncts(c.right)
    return [c]


# ---------------------------------------------------------------------------
# axioms

GEQ, LEQ, GT, LT = ">=", "<=", ">", "<"


@dataclass(frozen=True)
class ConceptAssertion:
    concept: Concept
    ind: str
    op: str
    degree: int
    loc: str | None = field(default=None, compare=False)


@dataclass(frozen=True)
class RoleAssertion:
    role: RoleExpr
    a: str
    b: str
    op: str
    degree: int
    negated: bool = False
    loc: str | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Eq:
    a: str
    b: str
    loc: str | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Neq:
    a: str
    b: str
    loc: str | None = field(default=None, compare=False)


@dataclass(frozen=True)
class GCI:
    lhs: Concept
    rhs: Concept
    degree: int
    op: str = GEQ
    loc: str | None = field(default=None, compare=False)


@dataclass(frozen=True)
class RIA:
    lhs: tuple[RoleExpr, ...]
    rhs: RoleExpr
    degree: int
    op: str = GEQ
    loc: str | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Trans:
    role: RoleExpr
    loc: str | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Dis:
    r1: RoleExpr
    r2: RoleExpr
    loc: str | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Ref:
    role: RoleExpr
    loc: str | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Irr:
    role: RoleExpr
    loc: str | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Sym:
    role: RoleExpr
    loc: str | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Asy:
    role: RoleExpr
    loc: str | None = field(default=None, compare=False)


@dataclass(frozen=True)
class RoleDisjunction:
    """``r <= r1 or ... or rm`` with pointwise maximum on the right (extended mode)."""

    sub: RoleExpr
    sups: tuple[RoleExpr, ...]
    loc: str | None = field(default=None, compare=False)


ABoxAxiom = Union[ConceptAssertion, RoleAssertion, Eq, Neq]
RBoxAxiom = Union[RIA, Trans, Dis, Ref, Irr, Sym, Asy, RoleDisjunction]
Axiom = Union[ABoxAxiom, GCI, RBoxAxiom]

ABOX_TYPES = (ConceptAssertion, RoleAssertion, Eq, Neq)
RBOX_TYPES = (RIA, Trans, Dis, Ref, Irr, Sym, Asy, RoleDisjunction)


def axiom_roles(ax: Axiom) -> list[RoleExpr]:
    if isinstance(ax, RoleAssertion):
        return [ax.role]
    if isinstance(ax, RIA):
        return [*ax.lhs, ax.rhs]
    if isinstance(ax, Dis):
        return [ax.r1, ax.r2]
    if isinstance(ax, RoleDisjunction):
        return [ax.sub, *ax.sups]
    if isinstance(ax, (Trans, Ref, Irr, Sym, Asy)):
        return [ax.role]
    return []


def axiom_concepts(ax: Axiom) -> list[Concept]:
    if isinstance(ax, ConceptAssertion):
        return [ax.concept]
    if isinstance(ax, GCI):
        return [ax.lhs, ax.rhs]
    return []


def axiom_names(ax: Axiom) -> tuple[list[str], list[str]]:
    cs: list[str] = []
    rs: list[str] = []
    for c in axiom_concepts(ax):
        a, b = names_in(c)
        cs += a
        rs += b
    rs += [r.name for r in axiom_roles(ax) if not isinstance(r, Universal)]
    return cs, rs


def axiom_individuals(ax: Axiom) -> list[str]:
    out: list[str] = []
    if isinstance(ax, ConceptAssertion):
        out.append(ax.ind)
    elif isinstance(ax, (RoleAssertion,)):
        out += [ax.a, ax.b]
    elif isinstance(ax, (Eq, Neq)):
        out += [ax.a, ax.b]
    for c in axiom_concepts(ax):
        out += individuals_in(c)
    return out


def occurrences(axioms: Iterable[Axiom]) -> int:
    """Number of concept and role name occurrences (the TBox-size metric)."""
    total = 0
    for ax in axioms:
        cs, rs = axiom_names(ax)
        total += len(cs) + len(rs)
    return total


def fuzzy_occurrences(ax: Axiom, crisp_concepts: Iterable[str] = (), crisp_roles: Iterable[str] = ()) -> int:
    cc, cr = set(crisp_concepts), set(crisp_roles)
    cs, rs = axiom_names(ax)
    return sum(1 for c in cs if c not in cc) + sum(1 for r in rs if r not in cr)


# ---------------------------------------------------------------------------
# ontologies


@dataclass(frozen=True)
class Ontology:
    """A fuzzy ontology over ``chain``.

    ``concepts``, ``roles`` and ``individuals`` are the declared signature in
    declaration order; the crisp sets are subsets of the first two.
    """

    chain: Chain
    abox: tuple[ABoxAxiom, ...] = ()
    tbox: tuple[GCI, ...] = ()
    rbox: tuple[RBoxAxiom, ...] = ()
    concepts: tuple[str, ...] = ()
    roles: tuple[str, ...] = ()
    individuals: tuple[str, ...] = ()
    crisp_concepts: frozenset[str] = frozenset()
    crisp_roles: frozenset[str] = frozenset()
    generated: bool = False

    @property
    def axioms(self) -> tuple[Axiom, ...]:
        return self.abox + self.tbox + self.rbox

    def with_axioms(self, axioms: Iterable[Axiom], **kw) -> "Ontology":
        """Copy with the given axioms, re-sorted into the three boxes and the
        signature extended by any undeclared name they use."""
        abox, tbox, rbox = split_axioms(axioms)
        new = replace(self, abox=abox, tbox=tbox, rbox=rbox, **kw)
        return new.extend_signature()

    def extend_signature(self) -> "Ontology":
        concepts = list(self.concepts)
        roles = list(self.roles)
        inds = list(self.individuals)
        seen_c, seen_r, seen_i = set(concepts), set(roles), set(inds)
        for ax in self.axioms:
            cs, rs = axiom_names(ax)
            for c in cs:
                if c not in seen_c:
                    seen_c.add(c)
                    concepts.append(c)
            for r in rs:
                if r not in seen_r:
                    seen_r.add(r)
                    roles.append(r)
            for i in axiom_individuals(ax):
                if i not in seen_i:
                    seen_i.add(i)
                    inds.append(i)
        return replace(self, concepts=tuple(concepts), roles=tuple(roles), individuals=tuple(inds))

    def is_crisp(self, name: str, kind: str) -> bool:
        return name in (self.crisp_concepts if kind == "concept" else self.crisp_roles)

    @property
    def fuzzy_concepts(self) -> tuple[str, ...]:
        return tuple(c for c in self.concepts if c not in self.crisp_concepts)

    @property
    def fuzzy_roles(self) -> tuple[str, ...]:
        return tuple(r for r in self.roles if r not in self.crisp_roles)


@dataclass(frozen=True)
class CutEntry:
    """Which fuzzy name a classical name stands for; ``degree`` is ``None`` for crisp names."""

    source: str
    kind: str
    degree: int | None


@dataclass(frozen=True)
class ClassicalOntology(Ontology):
    """Output of crispification.

    ``cuts`` maps every classical name to its :class:`CutEntry`, ``source_chain``
    is the chain of the fuzzy input, and ``provenance`` holds one source label
    per axiom of :attr:`axioms`.
    """

    source_chain: Chain | None = None
    cuts: tuple[tuple[str, CutEntry], ...] = ()
    provenance: tuple[str, ...] = ()

    @property
    def cut_map(self) -> dict[str, CutEntry]:
        return dict(self.cuts)


def split_axioms(axioms: Iterable[Axiom]) -> tuple[tuple, tuple, tuple]:
    abox, tbox, rbox = [], [], []
    for ax in axioms:
        if isinstance(ax, ABOX_TYPES):
            abox.append(ax)
        elif isinstance(ax, GCI):
            tbox.append(ax)
        elif isinstance(ax, RBOX_TYPES):
            rbox.append(ax)
        else:
            raise TypeError(f"not an axiom: {ax!r}")
    return tuple(abox), tuple(tbox), tuple(rbox)


# ---------------------------------------------------------------------------
# validation and strict-annotation rewriting


def _where(ax: Axiom) -> str:
    return f"{ax.loc}: " if getattr(ax, "loc", None) else ""


def validate(o: Ontology) -> list[str]:
    """Invariant violations of ``o``; an empty list means valid."""
    report: list[str] = []
    chain = o.chain
    cset, rset, iset = set(o.concepts), set(o.roles), set(o.individuals)

    def on_chain(ax, d) -> bool:
        if not (isinstance(d, int) and 0 <= d < chain.n):
            report.append(f"{_where(ax)}degree not on chain of {chain.n}")
            return False
        return True

    for name in o.crisp_concepts - cset:
        report.append(f"crisp concept {name} is not declared")
    for name in o.crisp_roles - rset:
        report.append(f"crisp role {name} is not declared")

    for ax in o.axioms:
        w = _where(ax)
        cs, rs = axiom_names(ax)
        for c in cs:
            if c not in cset:
                report.append(f"{w}concept {c} is not declared")
        for r in rs:
            if r not in rset:
                report.append(f"{w}role {r} is not declared")
        for i in axiom_individuals(ax):
            if i not in iset:
                report.append(f"{w}individual {i} is not declared")
        for c in axiom_concepts(ax):
            for s in subconcepts(c):
                if isinstance(s, Nominal):
                    for d, _ in s.items:
                        if on_chain(ax, d) and d == 0:
                            report.append(f"{w}nominal degrees must be positive")
                if isinstance(s, (AtLeast, AtMost, AtLeastQ, AtMostQ)) and s.m < 0:
                    report.append(f"{w}number restriction with negative bound")
        if isinstance(ax, (ConceptAssertion, RoleAssertion, GCI, RIA)):
            if not on_chain(ax, ax.degree):
                continue
            op = ax.op
            if op in (GT, LT) or getattr(ax, "negated", False):
                report.append(f"{w}strict or negated annotation not rewritten")
            elif op == GEQ and ax.degree == 0:
                report.append(f"{w}Geq degree must be positive")
            elif op == LEQ and ax.degree == chain.top:
                report.append(f"{w}Leq degree must be below 1")
            if isinstance(ax, (GCI, RIA)) and op not in (GEQ, GT):
                report.append(f"{w}only lower bounds are allowed on inclusions")
        if isinstance(ax, ConceptAssertion) and isinstance(ax.concept, Name) and ax.concept.name in o.crisp_concepts:
            _crisp_assert(report, w, ax.op, ax.degree, chain, ax.concept.name)
        if isinstance(ax, RoleAssertion) and not ax.negated and isinstance(ax.role, (Role, Inv)) and ax.role.name in o.crisp_roles:
            _crisp_assert(report, w, ax.op, ax.degree, chain, ax.role.name)
        if isinstance(ax, RIA) and not ax.lhs:
            report.append(f"{w}role inclusion with empty chain")
    return report


def _crisp_assert(report, w, op, d, chain, name):
    if op == GEQ and d not in (0, chain.top):
        report.append(f"{w}crisp name {name} asserted with degree other than 1")
    if op == LEQ and d != 0:
        report.append(f"{w}crisp name {name} bounded above by a degree other than 0")


def check_valid(o: Ontology) -> None:
    report = validate(o)
    if report:
        raise ValidationError("; ".join(report))


def rewrite_strict(o: Ontology) -> Ontology:
    """Replace ``>``/``<`` annotations and negated role assertions by plain bounds."""
    chain = o.chain
    out: list[Axiom] = []
    for ax in o.axioms:
        if isinstance(ax, (ConceptAssertion, RoleAssertion, GCI, RIA)):
            op, d = ax.op, ax.degree
            if op == GT:
                if d >= chain.top:
                    raise ValidationError(f"{_where(ax)}unsatisfiable strict bound > 1")
                op, d = GEQ, d + 1
            elif op == LT:
                if d <= 0:
                    raise ValidationError(f"{_where(ax)}unsatisfiable strict bound < 0")
                op, d = LEQ, d - 1
            if isinstance(ax, RoleAssertion) and ax.negated:
                if op == LEQ:
                    if d == chain.top:
                        continue  # vacuous
                    ax = replace(ax, negated=False, op=GEQ, degree=chain.neg_leq_threshold(d))
                    out.append(ax)
                    continue
                if d > 0:
                    # neg(x) >= d  iff  x <= neg_inv_max(d)
                    out.append(replace(ax, negated=False, op=LEQ, degree=chain.neg_inv_max(d)))
                    continue
            ax = replace(ax, op=op, degree=d)
        out.append(ax)
    return o.with_axioms(out)
