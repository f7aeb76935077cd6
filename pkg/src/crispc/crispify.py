"""Reduction of fuzzy ontologies over a finite chain to classical ontologies.

Each fuzzy name ``A`` becomes the cut names ``A_geq_k`` (one per positive
degree index ``k``), linked by ``A_geq_{k+1} <= A_geq_k``. Concepts are mapped
to cuts by :func:`rho_concept` and axioms by :func:`kappa_axiom`. The module
also hosts the passes that remove qualified number restrictions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from typing import Callable, Iterable

from .chain import Chain
from .errors import UnsupportedConstruct, UnsupportedSemantics, ValidationError
from .model import (
    BOT, GEQ, LEQ, TOP, UNIV, And, Asy, AtLeast, AtLeastQ, AtMost, AtMostQ, Axiom, Bottom,
    ClassicalOntology, Concept, ConceptAssertion, CutEntry, Dis, Eq, Exists, Forall, GCI, Inv, Irr,
    Name, Neq, Nominal, Not, Ontology, Or, Ref, RIA, Role, RoleAssertion, RoleDisjunction, RoleExpr,
    Self, Sym, Top, Trans, Universal, big_and, big_or, check_valid, disjuncts, inverse, mk_and, mk_or,
    occurrences, subconcepts,
)
from .normalize import FreshNamer, normalize

CLASSICAL = Chain(2, "goedel")
CUT_MARK = "_geq_"


def cut_name(name: str, d: int) -> str:
    return f"{name}{CUT_MARK}{d}"


class CutTable:
    """Classical names for the cuts of every concept and role name."""

    def __init__(self, chain: Chain, concepts: Iterable[str], roles: Iterable[str],
                 crisp_concepts: Iterable[str] = (), crisp_roles: Iterable[str] = ()):
        self.chain = chain
        self.concepts = tuple(concepts)
        self.roles = tuple(roles)
        self.crisp = {"concept": frozenset(crisp_concepts), "role": frozenset(crisp_roles)}
        self._known = {"concept": set(self.concepts), "role": set(self.roles)}
        entries: list[tuple[str, CutEntry]] = []
        for kind, names in (("concept", self.concepts), ("role", self.roles)):
            for n in names:
                if n in self.crisp[kind]:
                    entries.append((n, CutEntry(n, kind, None)))
                else:
                    entries += [(cut_name(n, k), CutEntry(n, kind, k)) for k in chain.positive]
        seen: dict[str, CutEntry] = {}
        for cname, e in entries:
            if cname in seen:
                other = seen[cname]
                raise ValidationError(
                    f"classical name {cname} would stand for both {other.kind} {other.source} and {e.kind} {e.source}"
                )
            seen[cname] = e
        self.entries = tuple(entries)

    @classmethod
    def of(cls, o: Ontology) -> "CutTable":
        return cls(o.chain, o.concepts, o.roles, o.crisp_concepts, o.crisp_roles)

    def knows(self, name: str, kind: str) -> bool:
        return name in self._known[kind]

    def is_crisp(self, name: str, kind: str) -> bool:
        return name in self.crisp[kind]

    def name_for(self, name: str, kind: str, d: int) -> str:
        if not self.knows(name, kind):
            raise ValidationError(f"{kind} {name} has no cuts")
        if not 0 < d < self.chain.n:
            raise ValueError(f"cut degree {d} out of range")
        return name if self.is_crisp(name, kind) else cut_name(name, d)

    def values(self, name: str, kind: str) -> tuple[int, ...] | None:
        """Degrees ``name`` can take: ``(0, 1)`` for crisp names, ``None`` for the whole chain."""
        return (0, self.chain.top) if self.is_crisp(name, kind) else None


@dataclass(frozen=True)
class CrispifyOptions:
    normalize: bool = True
    skip_small: bool = True
    split_unions: bool = True
    drop_tautologies: bool = True
    literal_role_inclusion: bool = False
    extended: bool = False
    legacy_qnr: bool = False


# ---------------------------------------------------------------------------
# builders: rho is written once and either builds concepts or just measures them


class _AstBuilder:
    top, bot = TOP, BOT

    def is_top(self, x) -> bool:
        return isinstance(x, Top)

    def is_bot(self, x) -> bool:
        return isinstance(x, Bottom)

    def atom(self, name: str):
        return Name(name)

    def role(self, r: RoleExpr, cname: str | None):
        if cname is None:
            return UNIV
        return Inv(cname) if isinstance(r, Inv) else Role(cname)

    def not_(self, x):
        return Not(x)

    and_ = staticmethod(mk_and)
    or_ = staticmethod(mk_or)

    def exists(self, r, x):
        return BOT if isinstance(x, Bottom) else Exists(r, x)

    def forall(self, r, x):
        return TOP if isinstance(x, Top) else Forall(r, x)

    def nominal(self, inds: list[str]):
        return Nominal(tuple((1, o) for o in inds)) if inds else BOT

    def atleast(self, m, r):
        return AtLeast(m, r)

    def atmost(self, m, r):
        return AtMost(m, r)

    def self_(self, r):
        return Self(r)


class _SizeBuilder:
    """Summaries ``(kind, disjunct count, name occurrences)`` mirroring :class:`_AstBuilder`."""

    top = ("top", 1, 0)
    bot = ("bot", 0, 0)

    def is_top(self, x) -> bool:
        return x[0] == "top"

    def is_bot(self, x) -> bool:
        return x[0] == "bot"

    def atom(self, name):
        return ("x", 1, 1)

    def role(self, r, cname):
        return 0 if cname is None else 1

    def not_(self, x):
        return ("x", 1, x[2])

    def and_(self, a, b):
        if a[0] == "bot" or b[0] == "bot":
            return self.bot
        if a[0] == "top":
            return b
        if b[0] == "top":
            return a
        return ("x", 1, a[2] + b[2])

    def or_(self, a, b):
        if a[0] == "top" or b[0] == "top":
            return self.top
        if a[0] == "bot":
            return b
        if b[0] == "bot":
            return a
        return ("or", a[1] + b[1], a[2] + b[2])

    def exists(self, r, x):
        return self.bot if x[0] == "bot" else ("x", 1, r + x[2])

    def forall(self, r, x):
        return self.top if x[0] == "top" else ("x", 1, r + x[2])

    def nominal(self, inds):
        return ("x", 1, 0) if inds else self.bot

    def atleast(self, m, r):
        return ("x", 1, r)

    atmost = atleast

    def self_(self, r):
        return ("x", 1, r)


class _Rho:
    def __init__(self, cuts: CutTable, builder):
        self.cuts = cuts
        self.chain = cuts.chain
        self.b = builder
        self.memo: dict[tuple[Concept, int], object] = {}

    # value sets used to restrict frontier pairs
    def cvals(self, c: Concept):
        if isinstance(c, Name):
            return self.cuts.values(c.name, "concept")
        if isinstance(c, Top):
            return (self.chain.top,)
        if isinstance(c, Bottom):
            return (0,)
        return None

    def rvals(self, r: RoleExpr):
        if isinstance(r, Universal):
            return (self.chain.top,)
        return self.cuts.values(r.name, "role")

    def role(self, r: RoleExpr, d: int):
        if isinstance(r, Universal) or d == 0:
            return self.b.role(UNIV, None)
        return self.b.role(r, self.cuts.name_for(r.name, "role", d))

    def concept(self, c: Concept, d: int):
        key = (c, d)
        hit = self.memo.get(key)
        if hit is None:
            hit = self.memo[key] = self._concept(c, d)
        return hit

    def _concept(self, c: Concept, d: int):
        b, ch = self.b, self.chain
        if d == 0 or isinstance(c, Top):
            return b.top
        if isinstance(c, Bottom):
            return b.bot
        if isinstance(c, Name):
            return b.atom(self.cuts.name_for(c.name, "concept", d))
        if isinstance(c, Not):
            return b.not_(self.concept(c.arg, ch.neg_inv_max(d) + 1))
        if isinstance(c, (And, Or)):
            frontier = ch.tnorm_frontier if isinstance(c, And) else ch.tconorm_frontier
            acc = b.bot
            for d1, d2 in frontier(d, self.cvals(c.left), self.cvals(c.right)):
                acc = b.or_(acc, b.and_(self.concept(c.left, d1), self.concept(c.right, d2)))
            return acc
        if isinstance(c, Exists):
            acc = b.bot
            for d1, d2 in ch.tnorm_frontier(d, self.rvals(c.role), self.cvals(c.arg)):
                acc = b.or_(acc, b.exists(self.role(c.role, d1), self.concept(c.arg, d2)))
            return acc
        if isinstance(c, Forall):
            acc = b.top
            for d1, d2 in ch.impl_frontier(d, self.rvals(c.role), self.cvals(c.arg)):
                acc = b.and_(acc, b.forall(self.role(c.role, d1), self.concept(c.arg, d2 + 1)))
            return acc
        if isinstance(c, Nominal):
            return b.nominal([o for di, o in c.items if di >= d])
        if isinstance(c, AtLeast):
            return b.atleast(c.m, self.role(c.role, d))
        if isinstance(c, AtMost):
            return b.atmost(c.m, self.role(c.role, ch.neg_inv_max(d) + 1))
        if isinstance(c, Self):
            return b.self_(self.role(c.role, d))
        if isinstance(c, (AtLeastQ, AtMostQ)):
            raise UnsupportedConstruct("qualified number restrictions must be eliminated before crispification")
        raise TypeError(f"not a concept: {c!r}")


def _require_tnorm(chain: Chain) -> None:
    if not chain.residuated:
        raise UnsupportedSemantics("Zadeh TBox reduction is unsupported: the cut reduction is not correct under Zadeh semantics")


def rho_concept(c: Concept, d: int, cuts: CutTable) -> Concept:
    """Classical concept true exactly where ``c`` has degree at least ``d``."""
    _require_tnorm(cuts.chain)
    return _Rho(cuts, _AstBuilder()).concept(c, d)


def rho_role(r: RoleExpr, d: int, cuts: CutTable) -> RoleExpr:
    return _Rho(cuts, _AstBuilder()).role(r, d)


# ---------------------------------------------------------------------------
# axioms


class _Kappa:
    def __init__(self, cuts: CutTable, options: CrispifyOptions, builder=None):
        _require_tnorm(cuts.chain)
        self.cuts = cuts
        self.chain = cuts.chain
        self.opt = options
        self.rho = _Rho(cuts, builder or _AstBuilder())

    def gci_pairs(self, ax: GCI):
        r = self.rho
        for d1, d2 in self.chain.impl_frontier(ax.degree, r.cvals(ax.lhs), r.cvals(ax.rhs)):
            lhs, rhs = r.concept(ax.lhs, d1), r.concept(ax.rhs, d2 + 1)
            if self.opt.drop_tautologies and (r.b.is_bot(lhs) or r.b.is_top(rhs)):
                continue
            yield lhs, rhs

    def axiom(self, ax: Axiom) -> list[Axiom]:
        ch, r = self.chain, self.rho
        if isinstance(ax, ConceptAssertion):
            if ax.op == GEQ:
                return [ConceptAssertion(r.concept(ax.concept, ax.degree), ax.ind, GEQ, 1)]
            return [ConceptAssertion(Not(r.concept(ax.concept, ax.degree + 1)), ax.ind, GEQ, 1)]
        if isinstance(ax, RoleAssertion):
            if ax.op == GEQ:
                return [RoleAssertion(r.role(ax.role, ax.degree), ax.a, ax.b, GEQ, 1)]
            return [RoleAssertion(r.role(ax.role, ax.degree + 1), ax.a, ax.b, LEQ, 0)]
        if isinstance(ax, (Eq, Neq)):
            return [replace(ax, loc=None)]
        if isinstance(ax, GCI):
            out: list[Axiom] = []
            for lhs, rhs in self.gci_pairs(ax):
                parts = disjuncts(lhs) if self.opt.split_unions else [lhs]
                out += [GCI(p, rhs, 1) for p in parts]
            return out
        if isinstance(ax, RIA):
            return self.ria(ax.lhs, ax.rhs, ax.degree)
        if isinstance(ax, Trans):
            return self.ria((ax.role, ax.role), ax.role, ch.top)
        if isinstance(ax, Sym):
            return self.ria((ax.role,), inverse(ax.role), ch.top)
        if isinstance(ax, Dis):
            return [Dis(r.role(ax.r1, 1), r.role(ax.r2, 1))]
        if isinstance(ax, Ref):
            return [Ref(r.role(ax.role, ch.top))]
        if isinstance(ax, Irr):
            return [Irr(r.role(ax.role, 1))]
        if isinstance(ax, Asy):
            return [Asy(r.role(ax.role, 1))]
        if isinstance(ax, RoleDisjunction):
            if not self.opt.extended:
                raise UnsupportedConstruct("role disjunctions need extended mode")
            return [RoleDisjunction(r.role(ax.sub, d), tuple(r.role(s, d) for s in ax.sups)) for d in ch.positive]
        raise TypeError(f"not an axiom: {ax!r}")

    def ria(self, lhs: tuple[RoleExpr, ...], rhs: RoleExpr, d: int) -> list[Axiom]:
        ch, r = self.chain, self.rho
        if len(lhs) == 1 and self.opt.literal_role_inclusion:
            lhs = (lhs[0], UNIV)
        if len(lhs) == 1:
            (r1,) = lhs
            return [
                RIA((r.role(r1, d1),), r.role(rhs, d2 + 1), 1)
                for d1, d2 in ch.impl_frontier(d, r.rvals(r1), r.rvals(rhs))
            ]
        if len(lhs) != 2:
            raise ValidationError("role inclusions must be binary before crispification")
        r1, r2 = lhs
        out = []
        for d1, dp in ch.impl_frontier(d, r.rvals(r1), None):
            for d2, d3 in ch.impl_frontier(dp + 1, r.rvals(r2), r.rvals(rhs)):
                out.append(RIA((r.role(r1, d1), r.role(r2, d2)), r.role(rhs, d3 + 1), 1))
        return out


def kappa_axiom(ax: Axiom, cuts: CutTable, options: CrispifyOptions = CrispifyOptions()) -> list[Axiom]:
    """Classical axioms equivalent to ``ax`` over the cut vocabulary."""
    return _Kappa(cuts, options).axiom(ax)


def linking_axioms(cuts: CutTable) -> list[Axiom]:
    out: list[Axiom] = []
    ch = cuts.chain
    for a in cuts.concepts:
        if not cuts.is_crisp(a, "concept"):
            out += [GCI(Name(cut_name(a, k + 1)), Name(cut_name(a, k)), 1) for k in range(1, ch.top)]
    for s in cuts.roles:
        if not cuts.is_crisp(s, "role"):
            out += [RIA((Role(cut_name(s, k + 1)),), Role(cut_name(s, k)), 1) for k in range(1, ch.top)]
    return out


def _label(ax: Axiom, i: int) -> str:
    return ax.loc or f"input axiom {i + 1}"


def is_crispified(o: Ontology) -> bool:
    return isinstance(o, ClassicalOntology) or any(CUT_MARK in n for n in o.concepts + o.roles)


def prepare(o: Ontology, options: CrispifyOptions = CrispifyOptions()) -> Ontology:
    """Everything crispification does before cutting: QNR passes and normalization."""
    _require_tnorm(o.chain)
    check_valid(o)
    if options.legacy_qnr:
        o = legacy_partition_reduction(o, enabled=True)
    o = map_concepts(o, unqualify_top)
    if has_qualified(o):
        o = eliminate_qualified(o, extended=options.extended)
    if options.normalize:
        o = normalize(o, options.skip_small)
    return o


def crispify(o: Ontology, options: CrispifyOptions = CrispifyOptions()) -> ClassicalOntology:
    """Classical ontology with a model iff ``o`` has a fuzzy model."""
    if is_crispified(o):
        raise UnsupportedConstruct("input is already a crispified ontology")
    o = prepare(o, options)
    cuts = CutTable.of(o)
    kappa = _Kappa(cuts, options)
    axioms: list[Axiom] = []
    prov: list[str] = []
    for ax in linking_axioms(cuts):
        axioms.append(ax)
        prov.append("cut linking")
    for i, ax in enumerate(o.axioms):
        for out in kappa.axiom(ax):
            axioms.append(out)
            prov.append(_label(ax, i))
    concepts = tuple(n for n, e in cuts.entries if e.kind == "concept")
    roles = tuple(n for n, e in cuts.entries if e.kind == "role")
    result = ClassicalOntology(
        chain=CLASSICAL,
        concepts=concepts,
        roles=roles,
        individuals=o.individuals,
        generated=o.generated,
        source_chain=o.chain,
        cuts=cuts.entries,
    ).with_axioms(axioms)
    # with_axioms regroups by box, so the provenance must follow the same grouping
    return replace(result, provenance=_regroup(axioms, prov))


def _box_rank(ax: Axiom) -> int:
    return 0 if isinstance(ax, (ConceptAssertion, RoleAssertion, Eq, Neq)) else 1 if isinstance(ax, GCI) else 2


def _regroup(axioms: list[Axiom], prov: list[str]) -> tuple[str, ...]:
    order = sorted(range(len(axioms)), key=lambda i: _box_rank(axioms[i]))
    return tuple(prov[i] for i in order)


@dataclass(frozen=True)
class Sizes:
    """Name occurrences of a crispified ontology, split into assertions and the rest."""

    abox: int
    tbox: int

    @property
    def total(self) -> int:
        return self.abox + self.tbox


def crispified_size(o: Ontology, options: CrispifyOptions = CrispifyOptions()) -> Sizes:
    """Name occurrences of ``crispify(o, options)`` computed without building the output.

    Only GCIs and concept assertions can blow up, so those are measured with
    summaries; every other axiom is translated and counted directly.
    """
    o = prepare(o, options)
    cuts = CutTable.of(o)
    sizer = _Kappa(cuts, options, _SizeBuilder())
    plain = _Kappa(cuts, options)
    abox, tbox = 0, occurrences(linking_axioms(cuts))
    for ax in o.axioms:
        if isinstance(ax, GCI):
            for lhs, rhs in sizer.gci_pairs(ax):
                n = lhs[1] if options.split_unions else 1
                tbox += lhs[2] + n * rhs[2]
        elif isinstance(ax, ConceptAssertion):
            d = ax.degree if ax.op == GEQ else ax.degree + 1
            abox += sizer.rho.concept(ax.concept, d)[2]
        elif isinstance(ax, (RoleAssertion, Eq, Neq)):
            abox += occurrences(plain.axiom(ax))
        else:
            tbox += occurrences(plain.axiom(ax))
    return Sizes(abox, tbox)


# ---------------------------------------------------------------------------
# qualified number restrictions


def has_qualified(o: Ontology) -> bool:
    return any(
        isinstance(s, (AtLeastQ, AtMostQ))
        for ax in o.axioms
        for c in _axiom_concepts(ax)
        for s in subconcepts(c)
    )


def _axiom_concepts(ax: Axiom) -> list[Concept]:
    if isinstance(ax, ConceptAssertion):
        return [ax.concept]
    if isinstance(ax, GCI):
        return [ax.lhs, ax.rhs]
    return []


def map_concepts(o: Ontology, f: Callable[[Concept], Concept]) -> Ontology:
    """Apply ``f`` bottom-up to every concept in ``o``."""

    def walk(c: Concept) -> Concept:
        if isinstance(c, (And, Or)):
            c = type(c)(walk(c.left), walk(c.right))
        elif isinstance(c, Not):
            c = Not(walk(c.arg))
        elif isinstance(c, (Exists, Forall)):
            c = type(c)(c.role, walk(c.arg))
        elif isinstance(c, (AtLeastQ, AtMostQ)):
            c = type(c)(c.m, c.role, walk(c.arg))
        return f(c)

    out = []
    for ax in o.axioms:
        if isinstance(ax, ConceptAssertion):
            ax = replace(ax, concept=walk(ax.concept))
        elif isinstance(ax, GCI):
            ax = replace(ax, lhs=walk(ax.lhs), rhs=walk(ax.rhs))
        out.append(ax)
    return o.with_axioms(out)


def unqualify_top(c: Concept) -> Concept:
    """``>= m r.top`` is ``>= m r`` (and likewise for at-most)."""
    if isinstance(c, AtLeastQ) and isinstance(c.arg, Top):
        return AtLeast(c.m, c.role)
    if isinstance(c, AtMostQ) and isinstance(c.arg, Top):
        return AtMost(c.m, c.role)
    return c


def _atmost_as_negation(c: Concept) -> Concept:
    return Not(AtLeastQ(c.m + 1, c.role, c.arg)) if isinstance(c, AtMostQ) else c


def _role_partition(namer: FreshNamer, r: RoleExpr, m: int, top: int) -> tuple[list[Role], list[Axiom]]:
    fresh = [Role(namer.role()) for _ in range(m)]
    axioms: list[Axiom] = [RIA((ri,), r, top) for ri in fresh]
    axioms += [Dis(a, b) for a, b in itertools.combinations(fresh, 2)]
    return fresh, axioms


def eliminate_qualified(o: Ontology, extended: bool = False) -> Ontology:
    """Remove qualified at-least/at-most restrictions by partitioning their role.

    At-most restrictions are first written as negated at-least restrictions;
    after normalization each one sits alone on one side of a GCI. Right-hand
    sides become ``m`` existentials over disjoint sub-roles; left-hand sides
    additionally need the role disjunction ``r <= r1 or ... or rm`` and hence
    ``extended``.

    The left-hand-side encoding only weakens the axiom: a model may route two
    successors through the same sub-role, leaving every conjunct but one
    false. Extended mode can therefore turn an inconsistent input consistent.
    """
    top = o.chain.top
    o = map_concepts(o, _atmost_as_negation)
    o = normalize(o, skip_small=False)
    namer = FreshNamer.after(o.concepts + o.roles)
    out: list[Axiom] = []
    for ax in o.axioms:
        if isinstance(ax, GCI) and isinstance(ax.rhs, AtLeastQ):
            q = ax.rhs
            if q.m == 0:
                continue  # at-least-zero is always fully true
            fresh, extra = _role_partition(namer, q.role, q.m, top)
            out += [GCI(ax.lhs, Exists(ri, q.arg), ax.degree, loc=ax.loc) for ri in fresh] + extra
        elif isinstance(ax, GCI) and isinstance(ax.lhs, AtLeastQ):
            q = ax.lhs
            if not extended:
                raise UnsupportedConstruct(
                    f"{ax.loc or 'axiom'}: qualified at-least on a left-hand side needs extended mode"
                )
            if q.m == 0:
                out.append(GCI(TOP, ax.rhs, ax.degree, loc=ax.loc))
                continue
            fresh, extra = _role_partition(namer, q.role, q.m, top)
            lhs = big_and(Exists(ri, q.arg) for ri in fresh)
            out += [GCI(lhs, ax.rhs, ax.degree, loc=ax.loc), *extra, RoleDisjunction(q.role, tuple(fresh))]
        else:
            for c in _axiom_concepts(ax):
                if any(isinstance(s, (AtLeastQ, AtMostQ)) for s in subconcepts(c)):
                    raise UnsupportedConstruct(f"{ax.loc or 'axiom'}: qualified restriction in unsupported position")
            out.append(ax)
    fresh_roles = tuple(n for k, n in namer.order if k == "role")
    return o.with_axioms(out, roles=o.roles + fresh_roles, generated=True)


def legacy_partition_reduction(o: Ontology, enabled: bool = False) -> Ontology:
    """The historical concept-partition encoding of qualified at-least restrictions.

    Known to be unsound; only available for demonstration and every produced
    axiom is labelled accordingly.
    """
    if not enabled:
        raise UnsupportedConstruct("the legacy partition reduction is demonstration-only and must be enabled explicitly")
    namer = FreshNamer.after(o.concepts + o.roles)
    extra: list[Axiom] = []

    def replace_qnr(c: Concept) -> Concept:
        if not isinstance(c, AtLeastQ) or c.m == 0:
            return c
        bs = [Name(namer.concept()) for _ in range(c.m)]
        extra.append(GCI(TOP, big_or(bs), o.chain.top))
        extra.extend(GCI(mk_and(a, b), BOT, o.chain.top) for a, b in itertools.combinations(bs, 2))
        return big_and(Exists(c.role, mk_and(c.arg, b)) for b in bs)

    mapped = map_concepts(o, replace_qnr)
    tag = "UNSOUND legacy partition"
    axioms = [replace(ax, loc=f"{tag} ({ax.loc})" if ax.loc else tag) for ax in list(mapped.axioms) + extra]
    fresh = tuple(n for k, n in namer.order if k == "concept")
    return o.with_axioms(axioms, concepts=o.concepts + fresh, generated=True)
