"""Linear normalization: abbreviate nested subconcepts and long role chains by fresh names.

After normalization every GCI and concept assertion carries at most one concept
constructor (or at most three fuzzy name occurrences when ``skip_small`` is on),
and every role inclusion has at most two roles on its left-hand side.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable

from .errors import UnsupportedSemantics
from .model import (
    GEQ, And, AtLeastQ, AtMostQ, Axiom, Concept, ConceptAssertion, Exists, Forall, GCI, Name, Not,
    Ontology, Or, RIA, Role, RoleExpr, fuzzy_occurrences, is_atomic,
)

_FRESH = re.compile(r"^#([cr])(\d+)$")


@dataclass
class FreshNamer:
    """Deterministic fresh names ``#cN`` / ``#rN`` and what they abbreviate.

    ``concept_defs`` maps a fresh concept to the expression it stands for
    (which may mention earlier fresh names); ``role_defs`` maps a fresh role to
    the two roles it composes.
    """

    next_c: int = 1
    next_r: int = 1
    concept_defs: dict[str, Concept] = field(default_factory=dict)
    role_defs: dict[str, tuple[RoleExpr, RoleExpr]] = field(default_factory=dict)
    order: list[tuple[str, str]] = field(default_factory=list)

    @classmethod
    def after(cls, names: Iterable[str]) -> "FreshNamer":
        c = r = 0
        for n in names:
            m = _FRESH.match(n)
            if m:
                if m.group(1) == "c":
                    c = max(c, int(m.group(2)))
                else:
                    r = max(r, int(m.group(2)))
        return cls(next_c=c + 1, next_r=r + 1)

    def concept(self, definition: Concept | None = None) -> str:
        name = f"#c{self.next_c}"
        self.next_c += 1
        if definition is not None:
            self.concept_defs[name] = definition
        self.order.append(("concept", name))
        return name

    def role(self, definition: tuple[RoleExpr, RoleExpr] | None = None) -> str:
        name = f"#r{self.next_r}"
        self.next_r += 1
        if definition is not None:
            self.role_defs[name] = definition
        self.order.append(("role", name))
        return name


POS, NEG = +1, -1


def _rebuild(c: Concept, args: list[Concept]) -> Concept:
    if isinstance(c, (And, Or)):
        return type(c)(args[0], args[1])
    if isinstance(c, Not):
        return Not(args[0])
    if isinstance(c, (Exists, Forall)):
        return type(c)(c.role, args[0])
    return type(c)(c.m, c.role, args[0])


def _arg_slots(c: Concept, polarity: int) -> list[tuple[Concept, int]]:
    """Concept arguments of the top constructor together with their polarity."""
    if isinstance(c, (And, Or)):
        return [(c.left, polarity), (c.right, polarity)]
    if isinstance(c, (Exists, Forall, AtLeastQ)):
        return [(c.arg, polarity)]
    if isinstance(c, (Not, AtMostQ)):
        return [(c.arg, -polarity)]
    return []


def is_flat(c: Concept) -> bool:
    """At most one constructor: ``c`` is atomic or all its arguments are."""
    return is_atomic(c) or all(is_atomic(a) for a, _ in _arg_slots(c, POS))


class _Normalizer:
    def __init__(self, o: Ontology, skip_small: bool):
        self.o = o
        self.skip_small = skip_small
        self.namer = FreshNamer.after(o.concepts + o.roles)
        self.shared: dict[tuple[Concept, int], str] = {}
        self.shared_roles: dict[tuple[RoleExpr, RoleExpr], str] = {}
        self.out: list[Axiom] = []

    def small(self, ax: Axiom) -> bool:
        return self.skip_small and fuzzy_occurrences(ax, self.o.crisp_concepts, self.o.crisp_roles) <= 3

    def name_for(self, c: Concept, polarity: int) -> tuple[Name, Axiom | None]:
        """Fresh abbreviation for ``c`` and its defining axiom (``None`` if shared)."""
        key = (c, polarity)
        if key in self.shared:
            return Name(self.shared[key]), None
        n = self.namer.concept(c)
        self.shared[key] = n
        a = Name(n)
        # positive slot: the name must imply c; negative slot: c must imply the name
        definition = GCI(a, c, self.o.chain.top) if polarity == POS else GCI(c, a, self.o.chain.top)
        return a, definition

    def flatten(self, c: Concept, polarity: int) -> tuple[Concept, list[Axiom]]:
        """Replace the complex arguments of ``c``'s top constructor by fresh names."""
        slots = _arg_slots(c, polarity)
        if all(is_atomic(a) for a, _ in slots):
            return c, []
        args, defs = [], []
        for arg, pol in slots:
            if is_atomic(arg):
                args.append(arg)
                continue
            a, d = self.name_for(arg, pol)
            args.append(a)
            if d is not None:
                defs.append(d)
        return _rebuild(c, args), defs

    def process(self, ax: Axiom) -> None:
        if isinstance(ax, GCI):
            self.gci(ax)
        elif isinstance(ax, ConceptAssertion):
            self.assertion(ax)
        elif isinstance(ax, RIA):
            self.ria(ax)
        else:
            self.out.append(ax)

    def gci(self, ax: GCI) -> None:
        if self.small(ax):
            self.out.append(ax)
            return
        lhs, rhs = ax.lhs, ax.rhs
        defs: list[Axiom] = []
        if not is_atomic(lhs) and not is_atomic(rhs):
            rhs, d = self.name_for(rhs, POS)
            if d is not None:
                defs.append(d)
        lhs, dl = self.flatten(lhs, NEG)
        rhs, dr = self.flatten(rhs, POS)
        self.out.append(GCI(lhs, rhs, ax.degree, ax.op, loc=ax.loc))
        for d in defs + dl + dr:
            self.process(d)

    def assertion(self, ax: ConceptAssertion) -> None:
        if is_atomic(ax.concept) or self.small(ax):
            self.out.append(ax)
            return
        # an upper bound on C(a) needs a name that bounds C from above
        a, d = self.name_for(ax.concept, POS if ax.op == GEQ else NEG)
        self.out.append(ConceptAssertion(a, ax.ind, ax.op, ax.degree, loc=ax.loc))
        if d is not None:
            self.process(d)

    def ria(self, ax: RIA) -> None:
        lhs = list(ax.lhs)
        pending: list[Axiom] = []
        while len(lhs) > 2:
            pair = (lhs[0], lhs[1])
            if pair in self.shared_roles:
                fresh = self.shared_roles[pair]
            else:
                fresh = self.namer.role(pair)
                self.shared_roles[pair] = fresh
                pending.append(RIA(pair, Role(fresh), self.o.chain.top))
            lhs = [Role(fresh)] + lhs[2:]
        self.out.append(RIA(tuple(lhs), ax.rhs, ax.degree, ax.op, loc=ax.loc))
        self.out.extend(pending)


def normalize_with_defs(o: Ontology, skip_small: bool = True) -> tuple[Ontology, FreshNamer]:
    if o.chain.family == "zadeh":
        raise UnsupportedSemantics("normalization is not correct under Zadeh semantics")
    n = _Normalizer(o, skip_small)
    for ax in o.axioms:
        n.process(ax)
    fresh_c = [name for kind, name in n.namer.order if kind == "concept"]
    fresh_r = [name for kind, name in n.namer.order if kind == "role"]
    out = o.with_axioms(
        n.out,
        concepts=o.concepts + tuple(fresh_c),
        roles=o.roles + tuple(fresh_r),
        generated=o.generated or bool(n.namer.order),
    )
    return out, n.namer


def normalize(o: Ontology, skip_small: bool = True) -> Ontology:
    return normalize_with_defs(o, skip_small)[0]


def check_normalized(o: Ontology, allow_small: bool = True) -> list[str]:
    """Axioms that are neither small nor in normal form (empty list: normalized)."""
    report = []
    for i, ax in enumerate(o.axioms):
        where = ax.loc or f"axiom {i + 1}"
        small = allow_small and fuzzy_occurrences(ax, o.crisp_concepts, o.crisp_roles) <= 3
        if isinstance(ax, RIA) and len(ax.lhs) > 2:
            report.append(f"{where}: RIA not binary")
        elif isinstance(ax, GCI) and not small:
            if not is_atomic(ax.lhs) and not is_atomic(ax.rhs):
                report.append(f"{where}: both sides of the GCI are complex")
            elif not (is_flat(ax.lhs) and is_flat(ax.rhs)):
                report.append(f"{where}: GCI has nested constructors")
        elif isinstance(ax, ConceptAssertion) and not small and not is_atomic(ax.concept):
            report.append(f"{where}: assertion on a complex concept")
    return report
