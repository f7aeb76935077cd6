"""Synthetic university-style workloads and size measurements.

The generator imitates the shape of the well-known university benchmark: an
EL-style TBox with inverse roles at degree 1 plus a random ABox with degrees
drawn from the chain. Nothing is downloaded; sizes are occurrence counts.
"""

from __future__ import annotations

import csv
import io
import random
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

from .chain import Chain
from .crispify import CrispifyOptions, crispified_size
from .errors import ValidationError
from .model import (
    TOP, And, AtLeastQ, AtMostQ, ConceptAssertion, Exists, Forall, GCI, GEQ, Inv, Name, Nominal, Not,
    Ontology, Or, RIA, Role, RoleAssertion, Trans, occurrences,
)
from .queries import Atom, ThresholdCQ

CONCEPTS = (
    "Person", "Employee", "Faculty", "Professor", "Chair", "Student", "GraduateStudent",
    "UndergraduateStudent", "TeachingAssistant", "ResearchAssistant", "Organization", "University",
    "Department", "ResearchGroup", "Course", "GraduateCourse", "Publication",
)
ROLES = (
    "worksFor", "memberOf", "headOf", "subOrganizationOf", "takesCourse", "teacherOf",
    "advisor", "publicationAuthor", "degreeFrom", "hasAlumnus",
)
INDIVIDUALS_PER_UNIT = 60


def _tbox(top: int) -> tuple[list[GCI], list]:
    n, r = Name, Role
    gcis = [
        GCI(n("Employee"), n("Person"), top),
        GCI(n("Faculty"), n("Employee"), top),
        GCI(n("Professor"), n("Faculty"), top),
        GCI(n("Chair"), And(n("Professor"), Exists(r("headOf"), n("Department"))), top),
        GCI(And(n("Professor"), Exists(r("headOf"), n("Department"))), n("Chair"), top),
        GCI(n("Student"), And(n("Person"), Exists(r("takesCourse"), n("Course"))), top),
        GCI(And(n("Person"), Exists(r("takesCourse"), n("Course"))), n("Student"), top),
        GCI(n("GraduateStudent"), n("Student"), top),
        GCI(n("UndergraduateStudent"), n("Student"), top),
        GCI(n("GraduateStudent"), Exists(r("takesCourse"), n("GraduateCourse")), top),
        GCI(n("GraduateCourse"), n("Course"), top),
        GCI(n("TeachingAssistant"), Exists(r("teacherOf"), n("Course")), top),
        GCI(n("ResearchAssistant"), Exists(r("worksFor"), n("ResearchGroup")), top),
        GCI(n("University"), n("Organization"), top),
        GCI(n("Department"), n("Organization"), top),
        GCI(n("ResearchGroup"), n("Organization"), top),
        GCI(Exists(Inv("advisor"), TOP), n("Professor"), top),
        GCI(Exists(Inv("publicationAuthor"), n("Publication")), n("Person"), top),
        GCI(Exists(r("memberOf"), n("Organization")), n("Person"), top),
    ]
    rbox = [
        RIA((r("worksFor"),), r("memberOf"), top),
        RIA((r("headOf"),), r("worksFor"), top),
        RIA((Inv("degreeFrom"),), r("hasAlumnus"), top),
        Trans(r("subOrganizationOf")),
    ]
    return gcis, rbox


@dataclass(frozen=True)
class BenchConfig:
    universities: int = 1
    chain_size: int = 3
    crisp_pct: int = 0
    seed: int = 0
    concept_assertions_per_unit: int = 1300
    role_assertions_per_unit: int = 2450
    divisor: int = 10
    family: str = "lukasiewicz"

    def __post_init__(self) -> None:
        if not 0 <= self.crisp_pct <= 100:
            raise ValidationError("crisp percentage must lie in [0, 100]")
        if min(self.universities, self.chain_size - 1, self.concept_assertions_per_unit,
               self.role_assertions_per_unit, self.divisor) <= 0:
            raise ValidationError("bench counts must be positive and the chain needs two degrees")

    @property
    def concept_assertions(self) -> int:
        return self.universities * max(1, self.concept_assertions_per_unit // self.divisor)

    @property
    def role_assertions(self) -> int:
        return self.universities * max(1, self.role_assertions_per_unit // self.divisor)


def gen_ontology(cfg: BenchConfig) -> Ontology:
    """University-style ontology; everything random is drawn from ``cfg.seed``."""
    chain = Chain(cfg.chain_size, cfg.family)
    rng = random.Random(cfg.seed)
    names = [("concept", c) for c in CONCEPTS] + [("role", r) for r in ROLES]
    k = round(len(names) * cfg.crisp_pct / 100)
    crisp = set(rng.sample(names, k))
    crisp_c = frozenset(c for kind, c in crisp if kind == "concept")
    crisp_r = frozenset(r for kind, r in crisp if kind == "role")

    def degree(name: str, crisp_set) -> int:
        return chain.top if name in crisp_set else rng.randint(1, chain.top)

    abox: list = []
    inds: list[str] = []
    per_c = cfg.concept_assertions // cfg.universities
    per_r = cfg.role_assertions // cfg.universities
    for u in range(cfg.universities):
        pool = [f"u{u}_i{i}" for i in range(INDIVIDUALS_PER_UNIT)]
        inds += pool
        for _ in range(per_c):
            c = rng.choice(CONCEPTS)
            abox.append(ConceptAssertion(Name(c), rng.choice(pool), GEQ, degree(c, crisp_c)))
        for _ in range(per_r):
            r = rng.choice(ROLES)
            a, b = rng.sample(pool, 2)
            abox.append(RoleAssertion(Role(r), a, b, GEQ, degree(r, crisp_r)))
    gcis, rbox = _tbox(chain.top)
    return Ontology(
        chain=chain,
        concepts=CONCEPTS,
        roles=ROLES,
        individuals=tuple(inds),
        crisp_concepts=crisp_c,
        crisp_roles=crisp_r,
    ).with_axioms(abox + gcis + rbox)


def gen_nested_family(depth: int, chain_size: int = 4, family: str = "lukasiewicz") -> Ontology:
    """One GCI whose left-hand side alternates conjunction and existential restriction ``depth`` times."""
    if depth < 1:
        raise ValidationError("nesting depth must be at least 1")
    chain = Chain(chain_size, family)
    c = Name("A0")
    for i in range(1, depth + 1):
        c = And(Name(f"A{i}"), c) if i % 2 else Exists(Role("r"), c)
    concepts = tuple(f"A{i}" for i in range(depth + 1) if i == 0 or i % 2) + ("Goal",)
    return Ontology(chain=chain, concepts=concepts, roles=("r",)).with_axioms([GCI(c, Name("Goal"), chain.top)])


def rechain(o: Ontology, chain: Chain) -> Ontology:
    """The same ontology read over ``chain``; every degree must exist there."""

    def move(d: int) -> int:
        return chain.degree(o.chain.value(d))

    def concept(c):
        if isinstance(c, Nominal):
            return Nominal(tuple((move(d), i) for d, i in c.items))
        if isinstance(c, (And, Or)):
            return type(c)(concept(c.left), concept(c.right))
        if isinstance(c, Not):
            return Not(concept(c.arg))
        if isinstance(c, (Exists, Forall)):
            return type(c)(c.role, concept(c.arg))
        if isinstance(c, (AtLeastQ, AtMostQ)):
            return type(c)(c.m, c.role, concept(c.arg))
        return c

    out = []
    for ax in o.axioms:
        if isinstance(ax, (ConceptAssertion, RoleAssertion, GCI, RIA)):
            ax = replace(ax, degree=move(ax.degree))
        if isinstance(ax, ConceptAssertion):
            ax = replace(ax, concept=concept(ax.concept))
        elif isinstance(ax, GCI):
            ax = replace(ax, lhs=concept(ax.lhs), rhs=concept(ax.rhs))
        out.append(ax)
    return replace(o, chain=chain).with_axioms(out)


def make_threshold_queries(o: Ontology) -> list[ThresholdCQ]:
    """Star, chain and triangle joins with every atom at the smallest positive degree."""
    d = 1
    star = [Atom("Student", ("?x",)), Atom("takesCourse", ("?x", "?y")), Atom("memberOf", ("?x", "?z")),
            Atom("Course", ("?y",))]
    path = [Atom("Student", ("?x",)), Atom("advisor", ("?x", "?y")), Atom("worksFor", ("?y", "?z")),
            Atom("Department", ("?z",))]
    triangle = [Atom("advisor", ("?x", "?y")), Atom("teacherOf", ("?y", "?z")),
                Atom("takesCourse", ("?x", "?z"))]
    return [ThresholdCQ(("?x",), tuple(atoms), tuple(d for _ in atoms)) for atoms in (star, path, triangle)]


@dataclass
class Measurement:
    chain: int
    normalized: bool
    crisp_pct: int
    tbox_occurrences: int
    abox_occurrences: int
    gen_seed: int
    source_abox_occurrences: int = field(default=0, compare=False)


def measure(o: Ontology, normalized: bool, crisp_pct: int = 0, seed: int = 0) -> Measurement:
    """Occurrences of the crispified TBox (with the RBox) and ABox of ``o``."""
    opts = CrispifyOptions(normalize=normalized, skip_small=True)
    sizes = crispified_size(o, opts)
    return Measurement(o.chain.n, normalized, crisp_pct, sizes.tbox, sizes.abox, seed, occurrences(o.abox))


def measure_grid(cfgs: Iterable[BenchConfig]) -> list[Measurement]:
    rows = []
    for cfg in cfgs:
        o = gen_ontology(cfg)
        for normalized in (True, False):
            rows.append(measure(o, normalized, cfg.crisp_pct, cfg.seed))
    return rows


CSV_COLUMNS = ("chain", "normalized", "crisp_pct", "tbox_occurrences", "abox_occurrences", "gen_seed")


def to_csv(rows: Sequence[Measurement]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for m in rows:
        w.writerow([m.chain, str(m.normalized).lower(), m.crisp_pct, m.tbox_occurrences, m.abox_occurrences, m.gen_seed])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# size bound on the nested family


@dataclass(frozen=True)
class SizeFit:
    c: float
    points: tuple[tuple[int, int, int, int, int], ...]  # depth, n, |O|, normalized, unnormalized
    crossover: dict[int, int | None]  # n -> first depth where unnormalized exceeds c*|O|*n^2


def fit_size_bound(depths: Sequence[int] = range(1, 9), chains: Sequence[int] = range(3, 12),
                   family: str = "lukasiewicz") -> SizeFit:
    points = []
    for n in chains:
        for depth in depths:
            o = gen_nested_family(depth, n, family)
            size = occurrences(o.axioms)
            norm = crispified_size(o, CrispifyOptions(normalize=True, skip_small=False)).total
            raw = crispified_size(o, CrispifyOptions(normalize=False)).total
            points.append((depth, n, size, norm, raw))
    c = max(norm / (size * n * n) for _, n, size, norm, _ in points)
    crossover: dict[int, int | None] = {}
    for n in chains:
        over = [d for d, m, size, _, raw in points if m == n and raw > c * size * n * n]
        crossover[n] = min(over) if over else None
    return SizeFit(c, tuple(points), crossover)
