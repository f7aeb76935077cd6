"""Finite-model evaluator for fuzzy and classical semantics.

Interpretations are explicit tables over a small domain of element indices.
Evaluation works on degree intervals so that the same code both evaluates a
complete interpretation (intervals collapse to points) and prunes the model
search over partial ones.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .chain import Chain
from .errors import DomainError, ValidationError
from .model import (
    GEQ, And, Asy, AtLeast, AtLeastQ, AtMost, AtMostQ, Axiom, Bottom, Concept, ConceptAssertion, Dis,
    Eq, Exists, Forall, GCI, Inv, Irr, Name, Neq, Nominal, Not, Ontology, Or, Ref, RIA, Role,
    RoleAssertion, RoleDisjunction, RoleExpr, Self, Sym, Top, Trans, Universal, axiom_names,
)
from .queries import (
    CQ, UCQ, Atom, FuzzyCQ, ScoringQuery, ThresholdCQ, TOP_PRED, UNIV_PRED, eval_expr, instantiate, is_var,
)

DEFAULT_BUDGET = 10**7


@dataclass
class Interpretation:
    """Degree tables over ``domain`` (element names); elements are referred to by index.

    Keys of ``concepts``/``roles`` form the signature; cells missing from a
    table have degree 0 and zero cells are dropped on construction, so two
    interpretations compare equal iff they assign the same degrees.
    """

    chain: Chain
    domain: tuple[str, ...]
    ind_map: dict[str, int] = field(default_factory=dict)
    concepts: dict[str, dict[int, int]] = field(default_factory=dict)
    roles: dict[str, dict[tuple[int, int], int]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.domain = tuple(self.domain)
        n = len(self.domain)
        for i, e in self.ind_map.items():
            if not 0 <= e < n:
                raise ValidationError(f"individual {i} mapped outside the domain")
        for tables in (self.concepts, self.roles):
            for name, t in tables.items():
                for k, d in t.items():
                    if not 0 <= d < self.chain.n:
                        raise DomainError(f"degree index {d} of {name} not on chain of {self.chain.n}")
                    if not all(0 <= e < n for e in (k if isinstance(k, tuple) else (k,))):
                        raise ValidationError(f"{name} has a cell outside the domain")
                tables[name] = {k: d for k, d in sorted(t.items()) if d}

    def concept(self, name: str, x: int) -> int:
        try:
            return self.concepts[name].get(x, 0)
        except KeyError:
            raise ValidationError(f"concept {name} is not interpreted") from None

    def role(self, name: str, x: int, y: int) -> int:
        try:
            return self.roles[name].get((x, y), 0)
        except KeyError:
            raise ValidationError(f"role {name} is not interpreted") from None


# ---------------------------------------------------------------------------
# interval evaluation

_UNSET = -1


class _Tables:
    """Dense, possibly partial tables; ``_UNSET`` cells range over the whole chain."""

    def __init__(self, chain: Chain, size: int, ind_map: dict[str, int],
                 concepts: dict[str, list[int]], roles: dict[str, list[list[int]]]):
        self.chain = chain
        self.size = size
        self.ind_map = ind_map
        self.concepts = concepts
        self.roles = roles

    @classmethod
    def of(cls, I: Interpretation) -> "_Tables":
        n = len(I.domain)
        cs = {a: [t.get(x, 0) for x in range(n)] for a, t in I.concepts.items()}
        rs = {r: [[t.get((x, y), 0) for y in range(n)] for x in range(n)] for r, t in I.roles.items()}
        return cls(I.chain, n, dict(I.ind_map), cs, rs)

    def _cell(self, v: int) -> tuple[int, int]:
        return (0, self.chain.top) if v == _UNSET else (v, v)

    def ind(self, a: str) -> int:
        try:
            return self.ind_map[a]
        except KeyError:
            raise ValidationError(f"individual {a} is not interpreted") from None

    def role(self, r: RoleExpr, x: int, y: int) -> tuple[int, int]:
        if isinstance(r, Universal):
            return (self.chain.top, self.chain.top)
        if isinstance(r, Inv):
            x, y = y, x
        try:
            row = self.roles[r.name]
        except KeyError:
            raise ValidationError(f"role {r.name} is not interpreted") from None
        return self._cell(row[x][y])

    def concept(self, c: Concept, x: int) -> tuple[int, int]:
        ch = self.chain
        if isinstance(c, Top):
            return (ch.top, ch.top)
        if isinstance(c, Bottom):
            return (0, 0)
        if isinstance(c, Name):
            try:
                return self._cell(self.concepts[c.name][x])
            except KeyError:
                raise ValidationError(f"concept {c.name} is not interpreted") from None
        if isinstance(c, Not):
            lo, hi = self.concept(c.arg, x)
            return (ch.neg(hi), ch.neg(lo))
        if isinstance(c, (And, Or)):
            op = ch.tnorm if isinstance(c, And) else ch.tconorm
            l1, h1 = self.concept(c.left, x)
            l2, h2 = self.concept(c.right, x)
            return (op(l1, l2), op(h1, h2))
        if isinstance(c, Exists):
            lo = hi = 0
            for y in range(self.size):
                rl, rh = self.role(c.role, x, y)
                cl, chh = self.concept(c.arg, y)
                lo, hi = max(lo, ch.tnorm(rl, cl)), max(hi, ch.tnorm(rh, chh))
            return (lo, hi)
        if isinstance(c, Forall):
            lo = hi = ch.top
            for y in range(self.size):
                rl, rh = self.role(c.role, x, y)
                cl, chh = self.concept(c.arg, y)
                lo, hi = min(lo, ch.residuum(rh, cl)), min(hi, ch.residuum(rl, chh))
            return (lo, hi)
        if isinstance(c, Nominal):
            d = max((di for di, o in c.items if self.ind(o) == x), default=0)
            return (d, d)
        if isinstance(c, Self):
            return self.role(c.role, x, x)
        if isinstance(c, (AtLeast, AtLeastQ, AtMost, AtMostQ)):
            arg = c.arg if isinstance(c, (AtLeastQ, AtMostQ)) else None
            los, his = [], []
            for y in range(self.size):
                rl, rh = self.role(c.role, x, y)
                cl, chh = self.concept(arg, y) if arg is not None else (ch.top, ch.top)
                los.append(ch.tnorm(rl, cl))
                his.append(ch.tnorm(rh, chh))
            if isinstance(c, (AtLeast, AtLeastQ)):
                return (_kth(los, c.m, ch.top), _kth(his, c.m, ch.top))
            # at most m: the negation of the (m+1)-th largest value; vacuous without m+1 elements
            return (ch.neg(_kth(his, c.m + 1, ch.top)), ch.neg(_kth(los, c.m + 1, ch.top)))
        raise TypeError(f"not a concept: {c!r}")

    def composition(self, chain_roles: Sequence[RoleExpr], x: int) -> list[tuple[int, int]]:
        """Sup-t-norm composition of ``chain_roles`` from ``x`` to every element."""
        ch = self.chain
        vec = [self.role(chain_roles[0], x, y) for y in range(self.size)]
        for r in chain_roles[1:]:
            nxt = []
            for z in range(self.size):
                lo = hi = 0
                for y in range(self.size):
                    rl, rh = self.role(r, y, z)
                    lo = max(lo, ch.tnorm(vec[y][0], rl))
                    hi = max(hi, ch.tnorm(vec[y][1], rh))
                nxt.append((lo, hi))
            vec = nxt
        return vec

    def violated(self, ax: Axiom) -> bool:
        """True when ``ax`` fails under every completion of the tables."""
        ch, els = self.chain, range(self.size)
        if isinstance(ax, ConceptAssertion):
            lo, hi = self.concept(ax.concept, self.ind(ax.ind))
            return hi < ax.degree if ax.op == GEQ else lo > ax.degree
        if isinstance(ax, RoleAssertion):
            lo, hi = self.role(ax.role, self.ind(ax.a), self.ind(ax.b))
            return hi < ax.degree if ax.op == GEQ else lo > ax.degree
        if isinstance(ax, Eq):
            return self.ind(ax.a) != self.ind(ax.b)
        if isinstance(ax, Neq):
            return self.ind(ax.a) == self.ind(ax.b)
        if isinstance(ax, GCI):
            for x in els:
                cl, _ = self.concept(ax.lhs, x)
                _, dh = self.concept(ax.rhs, x)
                if ch.residuum(cl, dh) < ax.degree:
                    return True
            return False
        if isinstance(ax, (RIA, Trans)):
            lhs, rhs, d = (ax.lhs, ax.rhs, ax.degree) if isinstance(ax, RIA) else ((ax.role, ax.role), ax.role, ch.top)
            for x in els:
                comp = self.composition(lhs, x)
                for y in els:
                    if ch.residuum(comp[y][0], self.role(rhs, x, y)[1]) < d:
                        return True
            return False
        if isinstance(ax, Dis):
            return any(self.role(ax.r1, x, y)[0] > 0 and self.role(ax.r2, x, y)[0] > 0 for x in els for y in els)
        if isinstance(ax, Ref):
            return any(self.role(ax.role, x, x)[1] < ch.top for x in els)
        if isinstance(ax, Irr):
            return any(self.role(ax.role, x, x)[0] > 0 for x in els)
        if isinstance(ax, Sym):
            for x in els:
                for y in els:
                    (l1, h1), (l2, h2) = self.role(ax.role, x, y), self.role(ax.role, y, x)
                    if h1 < l2 or h2 < l1:
                        return True
            return False
        if isinstance(ax, Asy):
            return any(self.role(ax.role, x, y)[0] > 0 and self.role(ax.role, y, x)[0] > 0 for x in els for y in els)
        if isinstance(ax, RoleDisjunction):
            return any(
                self.role(ax.sub, x, y)[0] > max(self.role(s, x, y)[1] for s in ax.sups)
                for x in els for y in els
            )
        raise TypeError(f"not an axiom: {ax!r}")


def _kth(values: list[int], k: int, top: int) -> int:
    """k-th largest entry (``top`` for k = 0, 0 when there are fewer than k)."""
    if k == 0:
        return top
    if k > len(values):
        return 0
    return sorted(values, reverse=True)[k - 1]


def _exact(pair: tuple[int, int]) -> int:
    lo, hi = pair
    assert lo == hi, "evaluation over a complete interpretation must be exact"
    return lo


def eval_concept(I: Interpretation, c: Concept, x: int) -> int:
    return _exact(_Tables.of(I).concept(c, x))


def eval_role(I: Interpretation, r: RoleExpr, x: int, y: int) -> int:
    return _exact(_Tables.of(I).role(r, x, y))


def satisfies_axiom(I: Interpretation, ax: Axiom) -> bool:
    return not _Tables.of(I).violated(ax)


def is_model(I: Interpretation, o: Ontology | Iterable[Axiom]) -> bool:
    t = _Tables.of(I)
    axioms = o.axioms if isinstance(o, Ontology) else o
    return not any(t.violated(ax) for ax in axioms)


def failing_axioms(I: Interpretation, o: Ontology) -> list[Axiom]:
    t = _Tables.of(I)
    return [ax for ax in o.axioms if t.violated(ax)]


# ---------------------------------------------------------------------------
# model search


@dataclass(frozen=True)
class SearchResult:
    status: str  # "found", "exhausted" or "budget_exceeded"
    model: Interpretation | None
    nodes: int
    max_domain: int

    @property
    def found(self) -> bool:
        return self.status == "found"


class BudgetExceeded(Exception):
    pass


def default_budget() -> int:
    env = os.environ.get("CRISPC_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


def placements(individuals: Sequence[str], size: int, neq: set[frozenset[str]]) -> Iterator[dict[str, int]]:
    """Canonical placements of individuals on ``size`` elements, every element named or not.

    Placements are restricted-growth strings, so symmetric relabellings of
    the anonymous elements are generated only once.
    """
    inds = list(individuals)

    def rec(i: int, used: int, acc: dict[str, int]) -> Iterator[dict[str, int]]:
        if i == len(inds):
            yield dict(acc)
            return
        for e in range(min(used + 1, size)):
            if any(acc.get(o) == e and frozenset((o, inds[i])) in neq for o in inds[:i]):
                continue
            acc[inds[i]] = e
            yield from rec(i + 1, max(used, e + 1), acc)
            del acc[inds[i]]

    yield from rec(0, 0, {})


def search_model(o: Ontology, max_domain: int, budget: int | None = None) -> SearchResult:
    """Look for a model with at most ``max_domain`` elements.

    Domain sizes are tried in ascending order; within one size the tables are
    filled cell by cell (concepts then roles, signature order, row-major),
    degrees ascending, and a branch is cut as soon as some axiom is violated
    by every completion. ``budget`` bounds the number of cells assigned.
    """
    budget = default_budget() if budget is None else budget
    if budget <= 0:
        raise ValidationError("search budget must be positive")
    if max_domain < 1:
        raise ValidationError("max domain must be at least 1")
    chain = o.chain
    axioms = list(o.axioms)
    concepts, roles = list(o.concepts), list(o.roles)
    watch: dict[tuple[str, str], list[Axiom]] = {}
    static: list[Axiom] = []
    for ax in axioms:
        cs, rs = axiom_names(ax)
        keys = {("c", c) for c in cs} | {("r", r) for r in rs}
        if not keys:
            static.append(ax)
        for k in keys:
            watch.setdefault(k, []).append(ax)
    neq = {frozenset((ax.a, ax.b)) for ax in axioms if isinstance(ax, Neq)}
    crisp_vals = (0, chain.top)
    full_vals = tuple(chain.degrees)
    nodes = 0

    for size in range(1, max_domain + 1):
        for place in placements(o.individuals, size, neq):
            t = _Tables(
                chain, size, place,
                {a: [_UNSET] * size for a in concepts},
                {r: [[_UNSET] * size for _ in range(size)] for r in roles},
            )
            if any(t.violated(ax) for ax in axioms):
                continue
            cells: list[tuple[str, str, tuple[int, ...], tuple[int, ...]]] = []
            for a in concepts:
                vals = crisp_vals if a in o.crisp_concepts else full_vals
                cells += [("c", a, (x,), vals) for x in range(size)]
            for r in roles:
                vals = crisp_vals if r in o.crisp_roles else full_vals
                cells += [("r", r, (x, y), vals) for x in range(size) for y in range(size)]

            def rec(i: int) -> bool:
                nonlocal nodes
                if i == len(cells):
                    return not any(t.violated(ax) for ax in static)
                kind, name, pos, vals = cells[i]
                row = t.concepts[name] if kind == "c" else t.roles[name][pos[0]]
                j = pos[-1]
                for v in vals:
                    nodes += 1
                    if nodes > budget:
                        raise BudgetExceeded
                    row[j] = v
                    if not any(t.violated(ax) for ax in watch.get((kind, name), ())) and rec(i + 1):
                        return True
                row[j] = _UNSET
                return False

            try:
                if rec(0):
                    return SearchResult("found", _freeze(t, o), nodes, max_domain)
            except BudgetExceeded:
                return SearchResult("budget_exceeded", None, nodes, max_domain)
    return SearchResult("exhausted", None, nodes, max_domain)


def _freeze(t: _Tables, o: Ontology) -> Interpretation:
    n = t.size
    return Interpretation(
        chain=t.chain,
        domain=tuple(_element_names(t.ind_map, n)),
        ind_map=dict(t.ind_map),
        concepts={a: {x: v for x, v in enumerate(vals)} for a, vals in t.concepts.items()},
        roles={r: {(x, y): v for x, row in enumerate(rows) for y, v in enumerate(row)} for r, rows in t.roles.items()},
    )


def _element_names(ind_map: dict[str, int], n: int) -> list[str]:
    """Name each element after its first individual, anonymous ones ``e<i>``."""
    names = [f"e{i}" for i in range(n)]
    taken = set()
    for a, e in ind_map.items():
        if e not in taken:
            taken.add(e)
            names[e] = a
    seen: set[str] = set()
    for i, nm in enumerate(names):
        while nm in seen:
            nm = nm + "_"
        names[i] = nm
        seen.add(nm)
    return names


# ---------------------------------------------------------------------------
# cuts of interpretations


def crispify_interp(I: Interpretation, cuts) -> Interpretation:
    """The classical interpretation whose cut ``A_geq_d`` holds the elements with ``A >= d``."""
    from .crispify import CLASSICAL

    concepts: dict[str, dict[int, int]] = {}
    roles: dict[str, dict[tuple[int, int], int]] = {}
    for cname, e in cuts.entries:
        src = I.concepts if e.kind == "concept" else I.roles
        if e.source not in src:
            raise ValidationError(f"{e.kind} {e.source} is not interpreted")
        bound = 1 if e.degree is None else e.degree
        table = {k: 1 for k, v in src[e.source].items() if v >= bound}
        (concepts if e.kind == "concept" else roles)[cname] = table
    return Interpretation(CLASSICAL, I.domain, dict(I.ind_map), concepts, roles)


def fuzzify_interp(J: Interpretation, cuts, chain: Chain) -> Interpretation:
    """Degree of a cell: the largest ``d`` whose cut contains it (0 if none)."""
    known = {n for n, _ in cuts.entries}
    for n in list(J.concepts) + list(J.roles):
        if n not in known:
            raise ValidationError(f"{n} is not a cut name")
    concepts: dict[str, dict[int, int]] = {a: {} for a in cuts.concepts}
    roles: dict[str, dict[tuple[int, int], int]] = {r: {} for r in cuts.roles}
    for cname, e in cuts.entries:
        src = J.concepts if e.kind == "concept" else J.roles
        dst = concepts if e.kind == "concept" else roles
        d = chain.top if e.degree is None else e.degree
        for k, v in src.get(cname, {}).items():
            if v:
                dst[e.source][k] = max(dst[e.source].get(k, 0), d)
    return Interpretation(chain, J.domain, dict(J.ind_map), concepts, roles)


def extend_normalized(I: Interpretation, namer) -> Interpretation:
    """Interpret the fresh names of a normalization run exactly as what they abbreviate."""
    concepts = {a: dict(t) for a, t in I.concepts.items()}
    roles = {r: dict(t) for r, t in I.roles.items()}
    out = Interpretation(I.chain, I.domain, dict(I.ind_map), concepts, roles)
    for kind, name in namer.order:
        t = _Tables.of(out)
        if kind == "concept":
            c = namer.concept_defs[name]
            out.concepts[name] = {x: v for x in range(len(I.domain)) if (v := _exact(t.concept(c, x)))}
        else:
            pair = namer.role_defs[name]
            out.roles[name] = {
                (x, y): v[0]
                for x in range(len(I.domain))
                for y, v in enumerate(t.composition(pair, x))
                if v[0]
            }
    return out


def with_signature(I: Interpretation, o: Ontology) -> Interpretation:
    """Add empty tables for names of ``o`` the interpretation does not list."""
    concepts = {a: dict(I.concepts.get(a, {})) for a in o.concepts}
    roles = {r: dict(I.roles.get(r, {})) for r in o.roles}
    concepts.update({a: dict(t) for a, t in I.concepts.items() if a not in concepts})
    roles.update({r: dict(t) for r, t in I.roles.items() if r not in roles})
    return Interpretation(I.chain, I.domain, dict(I.ind_map), concepts, roles)


def restrict(I: Interpretation, concepts: Iterable[str], roles: Iterable[str]) -> Interpretation:
    cs, rs = set(concepts), set(roles)
    return Interpretation(
        I.chain, I.domain, dict(I.ind_map),
        {a: dict(t) for a, t in I.concepts.items() if a in cs},
        {r: dict(t) for r, t in I.roles.items() if r in rs},
    )


def gen_random_interp(
    concepts: Sequence[str],
    roles: Sequence[str],
    individuals: Sequence[str],
    domain_size: int,
    chain: Chain,
    seed: int,
    crisp_concepts: Iterable[str] = (),
    crisp_roles: Iterable[str] = (),
) -> Interpretation:
    """Independent uniform degrees per cell; crisp names draw from {0, 1}."""
    rng = random.Random(seed)
    cc, cr = set(crisp_concepts), set(crisp_roles)
    els = range(domain_size)

    def draw(crisp: bool) -> int:
        return rng.choice((0, chain.top)) if crisp else rng.randrange(chain.n)

    cs = {a: {x: draw(a in cc) for x in els} for a in concepts}
    rs = {r: {(x, y): draw(r in cr) for x in els for y in els} for r in roles}
    ind_map = {a: rng.randrange(domain_size) for a in individuals}
    return Interpretation(chain, tuple(f"e{i}" for i in els), ind_map, cs, rs)


def random_interp_for(o: Ontology, domain_size: int, seed: int, chain: Chain | None = None) -> Interpretation:
    return gen_random_interp(
        o.concepts, o.roles, o.individuals, domain_size, chain or o.chain, seed, o.crisp_concepts, o.crisp_roles
    )


# ---------------------------------------------------------------------------
# queries


def _atom_degree(t: _Tables, a: Atom, env: dict[str, int]) -> int:
    args = [env[x] if is_var(x) else t.ind(x) for x in a.args]
    top = t.chain.top
    if a.is_eq:
        return top if args[0] == args[1] else 0
    if a.pred == TOP_PRED and a.pred not in t.concepts:
        return top
    if a.pred == UNIV_PRED and a.pred not in t.roles:
        return top
    if len(args) == 1:
        return _exact(t.concept(Name(a.pred), args[0]))
    return _exact(t.role(Role(a.pred), args[0], args[1]))


def _query_vars(atoms: Sequence[Atom]) -> list[str]:
    out: list[str] = []
    for a in atoms:
        for x in a.args:
            if is_var(x) and x not in out:
                out.append(x)
    return out


def _matches(t: _Tables, atoms: Sequence[Atom], ok) -> Iterator[dict[str, int]]:
    """Assignments under which every atom's degree passes ``ok(index, degree)``.

    Atoms are checked as soon as their variables are bound.
    """
    vs = _query_vars(atoms)
    ready: dict[int, list[int]] = {}
    for i, a in enumerate(atoms):
        pos = max((vs.index(x) for x in a.args if is_var(x)), default=-1)
        ready.setdefault(pos, []).append(i)
    env: dict[str, int] = {}

    def check(level: int) -> bool:
        return all(ok(i, _atom_degree(t, atoms[i], env)) for i in ready.get(level, ()))

    def rec(k: int) -> Iterator[dict[str, int]]:
        if k == len(vs):
            yield dict(env)
            return
        for e in range(t.size):
            env[vs[k]] = e
            if check(k):
                yield from rec(k + 1)
        env.pop(vs[k], None)

    if check(-1):
        yield from rec(0)


def _boolean(q, answer):
    if answer is not None:
        q = instantiate(q, answer)
    if q.head:
        raise ValidationError("query has free distinguished variables; instantiate it first")
    return q


def query_sat(I: Interpretation, q: ThresholdCQ | CQ | UCQ, answer: Sequence[str] | None = None) -> bool:
    """Whether some assignment meets every degree atom (classical CQs: every atom at degree 1)."""
    q = _boolean(q, answer)
    t = _Tables.of(I)
    if isinstance(q, UCQ):
        return any(query_sat(I, m) for m in q.members)
    if isinstance(q, CQ):
        degrees = [None if a.is_eq else t.chain.top for a in q.atoms]
    else:
        degrees = list(q.degrees)
    top = t.chain.top

    def ok(i: int, v: int) -> bool:
        return v >= (top if degrees[i] is None else degrees[i])

    return next(_matches(t, q.atoms, ok), None) is not None


def fuzzy_degree(I: Interpretation, q: FuzzyCQ, answer: Sequence[str] | None = None) -> int:
    """Best t-norm combination of atom degrees over all assignments."""
    q = _boolean(q, answer)
    t = _Tables.of(I)
    best = 0
    for env in _matches(t, q.atoms, lambda i, v: v > 0):
        best = max(best, t.chain.tnorm_all(_atom_degree(t, a, env) for a in q.atoms))
    return best if q.atoms else t.chain.top


def scoring_best(I: Interpretation, q: ScoringQuery, answer: Sequence[str] | None = None) -> Fraction:
    q = _boolean(q, answer)
    t = _Tables.of(I)
    best = None
    for env in _matches(t, q.atoms, lambda i, v: True):
        s = eval_expr(q.score, [t.chain.value(_atom_degree(t, a, env)) for a in q.atoms])
        best = s if best is None or s > best else best
    return best if best is not None else Fraction(0)


def fuzzy_query_sat(I: Interpretation, q: FuzzyCQ, d: int, answer: Sequence[str] | None = None) -> bool:
    return fuzzy_degree(I, q, answer) >= d
