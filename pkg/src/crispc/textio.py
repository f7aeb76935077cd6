"""Line-oriented text format for ontologies, queries, UCQs and interpretations.

Every parser reports errors as :class:`~crispc.errors.ParseError` with a line
and column. Printers are deterministic and round-trip with their parsers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .chain import FAMILIES, Chain, format_fraction
from .errors import CrispcError, ParseError, ValidationError
from .model import (
    BOT, GEQ, GT, LEQ, LT, TOP, UNIV, And, Asy, AtLeast, AtLeastQ, AtMost, AtMostQ, Axiom, Bottom,
    ClassicalOntology, Concept, ConceptAssertion, CutEntry, Dis, Eq, Exists, Forall, GCI, Inv, Irr,
    Name, Neq, Nominal, Not, Ontology, Or, Ref, RIA, Role, RoleAssertion, RoleDisjunction, RoleExpr,
    Self, Sym, Top, Trans, rewrite_strict, validate,
)
from .queries import CQ, EQ, UCQ, Atom, Const, Expr, FuzzyCQ, Op, Placeholder, ScoringQuery, ThresholdCQ

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d+)?(?:/\d+)?)"
    r"|(?P<var>\?[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<name>#?[A-Za-z_][A-Za-z0-9_]*(?:-[A-Za-z0-9_]+)*)"
    r"|(?P<op>->|>=|<=|==|[()<>,/@+*:=]))"
)

CONCEPT_KEYWORDS = frozenset(
    "top bot not and or some all nominal atleast atmost atleastq atmostq self inv U".split()
)


@dataclass
class Tok:
    kind: str
    text: str
    col: int


class _Line:
    """Token cursor over a single source line."""

    def __init__(self, text: str, lineno: int, path: str | None):
        self.lineno = lineno
        self.path = path
        self.toks: list[Tok] = []
        pos = 0
        stripped = text.rstrip()
        while pos < len(stripped):
            m = _TOKEN.match(stripped, pos)
            if not m or m.end() == pos:
                col = pos + len(stripped[pos:]) - len(stripped[pos:].lstrip()) + 1
                raise ParseError(f"unexpected character {stripped[col - 1]!r}", lineno, col, path)
            kind = m.lastgroup
            self.toks.append(Tok(kind, m.group(kind), m.start(kind) + 1))
            pos = m.end()
        self.i = 0
        self.end_col = len(stripped) + 1

    def error(self, msg: str, tok: Tok | None = None) -> ParseError:
        col = tok.col if tok else (self.peek().col if self.peek() else self.end_col)
        return ParseError(msg, self.lineno, col, self.path)

    def peek(self, k: int = 0) -> Tok | None:
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else None

    def at_end(self) -> bool:
        return self.i >= len(self.toks)

    def next(self, what: str = "token") -> Tok:
        t = self.peek()
        if t is None:
            raise self.error(f"expected {what}, found end of line")
        self.i += 1
        return t

    def expect(self, text: str) -> Tok:
        t = self.next(repr(text))
        if t.text != text:
            raise self.error(f"expected {text!r}, found {t.text!r}", t)
        return t

    def accept(self, text: str) -> bool:
        t = self.peek()
        if t is not None and t.text == text:
            self.i += 1
            return True
        return False

    def name(self, what: str = "name") -> Tok:
        t = self.next(what)
        if t.kind != "name":
            raise self.error(f"expected {what}, found {t.text!r}", t)
        return t

    def integer(self) -> int:
        t = self.next("integer")
        if t.kind != "num" or not t.text.isdigit():
            raise self.error(f"expected a non-negative integer, found {t.text!r}", t)
        return int(t.text)

    def number(self) -> tuple[Fraction, Tok]:
        t = self.next("degree")
        if t.kind != "num":
            raise self.error(f"expected a number, found {t.text!r}", t)
        return Fraction(t.text), t

    def done(self) -> None:
        if not self.at_end():
            t = self.peek()
            raise self.error(f"unexpected {t.text!r}", t)


def _lines(text: str, path: str | None):
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("%", 1)[0]
        if body.strip():
            yield lineno, body


def _degree(chain: Chain | int, line: _Line, tok: Tok, v: Fraction) -> int:
    n = chain if isinstance(chain, int) else chain.n
    k = v * (n - 1)
    if k.denominator != 1 or not 0 <= k <= n - 1:
        raise line.error(f"degree {format_fraction(v)} not on chain of {n}", tok)
    return int(k)


# ---------------------------------------------------------------------------
# ontologies


class _OntologyReader:
    def __init__(self, text: str, path: str | None):
        self.text = text
        self.path = path
        self.chain: Chain | None = None
        self.generated = False
        self.concepts: list[str] = []
        self.roles: list[str] = []
        self.inds: list[str] = []
        self.kinds: dict[str, str] = {}
        self.crisp_c: set[str] = set()
        self.crisp_r: set[str] = set()
        self.axioms: list[Axiom] = []
        self.cuts: list[tuple[str, CutEntry]] = []
        self.source_chain: Chain | None = None

    # -- terms
    def check_name(self, line: _Line, tok: Tok, kind: str) -> str:
        name = tok.text
        if name.startswith("#") and not self.generated:
            raise line.error(f"name {name} uses the reserved '#' namespace", tok)
        declared = self.kinds.get(name)
        if declared is None:
            raise line.error(f"unknown {kind} {name} (missing declaration)", tok)
        if declared != kind:
            raise line.error(f"{name} is declared as {declared}, used as {kind}", tok)
        return name

    def role(self, line: _Line) -> RoleExpr:
        t = line.name("role")
        if t.text == "U":
            return UNIV
        if t.text == "inv":
            line.expect("(")
            r = self.check_name(line, line.name("role"), "role")
            line.expect(")")
            return Inv(r)
        return Role(self.check_name(line, t, "role"))

    def concept(self, line: _Line) -> Concept:
        t = line.name("concept")
        head = t.text
        if head == "top":
            return TOP
        if head == "bot":
            return BOT
        if head not in CONCEPT_KEYWORDS:
            return Name(self.check_name(line, t, "concept"))
        line.expect("(")
        if head == "not":
            c: Concept = Not(self.concept(line))
        elif head in ("and", "or"):
            parts = [self.concept(line)]
            while line.accept(","):
                parts.append(self.concept(line))
            if len(parts) < 2:
                raise line.error(f"{head} needs at least two arguments", t)
            c = parts[0]
            for p in parts[1:]:
                c = And(c, p) if head == "and" else Or(c, p)
        elif head in ("some", "all"):
            r = self.role(line)
            line.expect(",")
            arg = self.concept(line)
            c = Exists(r, arg) if head == "some" else Forall(r, arg)
        elif head == "nominal":
            items = [self.nominal_item(line)]
            while line.accept(","):
                items.append(self.nominal_item(line))
            c = Nominal(tuple(items))
        elif head in ("atleast", "atmost"):
            m = line.integer()
            line.expect(",")
            r = self.role(line)
            c = AtLeast(m, r) if head == "atleast" else AtMost(m, r)
        elif head in ("atleastq", "atmostq"):
            m = line.integer()
            line.expect(",")
            r = self.role(line)
            line.expect(",")
            arg = self.concept(line)
            c = AtLeastQ(m, r, arg) if head == "atleastq" else AtMostQ(m, r, arg)
        elif head == "self":
            c = Self(self.role(line))
        else:
            raise line.error(f"{head} is not a concept constructor", t)
        line.expect(")")
        return c

    def nominal_item(self, line: _Line) -> tuple[int, str]:
        v, tok = line.number()
        line.expect("/")
        ind = self.check_name(line, line.name("individual"), "individual")
        return _degree(self.chain, line, tok, v), ind

    def bound(self, line: _Line, allowed=(GEQ, LEQ, GT, LT)) -> tuple[str, int]:
        if line.at_end():
            return GEQ, self.chain.top
        t = line.next("bound")
        if t.text not in allowed:
            raise line.error(f"expected one of {' '.join(allowed)}, found {t.text!r}", t)
        v, tok = line.number()
        return t.text, _degree(self.chain, line, tok, v)

    # -- statements
    def declare(self, line: _Line, kind: str, t: Tok) -> None:
        name = t.text
        if name in CONCEPT_KEYWORDS:
            raise line.error(f"{name} is a reserved word", t)
        if name.startswith("#") and not self.generated:
            raise line.error(f"name {name} uses the reserved '#' namespace", t)
        if name in self.kinds:
            raise line.error(f"{name} declared twice", t)
        self.kinds[name] = kind
        {"concept": self.concepts, "role": self.roles, "individual": self.inds}[kind].append(name)

    def run(self) -> Ontology:
        lines = list(_lines(self.text, self.path))
        it = iter(lines)
        table_rows: list[list[int]] = []
        table_n = pending_table = 0
        for lineno, body in it:
            line = _Line(body, lineno, self.path)
            if pending_table:
                row = []
                while not line.at_end():
                    v, tok = line.number()
                    row.append(_degree(table_n, line, tok, v))
                if len(row) != table_n:
                    raise line.error(f"table row needs {table_n} entries")
                table_rows.append(row)
                pending_table -= 1
                if not pending_table:
                    self.chain = _mk_chain(table_n, "custom", table_rows, line)
                continue
            kw = line.next()
            loc = f"{self.path or '<input>'}:{lineno}"
            if self.chain is None and kw.text not in ("chain",):
                raise line.error("the first statement must be a chain header", kw)
            k = kw.text
            if k == "chain":
                if self.chain is not None:
                    raise line.error("duplicate chain header", kw)
                n = line.integer()
                fam = line.name("family")
                if fam.text not in FAMILIES:
                    raise line.error(f"unknown family {fam.text!r}", fam)
                line.done()
                if fam.text == "custom":
                    if n < 2:
                        raise line.error("a chain needs at least 2 degrees")
                    nxt = next(it, None)
                    if nxt is None or nxt[1].strip() != "table:":
                        raise ParseError("custom chain requires a 'table:' block", lineno + 1, 1, self.path)
                    table_n = pending_table = n
                else:
                    self.chain = _mk_chain(n, fam.text, None, line)
            elif k == "pragma":
                p = line.name("pragma")
                if p.text != "generated":
                    raise line.error(f"unknown pragma {p.text!r}", p)
                line.done()
                self.generated = True
            elif k == "crispified-from":
                n = line.integer()
                fam = line.name("family")
                line.done()
                if fam.text == "custom":
                    raise line.error("custom source chains are not recorded in text", fam)
                self.source_chain = _mk_chain(n, fam.text, None, line)
            elif k == "cut":
                cname = line.name("name").text
                src = line.name("name").text
                kind = line.name("kind")
                if kind.text not in ("concept", "role"):
                    raise line.error("cut kind must be concept or role", kind)
                t = line.next("degree index or 'crisp'")
                if t.text == "crisp":
                    deg = None
                elif t.kind == "num" and t.text.isdigit():
                    deg = int(t.text)
                else:
                    raise line.error("expected a degree index or 'crisp'", t)
                line.done()
                self.cuts.append((cname, CutEntry(src, kind.text, deg)))
            elif k in ("concept", "role", "individual"):
                t = line.name(k)
                self.declare(line, k, t)
                if line.accept("crisp"):
                    if k == "individual":
                        raise line.error("individuals cannot be crisp")
                    (self.crisp_c if k == "concept" else self.crisp_r).add(t.text)
                line.done()
            elif k == "assert":
                self.axioms.append(self.assertion(line, loc))
            elif k in ("eq", "neq"):
                a = self.check_name(line, line.name("individual"), "individual")
                b = self.check_name(line, line.name("individual"), "individual")
                line.done()
                self.axioms.append((Eq if k == "eq" else Neq)(a, b, loc=loc))
            elif k == "gci":
                lhs = self.concept(line)
                rhs = self.concept(line)
                op, d = self.bound(line, (GEQ, GT))
                line.done()
                self.axioms.append(GCI(lhs, rhs, d, op, loc=loc))
            elif k == "ria":
                chain_roles = [self.role(line)]
                while not line.accept("->"):
                    chain_roles.append(self.role(line))
                sup = self.role(line)
                op, d = self.bound(line, (GEQ, GT))
                line.done()
                self.axioms.append(RIA(tuple(chain_roles), sup, d, op, loc=loc))
            elif k in ("trans", "ref", "irr", "sym", "asy"):
                r = self.role(line)
                line.done()
                cls = {"trans": Trans, "ref": Ref, "irr": Irr, "sym": Sym, "asy": Asy}[k]
                self.axioms.append(cls(r, loc=loc))
            elif k == "dis":
                r1 = self.role(line)
                r2 = self.role(line)
                line.done()
                self.axioms.append(Dis(r1, r2, loc=loc))
            elif k == "rdisj":
                sub = self.role(line)
                line.expect("->")
                sups = [self.role(line)]
                while not line.at_end():
                    sups.append(self.role(line))
                self.axioms.append(RoleDisjunction(sub, tuple(sups), loc=loc))
            else:
                raise line.error(f"unknown statement {k!r}", kw)
        if pending_table:
            raise ParseError("custom t-norm table is incomplete", None, None, self.path)
        if self.chain is None:
            raise ParseError("missing chain header", 1, 1, self.path)
        base = dict(
            chain=self.chain,
            concepts=tuple(self.concepts),
            roles=tuple(self.roles),
            individuals=tuple(self.inds),
            crisp_concepts=frozenset(self.crisp_c),
            crisp_roles=frozenset(self.crisp_r),
            generated=self.generated,
        )
        if self.cuts or self.source_chain is not None:
            o: Ontology = ClassicalOntology(**base, source_chain=self.source_chain, cuts=tuple(self.cuts))
        else:
            o = Ontology(**base)
        return o.with_axioms(self.axioms)

    def assertion(self, line: _Line, loc: str) -> Axiom:
        # "not r(a, b)" negates a role assertion; "not(C)(a)" is a concept
        nxt = line.peek(1)
        negated = not (nxt is not None and nxt.text == "(") and line.accept("not")
        t = line.peek()
        if t is None:
            raise line.error("expected an assertion")
        # role assertion when the head is a role name or inv(...)
        is_role = self.kinds.get(t.text) == "role" or t.text == "inv"
        if negated and not is_role:
            raise line.error("only role assertions can be negated", t)
        if is_role:
            r = self.role(line)
            line.expect("(")
            a = self.check_name(line, line.name("individual"), "individual")
            line.expect(",")
            b = self.check_name(line, line.name("individual"), "individual")
            line.expect(")")
            op, d = self.bound(line)
            line.done()
            return RoleAssertion(r, a, b, op, d, negated, loc=loc)
        c = self.concept(line)
        line.expect("(")
        a = self.check_name(line, line.name("individual"), "individual")
        line.expect(")")
        op, d = self.bound(line)
        line.done()
        return ConceptAssertion(c, a, op, d, loc=loc)


def _mk_chain(n, fam, table, line: _Line) -> Chain:
    try:
        return Chain(n, fam, table)
    except CrispcError as e:
        raise line.error(str(e)) from None


def parse_ontology(text: str, path: str | None = None, strict: bool = True) -> Ontology:
    """Parse an ontology document.

    Strict annotations are rewritten and the result validated unless
    ``strict`` is false, in which case the raw AST is returned.
    """
    o = _OntologyReader(text, path).run()
    if not strict:
        return o
    o = rewrite_strict(o)
    report = validate(o)
    if report:
        raise ValidationError("; ".join(report))
    return o


# -- printing -----------------------------------------------------------------


def fmt_degree(chain: Chain, d: int) -> str:
    return format_fraction(chain.value(d))


def fmt_role(r: RoleExpr) -> str:
    return str(r)


def fmt_concept(c: Concept, chain: Chain) -> str:
    if isinstance(c, Top):
        return "top"
    if isinstance(c, Bottom):
        return "bot"
    if isinstance(c, Name):
        return c.name
    if isinstance(c, Not):
        return f"not({fmt_concept(c.arg, chain)})"
    if isinstance(c, And):
        return f"and({fmt_concept(c.left, chain)}, {fmt_concept(c.right, chain)})"
    if isinstance(c, Or):
        return f"or({fmt_concept(c.left, chain)}, {fmt_concept(c.right, chain)})"
    if isinstance(c, Exists):
        return f"some({c.role}, {fmt_concept(c.arg, chain)})"
    if isinstance(c, Forall):
        return f"all({c.role}, {fmt_concept(c.arg, chain)})"
    if isinstance(c, Nominal):
        return "nominal(" + ", ".join(f"{fmt_degree(chain, d)}/{o}" for d, o in c.items) + ")"
    if isinstance(c, AtLeast):
        return f"atleast({c.m}, {c.role})"
    if isinstance(c, AtMost):
        return f"atmost({c.m}, {c.role})"
    if isinstance(c, AtLeastQ):
        return f"atleastq({c.m}, {c.role}, {fmt_concept(c.arg, chain)})"
    if isinstance(c, AtMostQ):
        return f"atmostq({c.m}, {c.role}, {fmt_concept(c.arg, chain)})"
    if isinstance(c, Self):
        return f"self({c.role})"
    raise TypeError(f"not a concept: {c!r}")


def _fmt_bound(chain: Chain, op: str, d: int) -> str:
    if op == GEQ and d == chain.top:
        return ""
    return f" {op} {fmt_degree(chain, d)}"


def fmt_axiom(ax: Axiom, chain: Chain) -> str:
    if isinstance(ax, ConceptAssertion):
        return f"assert {fmt_concept(ax.concept, chain)}({ax.ind}){_fmt_bound(chain, ax.op, ax.degree)}"
    if isinstance(ax, RoleAssertion):
        neg = "not " if ax.negated else ""
        return f"assert {neg}{ax.role}({ax.a},{ax.b}){_fmt_bound(chain, ax.op, ax.degree)}"
    if isinstance(ax, Eq):
        return f"eq {ax.a} {ax.b}"
    if isinstance(ax, Neq):
        return f"neq {ax.a} {ax.b}"
    if isinstance(ax, GCI):
        return f"gci {fmt_concept(ax.lhs, chain)} {fmt_concept(ax.rhs, chain)}{_fmt_bound(chain, ax.op, ax.degree)}"
    if isinstance(ax, RIA):
        lhs = " ".join(map(str, ax.lhs))
        return f"ria {lhs} -> {ax.rhs}{_fmt_bound(chain, ax.op, ax.degree)}"
    if isinstance(ax, Dis):
        return f"dis {ax.r1} {ax.r2}"
    if isinstance(ax, RoleDisjunction):
        return f"rdisj {ax.sub} -> " + " ".join(map(str, ax.sups))
    kw = {Trans: "trans", Ref: "ref", Irr: "irr", Sym: "sym", Asy: "asy"}[type(ax)]
    return f"{kw} {ax.role}"


def print_ontology(o: Ontology) -> str:
    chain = o.chain
    out = [f"chain {chain.n} {chain.family}"]
    if chain.family == "custom":
        out.append("table:")
        for row in chain.table:
            out.append(" ".join(fmt_degree(chain, d) for d in row))
    if o.generated:
        out.append("pragma generated")
    if isinstance(o, ClassicalOntology):
        if o.source_chain is not None:
            out.append(f"crispified-from {o.source_chain.n} {o.source_chain.family}")
        for cname, e in o.cuts:
            out.append(f"cut {cname} {e.source} {e.kind} {'crisp' if e.degree is None else e.degree}")
    for c in o.concepts:
        out.append(f"concept {c}" + (" crisp" if c in o.crisp_concepts else ""))
    for r in o.roles:
        out.append(f"role {r}" + (" crisp" if r in o.crisp_roles else ""))
    for i in o.individuals:
        out.append(f"individual {i}")
    for ax in o.axioms:
        out.append(fmt_axiom(ax, chain))
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# queries

QUERY_KINDS = ("threshold", "fuzzy", "scoring")


def _term(line: _Line) -> str:
    t = line.next("term")
    if t.kind not in ("var", "name"):
        raise line.error(f"expected a variable or individual, found {t.text!r}", t)
    return t.text


def _atom(line: _Line) -> Atom:
    if line.peek(1) is not None and line.peek(1).text == "==":
        a = _term(line)
        line.expect("==")
        return Atom(EQ, (a, _term(line)))
    p = line.name("predicate")
    line.expect("(")
    args = [_term(line)]
    while line.accept(","):
        args.append(_term(line))
    line.expect(")")
    if len(args) > 2:
        raise line.error("atoms take one or two arguments", p)
    if p.text == EQ:
        raise line.error("bad predicate", p)
    return Atom(p.text, tuple(args))


def _header(line: _Line, keyword_set) -> tuple[str, tuple[str, ...]]:
    kw = line.next("query header")
    if kw.text not in keyword_set:
        raise line.error(f"expected one of {', '.join(keyword_set)}", kw)
    k = line.integer()
    head = []
    while not line.at_end():
        t = line.next()
        if t.kind != "var":
            raise line.error("distinguished positions must be variables", t)
        head.append(t.text)
    if head and len(head) != k:
        raise line.error(f"header declares {k} variables but lists {len(head)}", kw)
    if not head:
        head = [f"?x{i}" for i in range(1, k + 1)]
    return kw.text, tuple(head)


def parse_query(text: str, chain: Chain, path: str | None = None):
    """Parse a threshold, fuzzy or scoring query; degrees are resolved on ``chain``."""
    lines = list(_lines(text, path))
    if not lines:
        raise ParseError("empty query document", 1, 1, path)
    lineno, body = lines[0]
    hl = _Line(body, lineno, path)
    kind, head = _header(hl, QUERY_KINDS)
    atoms: list[Atom] = []
    degrees: list[int] = []
    score: Expr | None = None
    score_line: _Line | None = None
    for lineno, body in lines[1:]:
        line = _Line(body, lineno, path)
        t = line.peek()
        if t.text == "score":
            if kind != "scoring":
                raise line.error("score lines are only allowed in scoring queries", t)
            if score is not None:
                raise line.error("duplicate score line", t)
            line.next()
            line.expect(":")
            score = _parse_expr(line)
            line.done()
            score_line = line
            continue
        a = _atom(line)
        if kind == "threshold":
            if a.pred == EQ:
                d = None
                if not line.at_end():
                    raise line.error("equality atoms carry no degree")
            else:
                op = line.next(">=")
                if op.text != GEQ:
                    raise line.error("threshold atoms need '>= d'", op)
                v, tok = line.number()
                d = _degree(chain, line, tok, v)
                if d == 0:
                    raise line.error("threshold degrees must be positive", tok)
            degrees.append(d)
        elif not line.at_end():
            raise line.error(f"{kind} query atoms carry no degree", line.peek())
        line.done()
        atoms.append(a)
    used = {x for a in atoms for x in a.args}
    for v in head:
        if v not in used:
            raise ParseError(f"distinguished variable {v} does not occur in any atom", lines[0][0], 1, path)
    if kind == "threshold":
        return ThresholdCQ(head, tuple(atoms), tuple(degrees))
    if kind == "fuzzy":
        return FuzzyCQ(head, tuple(atoms))
    if score is None:
        raise ParseError("scoring query without a score line", lines[-1][0], 1, path)
    for ref in _placeholders(score):
        if not 1 <= ref <= len(atoms):
            raise score_line.error(f"@{ref} does not name an atom")
    return ScoringQuery(head, tuple(atoms), score)


def _placeholders(e: Expr):
    if isinstance(e, Placeholder):
        yield e.index
    elif isinstance(e, Op):
        for a in e.args:
            yield from _placeholders(a)


def _parse_expr(line: _Line) -> Expr:
    def expr() -> Expr:
        parts = [term()]
        while line.accept("+"):
            parts.append(term())
        return parts[0] if len(parts) == 1 else Op("+", tuple(parts))

    def term() -> Expr:
        parts = [factor()]
        while line.accept("*"):
            parts.append(factor())
        return parts[0] if len(parts) == 1 else Op("*", tuple(parts))

    def factor() -> Expr:
        t = line.next("expression")
        if t.text == "@":
            return Placeholder(line.integer())
        if t.kind == "num":
            return Const(Fraction(t.text))
        if t.text in ("min", "max"):
            line.expect("(")
            args = [expr()]
            while line.accept(","):
                args.append(expr())
            line.expect(")")
            return Op(t.text, tuple(args))
        if t.text == "(":
            e = expr()
            line.expect(")")
            return e
        raise line.error(f"unexpected {t.text!r} in score (allowed: @i, constants, +, *, min, max)", t)

    return expr()


def fmt_expr(e: Expr) -> str:
    if isinstance(e, Placeholder):
        return f"@{e.index}"
    if isinstance(e, Const):
        return format_fraction(e.value)
    if e.op in ("min", "max"):
        return f"{e.op}(" + ", ".join(fmt_expr(a) for a in e.args) + ")"
    inner = [fmt_expr(a) for a in e.args]
    if e.op == "*":
        inner = [f"({s})" if isinstance(a, Op) and a.op == "+" else s for a, s in zip(e.args, inner)]
    return f" {e.op} ".join(inner)


def fmt_atom(a: Atom) -> str:
    if a.pred == EQ:
        return f"{a.args[0]} == {a.args[1]}"
    return f"{a.pred}({','.join(a.args)})"


def print_query(q, chain: Chain) -> str:
    kind = {ThresholdCQ: "threshold", FuzzyCQ: "fuzzy", ScoringQuery: "scoring"}[type(q)]
    out = [" ".join([kind, str(len(q.head)), *q.head])]
    for i, a in enumerate(q.atoms):
        if isinstance(q, ThresholdCQ) and a.pred != EQ:
            out.append(f"{fmt_atom(a)} >= {fmt_degree(chain, q.degrees[i])}")
        else:
            out.append(fmt_atom(a))
    if isinstance(q, ScoringQuery):
        out.append(f"score: {fmt_expr(q.score)}")
    return "\n".join(out) + "\n"


def _cq_lines(cq: CQ) -> list[str]:
    return [fmt_atom(a) for a in cq.atoms] or ["true"]


def print_cq(cq: CQ) -> str:
    return "\n".join([" ".join(["cq", str(len(cq.head)), *cq.head]), *_cq_lines(cq)]) + "\n"


def print_ucq(u: UCQ) -> str:
    out = [" ".join(["ucq", str(len(u.head)), *u.head])]
    if not u.members:
        out.append("empty")
    for i, m in enumerate(u.members):
        if i:
            out.append("union")
        out += _cq_lines(m)
    return "\n".join(out) + "\n"


def parse_ucq(text: str, path: str | None = None) -> UCQ | CQ:
    lines = list(_lines(text, path))
    if not lines:
        raise ParseError("empty document", 1, 1, path)
    kind, head = _header(_Line(lines[0][1], lines[0][0], path), ("ucq", "cq"))
    members: list[list[Atom]] = [[]]
    empty = False
    for lineno, body in lines[1:]:
        line = _Line(body, lineno, path)
        t = line.peek()
        if t.text == "union":
            members.append([])
        elif t.text == "empty":
            empty = True
        elif t.text == "true":
            pass
        else:
            members[-1].append(_atom(line))
            continue
        line.next()
        line.done()
    cqs = tuple(CQ(head, tuple(m)) for m in members)
    if kind == "cq":
        if len(cqs) != 1:
            raise ParseError("a cq document has exactly one member", lines[0][0], 1, path)
        return cqs[0]
    return UCQ(head, () if empty else cqs)


# ---------------------------------------------------------------------------
# interpretation fixtures


def parse_interp(text: str, chain: Chain, path: str | None = None):
    """Parse a fixture (``elem``/``ind``/``concept``/``role`` lines); unlisted cells are 0."""
    from .oracle import Interpretation

    domain: list[str] = []
    ind_map: dict[str, str] = {}
    concepts: dict[str, dict[str, int]] = {}
    roles: dict[str, dict[tuple[str, str], int]] = {}

    def elem(line: _Line) -> str:
        t = line.name("element")
        if t.text not in domain:
            raise line.error(f"unknown element {t.text}", t)
        return t.text

    def value(line: _Line) -> int:
        line.expect("=")
        v, tok = line.number()
        return _degree(chain, line, tok, v)

    for lineno, body in _lines(text, path):
        line = _Line(body, lineno, path)
        kw = line.next()
        if kw.text == "elem":
            while not line.at_end():
                t = line.name("element")
                if t.text in domain:
                    raise line.error(f"duplicate element {t.text}", t)
                domain.append(t.text)
        elif kw.text == "ind":
            a = line.name("individual").text
            line.expect("=")
            ind_map[a] = elem(line)
        elif kw.text == "concept":
            name = line.name("concept").text
            line.expect(":")
            tab = concepts.setdefault(name, {})
            while not line.at_end():
                e = elem(line)
                tab[e] = value(line)
        elif kw.text == "role":
            name = line.name("role").text
            line.expect(":")
            tab2 = roles.setdefault(name, {})
            while not line.at_end():
                line.expect("(")
                x = elem(line)
                line.expect(",")
                y = elem(line)
                line.expect(")")
                tab2[(x, y)] = value(line)
        else:
            raise line.error(f"unknown fixture statement {kw.text!r}", kw)
        line.done()
    if not domain:
        raise ParseError("fixture declares no elements", 1, 1, path)
    idx = {e: i for i, e in enumerate(domain)}
    return Interpretation(
        chain=chain,
        domain=tuple(domain),
        ind_map={a: idx[e] for a, e in ind_map.items()},
        concepts={n: {idx[e]: d for e, d in t.items()} for n, t in concepts.items()},
        roles={n: {(idx[x], idx[y]): d for (x, y), d in t.items()} for n, t in roles.items()},
    )


def print_interp(I) -> str:
    chain = I.chain
    names = I.domain
    out = ["elem " + " ".join(names)]
    for a in sorted(I.ind_map):
        out.append(f"ind {a} = {names[I.ind_map[a]]}")
    for c in sorted(I.concepts):
        cells = [f"{names[e]}={fmt_degree(chain, d)}" for e, d in sorted(I.concepts[c].items()) if d]
        out.append(f"concept {c}:" + ("" if not cells else " " + " ".join(cells)))
    for r in sorted(I.roles):
        cells = [f"({names[x]},{names[y]})={fmt_degree(chain, d)}" for (x, y), d in sorted(I.roles[r].items()) if d]
        out.append(f"role {r}:" + ("" if not cells else " " + " ".join(cells)))
    return "\n".join(out) + "\n"
