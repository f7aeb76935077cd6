"""Tiny hand-picked ontologies for the bounded model-existence comparison.

Each template uses at most two concept names, two role names and two
individuals, and only the names a template mentions are declared. ``{h}`` is
the least positive degree of the chain, ``{m}`` the greatest degree below 1
(0 on the two-valued chain) and ``{p}`` is ``{m}`` raised to at least ``{h}``.
"""

import re

from crispc.chain import Chain, format_fraction
from crispc.textio import parse_ontology

DECLS = (("concept", "A"), ("concept", "B"), ("role", "r"), ("role", "s"), ("individual", "a"), ("individual", "b"))

TEMPLATES = {
    "gci-to-bot": "assert A(a) >= {h}\ngci A bot",
    "clash-bounds": "assert A(a)\nassert A(a) <= 0",
    "subsumption-clash": "assert A(a) >= {h}\ngci A B\nassert B(a) <= 0",
    "exists-fresh-witness": "gci top some(r, A)\nassert A(a) <= 0",
    "exists-into-bot": "gci top some(r, A)\ngci A bot",
    "domain-clash": "assert r(a, b)\ngci some(r, top) A\nassert A(a) <= 0",
    "nominal-singleton": "gci top nominal(1/a)\nneq a b",
    "nominal-partial": "gci top nominal({h}/a, 1/b)\nassert A(a) >= {h}",
    "self-irreflexive": "gci top self(r)\nirr r",
    "self-partial": "gci top self(r) >= {h}\nassert r(a, a) <= 0",
    "trans-loop": "trans r\nassert r(a, b)\nassert r(b, a)\nassert r(a, a) <= 0",
    "sym-clash": "sym r\nassert r(a, b)\nassert r(b, a) <= 0",
    "asy-clash": "asy r\nassert r(a, b) >= {h}\nassert r(b, a) >= {h}",
    "dis-clash": "dis r s\nassert r(a, b) >= {h}\nassert s(a, b) >= {h}",
    "dis-ok": "dis r s\nassert r(a, b) >= {h}\nassert s(b, a) >= {h}",
    "ref-clash": "ref r\nassert r(a, a) <= 0",
    "ria-clash": "ria r -> s\nassert r(a, b)\nassert s(a, b) <= 0",
    "ria-partial": "ria r -> s >= {p}\nassert r(a, b)\nassert s(a, b) <= 0",
    "ria-chain": "ria r r -> s\nassert r(a, b)\nassert r(b, a)\nassert s(a, a) <= 0",
    "atleast-two": "gci top atleast(2, r)",
    "atleast-two-irr": "gci top atleast(2, r)\nirr r",
    "atmost-one": "gci top atmost(1, r)\nassert r(a, b)\nassert r(a, a)\nneq a b",
    "atmost-one-partial": "gci top atmost(1, r) >= {h}\nassert r(a, b) >= {h}\nassert r(a, a) >= {h}\nneq a b",
    "forall-clash": "gci top all(r, A)\nassert r(a, b)\nassert B(b)\ngci and(A, B) bot",
    "forall-ok": "gci top all(r, A) >= {h}\nassert r(a, b) >= {h}",
    "or-into-bot": "gci top or(A, B)\ngci A bot\ngci B bot",
    "excluded-middle": "gci top or(A, not(A))\nassert A(a) >= {p}\nassert A(a) <= {m}",
    "self-conjunction": "assert A(a) >= {p}\ngci and(A, A) bot",
    "negation-bound": "assert not(A)(a) >= {p}\nassert A(a) >= {h}",
    "inverse-role": "assert r(a, b)\ngci some(inv(r), top) A\nassert A(b) <= 0",
    "partial-gci": "assert A(a) >= {p}\ngci A B >= {p}\nassert B(a) <= 0",
    "witness-loop": "gci A some(r, B)\nassert A(a) >= {h}\ngci B A >= {h}",
    "trans-ok": "trans r\nassert r(a, b) >= {h}\nassert r(b, a) >= {h}",
    "sym-ok": "sym r\nassert r(a, b) >= {p}",
    "ria-ok": "ria r -> s\nassert r(a, b) >= {h}\nassert s(a, b) <= {m}",
    "conjunction-ok": "assert and(A, B)(a) >= {h}\nassert B(a) >= {h}",
    "atmost-ok": "gci top atmost(1, r)\nassert r(a, b)\nneq a b",
    "self-ok": "gci A self(r)\nassert A(a)\ngci some(r, top) B",
    "or-ok": "gci top or(A, B)\ngci A bot",
    "forall-inverse": "gci A all(inv(r), B)\nassert r(b, a)\nassert A(a)",
    "nominal-merge": "gci A nominal(1/a)\nassert A(b) >= {h}",
    "nominal-merge-neq": "gci A nominal(1/a)\nassert A(b) >= {h}\nneq a b",
}


def _fmt(chain: Chain, d: int) -> str:
    return format_fraction(chain.value(d))


def curated(chains=(2, 3, 4), families=("goedel", "lukasiewicz")):
    """Yield ``(label, ontology)`` for every template, chain size and family."""
    for n in chains:
        for family in families:
            chain = Chain(n, family)
            h, m, p = _fmt(chain, 1), _fmt(chain, chain.top - 1), _fmt(chain, max(chain.top - 1, 1))
            for name, body in TEMPLATES.items():
                body = body.format(h=h, m=m, p=p)
                used = set(re.findall(r"\b[ABrsab]\b", body))
                decls = "".join(f"{kind} {x}\n" for kind, x in DECLS if x in used)
                text = f"chain {n} {family}\n{decls}{body}\n"
                yield f"{name}/{family}/{n}", parse_ontology(text, name)
