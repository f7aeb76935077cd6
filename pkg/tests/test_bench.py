import csv
import io

import pytest

from crispc.bench import (
    CSV_COLUMNS, BenchConfig, gen_nested_family, gen_ontology, make_threshold_queries, measure_grid, rechain, to_csv,
)
from crispc.chain import Chain
from crispc.errors import DomainError, ValidationError
from crispc.model import occurrences
from crispc.textio import print_ontology


def test_generation_is_seeded():
    a = print_ontology(gen_ontology(BenchConfig(seed=3, divisor=50)))
    b = print_ontology(gen_ontology(BenchConfig(seed=3, divisor=50)))
    c = print_ontology(gen_ontology(BenchConfig(seed=4, divisor=50)))
    assert a == b != c


def test_abox_counts_scale_with_units():
    cfg = BenchConfig(universities=2, divisor=50)
    o = gen_ontology(cfg)
    assert len(o.abox) == cfg.concept_assertions + cfg.role_assertions == 2 * (26 + 49)
    assert len(o.individuals) == 120


@pytest.mark.parametrize("pct,expected", [(0, 0), (100, 27), (50, 14)])
def test_crisp_percentage(pct, expected):
    o = gen_ontology(BenchConfig(crisp_pct=pct, divisor=100))
    assert len(o.crisp_concepts) + len(o.crisp_roles) == expected


@pytest.mark.parametrize("kw", [dict(crisp_pct=101), dict(chain_size=1), dict(universities=0), dict(divisor=0)])
def test_config_validation(kw):
    with pytest.raises(ValidationError):
        BenchConfig(**kw)


def test_csv_layout():
    rows = measure_grid([BenchConfig(chain_size=n, divisor=100) for n in (3, 5)])
    table = list(csv.reader(io.StringIO(to_csv(rows))))
    assert tuple(table[0]) == CSV_COLUMNS
    assert [(r[0], r[1]) for r in table[1:]] == [("3", "true"), ("3", "false"), ("5", "true"), ("5", "false")]
    assert all(int(r[3]) > 0 and int(r[4]) > 0 for r in table[1:])


def test_more_degrees_more_axioms():
    small, big = measure_grid([BenchConfig(chain_size=n, divisor=100) for n in (3, 11)])[::2]
    assert big.tbox_occurrences > small.tbox_occurrences


def test_nested_family_shape():
    sizes = [occurrences(gen_nested_family(d).axioms) for d in range(1, 7)]
    assert sizes == sorted(sizes) and len(set(sizes)) == 6
    assert gen_nested_family(3).concepts == ("A0", "A1", "A3", "Goal")
    with pytest.raises(ValidationError):
        gen_nested_family(0)


def test_rechain():
    o = gen_ontology(BenchConfig(chain_size=3, divisor=100))
    moved = rechain(o, Chain(5, o.chain.family))
    assert moved.chain.n == 5
    assert [moved.chain.value(a.degree) for a in moved.abox] == [o.chain.value(a.degree) for a in o.abox]
    with pytest.raises(DomainError):
        rechain(o, Chain(4, o.chain.family))  # 1/2 is not a degree of a four-element chain


def test_threshold_queries_use_known_names():
    o = gen_ontology(BenchConfig(divisor=100))
    names = set(o.concepts) | set(o.roles)
    for q in make_threshold_queries(o):
        assert {a.pred for a in q.atoms} <= names
