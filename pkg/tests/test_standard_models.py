import pytest

from strandjoin.arc_diagram import ArcDiagram, Z2, validate
from strandjoin.gf2 import homology
from strandjoin.ainf import check_structure
from strandjoin.standard_models import (
    DescriptorError,
    alg_as_aa,
    da_identity,
    dd_identity,
    dual_alg_as_aa,
    elementary,
    gamma_block,
    parse_descriptor,
)
from strandjoin.strands import enumerate_basis


def test_elementary_idempotent_conventions(am1):
    d = elementary(am1, frozenset({1}), "D")
    assert d.lidem[d.gens[0]] == {1}
    assert not d.table
    a = elementary(am1, frozenset({1}), "A")
    assert a.lidem[a.gens[0]] == frozenset()
    assert check_structure(a) is None and check_structure(d) is None


def test_alg_as_aa_is_dg_and_valid(am0, am1, am2):
    for am in (am0, am1, am2):
        m = alg_as_aa(am)
        assert m.is_dg_type()
        assert check_structure(m) is None
        # Leibniz reproduces the diff table through the scalar part
        c = m.underlying_complex()
        for g in range(am.dim):
            assert c.differential.column(g).entries == am.diff_table[g]


def test_dual_alg_double_dual(am1):
    from strandjoin.ainf import dualize

    m = alg_as_aa(am1)
    assert dualize(dual_alg_as_aa(am1)).table == m.table


def test_da_identity_structure(am0, am1, am2):
    for am in (am0, am1, am2):
        m = da_identity(am)
        assert check_structure(m) is None
        assert len(m.gens) == 2 ** am.k


def test_dd_identity_validated_convention(am0, am1, am2):
    for am in (am0, am1, am2):
        m = dd_identity(am)
        assert check_structure(m) is None
        for g in m.gens:
            assert m.ridem[g] == frozenset(range(1, am.k + 1)) - m.lidem[g]
    # rank one: no mover leaves its only pair, so the table is empty
    am1_ = enumerate_basis(ArcDiagram((("a1", "a2"),), {"a1": 1, "a2": 1}, "alpha"))
    assert not dd_identity(am1_).table
    # rank two interleaved: four chord firings
    am2_ = enumerate_basis(Z2)
    assert sum(len(v) for v in dd_identity(am2_).table.values()) == 4


def test_dd_identity_rank_three():
    z3 = ArcDiagram(
        (("a1", "a2", "a3", "a4", "a5", "a6"),),
        {"a1": 1, "a4": 1, "a2": 2, "a5": 2, "a3": 3, "a6": 3},
        "alpha",
    )
    assert validate(z3) == []
    am = enumerate_basis(z3)
    assert check_structure(dd_identity(am)) is None


def test_gamma_block_examples(am1):
    c = gamma_block(am1, {1}, {1})
    assert c.dim == 2 and homology(c)[0] == 2
    assert gamma_block(am1, frozenset(), {1}).dim == 0
    c0 = gamma_block(am1, frozenset(), frozenset())
    assert c0.dim == 1 and homology(c0)[0] == 1


def test_gamma_block_partition(am2):
    total = 0
    for I in am2.all_idempotent_subsets():
        for J in am2.all_idempotent_subsets():
            total += gamma_block(am2, I, J).dim
    assert total == am2.dim


def test_gamma_block_matches_sandwich(am1, am2):
    from strandjoin.join import sandwich_complex
    from strandjoin.ainf import dualize

    for am in (am1, am2):
        for I in am.all_idempotent_subsets():
            for J in am.all_idempotent_subsets():
                U = dualize(elementary(am, I, "D", hand="left"))
                V = elementary(am, J, "D", hand="left")
                c = sandwich_complex(U, alg_as_aa(am), V)
                blk = gamma_block(am, I, J)
                assert c.dim == blk.dim
                mapping = {g: (U.gens[0], g, V.gens[0]) for g in blk.basis}
                for g in blk.basis:
                    img = blk.differential.column(g)
                    img2 = c.differential.column(mapping[g])
                    assert {mapping[x] for x in img} == set(img2)


def test_descriptor_parsing(am2):
    assert parse_descriptor(am2, "alg").name == "A"
    assert parse_descriptor(am2, "dualalg").name == "A^"
    assert parse_descriptor(am2, "id:DA").name == "IdDA"
    assert parse_descriptor(am2, "id:DD").name == "IdDD"
    e = parse_descriptor(am2, "elementary:D:{1}")
    assert e.lidem[e.gens[0]] == {1}
    blk = parse_descriptor(am2, "gamma:{1}:{1,2}")
    assert blk.dim == 0
    with pytest.raises(DescriptorError):
        parse_descriptor(am2, "elementary:X:{1}")
    with pytest.raises(DescriptorError):
        parse_descriptor(am2, "gamma:{9}:{1}")
    with pytest.raises(DescriptorError):
        parse_descriptor(am2, "nonsense")
