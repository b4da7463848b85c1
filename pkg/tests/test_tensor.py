import random

import pytest

from strandjoin.arc_diagram import Z1, reverse
from strandjoin.ainf import (
    Morphism,
    StructureError,
    _morphism_slots,
    check_structure,
    dualize,
    identity_morphism,
    morphism_diff,
    zero_morphism,
)
from strandjoin.standard_models import (
    alg_as_aa,
    da_identity,
    dd_identity,
    elementary,
    left_module_from_right_idem,
)
from strandjoin.strands import enumerate_basis, rotate180
from strandjoin.tensor import TensorAlgebra, box, external_tensor, induced


def test_box_elementary_pair_compatibility(am1):
    # one-dimensional exactly when the two idempotents coincide as subsets
    for I in am1.all_idempotent_subsets():
        for J in am1.all_idempotent_subsets():
            eA = elementary(am1, I, "A", hand="right")
            eD = elementary(am1, J, "D", hand="left")
            r = box(eA, eD).result
            expected = 1 if eA.ridem[eA.gens[0]] == eD.lidem[eD.gens[0]] else 0
            assert len(r.gens) == expected
            assert not r.table


def test_box_algebra_with_elementary_block(am1):
    eD = elementary(am1, frozenset({1}), "D", hand="left")
    r = box(alg_as_aa(am1), eD).result
    gens = {am1.elems[g[0]] for g in r.gens}
    assert gens == {am1.elems[g] for g in range(am1.dim) if am1.right_idem[g] == {1}}
    assert r.underlying_complex().differential.is_zero()


def test_box_da_identity_is_carrier_bijection(am1, am2):
    for am in (am1, am2):
        for I in am.all_idempotent_subsets():
            eD = elementary(am, I, "D", hand="left")
            r = box(da_identity(am), eD).result
            assert len(r.gens) == 1
            assert not r.table
            assert r.lidem[r.gens[0]] == frozenset(I)


def test_box_results_pass_check_structure(am1, am2):
    for am in (am1, am2):
        for I in am.all_idempotent_subsets():
            eD = elementary(am, I, "D", hand="left")
            assert check_structure(box(alg_as_aa(am), eD).result) is None
        assert check_structure(box(alg_as_aa(am), dd_identity(am)).result) is None
        assert check_structure(box(da_identity(am), dd_identity(am)).result) is None


def test_box_rejects_mismatches(am1, am2):
    eD = elementary(am2, frozenset(), "D", hand="left")
    with pytest.raises(StructureError):
        box(alg_as_aa(am1), eD)
    eA = elementary(am1, frozenset(), "A", hand="left")
    with pytest.raises(StructureError):
        box(eA, elementary(am1, frozenset(), "A", hand="right"))


def test_external_tensor_elementary(am1):
    m = elementary(am1, frozenset({1}), "A", hand="left")
    n = dualize(elementary(am1, frozenset(), "A", hand="left"))
    r = external_tensor(m, n)
    assert len(r.gens) == 1
    assert check_structure(r) is None
    assert not r.table


def test_external_tensor_combined_action_grid(am1):
    M = left_module_from_right_idem(am1, {1})
    N = dualize(left_module_from_right_idem(am1, {1}))
    r = external_tensor(M, N)
    assert check_structure(r) is None
    ta = TensorAlgebra(am1, enumerate_basis(reverse(Z1)))
    rot = rotate180(am1)[1]
    rot_inv = {v: k for k, v in rot.items()}
    # the combined one-input action equals the two one-sided actions
    for u in range(ta.union.dim):
        e1, e2 = ta.split[u]
        for (x, y) in r.gens:
            got = r.table.get(((u,), (x, y), ()), frozenset())
            xs = (
                frozenset([x])
                if am1.is_idempotent_elem(e1) and am1.elems[e1].occupied == M.lidem[x]
                else M.table.get(((e1,), x, ()), frozenset())
                if not am1.is_idempotent_elem(e1)
                else frozenset()
            )
            b = rot_inv[e2]
            ys = (
                frozenset([y])
                if am1.is_idempotent_elem(b) and am1.elems[b].occupied == N.ridem[y]
                else N.table.get(((), y, (b,)), frozenset())
                if not am1.is_idempotent_elem(b)
                else frozenset()
            )
            expected = frozenset((x2, y2) for x2 in xs for y2 in ys)
            if am1.is_idempotent_elem(e1) and am1.is_idempotent_elem(b):
                expected = frozenset()
            assert got == expected


def test_external_tensor_requires_shapes(am2):
    M = left_module_from_right_idem(am2, {1})
    assert M.is_dg_type()
    n = dualize(left_module_from_right_idem(am2, {1}))
    with pytest.raises(StructureError):
        external_tensor(dualize(M), n)  # wrong handedness on the first factor
    with pytest.raises(StructureError):
        external_tensor(M, M)  # second factor must be a right module


def test_induced_identity_and_zero(am2):
    eD = elementary(am2, frozenset({1}), "D", hand="left")
    A = alg_as_aa(am2)
    idm = identity_morphism(A)
    ind = induced(idm, eD, "right")
    box_mod = box(A, eD).result
    assert ind.table == identity_morphism(box_mod).table
    z = zero_morphism(A, A)
    assert induced(z, eD, "right").is_zero()


def test_induced_is_dg_functor(am1):
    # d(induced f) = induced(df) for morphisms of the A-side factor
    M = alg_as_aa(am1)
    eD = elementary(am1, frozenset({1}), "D", hand="left")
    rng = random.Random(13)
    slots = _morphism_slots(M, M, 2)
    for _ in range(8):
        f = Morphism(M, M, {k: {v} for k, v in rng.sample(slots, 3)})
        lhs = morphism_diff(induced(f, eD, "right"))
        rhs = induced(morphism_diff(f), eD, "right")
        assert lhs.table == rhs.table


def test_induced_left_identity(am1):
    eD = elementary(am1, frozenset({1}), "D", hand="left")
    A = alg_as_aa(am1)
    idd = identity_morphism(eD)
    ind = induced(idd, A, "left")
    box_mod = box(A, eD).result
    assert ind.table == identity_morphism(box_mod).table


def test_box_associativity_with_dg_middle(am1):
    # (A x IdDA) x elemD == A x (IdDA x elemD) under the re-association map
    A = alg_as_aa(am1)
    X = da_identity(am1)
    for I in am1.all_idempotent_subsets():
        eD = elementary(am1, I, "D", hand="left")
        left_first = box(box(A, X).result, eD).result
        right_first = box(A, box(X, eD).result).result
        remap = {((x, i), e): (x, (i, e)) for ((x, i), e) in left_first.gens}
        assert set(remap.values()) == set(right_first.gens)
        relabeled = {}
        for (argsL, g, argsR), outs in left_first.table.items():
            relabeled[(argsL, remap[g], argsR)] = frozenset(remap[y] for y in outs)
        assert relabeled == {k: frozenset(v) for k, v in right_first.table.items()}


def test_module_tsv_dump(am1):
    from strandjoin.ainf import dump_module_tsv

    text = dump_module_tsv(alg_as_aa(am1))
    assert text.startswith("# kind: AA")
    assert "\t" in text.splitlines()[-1]
    t2 = dump_module_tsv(da_identity(am1))
    assert t2.startswith("# kind: DA")
    t3 = dump_module_tsv(dd_identity(am1))
    assert t3.startswith("# kind: DD")
