"""Reconstruction of the algebra and its module action from homology blocks.

The homology of the algebra splits over pairs of idempotents; multiplication
descends to a map between blocks that the gluing theorem identifies with the
join against an elementary cap module followed by the cancellation
equivalence.  Both sides are computed here and compared exactly on homology.
"""

from __future__ import annotations

from .gf2 import (
    ChainComplexGf2,
    Gf2Matrix,
    Gf2Vector,
    homology,
    solve,
)
from .strands import AlgebraModel
from .ainf import ModuleStructure, StructureError
from .standard_models import elementary, gamma_block
from .join import cancel_cA


def homology_blocks(am: AlgebraModel) -> dict:
    """(I, J) -> homology dimension of the corresponding block."""
    out = {}
    for I in am.all_idempotent_subsets():
        for J in am.all_idempotent_subsets():
            dim, _ = homology(gamma_block(am, I, J))
            out[(I, J)] = dim
    return out


def _express_in_homology(c: ChainComplexGf2, vec: Gf2Vector, reps) -> Gf2Vector:
    """Coordinates of a cycle's class in the chosen representative basis."""
    cols = [("h", i) for i in range(len(reps))]
    images = {("h", i): v for i, v in enumerate(reps)}
    for j, b in enumerate(c.basis):
        col = c.differential.column(b)
        if col:
            cols.append(("b", j))
            images[("b", j)] = col
    system = Gf2Matrix.from_columns(c.basis, cols, images)
    x = solve(system, vec)
    if x is None:
        raise ValueError("vector is not a cycle class")
    return Gf2Vector(frozenset(k for k in x if k[0] == "h"))


def _bilinear_on_homology(c1, c2, c3, image_of_pair) -> Gf2Matrix:
    """Induce C1 (x) C2 -> C3 on homology from a chain-level bilinear map."""
    _, reps1 = homology(c1)
    _, reps2 = homology(c2)
    _, reps3 = homology(c3)
    rows = tuple(("h", i) for i in range(len(reps3)))
    cols = tuple((i, j) for i in range(len(reps1)) for j in range(len(reps2)))
    nz = set()
    for i, r1 in enumerate(reps1):
        for j, r2 in enumerate(reps2):
            img = Gf2Vector.zero()
            for x in r1:
                for y in r2:
                    img += image_of_pair(x, y)
            coords = _express_in_homology(c3, img, reps3)
            for k in coords:
                nz.add((k, (i, j)))
    return Gf2Matrix(rows, cols, frozenset(nz))


def right_module_block(u: ModuleStructure, I) -> ChainComplexGf2:
    """The summand of a right type-A module with right idempotent I."""
    if u.kind != "AA" or u.right_alg is None:
        raise StructureError("expected a module with a right action")
    I = frozenset(I)
    basis = tuple(g for g in u.gens if u.ridem[g] == I)
    images = {
        g: Gf2Vector(u.table.get(((), g, ()), frozenset()) & set(basis))
        for g in basis
    }
    d = Gf2Matrix.from_columns(basis, basis, images)
    return ChainComplexGf2(basis, d)


def bsa_blocks(u: ModuleStructure) -> dict:
    """I -> (homology dimension, block complex) of a right type-A module."""
    am = u.right_alg
    out = {}
    for I in am.all_idempotent_subsets():
        c = right_module_block(u, I)
        dim, _ = homology(c)
        out[I] = (dim, c)
    return out


def _direct_action(u: ModuleStructure, x, a) -> Gf2Vector:
    am = u.right_alg
    if am.is_idempotent_elem(a):
        return (
            Gf2Vector.of(x)
            if u.ridem[x] == am.elems[a].occupied
            else Gf2Vector.zero()
        )
    return Gf2Vector(u.table.get(((), x, (a,)), frozenset()))


def _join_composite_action(u: ModuleStructure, cA_table, I, x, a) -> Gf2Vector:
    """The action through the elementary join and the cancellation morphism.

    The join against the cap module for I sends x (x) a to the state with
    the dual idempotent slot; the cancellation entry keyed by that state
    emits the algebra element, absorbed by the right action of u.
    """
    am = u.right_alg
    I = frozenset(I)
    acc = Gf2Vector.zero()
    Ituple = tuple(sorted(I))
    for (g, argsR), outs in cA_table.items():
        if argsR or g[0] != Ituple or g[3] != a:
            continue
        for b, _tgt in outs:
            acc += _direct_action(u, x, b)
    return acc


def m_H(u: ModuleStructure, I, J) -> Gf2Matrix:
    """The homology-level action H(u . iota_I) (x) H(block I -> J) -> H(u . iota_J).

    Computed through the join-and-cancel composite; verified against the
    direct right action.
    """
    am = u.right_alg
    I, J = frozenset(I), frozenset(J)
    cA = cancel_cA(am)
    c1 = right_module_block(u, I)
    c2 = gamma_block(am, I, J)
    c3 = right_module_block(u, J)

    direct = _bilinear_on_homology(c1, c2, c3, lambda x, a: _direct_action(u, x, a))
    composite = _bilinear_on_homology(
        c1, c2, c3, lambda x, a: _join_composite_action(u, cA.table, I, x, a)
    )
    if direct.nonzero != composite.nonzero:
        raise StructureError("join-composite action disagrees with the direct action")
    return direct


def alg_as_right_module(am: AlgebraModel) -> ModuleStructure:
    """The algebra as a right module over itself."""
    gens = tuple(range(am.dim))
    lidem = {g: frozenset() for g in gens}
    ridem = {g: am.right_idem[g] for g in gens}
    table: dict = {}
    for g in gens:
        if am.diff_table[g]:
            table[((), g, ())] = set(am.diff_table[g])
    for a in range(am.dim):
        if am.is_idempotent_elem(a):
            continue
        for g in gens:
            out = am.mult_table.get((g, a), frozenset())
            if out:
                table[((), g, (a,))] = set(out)
    return ModuleStructure("AA", None, am, gens, lidem, ridem, table, name="A_r")


def _restricted_block(am: AlgebraModel, I, J) -> ChainComplexGf2:
    return gamma_block(am, I, J)


def mu_H(am: AlgebraModel, I, J, K) -> Gf2Matrix:
    """Multiplication on homology blocks, verified against the join composite.

    Maps H(block I->J) (x) H(block J->K) -> H(block I->K); products across
    mismatched middle subsets vanish by idempotent orthogonality.
    """
    I, J, K = frozenset(I), frozenset(J), frozenset(K)
    cA = cancel_cA(am)
    c1 = gamma_block(am, I, J)
    c2 = gamma_block(am, J, K)
    c3 = gamma_block(am, I, K)

    def direct(x, a):
        return Gf2Vector(am.mult_table[(x, a)])

    def composite(x, a):
        acc = Gf2Vector.zero()
        Jtuple = tuple(sorted(J))
        for (g, argsR), outs in cA.table.items():
            if argsR or g[0] != Jtuple or g[3] != a:
                continue
            for b, _tgt in outs:
                acc += Gf2Vector(am.mult_table[(x, b)])
        return acc

    m1 = _bilinear_on_homology(c1, c2, c3, direct)
    m2 = _bilinear_on_homology(c1, c2, c3, composite)
    if m1.nonzero != m2.nonzero:
        raise StructureError("join-composite product disagrees with multiplication")
    return m1


def mu_H_cross_zero(am: AlgebraModel, I, J, Jp, K) -> bool:
    """Products between blocks with mismatched middle idempotents vanish."""
    if frozenset(J) == frozenset(Jp):
        return True
    c1 = gamma_block(am, I, J)
    c2 = gamma_block(am, Jp, K)
    for x in c1.basis:
        for a in c2.basis:
            if am.mult_table[(x, a)]:
                return False
    return True
