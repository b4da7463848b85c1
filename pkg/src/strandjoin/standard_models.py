"""The concrete named modules: elementary modules, the algebra as a bimodule
over itself, its dual, and the DA/DD identity bimodules.

The DD identity is the chord-sum construction: its structure map sends the
generator indexed by a subset I to the sum over one-mover basis elements c
with left idempotent I of c (x) *_{J(c)} (x) rotate180(c), the last factor
living in the algebra of the reversed diagram.  The construction is gated
behind two machine validations: the DD structure equation and the vanishing
of the differential of the cancellation morphism (see the join module);
together they pin down the idempotent conventions.
"""

from __future__ import annotations

import itertools

from .arc_diagram import reverse
from .gf2 import ChainComplexGf2, Gf2Matrix, Gf2Vector
from .strands import AlgebraModel, rotate180
from .ainf import ModuleStructure


def elementary(am: AlgebraModel, I, side: str, hand: str = "left") -> ModuleStructure:
    """The one-generator module for the cap with elementary dividing set I.

    The type-D module carries the idempotent of I itself, the type-A module
    that of the complement; all structure maps vanish.
    """
    I = frozenset(I)
    if side not in ("A", "D"):
        raise ValueError("side must be 'A' or 'D'")
    subset = frozenset(range(1, am.k + 1)) - I if side == "A" else I
    gen = ("e", side, tuple(sorted(subset)))
    if side == "A":
        kind = "AA"
        left_alg = am if hand == "left" else None
        right_alg = None if hand == "left" else am
    else:
        kind = "DA" if hand == "left" else "AD"
        left_alg = am if hand == "left" else None
        right_alg = None if hand == "left" else am
    lidem = {gen: subset if left_alg is not None else frozenset()}
    ridem = {gen: subset if right_alg is not None else frozenset()}
    return ModuleStructure(
        kind, left_alg, right_alg, (gen,), lidem, ridem, {},
        name=f"elem{side}({sorted(I)})",
    )


def left_module_from_right_idem(am: AlgebraModel, I) -> ModuleStructure:
    """The left module A.iota_I: basis elements with right idempotent I, left action."""
    I = frozenset(I)
    gens = tuple(g for g in range(am.dim) if am.right_idem[g] == I)
    lidem = {g: am.left_idem[g] for g in gens}
    ridem = {g: frozenset() for g in gens}
    table: dict = {}
    genset = set(gens)
    for g in gens:
        if am.diff_table[g]:
            table[((), g, ())] = set(am.diff_table[g]) & genset
    for a in range(am.dim):
        if am.is_idempotent_elem(a):
            continue
        for g in gens:
            out = am.mult_table.get((a, g), frozenset())
            if out:
                table[((a,), g, ())] = set(out) & genset
    return ModuleStructure(
        "AA", am, None, gens, lidem, ridem, table, name=f"A.i{sorted(I)}"
    )


def alg_as_aa(am: AlgebraModel) -> ModuleStructure:
    """The algebra as a DG-type bimodule over itself (the negative twisting slice)."""
    gens = tuple(range(am.dim))
    lidem = {g: am.left_idem[g] for g in gens}
    ridem = {g: am.right_idem[g] for g in gens}
    table: dict = {}
    for g in gens:
        if am.diff_table[g]:
            table[((), g, ())] = set(am.diff_table[g])
    for a in range(am.dim):
        if am.is_idempotent_elem(a):
            continue
        for g in gens:
            out = am.mult_table.get((a, g), frozenset())
            if out:
                table[((a,), g, ())] = set(out)
            out = am.mult_table.get((g, a), frozenset())
            if out:
                table[((), g, (a,))] = set(out)
    return ModuleStructure("AA", am, am, gens, lidem, ridem, table, name="A")


def dual_alg_as_aa(am: AlgebraModel) -> ModuleStructure:
    """The dual bimodule (the positive twisting slice)."""
    from .ainf import dualize

    m = dualize(alg_as_aa(am))
    m.name = "A^"
    return m


def da_identity(am: AlgebraModel) -> ModuleStructure:
    """The DA identity bimodule: generators are the ground-ring idempotents."""
    gens = tuple(("i", tuple(sorted(s))) for s in _subsets(am.k))
    subset_of = {g: frozenset(g[1]) for g in gens}
    lidem = {g: subset_of[g] for g in gens}
    ridem = {g: subset_of[g] for g in gens}
    by_subset = {frozenset(g[1]): g for g in gens}
    table: dict = {}
    for b in range(am.dim):
        if am.is_idempotent_elem(b):
            continue
        g = by_subset[am.left_idem[b]]
        tgt = by_subset[am.right_idem[b]]
        table.setdefault((g, (b,)), set()).add((b, tgt))
    return ModuleStructure("DA", am, am, gens, lidem, ridem, table, name="IdDA")


def dd_identity(am: AlgebraModel) -> ModuleStructure:
    """The DD identity bimodule, via the validated chord-sum formula.

    Generators x_I carry complementary idempotents (I on the left, its
    complement on the right).  The structure map sums over moving strands
    s -> t whose source pair lies in I and target pair outside I; the left
    output is the chord completed by I minus the source pair, the right
    output the chord completed by the complement minus the target pair.
    Right outputs mathematically live in the reversed diagram's algebra and
    are stored as their rotate180 preimages, so both slots are elements of
    the algebra itself.
    """
    from .strands import ABasisElem

    full = frozenset(range(1, am.k + 1))
    gens = tuple(("x", tuple(sorted(s))) for s in _subsets(am.k))
    subset_of = {g: frozenset(g[1]) for g in gens}
    by_subset = {frozenset(g[1]): g for g in gens}
    lidem = {g: subset_of[g] for g in gens}
    ridem = {g: full - subset_of[g] for g in gens}
    pair_of = am.arc_diagram.match
    movers = sorted(
        {e.movers[0] for e in am.elems if len(e.movers) == 1},
    )
    table: dict = {}
    for g in gens:
        I = subset_of[g]
        for s, t in movers:
            ps, pt = pair_of[s], pair_of[t]
            if ps not in I or pt in I:
                continue
            left = am.index[ABasisElem(((s, t),), I - {ps})]
            right = am.index[ABasisElem(((s, t),), (full - I) - {pt})]
            tgt = by_subset[(I - {ps}) | {pt}]
            table.setdefault(g, set()).add((left, tgt, right))
    return ModuleStructure("DD", am, am, gens, lidem, ridem, table, name="IdDD")


def _subsets(k: int):
    for r in range(k + 1):
        for s in itertools.combinations(range(1, k + 1), r):
            yield frozenset(s)


def gamma_block(am: AlgebraModel, I, J) -> ChainComplexGf2:
    """The summand iota_I . A . iota_J as a chain complex."""
    I, J = frozenset(I), frozenset(J)
    basis = tuple(
        g
        for g in range(am.dim)
        if am.left_idem[g] == I and am.right_idem[g] == J
    )
    images = {g: Gf2Vector(am.diff_table[g]) for g in basis}
    d = Gf2Matrix.from_columns(basis, basis, images)
    return ChainComplexGf2(basis, d)


class DescriptorError(ValueError):
    pass


def parse_descriptor(am: AlgebraModel, text: str):
    """Parse the CLI mini-language for standard models.

    Forms: ``elementary:D:{1,3}``, ``elementary:A:{}``, ``alg``, ``dualalg``,
    ``id:DA``, ``id:DD``, ``gamma:{1}:{1,2}``.
    """
    text = text.strip()
    if text == "alg":
        return alg_as_aa(am)
    if text == "dualalg":
        return dual_alg_as_aa(am)
    if text == "id:DA":
        return da_identity(am)
    if text == "id:DD":
        return dd_identity(am)
    if text.startswith("elementary:"):
        parts = text.split(":")
        if len(parts) != 3 or parts[1] not in ("A", "D"):
            raise DescriptorError(f"bad elementary descriptor {text!r}")
        return elementary(am, _parse_subset(parts[2], am.k), parts[1])
    if text.startswith("gamma:"):
        parts = text.split(":")
        if len(parts) != 3:
            raise DescriptorError(f"bad gamma descriptor {text!r}")
        return gamma_block(
            am, _parse_subset(parts[1], am.k), _parse_subset(parts[2], am.k)
        )
    raise DescriptorError(f"unknown descriptor {text!r}")


def _parse_subset(text: str, k: int) -> frozenset:
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise DescriptorError(f"bad subset {text!r}")
    inner = text[1:-1].strip()
    if not inner:
        return frozenset()
    try:
        vals = frozenset(int(t) for t in inner.split(","))
    except ValueError as e:
        raise DescriptorError(f"bad subset {text!r}") from e
    if not all(1 <= v <= k for v in vals):
        raise DescriptorError(f"subset {text!r} out of range 1..{k}")
    return vals
