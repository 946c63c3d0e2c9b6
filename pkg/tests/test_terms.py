"""Term layer: syntax, boundaries, typing, substitution."""

import pytest

from freeglob.globset import DimBoundExceeded, Table
from freeglob.terms import (
    SRC,
    TGT,
    Comp,
    CompNotComposable,
    Context,
    DimMismatch,
    FormalCell,
    Gen,
    Id,
    IncompatibleAssignment,
    Inv,
    InvOnObject,
    MalformedFormalCell,
    TermTypeError,
    UnknownCell,
    boundary,
    comp_at,
    disk_context,
    elaborate,
    gen_support,
    id_depth,
    id_pow,
    iterated_boundary,
    positions,
    signed_gen_count,
    splice,
    substitute,
    subterm_at,
    sum_context,
    term_dim,
    to_text,
    type_check,
)

D2 = disk_context(2)
PAIR = sum_context(Table((2, 2), (1,)))


# ---------------------------------------------------------------------------
# syntax helpers


def test_to_text_frozen_examples():
    assert to_text(Gen("g2")) == "g2"
    assert to_text(Id(Inv(Gen("g2")))) == "id(inv(g2))"
    t = Comp(1, Gen("g2"), Inv(Gen("g2")))
    assert to_text(t) == "g2 *1 inv(g2)"
    # left-associative: only a composite second factor is parenthesized
    assert to_text(Comp(0, t, Id(Gen("s1")))) == "g2 *1 inv(g2) *0 id(s1)"
    assert to_text(Comp(0, Id(Gen("s1")), t)) == "id(s1) *0 (g2 *1 inv(g2))"


def test_id_pow_and_depth():
    t = Gen("s0")
    assert id_pow(t, 0) is t
    assert id_pow(t, 3) == Id(Id(Id(t)))
    assert id_depth(id_pow(t, 3)) == 3
    assert id_depth(Inv(Id(t))) == 0


def test_positions_subterm_splice():
    t = Comp(0, Inv(Gen("g1")), Gen("g1"))
    ps = list(positions(t))
    assert () in ps and (0, 0) in ps
    assert subterm_at(t, (0, 0)) == Gen("g1")
    assert splice(t, (0,), Id(Gen("s0"))) == Comp(0, Id(Gen("s0")), Gen("g1"))


def test_gen_support():
    t = Comp(1, Gen("g2"), Inv(Id(Gen("s1"))))
    assert gen_support(t) == frozenset({"g2", "s1"})


# ---------------------------------------------------------------------------
# dimensions and boundaries


def test_term_dim():
    assert term_dim(Gen("g2"), D2) == 2
    assert term_dim(Id(Gen("g2")), D2) == 3
    assert term_dim(Inv(Gen("g2")), D2) == 2
    assert term_dim(Comp(1, Gen("g2"), Inv(Gen("g2"))), D2) == 2


def test_boundary_generator_and_id():
    assert boundary(Gen("g2"), SRC, D2) == Gen("s1")
    assert boundary(Gen("g2"), TGT, D2) == Gen("t1")
    assert boundary(Id(Gen("s1")), SRC, D2) == Gen("s1")
    assert boundary(Id(Gen("s1")), TGT, D2) == Gen("s1")


def test_boundary_inverse_swaps_sides():
    assert boundary(Inv(Gen("g2")), SRC, D2) == Gen("t1")
    assert boundary(Inv(Gen("g2")), TGT, D2) == Gen("s1")


def test_boundary_of_top_level_composite():
    t = Comp(1, Gen("g2"), Inv(Gen("g2")))
    # v is applied first
    assert boundary(t, SRC, D2) == Gen("t1")
    assert boundary(t, TGT, D2) == Gen("t1")


def test_boundary_distributes_below_top_level():
    t = comp_at(0, Gen("g2"), id_pow(Gen("s0"), 1), D2)
    assert boundary(t, SRC, D2) == Comp(0, Gen("s1"), Id(Gen("s0")))


def test_iterated_boundary_pads_upward():
    assert iterated_boundary(Gen("s0"), 2, SRC, D2) == id_pow(Gen("s0"), 2)
    assert iterated_boundary(Gen("g2"), 2, TGT, D2) == Gen("g2")
    assert iterated_boundary(Gen("g2"), 0, SRC, D2) == Gen("s0")


def test_comp_at_pads_the_smaller_factor():
    t = comp_at(0, Gen("g2"), id_pow(Gen("s0"), 1), D2)
    assert t == Comp(0, Gen("g2"), Id(Id(Gen("s0"))))
    assert to_text(t) == "g2 *0 id(id(s0))"


def test_comp_at_level_must_sit_below_both():
    with pytest.raises(DimMismatch):
        comp_at(0, Gen("g2"), Gen("s0"), D2)
    with pytest.raises(DimMismatch):
        comp_at(2, Gen("g2"), Gen("g2"), D2)


# ---------------------------------------------------------------------------
# type checking


def test_type_check_generator():
    tt = type_check(Gen("g2"), D2)
    assert tt.dim == 2
    assert tt.src == Gen("s1") and tt.tgt == Gen("t1")


def test_type_check_object_has_no_boundary():
    tt = type_check(Gen("s0"), D2)
    assert tt.dim == 0 and tt.src is None and tt.tgt is None


def test_type_check_rejects_unknown_cell():
    with pytest.raises(UnknownCell):
        type_check(Gen("nope"), D2)


def test_type_check_rejects_inverse_of_object():
    with pytest.raises(InvOnObject):
        type_check(Inv(Gen("s0")), D2)


def test_type_check_rejects_non_composable():
    t = Comp(1, Gen("g2"), Gen("g2"))
    with pytest.raises(CompNotComposable):
        type_check(t, D2)


def test_type_check_composite_across_a_gluing():
    t = comp_at(1, Gen("0g2"), Gen("1g2"), PAIR)
    tt = type_check(t, PAIR)
    assert tt.dim == 2
    assert tt.src == type_check(Gen("1g2"), PAIR).src
    assert tt.tgt == type_check(Gen("0g2"), PAIR).tgt


def test_type_check_respects_dim_bound():
    small = disk_context(2, dim_bound=2)
    with pytest.raises(DimBoundExceeded):
        type_check(Id(Gen("g2")), small)


def test_type_check_is_cached():
    t = Comp(1, Gen("g2"), Inv(Gen("g2")))
    assert type_check(t, D2) is type_check(t, D2)


# ---------------------------------------------------------------------------
# signed generator counts


def test_signed_gen_count_cancellation():
    t = Comp(1, Inv(Gen("g2")), Gen("g2"))
    assert signed_gen_count(t, D2) == {}
    u = Comp(1, Gen("0g2"), Gen("1g2"))
    assert signed_gen_count(u, PAIR) == {"0g2": 1, "1g2": 1}


def test_signed_gen_count_sees_only_top_dimension():
    t = comp_at(0, Gen("g2"), id_pow(Gen("s0"), 1), D2)
    assert signed_gen_count(t, D2) == {"g2": 1}


# ---------------------------------------------------------------------------
# elaboration of surface trees


def test_elaborate_cell_and_operators():
    assert elaborate("g2", D2) == Gen("g2")
    assert elaborate(("inv", ("id", "s1")), D2) == Inv(Id(Gen("s1")))
    tree = (1, "g2", ("inv", "g2"))
    assert elaborate(tree, D2) == Comp(1, Gen("g2"), Inv(Gen("g2")))


def test_elaborate_identity_sugar():
    assert elaborate("1_s1", D2) == Id(Gen("s1"))
    # a cell literally named with the prefix wins over the sugar
    ctx = Context(D2.base, (FormalCell("1_x", 0, None, None),))
    assert elaborate("1_x", ctx) == Gen("1_x")


def test_elaborate_pads_composition():
    # objects are not lifted silently; the identity sugar does it
    with pytest.raises(DimMismatch):
        elaborate((0, "g2", "s0"), D2)
    tree = (0, "g2", ("id", "s0"))
    assert elaborate(tree, D2) == Comp(0, Gen("g2"), Id(Id(Gen("s0"))))


def test_elaborate_unknown_cell():
    with pytest.raises(UnknownCell):
        elaborate("zz", D2)
    with pytest.raises(UnknownCell):
        elaborate("1_zz", D2)


# ---------------------------------------------------------------------------
# contexts and formal cells


def test_context_extend_adds_cells():
    ctx = D2.extend(FormalCell("h", 2, Gen("s1"), Gen("t1")))
    assert ctx.has_cell("h")
    assert ctx.cell_dim("h") == 2
    assert ctx.cell_boundary("h", SRC) == Gen("s1")
    assert not D2.has_cell("h")


def test_formal_cell_name_clash():
    with pytest.raises(MalformedFormalCell):
        D2.extend(FormalCell("g2", 2, Gen("s1"), Gen("t1")))


def test_formal_cell_missing_boundary():
    with pytest.raises(MalformedFormalCell):
        D2.extend(FormalCell("h", 1, None, None))


def test_formal_cell_boundary_dimension():
    with pytest.raises(MalformedFormalCell):
        D2.extend(FormalCell("h", 2, Gen("s0"), Gen("t1")))


def test_formal_cell_boundaries_must_be_parallel():
    ctx = sum_context(Table((1, 1), (0,)))
    with pytest.raises(MalformedFormalCell):
        ctx.extend(FormalCell("h", 2, Gen("0g1"), Gen("1g1")))


def test_formal_cells_may_chain():
    ctx = D2.extend(
        FormalCell("h", 2, Gen("s1"), Gen("t1")),
        FormalCell("w", 3, Gen("g2"), Gen("h")),
    )
    assert type_check(Gen("w"), ctx).dim == 3


def test_context_is_unhashable():
    with pytest.raises(TypeError):
        hash(D2)


# ---------------------------------------------------------------------------
# substitution


def test_substitute_renames_generators():
    src = disk_context(1)
    dst = sum_context(Table((1, 1), (0,)))
    assign = {"g1": Gen("0g1"), "s0": iterated_boundary(Gen("0g1"), 0, SRC, dst),
              "t0": iterated_boundary(Gen("0g1"), 0, TGT, dst)}
    out = substitute(Comp(0, Id(Gen("g1")), Gen("g1")), assign, src, dst)
    assert out == Comp(0, Id(Gen("0g1")), Gen("0g1"))


def test_substitute_checks_dimension():
    src = disk_context(1)
    with pytest.raises(IncompatibleAssignment):
        substitute(Gen("g1"), {"g1": Gen("s0")}, src, src)


def test_substitute_checks_boundaries():
    dst = sum_context(Table((1, 1), (0,)))
    with pytest.raises(IncompatibleAssignment):
        # image boundaries do not match the substituted cell boundaries
        substitute(
            Gen("g2"),
            {"g2": Gen("0g2"), "s1": Gen("0g1"), "t1": Gen("1g1"),
             "s0": Gen("0s0"), "t0": Gen("0t0")},
            disk_context(2),
            dst.extend(FormalCell("0g2", 2, Gen("0g1"), Gen("0g1"))),
        )


def test_substitute_missing_cell_must_exist_downstream():
    with pytest.raises(UnknownCell):
        substitute(Gen("g2"), {}, D2, disk_context(1))


def test_substitute_commutes_with_boundary():
    src = disk_context(2)
    dst = PAIR
    assign = {
        "g2": comp_at(1, Gen("0g2"), Gen("1g2"), dst),
        "s1": type_check(Gen("1g2"), dst).src,
        "t1": type_check(Gen("0g2"), dst).tgt,
        "s0": iterated_boundary(Gen("1g2"), 0, SRC, dst),
        "t0": iterated_boundary(Gen("0g2"), 0, TGT, dst),
    }
    t = Comp(1, Inv(Gen("g2")), Gen("g2"))
    image = substitute(t, assign, src, dst)
    from freeglob.rewrite import equal_terms

    for side in (SRC, TGT):
        direct = boundary(image, side, dst)
        routed = substitute(boundary(t, side, src), assign, src, dst)
        assert equal_terms(dst, direct, routed).is_equal


def test_substitute_rejects_extra_dimension_bound():
    with pytest.raises(TermTypeError):
        type_check(Comp(0, Gen("g1"), Gen("g1")), disk_context(1))
