"""Property-based checks over randomly generated globular sets and terms.

Strategies are integer seeds fed into the deterministic generators from
conftest; hypothesis owns shrinking while the generators own well-typedness.
Derandomized so failures reproduce from the printed seed alone.
"""

from __future__ import annotations

import random

from hypothesis import given, settings
from hypothesis import strategies as st

from freeglob.cli import parse_surface
from freeglob.cylinder import cyl_boundary, identity_cylinder, validate_cylinder
from freeglob.globset import Table, disk, enumerate_glob_maps, globular_sum
from freeglob.homotopy import pi0, pi1_free_rank
from freeglob.rewrite import (
    equal,
    equal_terms,
    measure_greater,
    nf,
    normalize,
    reduced_word,
    replay,
)
from freeglob.terms import (
    SRC,
    TGT,
    Context,
    Gen,
    Id,
    Inv,
    boundary,
    comp_at,
    disk_context,
    iterated_boundary,
    signed_gen_count,
    substitute,
    sum_context,
    term_dim,
    to_text,
    type_check,
)

from conftest import random_graph, random_term, random_word_term

settings.register_profile("suite", derandomize=True, max_examples=60, deadline=None)
settings.load_profile("suite")

seeds = st.integers(min_value=0, max_value=2**32 - 1)

TABLES = [
    Table((1,), ()),
    Table((2,), ()),
    Table((3,), ()),
    Table((1, 1), (0,)),
    Table((2, 2), (0,)),
    Table((2, 2), (1,)),
    Table((3, 2), (1,)),
    Table((2, 1, 2), (0, 0)),
]


def _term_and_context(seed, dim_max=3):
    rng = random.Random(seed)
    ctx = sum_context(rng.choice(TABLES))
    return random_term(rng, ctx, dim_max=dim_max, size=rng.randint(1, 6)), ctx


# ---------------------------------------------------------------------------
# globular sets


@given(seeds)
def test_random_sums_satisfy_globularity(seed):
    rng = random.Random(seed)
    width = rng.randint(1, 4)
    upper = tuple(rng.randint(1, 3) for _ in range(width))
    lower = tuple(
        rng.randint(0, min(upper[i], upper[i + 1]) - 1) for i in range(width - 1)
    )
    gs = globular_sum(Table(upper, lower)).gs
    for c in gs.cells():
        if gs.dim_of(c) < 2:
            continue
        assert gs.src(gs.src(c)) == gs.src(gs.tgt(c))
        assert gs.tgt(gs.src(c)) == gs.tgt(gs.tgt(c))


@given(st.integers(min_value=0, max_value=5))
def test_width_one_sum_matches_disk(n):
    gs = globular_sum(Table((n,), ())).gs
    dn = disk(n)
    assert len(gs.cells()) == len(dn.cells()) == 2 * n + 1
    for k in range(n + 1):
        assert len(gs.cells(k)) == len(dn.cells(k))


@given(seeds)
def test_enumerated_maps_commute_with_boundaries(seed):
    rng = random.Random(seed)
    dom = random_graph(rng, max_cells=4)
    cod = random_graph(rng, max_cells=4)
    for m in enumerate_glob_maps(dom, cod):
        for c in dom.cells():
            assert cod.dim_of(m.mapping[c]) == dom.dim_of(c)
            if dom.dim_of(c) >= 1:
                assert m.mapping[dom.src(c)] == cod.src(m.mapping[c])
                assert m.mapping[dom.tgt(c)] == cod.tgt(m.mapping[c])


@given(seeds)
def test_pi0_partitions_the_objects(seed):
    rng = random.Random(seed)
    gs = random_graph(rng, max_cells=6)
    classes = pi0(gs)
    assert 1 <= len(classes) <= len(gs.cells(0))
    assert sorted(c for cls in classes for c in cls) == sorted(gs.cells(0))
    assert pi1_free_rank(gs) >= 0


# ---------------------------------------------------------------------------
# terms


@given(seeds)
def test_generated_terms_type_check(seed):
    t, ctx = _term_and_context(seed)
    type_check(t, ctx)


@given(seeds)
def test_boundary_globularity(seed):
    t, ctx = _term_and_context(seed)
    if term_dim(t, ctx) < 2:
        return
    for side in (SRC, TGT):
        of_src = boundary(boundary(t, SRC, ctx), side, ctx)
        of_tgt = boundary(boundary(t, TGT, ctx), side, ctx)
        assert equal_terms(ctx, of_src, of_tgt).is_equal


@given(seeds)
def test_surface_rendering_roundtrips(seed):
    t, ctx = _term_and_context(seed)
    assert parse_surface(to_text(t), ctx) == t


@given(seeds)
def test_substitution_commutes_with_boundary(seed):
    # a disk generator sent to a genuinely composite image
    rng = random.Random(seed)
    inner = disk_context(2)
    outer = sum_context(Table((2, 2), (1,)))
    image = comp_at(1, Gen("0g2"), Gen("1g2"), outer)
    assign = {
        "g2": image,
        "s1": boundary(image, SRC, outer),
        "t1": boundary(image, TGT, outer),
        "s0": iterated_boundary(image, 0, SRC, outer),
        "t0": iterated_boundary(image, 0, TGT, outer),
    }
    t = random_term(rng, inner, dim_max=2, size=4)
    if term_dim(t, inner) == 0:
        return
    for side in (SRC, TGT):
        pushed = boundary(substitute(t, assign, inner, outer), side, outer)
        pulled = substitute(boundary(t, side, inner), assign, inner, outer)
        assert equal_terms(outer, pushed, pulled).is_equal


# ---------------------------------------------------------------------------
# rewriting


@given(seeds)
def test_normalize_preserves_boundaries(seed):
    t, ctx = _term_and_context(seed)
    n = nf(ctx, t)
    assert term_dim(n, ctx) == term_dim(t, ctx)
    if term_dim(t, ctx) >= 1:
        assert equal_terms(ctx, boundary(t, SRC, ctx), boundary(n, SRC, ctx)).is_equal
        assert equal_terms(ctx, boundary(t, TGT, ctx), boundary(n, TGT, ctx)).is_equal


@given(seeds)
def test_every_step_preserves_signed_gen_count(seed):
    t, ctx = _term_and_context(seed)
    counts = [signed_gen_count(u, ctx) for u in normalize(ctx, t).expand()]
    assert all(c == counts[0] for c in counts)


@given(seeds)
def test_normalize_strictly_decreases_the_measure(seed):
    t, ctx = _term_and_context(seed)
    seq = list(normalize(ctx, t).expand())
    for before, after in zip(seq, seq[1:]):
        assert measure_greater(before, after)


@given(seeds)
def test_nf_is_idempotent_and_traces_replay(seed):
    t, ctx = _term_and_context(seed)
    trace = normalize(ctx, t)
    n = nf(ctx, t)
    assert trace.result == n
    assert nf(ctx, n) == n
    assert replay(ctx, trace)


@given(seeds)
def test_equal_is_reflexive_with_replayable_trace(seed):
    t, ctx = _term_and_context(seed)
    v = equal(ctx, t, nf(ctx, t))
    assert v.kind == "equal"
    assert replay(ctx, v.trace)


@given(seeds)
def test_dim_one_verdicts_match_the_word_oracle(seed):
    rng = random.Random(seed)
    ctx = Context(random_graph(rng, max_cells=5))
    u = random_word_term(rng, ctx)
    v = random_word_term(rng, ctx)
    while term_dim(u, ctx) < term_dim(v, ctx):
        u = Id(u)
    while term_dim(v, ctx) < term_dim(u, ctx):
        v = Id(v)
    verdict = equal(ctx, u, v)
    assert verdict.kind in ("equal", "distinct")
    assert verdict.is_equal == (reduced_word(ctx, u) == reduced_word(ctx, v))


@given(seeds)
def test_inverting_a_word_reverses_and_negates_it(seed):
    rng = random.Random(seed)
    ctx = Context(random_graph(rng, max_cells=5))
    u = random_word_term(rng, ctx)
    if term_dim(u, ctx) == 0:
        return
    _, letters = reduced_word(ctx, u)
    inv_base, inv_letters = reduced_word(ctx, Inv(u))
    assert inv_letters == tuple((g, -e) for (g, e) in reversed(letters))
    tgt_obj, _ = reduced_word(ctx, iterated_boundary(u, 0, TGT, ctx))
    assert inv_base == tgt_obj


# ---------------------------------------------------------------------------
# cylinders


@given(seeds)
def test_identity_cylinders_validate(seed):
    t, ctx = _term_and_context(seed, dim_max=2)
    if term_dim(t, ctx) == 0:
        return
    report = validate_cylinder(identity_cylinder(ctx, t))
    assert report.all_equal, report.as_dict()


@given(seeds)
def test_cylinder_boundaries_share_lower_components(seed):
    t, ctx = _term_and_context(seed, dim_max=3)
    n = term_dim(t, ctx)
    if n < 2:
        return
    z = identity_cylinder(ctx, t)
    bs = cyl_boundary(z, SRC)
    bt = cyl_boundary(z, TGT)
    assert bs.flats == bt.flats == z.flats[: n - 1]
    assert bs.sharps == bt.sharps == z.sharps[: n - 1]
    assert bs.top == z.flats[n - 1] and bt.top == z.sharps[n - 1]
    assert validate_cylinder(bs).all_equal
