"""Shared fixtures: deterministic random generators for graphs and
well-typed terms.

The generators build terms bottom-up so every output type-checks by
construction: compositions only attach factors whose relevant boundary
normal form matches, with identity padding as the always-available
fallback.  Everything is seeded, so failures reproduce.
"""

from __future__ import annotations

import random

import pytest

from freeglob.globset import GlobSet, Table
from freeglob.rewrite import nf
from freeglob.terms import (
    SRC,
    TGT,
    Context,
    Gen,
    Id,
    Inv,
    Term,
    comp_at,
    disk_context,
    id_pow,
    iterated_boundary,
    sum_context,
    term_dim,
)


def random_graph(rng: random.Random, max_cells: int = 6) -> GlobSet:
    """A globular set of dimension <= 1 with at least one object."""
    n_obj = rng.randint(1, max(1, max_cells - 1))
    n_edge = rng.randint(0, max_cells - n_obj)
    dims = {f"o{i}": 0 for i in range(n_obj)}
    src = {}
    tgt = {}
    for k in range(n_edge):
        dims[f"e{k}"] = 1
        src[f"e{k}"] = f"o{rng.randrange(n_obj)}"
        tgt[f"e{k}"] = f"o{rng.randrange(n_obj)}"
    return GlobSet(dims, src, tgt)


def random_word_term(rng: random.Random, ctx: Context) -> Term:
    """A well-typed term of dimension <= 1: a bracketed walk through the
    underlying graph with inverse steps and stationary identity factors."""
    gs = ctx.base
    objects = gs.cells(0)
    edges = gs.cells(1)
    cur = rng.choice(objects)
    if not edges or rng.random() < 0.15:
        t = Gen(cur)
        return Id(t) if rng.random() < 0.5 else t

    factors: list[Term] = []
    for _ in range(rng.randint(1, 6)):
        if rng.random() < 0.25:
            factors.append(Id(Gen(cur)))
            continue
        forward = [e for e in edges if gs.src(e) == cur]
        backward = [e for e in edges if gs.tgt(e) == cur]
        moves = [(e, False) for e in forward] + [(e, True) for e in backward]
        if not moves:
            factors.append(Id(Gen(cur)))
            continue
        e, invert = rng.choice(moves)
        factors.append(Inv(Gen(e)) if invert else Gen(e))
        cur = gs.src(e) if invert else gs.tgt(e)

    def combine(fs: list[Term]) -> Term:
        if len(fs) == 1:
            return fs[0]
        k = rng.randint(1, len(fs) - 1)
        # fs is in application order, so the later factors compose after
        return comp_at(0, combine(fs[k:]), combine(fs[:k]), ctx)

    return combine(factors)


def random_term(
    rng: random.Random, ctx: Context, dim_max: int = 3, size: int = 6
) -> Term:
    """A well-typed term built by wrapping and composing from a seed cell."""
    cells = [c for c in ctx.cells() if ctx.cell_dim(c) <= dim_max]
    atoms: list[Term] = [Gen(c) for c in cells]
    atoms += [Inv(Gen(c)) for c in cells if ctx.cell_dim(c) >= 1]
    t: Term = Gen(rng.choice(cells))
    for _ in range(size):
        d = term_dim(t, ctx)
        ops = ["comp"] * 3
        if d < dim_max:
            ops.append("id")
        if d >= 1:
            ops.append("inv")
        op = rng.choice(ops)
        if op == "id":
            t = Id(t)
        elif op == "inv":
            t = Inv(t)
        elif d >= 1:
            j = rng.randrange(d)
            after = rng.random() < 0.5
            # a factor composed after t matches its source against t's target
            my_side = iterated_boundary(t, j, TGT if after else SRC, ctx)
            key = nf(ctx, my_side)
            other = SRC if after else TGT
            fits = [
                a
                for a in atoms
                if term_dim(a, ctx) > j
                and term_dim(a, ctx) <= dim_max
                and nf(ctx, iterated_boundary(a, j, other, ctx)) == key
            ]
            u = rng.choice(fits) if fits and rng.random() < 0.8 else id_pow(my_side, d - j)
            t = comp_at(j, u, t, ctx) if after else comp_at(j, t, u, ctx)
    return t


@pytest.fixture
def rng() -> random.Random:
    return random.Random(0xC0FFEE)


@pytest.fixture(scope="session")
def term_contexts() -> list[Context]:
    """Contexts the dimension-3 generator draws from."""
    return [
        disk_context(2),
        disk_context(3),
        sum_context(Table((1, 1), (0,))),
        sum_context(Table((2, 2), (0,))),
        sum_context(Table((2, 2), (1,))),
        sum_context(Table((3, 2), (1,))),
        sum_context(Table((2, 1, 2), (0, 0))),
    ]
