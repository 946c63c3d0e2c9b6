"""The base category of tables and globular-set maps between their sums.

Objects are dimension tables, morphisms between two tables are exactly
the globular maps between the associated globular sums, computed by
exhaustive (but propagation-pruned) enumeration and memoized.  Desk
scale keeps the hom-sets small, so the extensional representation is
both the simplest and the fastest one.

``is_globally_parallel`` also accepts the richer term-valued morphisms
from :mod:`.tower`; the notion of agreement is dispatched on the
morphism kind, since term-valued maps are only compared up to the
rewrite engine's equality.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

from .globset import (
    GlobMap,
    Table,
    compose_glob_maps,
    enumerate_glob_maps,
    globular_sum,
    identity_map,
    validate_table,
)
from .rewrite import equal_terms
from .terms import SRC, TGT, iterated_boundary

__all__ = [
    "ShapeMismatch",
    "Theta0Mor",
    "compose_theta0",
    "hom_theta0",
    "identity_theta0",
    "is_globally_parallel",
    "table_of_sum",
]


class ShapeMismatch(ValueError):
    """The morphisms do not have the shape the comparison requires."""


@dataclass(frozen=True)
class Theta0Mor:
    """A morphism between tables: a globular map between their sums."""

    src: Table
    dst: Table
    map: GlobMap

    def __post_init__(self) -> None:
        if self.map.dom != globular_sum(self.src).gs:
            raise ValueError("map domain is not the globular sum of src")
        if self.map.cod != globular_sum(self.dst).gs:
            raise ValueError("map codomain is not the globular sum of dst")


_HOM_CACHE: dict[tuple[Table, Table], tuple[Theta0Mor, ...]] = {}
_HOM_LOCK = threading.Lock()


def hom_theta0(src: Table, dst: Table) -> tuple[Theta0Mor, ...]:
    """All morphisms from ``src`` to ``dst``, in a stable order."""
    validate_table(src)
    validate_table(dst)
    key = (src, dst)
    with _HOM_LOCK:
        hit = _HOM_CACHE.get(key)
    if hit is not None:
        return hit
    gs_s = globular_sum(src).gs
    gs_d = globular_sum(dst).gs
    mors = tuple(Theta0Mor(src, dst, m) for m in enumerate_glob_maps(gs_s, gs_d))
    with _HOM_LOCK:
        return _HOM_CACHE.setdefault(key, mors)


def identity_theta0(table: Table) -> Theta0Mor:
    validate_table(table)
    return Theta0Mor(table, table, identity_map(globular_sum(table).gs))


def compose_theta0(f: Theta0Mor, g: Theta0Mor) -> Theta0Mor:
    """The composite ``f after g``."""
    return Theta0Mor(g.src, f.dst, compose_glob_maps(f.map, g.map))


def _disk_table_dim(table: Table) -> int:
    if table.width != 1:
        raise ShapeMismatch(f"source must be a single disk, got table {table.text()}")
    return table.upper[0]


def is_globally_parallel(f, g, n: int | None = None) -> bool:
    """Do two morphisms out of a disk agree after restriction to either
    boundary inclusion of the disk?

    For table-level morphisms agreement is cellwise; for term-valued
    morphisms it is equality of the boundary terms of the top assignments,
    decided by the rewrite engine.  Maps out of the 0-disk are parallel by
    convention.  Pass ``n`` to insist on a particular source disk.
    """
    if type(f) is not type(g):
        raise ShapeMismatch("cannot compare morphisms of different kinds")
    if f.src != g.src or f.dst != g.dst:
        raise ShapeMismatch("morphisms must share source and target")
    src_dim = _disk_table_dim(f.src)
    if n is not None and n != src_dim:
        raise ShapeMismatch(f"expected a pair from the {n}-disk, got the {src_dim}-disk")
    n = src_dim
    if n == 0:
        return True
    if isinstance(f, Theta0Mor):
        # restriction to either boundary inclusion forgets only the top cell
        top = f"0g{n}"
        return all(
            f.map.mapping[c] == g.map.mapping[c]
            for c in f.map.mapping
            if c != top
        )
    ctx = f.target_context()
    if ctx != g.target_context():
        raise ShapeMismatch("morphisms must share target context")
    ft, gt = f.tops[0], g.tops[0]
    return all(
        equal_terms(ctx, iterated_boundary(ft, n - 1, side, ctx),
                    iterated_boundary(gt, n - 1, side, ctx)).is_equal
        for side in (SRC, TGT)
    )


def table_of_sum(tables, glue_dims) -> Table:
    """Concatenate tables along gluing dimensions.

    The sum of the result is the pasting of the sums of the parts, glued
    in order at the given dimensions.
    """
    tables = tuple(tables)
    glue_dims = tuple(glue_dims)
    if not tables:
        raise ValueError("need at least one table")
    if len(glue_dims) != len(tables) - 1:
        raise ValueError(
            f"{len(tables)} tables need {len(tables) - 1} gluing dimensions, "
            f"got {len(glue_dims)}"
        )
    upper: tuple[int, ...] = ()
    lower: tuple[int, ...] = ()
    for i, t in enumerate(tables):
        validate_table(t)
        if i > 0:
            lower += (glue_dims[i - 1],)
        upper += t.upper
        lower += t.lower
    out = Table(upper, lower)
    validate_table(out)
    return out
