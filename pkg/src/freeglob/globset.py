"""Finite globular sets, disks, spheres, and globular sums.

A globular set here is a finite graded set with source and target maps
satisfying the globular relations.  Cells are identified by string ids so
sets built by different constructions can be compared and serialized
stably.

Globular sums are colimits of disks glued along lower disks, described by
tables of dimensions.  The colimit is computed explicitly by quotienting a
disjoint union of disk cells with a union-find structure.
"""

from __future__ import annotations

import json
import re
import threading
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

DEFAULT_DIM_BOUND = 6


class ShapeError(ValueError):
    """A globular set or table failed structural validation."""


class InequalityError(ShapeError):
    """A table violates the zigzag inequalities between its two rows."""


class DimBoundExceeded(ShapeError):
    """A construction would exceed the configured dimension bound."""


class DomainMismatch(ValueError):
    """Maps were combined along incompatible globular sets."""


# ---------------------------------------------------------------------------
# tables


@dataclass(frozen=True)
class Table:
    """Gluing table for a globular sum.

    ``upper`` lists the dimensions of the disk summands, ``lower`` the
    dimensions of the disks glued between consecutive summands.  The rows
    must interleave strictly: each lower entry is smaller than both of its
    neighbours above.
    """

    upper: tuple[int, ...]
    lower: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "upper", tuple(int(i) for i in self.upper))
        object.__setattr__(self, "lower", tuple(int(i) for i in self.lower))

    @property
    def width(self) -> int:
        return len(self.upper)

    @property
    def dim(self) -> int:
        return max(self.upper)

    def text(self) -> str:
        top = " ".join(str(i) for i in self.upper)
        if not self.lower:
            return top
        bottom = " ".join(str(i) for i in self.lower)
        return f"{top} / {bottom}"

    @classmethod
    def from_text(cls, text: str) -> "Table":
        """Parse ``"i1 i2 ... / j1 j2 ..."``; the ``/`` part is optional."""
        head, slash, tail = text.partition("/")
        upper = tuple(int(tok) for tok in head.split())
        lower = tuple(int(tok) for tok in tail.split()) if slash else ()
        table = cls(upper, lower)
        validate_table(table)
        return table


def validate_table(table: Table, dim_bound: int = DEFAULT_DIM_BOUND) -> None:
    if not table.upper:
        raise ShapeError("table needs at least one summand")
    if len(table.lower) != len(table.upper) - 1:
        raise ShapeError(
            f"table with {len(table.upper)} summands needs "
            f"{len(table.upper) - 1} gluing entries, got {len(table.lower)}"
        )
    for i in table.upper:
        if i < 0:
            raise ShapeError(f"negative dimension {i} in table")
        if i > dim_bound:
            raise DimBoundExceeded(f"dimension {i} exceeds bound {dim_bound}")
    for j in table.lower:
        if j < 0:
            raise ShapeError(f"negative dimension {j} in table")
    for pos, j in enumerate(table.lower):
        if not (table.upper[pos] > j and j < table.upper[pos + 1]):
            raise InequalityError(
                f"gluing dimension {j} at position {pos} must be strictly "
                f"below its neighbours {table.upper[pos]} and {table.upper[pos + 1]}"
            )


# ---------------------------------------------------------------------------
# globular sets


class GlobSet:
    """A finite globular set with string cell ids.

    ``src`` and ``tgt`` assign to every cell of dimension >= 1 a cell one
    dimension lower, subject to the globular relations ss = st and
    ts = tt.
    """

    __slots__ = ("_dims", "_src", "_tgt", "_hash")

    def __init__(
        self,
        dims: Mapping[str, int],
        src: Mapping[str, str],
        tgt: Mapping[str, str],
    ) -> None:
        self._dims = dict(dims)
        self._src = dict(src)
        self._tgt = dict(tgt)
        self._hash: int | None = None
        self._validate()

    def _validate(self) -> None:
        for cell, d in self._dims.items():
            if d < 0:
                raise ShapeError(f"cell {cell!r} has negative dimension")
            if d == 0:
                if cell in self._src or cell in self._tgt:
                    raise ShapeError(f"object {cell!r} must not have a boundary")
                continue
            for name, mp in (("source", self._src), ("target", self._tgt)):
                if cell not in mp:
                    raise ShapeError(f"cell {cell!r} lacks a {name}")
                b = mp[cell]
                if b not in self._dims:
                    raise ShapeError(f"{name} of {cell!r} is not a cell")
                if self._dims[b] != d - 1:
                    raise ShapeError(
                        f"{name} of {cell!r} has dimension {self._dims[b]}, expected {d - 1}"
                    )
        for name in self._src:
            if name not in self._dims:
                raise ShapeError(f"source map defined on unknown cell {name!r}")
        for name in self._tgt:
            if name not in self._dims:
                raise ShapeError(f"target map defined on unknown cell {name!r}")
        for cell, d in self._dims.items():
            if d >= 2:
                s, t = self._src[cell], self._tgt[cell]
                if self._src[s] != self._src[t] or self._tgt[s] != self._tgt[t]:
                    raise ShapeError(f"globular relations fail at {cell!r}")

    # -- queries ---------------------------------------------------------

    def cells(self, dim: int | None = None) -> list[str]:
        if dim is None:
            return sorted(self._dims, key=lambda c: (self._dims[c], c))
        return sorted(c for c, d in self._dims.items() if d == dim)

    def __contains__(self, cell: str) -> bool:
        return cell in self._dims

    def __len__(self) -> int:
        return len(self._dims)

    def dim_of(self, cell: str) -> int:
        return self._dims[cell]

    @property
    def dim(self) -> int:
        return max(self._dims.values()) if self._dims else -1

    def src(self, cell: str) -> str:
        return self._src[cell]

    def tgt(self, cell: str) -> str:
        return self._tgt[cell]

    def boundary(self, cell: str, k: int, side: str) -> str:
        """The k-dimensional iterated source or target of ``cell``."""
        d = self._dims[cell]
        if k > d:
            raise ValueError(f"cell {cell!r} has dimension {d} < {k}")
        mp = self._src if side == "src" else self._tgt
        while d > k:
            cell = mp[cell]
            d -= 1
        return cell

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GlobSet):
            return NotImplemented
        return (
            self._dims == other._dims
            and self._src == other._src
            and self._tgt == other._tgt
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(
                (
                    frozenset(self._dims.items()),
                    frozenset(self._src.items()),
                    frozenset(self._tgt.items()),
                )
            )
        return self._hash

    def __repr__(self) -> str:
        counts = {}
        for d in self._dims.values():
            counts[d] = counts.get(d, 0) + 1
        profile = ", ".join(f"{counts[d]}x{d}" for d in sorted(counts))
        return f"GlobSet({profile})"

    # -- serialization ---------------------------------------------------

    def to_json(self) -> str:
        """Serialize as {"cells":[{"id","dim","src","tgt"}]} with null
        boundaries on objects; cells ordered by (dim, id)."""
        rows = []
        for cell in sorted(self._dims, key=lambda c: (self._dims[c], c)):
            rows.append(
                {
                    "id": cell,
                    "dim": self._dims[cell],
                    "src": self._src.get(cell),
                    "tgt": self._tgt.get(cell),
                }
            )
        return json.dumps({"cells": rows}, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "GlobSet":
        data = json.loads(text)
        dims: dict[str, int] = {}
        src: dict[str, str] = {}
        tgt: dict[str, str] = {}
        for row in data["cells"]:
            cell = row["id"]
            dims[cell] = row["dim"]
            if row.get("src") is not None:
                src[cell] = row["src"]
            if row.get("tgt") is not None:
                tgt[cell] = row["tgt"]
        return cls(dims, src, tgt)


# ---------------------------------------------------------------------------
# disks and spheres


def _disk_cells(n: int, prefix: str = "") -> tuple[dict, dict, dict]:
    """Cell data of the n-disk: one cell in each dimension below n for each
    side, plus a single top cell.

    Cell ids are ``s0 .. s{n-1}``, ``t0 .. t{n-1}`` and ``g{n}``, each with
    ``prefix`` prepended.
    """
    dims: dict[str, int] = {}
    src: dict[str, str] = {}
    tgt: dict[str, str] = {}

    def name(flag: str, k: int) -> str:
        return f"{prefix}{flag}{k}"

    for k in range(n):
        dims[name("s", k)] = k
        dims[name("t", k)] = k
    dims[name("g", n)] = n
    for k in range(1, n):
        for flag in "st":
            src[name(flag, k)] = name("s", k - 1)
            tgt[name(flag, k)] = name("t", k - 1)
    if n >= 1:
        src[name("g", n)] = name("s", n - 1)
        tgt[name("g", n)] = name("t", n - 1)
    return dims, src, tgt


def disk(n: int, dim_bound: int = DEFAULT_DIM_BOUND) -> GlobSet:
    """The globular n-disk, freely generated by one n-cell."""
    if n < 0:
        raise ShapeError("disk dimension must be non-negative")
    if n > dim_bound:
        raise DimBoundExceeded(f"disk dimension {n} exceeds bound {dim_bound}")
    return GlobSet(*_disk_cells(n))


def sphere(n: int, dim_bound: int = DEFAULT_DIM_BOUND) -> GlobSet:
    """The globular n-sphere, the boundary of the (n+1)-disk.

    ``sphere(-1)`` is the empty globular set.
    """
    if n < -1:
        raise ShapeError("sphere dimension must be at least -1")
    if n > dim_bound:
        raise DimBoundExceeded(f"sphere dimension {n} exceeds bound {dim_bound}")
    if n == -1:
        return GlobSet({}, {}, {})
    dims, src, tgt = _disk_cells(n + 1)
    del dims[f"g{n + 1}"]
    src.pop(f"g{n + 1}", None)
    tgt.pop(f"g{n + 1}", None)
    return GlobSet(dims, src, tgt)


# ---------------------------------------------------------------------------
# globular sums


_CELL_RE = re.compile(r"^(\d+)([stg])(\d+)$")
_FLAG_RANK = {"s": 0, "t": 1, "g": 2}


def parse_cell_name(cell: str) -> tuple[int, str, int]:
    """Split a canonical sum cell id into (summand, flag, dimension)."""
    m = _CELL_RE.match(cell)
    if m is None:
        raise ValueError(f"not a canonical sum cell id: {cell!r}")
    return int(m.group(1)), m.group(2), int(m.group(3))


class _UnionFind:
    def __init__(self) -> None:
        self.parent: dict[str, str] = {}

    def add(self, x: str) -> None:
        self.parent.setdefault(x, x)

    def find(self, x: str) -> str:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: str, y: str) -> None:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return
        # keep the canonical representative: smallest summand, then s < t < g,
        # then dimension
        kx = _sort_key(rx)
        ky = _sort_key(ry)
        if ky < kx:
            rx, ry = ry, rx
        self.parent[ry] = rx


def _sort_key(cell: str) -> tuple[int, int, int]:
    l, flag, k = parse_cell_name(cell)
    return (l, _FLAG_RANK[flag], k)


@dataclass(frozen=True)
class GlobularSum:
    """A globular sum together with its disk injections.

    ``injections[l]`` maps the cells of ``disk(upper[l])`` to cells of the
    colimit.
    """

    table: Table
    gs: GlobSet
    injections: tuple["GlobMap", ...] = field(compare=False)

    def top_cell(self, l: int) -> str:
        n = self.table.upper[l]
        return self.injections[l].mapping[f"g{n}"]


_SUM_CACHE: dict[tuple[tuple[int, ...], tuple[int, ...], int], GlobularSum] = {}
_SUM_LOCK = threading.Lock()


def globular_sum(table: Table, dim_bound: int = DEFAULT_DIM_BOUND) -> GlobularSum:
    """Compute the globular sum of disks described by ``table``.

    Consecutive summands ``l`` and ``l+1`` are glued along a disk of
    dimension ``d = table.lower[l]``: the d-target side of summand ``l+1``
    is identified with the d-source side of summand ``l``.  Cell ids of the
    result are canonical representatives ``{summand}{flag}{dim}``.
    """
    validate_table(table, dim_bound)
    key = (table.upper, table.lower, dim_bound)
    with _SUM_LOCK:
        cached = _SUM_CACHE.get(key)
    if cached is not None:
        return cached

    dims: dict[str, int] = {}
    src: dict[str, str] = {}
    tgt: dict[str, str] = {}
    uf = _UnionFind()
    for l, n in enumerate(table.upper):
        d_l, s_l, t_l = _disk_cells(n, prefix=str(l))
        dims.update(d_l)
        src.update(s_l)
        tgt.update(t_l)
        for cell in d_l:
            uf.add(cell)

    for l, d in enumerate(table.lower):
        # the glued disk sits as the s-side of summand l and the t-side of
        # summand l+1; its own boundary cells are shared by both chains
        left_top = f"{l}s{d}" if d < table.upper[l] else f"{l}g{d}"
        right_top = f"{l + 1}t{d}" if d < table.upper[l + 1] else f"{l + 1}g{d}"
        uf.union(left_top, right_top)
        for k in range(d):
            uf.union(f"{l}s{k}", f"{l + 1}s{k}")
            uf.union(f"{l}t{k}", f"{l + 1}t{k}")

    rep = {cell: uf.find(cell) for cell in dims}
    q_dims: dict[str, int] = {}
    q_src: dict[str, str] = {}
    q_tgt: dict[str, str] = {}
    for cell, d in dims.items():
        r = rep[cell]
        q_dims[r] = d
        if d > 0:
            q_src[r] = rep[src[cell]]
            q_tgt[r] = rep[tgt[cell]]
    gs = GlobSet(q_dims, q_src, q_tgt)

    injections = []
    for l, n in enumerate(table.upper):
        d_l, _, _ = _disk_cells(n)
        mapping = {cell: rep[f"{l}{cell}"] for cell in d_l}
        injections.append(GlobMap(disk(n, dim_bound), gs, mapping))
    result = GlobularSum(table, gs, tuple(injections))
    with _SUM_LOCK:
        _SUM_CACHE.setdefault(key, result)
    return result


# ---------------------------------------------------------------------------
# maps


class GlobMap:
    """A map of globular sets: a dimension-preserving cell assignment
    commuting with sources and targets."""

    __slots__ = ("dom", "cod", "mapping", "_hash")

    def __init__(self, dom: GlobSet, cod: GlobSet, mapping: Mapping[str, str]) -> None:
        self.dom = dom
        self.cod = cod
        self.mapping = dict(mapping)
        self._hash: int | None = None
        self._validate()

    def _validate(self) -> None:
        for cell in self.dom.cells():
            if cell not in self.mapping:
                raise ShapeError(f"map not defined on cell {cell!r}")
            image = self.mapping[cell]
            if image not in self.cod:
                raise ShapeError(f"image {image!r} of {cell!r} is not a cell")
            d = self.dom.dim_of(cell)
            if self.cod.dim_of(image) != d:
                raise ShapeError(
                    f"map does not preserve dimension at {cell!r}: "
                    f"{d} vs {self.cod.dim_of(image)}"
                )
            if d > 0:
                if self.mapping[self.dom.src(cell)] != self.cod.src(image):
                    raise ShapeError(f"map does not commute with src at {cell!r}")
                if self.mapping[self.dom.tgt(cell)] != self.cod.tgt(image):
                    raise ShapeError(f"map does not commute with tgt at {cell!r}")
        for cell in self.mapping:
            if cell not in self.dom:
                raise ShapeError(f"map defined on unknown cell {cell!r}")

    def __call__(self, cell: str) -> str:
        return self.mapping[cell]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GlobMap):
            return NotImplemented
        return (
            self.dom == other.dom
            and self.cod == other.cod
            and self.mapping == other.mapping
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.dom, self.cod, frozenset(self.mapping.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"GlobMap({self.dom!r} -> {self.cod!r})"


def identity_map(gs: GlobSet) -> GlobMap:
    return GlobMap(gs, gs, {c: c for c in gs.cells()})


def compose_glob_maps(f: GlobMap, g: GlobMap) -> GlobMap:
    """The composite ``f after g``."""
    if g.cod != f.dom:
        raise DomainMismatch("codomain of the second map must match the first's domain")
    return GlobMap(g.dom, f.cod, {c: f.mapping[g.mapping[c]] for c in g.mapping})


def enumerate_glob_maps(dom: GlobSet, cod: GlobSet) -> Iterator[GlobMap]:
    """All globular maps from ``dom`` to ``cod``, in a stable order.

    Backtracking assigns cells from the top dimension down; boundaries of
    assigned cells are forced, so only unconstrained cells branch.
    """
    order = sorted(dom.cells(), key=lambda c: (-dom.dim_of(c), c))
    candidates = {d: cod.cells(d) for d in range(dom.dim + 1)}

    def propagate(cell: str, image: str, mapping: dict[str, str]) -> list[str] | None:
        """Force boundary assignments; return newly assigned cells or None
        on conflict."""
        added: list[str] = []
        stack = [(cell, image)]
        while stack:
            c, im = stack.pop()
            prev = mapping.get(c)
            if prev is not None:
                if prev != im:
                    for a in added:
                        del mapping[a]
                    return None
                continue
            mapping[c] = im
            added.append(c)
            if dom.dim_of(c) > 0:
                stack.append((dom.src(c), cod.src(im)))
                stack.append((dom.tgt(c), cod.tgt(im)))
        return added

    def rec(idx: int, mapping: dict[str, str]) -> Iterator[GlobMap]:
        while idx < len(order) and order[idx] in mapping:
            idx += 1
        if idx == len(order):
            yield GlobMap(dom, cod, mapping)
            return
        cell = order[idx]
        for image in candidates.get(dom.dim_of(cell), ()):
            added = propagate(cell, image, mapping)
            if added is None:
                continue
            yield from rec(idx + 1, mapping)
            for a in added:
                del mapping[a]

    yield from rec(0, {})
