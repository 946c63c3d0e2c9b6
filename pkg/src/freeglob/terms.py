"""Arrow terms over a globular context.

Terms denote cells of the free strict infinity-groupoid on a finite
globular set.  There are four constructors: generators, identities,
inverses, and binary composition at a level.  ``Comp(j, u, v)`` glues
``v`` and then ``u`` along their shared j-dimensional boundary, so it is
composable exactly when the j-source of ``u`` matches the j-target of
``v``.

A :class:`Context` fixes the generator cells.  Besides the cells of a
globular set it may contain formal cells, whose sources and targets are
terms over the preceding cells; these support presentations where new
cells fill equations between existing arrows.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Mapping, Sequence

from .globset import (
    DEFAULT_DIM_BOUND,
    DimBoundExceeded,
    GlobSet,
    Table,
    disk,
    globular_sum,
)

SRC = "src"
TGT = "tgt"


class TermTypeError(ValueError):
    """A term failed to type-check over its context."""


class UnknownCell(TermTypeError):
    pass


class CompNotComposable(TermTypeError):
    """Composability check failed.  ``verdict_kind`` records whether the
    boundary comparison came back distinct or merely undecided."""

    def __init__(self, msg: str, verdict_kind: str = "distinct") -> None:
        super().__init__(msg)
        self.verdict_kind = verdict_kind


class DimMismatch(TermTypeError):
    pass


class InvOnObject(TermTypeError):
    pass


class ZeroDimensional(TermTypeError):
    """An object was used where a positive-dimensional cell is required."""


class IncompatibleAssignment(TermTypeError):
    """A substitution sent a generator to a term with the wrong type."""


class MalformedFormalCell(TermTypeError):
    pass


# ---------------------------------------------------------------------------
# term constructors


class Term:
    """Immutable term; hashes and node counts are computed on construction."""

    __slots__ = ("_hash", "size")
    _hash: int
    size: int

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return to_text(self)


class Gen(Term):
    __slots__ = ("cell",)
    __match_args__ = ("cell",)

    def __init__(self, cell: str) -> None:
        self.cell = cell
        self.size = 1
        self._hash = hash(("g", cell))

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return type(other) is Gen and other.cell == self.cell

    __hash__ = Term.__hash__


class Id(Term):
    __slots__ = ("body",)
    __match_args__ = ("body",)

    def __init__(self, body: Term) -> None:
        self.body = body
        self.size = body.size + 1
        self._hash = hash(("i", body._hash))

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return (
            type(other) is Id
            and other._hash == self._hash
            and other.body == self.body
        )

    __hash__ = Term.__hash__


class Inv(Term):
    __slots__ = ("body",)
    __match_args__ = ("body",)

    def __init__(self, body: Term) -> None:
        self.body = body
        self.size = body.size + 1
        self._hash = hash(("v", body._hash))

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return (
            type(other) is Inv
            and other._hash == self._hash
            and other.body == self.body
        )

    __hash__ = Term.__hash__


class Comp(Term):
    """Composition at level ``level``; ``v`` is the first factor."""

    __slots__ = ("level", "u", "v")
    __match_args__ = ("level", "u", "v")

    def __init__(self, level: int, u: Term, v: Term) -> None:
        self.level = level
        self.u = u
        self.v = v
        self.size = u.size + v.size + 1
        self._hash = hash(("c", level, u._hash, v._hash))

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return (
            type(other) is Comp
            and other._hash == self._hash
            and other.level == self.level
            and other.u == self.u
            and other.v == self.v
        )

    __hash__ = Term.__hash__


def children(term: Term) -> tuple[Term, ...]:
    if isinstance(term, (Id, Inv)):
        return (term.body,)
    if isinstance(term, Comp):
        return (term.u, term.v)
    return ()


def subterm_at(term: Term, pos: tuple[int, ...]) -> Term:
    for i in pos:
        term = children(term)[i]
    return term


def splice(term: Term, pos: tuple[int, ...], sub: Term) -> Term:
    """Replace the subterm at ``pos`` by ``sub``."""
    if not pos:
        return sub
    head, rest = pos[0], pos[1:]
    if isinstance(term, Id):
        return Id(splice(term.body, rest, sub))
    if isinstance(term, Inv):
        return Inv(splice(term.body, rest, sub))
    if isinstance(term, Comp):
        if head == 0:
            return Comp(term.level, splice(term.u, rest, sub), term.v)
        return Comp(term.level, term.u, splice(term.v, rest, sub))
    raise IndexError(f"position {pos} does not exist")


def positions(term: Term) -> Iterator[tuple[int, ...]]:
    """All subterm positions, outermost first."""
    stack: list[tuple[tuple[int, ...], Term]] = [((), term)]
    while stack:
        pos, t = stack.pop()
        yield pos
        for i, c in enumerate(children(t)):
            stack.append((pos + (i,), c))


def gen_support(term: Term) -> frozenset[str]:
    cells: set[str] = set()
    stack = [term]
    while stack:
        t = stack.pop()
        if isinstance(t, Gen):
            cells.add(t.cell)
        else:
            stack.extend(children(t))
    return frozenset(cells)


def id_pow(term: Term, k: int) -> Term:
    for _ in range(k):
        term = Id(term)
    return term


def id_depth(term: Term) -> int:
    k = 0
    while isinstance(term, Id):
        term = term.body
        k += 1
    return k


def to_text(term: Term) -> str:
    """Render a term; ``parse_surface`` in :mod:`freeglob.cli` inverts this.

    Composition prints infix and associates to the left, so only a
    composite second factor needs parentheses.
    """
    if isinstance(term, Gen):
        return term.cell
    if isinstance(term, Id):
        return f"id({to_text(term.body)})"
    if isinstance(term, Inv):
        return f"inv({to_text(term.body)})"
    if isinstance(term, Comp):
        left = to_text(term.u)
        right = to_text(term.v)
        if isinstance(term.v, Comp):
            right = f"({right})"
        return f"{left} *{term.level} {right}"
    raise TypeError(f"not a term: {term!r}")


def elaborate(tree: object, ctx: "Context") -> Term:
    """Build a term from a surface tree, inserting identity padding.

    A string names a generator (or, as ``1_c`` for a cell ``c`` not itself
    named ``1_c``, the identity on that generator); ``("id", t)`` and
    ``("inv", t)`` wrap; ``(j, u, v)`` composes at level ``j`` through
    :func:`comp_at`, so factors of unequal dimension are padded up to the
    greater one.
    """
    if isinstance(tree, Term):
        return tree
    if isinstance(tree, str):
        if ctx.has_cell(tree):
            return Gen(tree)
        if tree.startswith("1_") and ctx.has_cell(tree[2:]):
            return Id(Gen(tree[2:]))
        raise UnknownCell(f"unknown cell {tree!r}")
    if isinstance(tree, tuple):
        if len(tree) == 2 and tree[0] == "id":
            return Id(elaborate(tree[1], ctx))
        if len(tree) == 2 and tree[0] == "inv":
            return Inv(elaborate(tree[1], ctx))
        if len(tree) == 3 and isinstance(tree[0], int):
            return comp_at(tree[0], elaborate(tree[1], ctx), elaborate(tree[2], ctx), ctx)
    raise ValueError(f"cannot elaborate {tree!r}")


# ---------------------------------------------------------------------------
# contexts


@dataclass(frozen=True)
class FormalCell:
    """A generator adjoined on top of a context; for ``dim >= 1`` the
    boundary is a pair of parallel terms over the preceding cells."""

    name: str
    dim: int
    src: Term | None = None
    tgt: Term | None = None


class Context:
    """Generator cells available to terms.

    ``base`` is a finite globular set; ``formal`` lists adjoined cells in
    dependency order.  Each context carries caches keyed by (immutable)
    terms, so reusing one context across many queries is much faster than
    rebuilding it.  Contexts compare by value but are deliberately
    unhashable.
    """

    __slots__ = (
        "base",
        "formal",
        "dim_bound",
        "_formal_by_name",
        "tc_cache",
        "nf_cache",
        "eq_cache",
        "dim_cache",
    )

    def __init__(
        self,
        base: GlobSet,
        formal: Sequence[FormalCell] = (),
        dim_bound: int = DEFAULT_DIM_BOUND,
        _checked: bool = False,
    ) -> None:
        self.base = base
        self.formal = tuple(formal)
        self.dim_bound = dim_bound
        self._formal_by_name = {fc.name: fc for fc in self.formal}
        self.tc_cache: dict[Term, TypedTerm] = {}
        self.nf_cache: dict = {}
        self.eq_cache: dict = {}
        self.dim_cache: dict[Term, int] = {}
        if not _checked:
            self._validate()

    def _validate(self) -> None:
        taken = set(self.base.cells())
        for i, fc in enumerate(self.formal):
            if not fc.name or any(ch.isspace() for ch in fc.name):
                raise MalformedFormalCell(f"bad formal cell name {fc.name!r}")
            if fc.name in taken:
                raise MalformedFormalCell(f"cell name {fc.name!r} already in use")
            if fc.dim < 0:
                raise MalformedFormalCell(f"formal cell {fc.name!r} has negative dimension")
            if fc.dim > self.dim_bound:
                raise DimBoundExceeded(
                    f"formal cell {fc.name!r} exceeds dimension bound {self.dim_bound}"
                )
            if fc.dim == 0:
                if fc.src is not None or fc.tgt is not None:
                    raise MalformedFormalCell(f"object {fc.name!r} must not have a boundary")
            else:
                if fc.src is None or fc.tgt is None:
                    raise MalformedFormalCell(f"formal cell {fc.name!r} lacks a boundary")
                prefix = Context(self.base, self.formal[:i], self.dim_bound, _checked=True)
                ts = type_check(fc.src, prefix)
                tt = type_check(fc.tgt, prefix)
                if ts.dim != fc.dim - 1 or tt.dim != fc.dim - 1:
                    raise MalformedFormalCell(
                        f"boundary of {fc.name!r} must have dimension {fc.dim - 1}, "
                        f"got {ts.dim} and {tt.dim}"
                    )
                if fc.dim >= 2:
                    from .rewrite import equal_terms

                    for side in (SRC, TGT):
                        a = boundary(fc.src, side, prefix)
                        b = boundary(fc.tgt, side, prefix)
                        if not equal_terms(prefix, a, b).is_equal:
                            raise MalformedFormalCell(
                                f"boundary terms of {fc.name!r} are not parallel"
                            )
            taken.add(fc.name)

    # contexts carry mutable caches: compare by value, never hash
    __hash__ = None  # type: ignore[assignment]

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Context):
            return NotImplemented
        return (
            self.base == other.base
            and self.formal == other.formal
            and self.dim_bound == other.dim_bound
        )

    def __repr__(self) -> str:
        extra = f" +{len(self.formal)} formal" if self.formal else ""
        return f"Context({self.base!r}{extra})"

    def extend(self, *cells: FormalCell) -> "Context":
        return Context(self.base, self.formal + cells, self.dim_bound)

    def has_cell(self, name: str) -> bool:
        return name in self._formal_by_name or name in self.base

    def cell_dim(self, name: str) -> int:
        fc = self._formal_by_name.get(name)
        if fc is not None:
            return fc.dim
        if name in self.base:
            return self.base.dim_of(name)
        raise UnknownCell(f"unknown cell {name!r}")

    def cell_boundary(self, name: str, side: str) -> Term:
        fc = self._formal_by_name.get(name)
        if fc is not None:
            if fc.dim == 0:
                raise ZeroDimensional(f"object {name!r} has no boundary")
            return fc.src if side == SRC else fc.tgt  # type: ignore[return-value]
        if name in self.base:
            if self.base.dim_of(name) == 0:
                raise ZeroDimensional(f"object {name!r} has no boundary")
            b = self.base.src(name) if side == SRC else self.base.tgt(name)
            return Gen(b)
        raise UnknownCell(f"unknown cell {name!r}")

    def cells(self) -> list[str]:
        return self.base.cells() + [fc.name for fc in self.formal]


@lru_cache(maxsize=None)
def disk_context(n: int, dim_bound: int = DEFAULT_DIM_BOUND) -> Context:
    return Context(disk(n, dim_bound), dim_bound=dim_bound)


@lru_cache(maxsize=None)
def sum_context(table: Table, dim_bound: int = DEFAULT_DIM_BOUND) -> Context:
    return Context(globular_sum(table, dim_bound).gs, dim_bound=dim_bound)


# ---------------------------------------------------------------------------
# dimensions and boundaries


def term_dim(term: Term, ctx: Context) -> int:
    if isinstance(term, Gen):
        return ctx.cell_dim(term.cell)
    d = ctx.dim_cache.get(term)
    if d is not None:
        return d
    if isinstance(term, Id):
        d = term_dim(term.body, ctx) + 1
    elif isinstance(term, Inv):
        d = term_dim(term.body, ctx)
    elif isinstance(term, Comp):
        d = max(term_dim(term.u, ctx), term_dim(term.v, ctx))
    else:
        raise TypeError(f"not a term: {term!r}")
    ctx.dim_cache[term] = d
    return d


def boundary(term: Term, side: str, ctx: Context) -> Term:
    """One-step boundary.  Defined for any structurally sane term; it does
    not require the term to type-check."""
    if isinstance(term, Gen):
        return ctx.cell_boundary(term.cell, side)
    if isinstance(term, Id):
        return term.body
    if isinstance(term, Inv):
        return boundary(term.body, TGT if side == SRC else SRC, ctx)
    if isinstance(term, Comp):
        d = term_dim(term, ctx)
        if term.level == d - 1:
            inner = term.v if side == SRC else term.u
            return boundary(inner, side, ctx)
        return Comp(term.level, boundary(term.u, side, ctx), boundary(term.v, side, ctx))
    raise TypeError(f"not a term: {term!r}")


def iterated_boundary(term: Term, k: int, side: str, ctx: Context) -> Term:
    """The k-dimensional source or target.  Above the term's own dimension
    this pads with identities, making the result a k-cell in every case."""
    d = term_dim(term, ctx)
    if k >= d:
        return id_pow(term, k - d)
    for _ in range(d - k):
        term = boundary(term, side, ctx)
    return term


def comp_at(j: int, u: Term, v: Term, ctx: Context) -> Term:
    """Compose at level ``j``, padding the lower-dimensional factor with
    identities so both sides have equal dimension."""
    du = term_dim(u, ctx)
    dv = term_dim(v, ctx)
    if j >= min(du, dv):
        raise DimMismatch(
            f"cannot compose at level {j}: factors have dimensions {du} and {dv}"
        )
    d = max(du, dv)
    return Comp(j, id_pow(u, d - du), id_pow(v, d - dv))


# ---------------------------------------------------------------------------
# type checking


@dataclass(frozen=True)
class TypedTerm:
    term: Term
    dim: int
    src: Term | None
    tgt: Term | None


def type_check(term: Term, ctx: Context) -> TypedTerm:
    """Check a term over a context and return its boundary.

    Composability of ``Comp`` nodes is decided by the equality engine at
    its default budget; an undecided boundary comparison is reported as
    not composable.  Successes are cached on the context.
    """
    cached = ctx.tc_cache.get(term)
    if cached is not None:
        return cached

    if isinstance(term, Gen):
        d = ctx.cell_dim(term.cell)
        if d == 0:
            tt = TypedTerm(term, 0, None, None)
        else:
            tt = TypedTerm(
                term, d, ctx.cell_boundary(term.cell, SRC), ctx.cell_boundary(term.cell, TGT)
            )
    elif isinstance(term, Id):
        inner = type_check(term.body, ctx)
        if inner.dim + 1 > ctx.dim_bound:
            raise DimBoundExceeded(
                f"identity would exceed dimension bound {ctx.dim_bound}"
            )
        tt = TypedTerm(term, inner.dim + 1, term.body, term.body)
    elif isinstance(term, Inv):
        inner = type_check(term.body, ctx)
        if inner.dim == 0:
            raise InvOnObject(f"cannot invert the object {to_text(term.body)}")
        tt = TypedTerm(term, inner.dim, inner.tgt, inner.src)
    elif isinstance(term, Comp):
        tu = type_check(term.u, ctx)
        tv = type_check(term.v, ctx)
        if tu.dim != tv.dim:
            raise DimMismatch(
                f"composition factors have dimensions {tu.dim} and {tv.dim}"
            )
        d = tu.dim
        if not (0 <= term.level < d):
            raise DimMismatch(
                f"level {term.level} is not below the factor dimension {d}"
            )
        from .rewrite import equal_terms

        lhs = iterated_boundary(term.u, term.level, SRC, ctx)
        rhs = iterated_boundary(term.v, term.level, TGT, ctx)
        verdict = equal_terms(ctx, lhs, rhs)
        if not verdict.is_equal:
            raise CompNotComposable(
                f"at level {term.level}: {to_text(lhs)} vs {to_text(rhs)} "
                f"({verdict.kind})",
                verdict_kind=verdict.kind,
            )
        tt = TypedTerm(term, d, boundary(term, SRC, ctx), boundary(term, TGT, ctx))
    else:
        raise TypeError(f"not a term: {term!r}")

    ctx.tc_cache[term] = tt
    return tt


def signed_gen_count(term: Term, ctx: Context) -> dict[str, int]:
    """Net occurrence count of each top-dimensional generator, counting an
    occurrence under an odd number of inversions as -1.  Equal terms have
    equal counts, so a mismatch certifies inequality."""
    top = term_dim(term, ctx)
    counts: dict[str, int] = {}

    def walk(t: Term, sign: int) -> None:
        if isinstance(t, Gen):
            if ctx.cell_dim(t.cell) == top:
                counts[t.cell] = counts.get(t.cell, 0) + sign
        elif isinstance(t, Id):
            walk(t.body, sign)
        elif isinstance(t, Inv):
            walk(t.body, -sign)
        elif isinstance(t, Comp):
            walk(t.u, sign)
            walk(t.v, sign)

    walk(term, 1)
    return {c: n for c, n in counts.items() if n != 0}


def substitute(
    term: Term,
    assignment: Mapping[str, Term],
    src_ctx: Context,
    dst_ctx: Context,
    validate: bool = True,
) -> Term:
    """Replace generators by terms.  Cells missing from ``assignment``
    pass through unchanged and must exist in ``dst_ctx``.

    With ``validate`` the assignment is checked to be type-preserving:
    each image must have the dimension of its cell, and its boundary must
    equal the substituted boundary of the cell (by the equality engine).
    """
    if validate:
        from .rewrite import equal_terms

        for name, image in assignment.items():
            d = src_ctx.cell_dim(name)
            it = type_check(image, dst_ctx)
            if it.dim != d:
                raise IncompatibleAssignment(
                    f"cell {name!r} has dimension {d}, image has {it.dim}"
                )
            if d >= 1:
                for side in (SRC, TGT):
                    want = substitute(
                        src_ctx.cell_boundary(name, side),
                        assignment,
                        src_ctx,
                        dst_ctx,
                        validate=False,
                    )
                    got = boundary(image, side, dst_ctx)
                    if not equal_terms(dst_ctx, want, got).is_equal:
                        raise IncompatibleAssignment(
                            f"boundary of image of {name!r} does not match: "
                            f"{to_text(got)} vs {to_text(want)}"
                        )

    memo: dict[Term, Term] = {}

    def walk(t: Term) -> Term:
        out = memo.get(t)
        if out is not None:
            return out
        if isinstance(t, Gen):
            out = assignment.get(t.cell)
            if out is None:
                if not dst_ctx.has_cell(t.cell):
                    raise UnknownCell(
                        f"cell {t.cell!r} is not assigned and not in the target context"
                    )
                out = t
        elif isinstance(t, Id):
            out = Id(walk(t.body))
        elif isinstance(t, Inv):
            out = Inv(walk(t.body))
        elif isinstance(t, Comp):
            out = Comp(t.level, walk(t.u), walk(t.v))
        else:
            raise TypeError(f"not a term: {t!r}")
        memo[t] = out
        return out

    return walk(term)
