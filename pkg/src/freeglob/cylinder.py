"""Cylinders: combinatorial homotopies between parallel arrows.

An n-cylinder from u to v consists of side arrows in every dimension from 1
to n (a flat and a sharp one each) and a top arrow one dimension up.  Its
validity is a family of boundary equations: the i-source of each component
must equal the fold of the lower sharp sides onto the matching boundary of
u, and the i-target the fold of the lower flat sides onto the boundary of
v.  We store components unreduced and decide every equation through the
rewrite engine, so a validity report doubles as a bundle of equational
certificates.

The second half of the module builds the contraction cylinder of a disk:
the one that connects the top generator to the iterated identity on its
initial object.  Its sharp sides are inverted side cells, corrected below
the top dimension by whiskered inverses of the lower side cells.  Checking
it with the default search budget alone would be hopeless (the distance
between the two sides of an equation grows quadratically with the stage),
so ``verify_contraction`` first proves the telescope collapse and the
chain-absorption steps, then feeds those certificates into the validity
check as hints.  Every reported Equal verdict still carries one replayable
trace from its left side to its right side.
"""

from __future__ import annotations

from dataclasses import dataclass

from .globset import DEFAULT_DIM_BOUND, DimBoundExceeded
from .rewrite import (
    CheckItem,
    CheckReport,
    EqVerdict,
    RewriteTrace,
    SearchBudget,
    _ABSORPTION_BUDGET,
    _chain_equal,
    _disk_ctx,
    _flip_steps,
    _join_traces,
    equal_terms,
    nf,
    verify_inverse_telescope,
)
from .terms import (
    SRC,
    TGT,
    Context,
    Gen,
    Id,
    Inv,
    Term,
    TypedTerm,
    boundary,
    comp_at,
    id_pow,
    iterated_boundary,
    term_dim,
    type_check,
)

__all__ = [
    "ComponentDimMismatch",
    "ContractibilityWitness",
    "Cylinder",
    "ZeroCylinder",
    "contractibility_witness",
    "contraction_cylinder",
    "corrected_inverse",
    "cyl_boundary",
    "endpoints",
    "hybrid_inverse_forms",
    "identity_cylinder",
    "side_cell",
    "validate_cylinder",
    "verify_contraction",
]


class ComponentDimMismatch(ValueError):
    """A cylinder component has the wrong dimension for its slot."""


class ZeroCylinder(ValueError):
    """A 0-cylinder has no boundary cylinders."""


# ---------------------------------------------------------------------------
# side cells of a disk and their corrected inverses


def side_cell(n: int, k: int, flag: str) -> Term:
    """The k-dimensional source ("flat") or target ("sharp") cell of the
    n-disk generator, as a term; at k = n this is the generator itself and
    at k = n+1 its identity."""
    if flag not in ("flat", "sharp"):
        raise ValueError(f"flag must be 'flat' or 'sharp', not {flag!r}")
    if not 0 <= k <= n + 1:
        raise ValueError(f"no side cell at dimension {k} on the {n}-disk")
    if k >= n:
        return id_pow(Gen(f"g{n}"), k - n)
    return Gen(f"s{k}" if flag == "flat" else f"t{k}")


def corrected_inverse(n: int, k: int) -> Term:
    """Inverse of the k-th flat side cell of the n-disk, whiskered by the
    inverses of all lower flat side cells.

    The correction makes the arrow composable onto the sharp chain one
    stage down, which the bare inverse is not once k exceeds 1.
    """
    ctx = _disk_ctx(n)
    acc: Term = Inv(side_cell(n, k, "flat"))
    for m in range(k - 1, 0, -1):
        acc = comp_at(m - 1, Inv(side_cell(n, m, "flat")), acc, ctx)
    return acc


def hybrid_inverse_forms(ctx: Context, n: int, i: int, j: int, flag: str) -> list[Term]:
    """Interpolate between the corrected-inverse fold and the bare-inverse
    fold onto the stage-(i-1) side cell.

    Form m uses bare inverses for the first m factors and corrected ones
    above; adjacent forms are a bounded number of exchange moves apart,
    while the two ends are quadratically far from each other.  The first
    form is the all-corrected chain, the last the all-bare one.
    """
    base = side_cell(n, i - 1, flag)
    forms: list[Term] = []
    for m in range(0, j + 1):
        acc = base
        for k in range(m, 0, -1):
            acc = comp_at(k - 1, Inv(side_cell(n, k, "flat")), acc, ctx)
        for k in range(m + 1, j + 1):
            acc = comp_at(k - 1, corrected_inverse(n, k), acc, ctx)
        forms.append(acc)
    return forms


# ---------------------------------------------------------------------------
# cylinders


@dataclass
class Cylinder:
    """An n-cylinder between the parallel n-arrows ``from_arrow`` and
    ``to_arrow``: one flat and one sharp side per dimension 1..n, plus a
    top arrow of dimension n+1.  Components are stored unreduced."""

    ctx: Context
    from_arrow: Term
    to_arrow: Term
    flats: tuple[Term, ...]
    sharps: tuple[Term, ...]
    top: Term

    @property
    def n(self) -> int:
        return len(self.flats)

    def components(self) -> tuple:
        return (self.from_arrow, self.to_arrow, self.flats, self.sharps, self.top)


def _unwrap(u) -> Term:
    return u.term if isinstance(u, TypedTerm) else u


def validate_cylinder(
    z: Cylinder,
    budget: SearchBudget | None = None,
    hints: tuple[RewriteTrace, ...] = (),
) -> CheckReport:
    """Check every boundary equation of a cylinder through the equality
    engine and report one verdict per equation.

    ``hints`` may carry previously proved certificates; an equation whose
    two sides normalize onto a hint's endpoints is settled by splicing the
    hint instead of searching.  Deeply nested valid cylinders (such as the
    contraction cylinder) stay Unknown without the right hints.
    """
    ctx = z.ctx
    n = z.n
    if len(z.sharps) != n:
        raise ComponentDimMismatch(
            f"{n} flat sides but {len(z.sharps)} sharp sides"
        )
    labeled = [
        ("from", z.from_arrow, n),
        ("to", z.to_arrow, n),
        ("top", z.top, n + 1),
    ]
    labeled += [(f"flat {i}", z.flats[i - 1], i) for i in range(1, n + 1)]
    labeled += [(f"sharp {i}", z.sharps[i - 1], i) for i in range(1, n + 1)]
    for label, t, want in labeled:
        d = term_dim(t, ctx)
        if d != want:
            raise ComponentDimMismatch(
                f"{label} component has dimension {d}, expected {want}"
            )
        type_check(t, ctx)

    items: list[CheckItem] = []
    for i in range(1, n + 2):
        # at i = n+1 the two flavors give the same equations on the top
        flags = ("flat", "sharp") if i <= n else ("top",)
        for flag in flags:
            if flag == "top":
                comp = z.top
                side = SRC
                label = "top"
            else:
                comp = (z.flats if flag == "flat" else z.sharps)[i - 1]
                side = SRC if flag == "flat" else TGT
                label = f"i={i} {flag}"
            src_rhs = iterated_boundary(z.from_arrow, i - 1, side, ctx)
            tgt_rhs = iterated_boundary(z.to_arrow, i - 1, side, ctx)
            for k in range(1, i):
                src_rhs = comp_at(k - 1, z.sharps[k - 1], src_rhs, ctx)
                tgt_rhs = comp_at(k - 1, tgt_rhs, z.flats[k - 1], ctx)
            items.append(
                CheckItem(
                    f"source {label}",
                    _decide(ctx, boundary(comp, SRC, ctx), src_rhs, budget, hints),
                )
            )
            items.append(
                CheckItem(
                    f"target {label}",
                    _decide(ctx, boundary(comp, TGT, ctx), tgt_rhs, budget, hints),
                )
            )
    return CheckReport(f"cylinder validity, n={n}", tuple(items))


def _decide(
    ctx: Context,
    lhs: Term,
    rhs: Term,
    budget: SearchBudget | None,
    hints: tuple[RewriteTrace, ...],
) -> EqVerdict:
    # a hint settles the equation when its endpoints match up to normal form
    nl, nr = nf(ctx, lhs), nf(ctx, rhs)
    for h in hints:
        hs, hr = nf(ctx, h.start), nf(ctx, h.result)
        if nl == hs and nr == hr:
            mid = tuple(h.steps)
            a, b = h.start, h.result
        elif nl == hr and nr == hs:
            mid = _flip_steps(h.steps)
            a, b = h.result, h.start
        else:
            continue
        head = _join_traces(ctx, lhs, a, ())
        tail = _join_traces(ctx, b, rhs, ())
        trace = RewriteTrace(lhs, tuple(head.steps) + mid + tuple(tail.steps), rhs)
        return EqVerdict("equal", detail="via supplied certificate", trace=trace)
    return equal_terms(ctx, lhs, rhs, budget)


def identity_cylinder(ctx: Context, u) -> Cylinder:
    """The cylinder witnessing that u is homotopic to itself: every side is
    the identity of the matching boundary of u, the top the identity of u."""
    term = _unwrap(u)
    n = type_check(term, ctx).dim
    flats = tuple(
        Id(iterated_boundary(term, i - 1, SRC, ctx)) for i in range(1, n + 1)
    )
    sharps = tuple(
        Id(iterated_boundary(term, i - 1, TGT, ctx)) for i in range(1, n + 1)
    )
    return Cylinder(ctx, term, term, flats, sharps, Id(term))


def cyl_boundary(z: Cylinder, side: str) -> Cylinder:
    """The (n-1)-cylinder between the boundaries of the endpoints; its top
    is the n-th flat side (source) or sharp side (target), the rest is
    shared."""
    n = z.n
    if n == 0:
        raise ZeroCylinder("a 0-cylinder has no boundary cylinders")
    return Cylinder(
        z.ctx,
        boundary(z.from_arrow, side, z.ctx),
        boundary(z.to_arrow, side, z.ctx),
        z.flats[: n - 1],
        z.sharps[: n - 1],
        z.flats[n - 1] if side == SRC else z.sharps[n - 1],
    )


def endpoints(z: Cylinder) -> tuple[TypedTerm, TypedTerm]:
    """The pair (v, u) of arrows a cylinder z : u -> v connects."""
    return type_check(z.to_arrow, z.ctx), type_check(z.from_arrow, z.ctx)


# ---------------------------------------------------------------------------
# the contraction cylinder of a disk


def contraction_cylinder(n: int) -> Cylinder:
    """The cylinder that contracts the n-disk generator onto the iterated
    identity of its initial object.

    Flat sides and top are iterated identities on the base object; sharp
    side i is the corrected inverse of the i-th side cell.
    """
    if n + 1 > DEFAULT_DIM_BOUND:
        raise DimBoundExceeded(
            f"the top arrow would have dimension {n + 1}, over the bound "
            f"{DEFAULT_DIM_BOUND}"
        )
    ctx = _disk_ctx(n)
    base = side_cell(n, 0, "flat")
    flats = tuple(id_pow(base, i) for i in range(1, n + 1))
    sharps = tuple(corrected_inverse(n, i) for i in range(1, n + 1))
    return Cylinder(ctx, Gen(f"g{n}"), id_pow(base, n), flats, sharps, id_pow(base, n + 1))


def verify_contraction(n: int, budget: SearchBudget | None = None) -> CheckReport:
    """Full check of the contraction cylinder: the telescope collapse at
    every stage, every boundary equation of the cylinder, and the collapse
    of the corrected inverse one dimension above the top.

    The telescope and absorption certificates are proved first and then
    spliced into the validity equations, whose two sides are otherwise far
    beyond a flat search.
    """
    if budget is None:
        budget = _ABSORPTION_BUDGET
    c = contraction_cylinder(n)
    ctx = c.ctx

    extra: list[CheckItem] = []
    hints: list[RewriteTrace] = []

    telescope = verify_inverse_telescope(n, budget)
    for idx, item in enumerate(telescope.items, start=1):
        extra.append(CheckItem(f"inverse telescope stage {idx}", item.verdict))
        if item.verdict.trace is not None:
            hints.append(item.verdict.trace)

    for i in range(1, n + 2):
        for flag in ("flat", "sharp"):
            forms = hybrid_inverse_forms(ctx, n, i, i - 1, flag)
            v = _chain_equal(ctx, forms, budget)
            if not v.is_equal:
                extra.append(CheckItem(f"chain certificate i={i} {flag}", v))
                continue
            hints.append(v.trace)
            if flag != "flat":
                continue
            tele = telescope.items[i - 1].verdict.trace
            if tele is not None:
                # iterated identity -> bare fold -> corrected fold
                hints.append(
                    RewriteTrace(
                        tele.result,
                        _flip_steps(tele.steps) + _flip_steps(v.trace.steps),
                        v.trace.start,
                    )
                )

    collapse = equal_terms(
        ctx,
        corrected_inverse(n, n + 1),
        id_pow(side_cell(n, 0, "flat"), n + 1),
        budget,
    )

    validity = validate_cylinder(c, budget, hints=tuple(hints))
    items = (
        validity.items
        + tuple(extra)
        + (CheckItem("top corrected inverse collapses to identity", collapse),)
    )
    return CheckReport(f"disk contraction, n={n}", items)


@dataclass
class ContractibilityWitness:
    cyl: Cylinder
    id_endpoint: bool
    const_endpoint: bool


def contractibility_witness(n: int) -> ContractibilityWitness:
    """Package the contraction cylinder with its two endpoint checks: one
    endpoint is the disk generator on the nose, the other is equal to the
    iterated identity on the base object."""
    cyl = contraction_cylinder(n)
    v_end, u_end = endpoints(cyl)
    id_endpoint = u_end.term == Gen(f"g{n}")
    const = id_pow(side_cell(n, 0, "flat"), n)
    const_endpoint = equal_terms(cyl.ctx, v_end.term, const).is_equal
    return ContractibilityWitness(cyl, id_endpoint, const_endpoint)
