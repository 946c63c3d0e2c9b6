"""Desk-scale homotopy invariants of free groupoids on globular sets.

Everything invertible makes dimension-zero and dimension-one questions
graph questions: path components are decided by union-find and the
fundamental group of the free groupoid on a graph is free of rank
E - V + C.  Above dimension one no such normal form exists, so evidence
is witness-based: ``connect_arrow`` searches for an arrow between two
parallel terms one dimension up, which is exactly what contractibility
asks for.

The search composes atoms (generators one dimension above the endpoints,
their inverses, and identity paddings of lower generators) along the top
level as paths between normal forms of boundaries, interleaved with
rounds that close the atom pool under lower-level composition.  A
rational solvability check on the endpoint generator counts is computed
up front: infeasibility is reported as extra evidence next to an
exhausted search, never as a nonexistence claim by itself.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .globset import DimBoundExceeded, GlobSet
from .rewrite import (
    DEFAULT_BUDGET,
    EqVerdict,
    SearchBudget,
    equal_terms,
    nf,
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
    comp_at,
    id_pow,
    iterated_boundary,
    signed_gen_count,
    term_dim,
    to_text,
    type_check,
)

__all__ = [
    "ConnectBudget",
    "ConnectResult",
    "NotParallel",
    "connect_arrow",
    "pi0",
    "pi1_free_rank",
]


class NotParallel(ValueError):
    """The two endpoints do not share a boundary."""


# ---------------------------------------------------------------------------
# graph-level invariants


def pi0(gs: GlobSet) -> tuple[tuple[str, ...], ...]:
    """Path components of the free groupoid on ``gs``: objects connected
    by chains of 1-cells, in either direction."""
    parent = {c: c for c in gs.cells(0)}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in gs.cells(1):
        rx, ry = find(gs.src(e)), find(gs.tgt(e))
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)
    comps: dict[str, list[str]] = {}
    for c in gs.cells(0):
        comps.setdefault(find(c), []).append(c)
    return tuple(sorted(tuple(sorted(v)) for v in comps.values()))


def pi1_free_rank(gs: GlobSet) -> int:
    """Rank of the fundamental group of the free groupoid on the 1-truncation
    of ``gs``: one free generator per edge outside a spanning forest."""
    v = len(gs.cells(0))
    e = len(gs.cells(1))
    c = len(pi0(gs))
    return e - v + c


# ---------------------------------------------------------------------------
# connecting arrows


@dataclass(frozen=True)
class ConnectBudget:
    """Bounds for the connecting-arrow search: ``rounds`` of pool closure,
    a cap on distinct candidate arrows, and the equality budget used for
    the final boundary verification."""

    rounds: int = 3
    node_cap: int = 4096
    eq: SearchBudget = DEFAULT_BUDGET

    def __post_init__(self) -> None:
        if self.rounds < 1 or self.node_cap < 1:
            raise ValueError("connect budget bounds must be positive")


DEFAULT_CONNECT_BUDGET = ConnectBudget()


@dataclass(frozen=True)
class ConnectResult:
    """Outcome of a connecting-arrow search.  ``found`` carries the arrow
    and the verified pair of boundary certificates; otherwise ``detail``
    says which bound ran out and whether the endpoint count system was
    even rationally solvable."""

    kind: str
    h: TypedTerm | None = None
    certificate: tuple[EqVerdict, EqVerdict] | None = None
    detail: str = ""
    nodes: int = 0

    @property
    def is_found(self) -> bool:
        return self.kind == "found"


def connect_arrow(ctx: Context, u, v, budget: ConnectBudget | None = None) -> ConnectResult:
    """Search for an arrow from ``u`` to ``v`` one dimension up.

    The endpoints must be parallel.  Candidates are built from the
    generators one dimension above the endpoints, their inverses, and
    identity paddings of the lower generators, first composed along
    lower levels (round by round), then chained along the top level by a
    path search between boundary normal forms.  Every hit is re-verified
    through the equality engine before it is returned.
    """
    if budget is None:
        budget = DEFAULT_CONNECT_BUDGET
    if isinstance(u, TypedTerm):
        u = u.term
    if isinstance(v, TypedTerm):
        v = v.term
    tu = type_check(u, ctx)
    tv = type_check(v, ctx)
    if tu.dim != tv.dim:
        raise NotParallel(f"endpoint dimensions {tu.dim} and {tv.dim} differ")
    d = tu.dim
    if d + 1 > ctx.dim_bound:
        raise DimBoundExceeded(
            f"a connecting arrow would have dimension {d + 1}, over the bound "
            f"{ctx.dim_bound}"
        )
    if d >= 1:
        for side, a, b in ((SRC, tu.src, tv.src), (TGT, tu.tgt, tv.tgt)):
            pv = equal_terms(ctx, a, b, budget.eq)
            if not pv.is_equal:
                raise NotParallel(f"{side} boundaries do not agree ({pv.kind})")

    if equal_terms(ctx, u, v, budget.eq).is_equal:
        return _verified(ctx, Id(u), u, v, budget, nodes=0)

    feasible = _counts_solvable(ctx, u, v, d)

    pool: list[Term] = []
    seen: set[str] = set()
    for c in sorted(ctx.cells()):
        k = ctx.cell_dim(c)
        if k == d + 1:
            _add(pool, seen, ctx, Gen(c))
            _add(pool, seen, ctx, Inv(Gen(c)))
        elif k <= d:
            _add(pool, seen, ctx, id_pow(Gen(c), d + 1 - k))

    nodes = len(pool)
    for round_no in range(1, budget.rounds + 1):
        chain = _path_search(ctx, pool, u, v, d)
        if chain is not None:
            h = chain[0]
            for a in chain[1:]:
                h = comp_at(d, a, h, ctx)
            return _verified(ctx, h, u, v, budget, nodes)
        if round_no == budget.rounds:
            break
        # close the pool under lower-level composition for the next round
        fresh: list[Term] = []
        for a in pool:
            for b in pool:
                for j in range(0, d):
                    if nodes + len(fresh) >= budget.node_cap:
                        break
                    sa = nf(ctx, iterated_boundary(a, j, SRC, ctx))
                    tb = nf(ctx, iterated_boundary(b, j, TGT, ctx))
                    if sa == tb:
                        cand = comp_at(j, a, b, ctx)
                        if to_text(nf(ctx, cand)) not in seen:
                            fresh.append(cand)
                            seen.add(to_text(nf(ctx, cand)))
        if not fresh:
            detail = "pool closed with no path"
            if not feasible:
                detail += "; endpoint count system is rationally infeasible"
            return ConnectResult("not_found", detail=detail, nodes=nodes)
        pool.extend(fresh)
        pool.sort(key=to_text)
        nodes += len(fresh)
        if nodes >= budget.node_cap:
            break

    detail = "search budget exhausted"
    if not feasible:
        detail += "; endpoint count system is rationally infeasible"
    return ConnectResult("not_found", detail=detail, nodes=nodes)


def _add(pool: list[Term], seen: set[str], ctx: Context, t: Term) -> None:
    key = to_text(nf(ctx, t))
    if key not in seen:
        seen.add(key)
        pool.append(t)


def _verified(
    ctx: Context, h: Term, u: Term, v: Term, budget: ConnectBudget, nodes: int
) -> ConnectResult:
    cert = (
        equal_terms(ctx, iterated_boundary(h, term_dim(h, ctx) - 1, SRC, ctx), u, budget.eq),
        equal_terms(ctx, iterated_boundary(h, term_dim(h, ctx) - 1, TGT, ctx), v, budget.eq),
    )
    if not (cert[0].is_equal and cert[1].is_equal):
        return ConnectResult(
            "not_found",
            detail="candidate failed boundary verification",
            nodes=nodes,
        )
    return ConnectResult("found", type_check(h, ctx), cert, nodes=nodes)


def _path_search(
    ctx: Context, pool: list[Term], u: Term, v: Term, d: int
) -> list[Term] | None:
    """Chain pool arrows end to end from u to v; returns the factors in
    application order (first factor first) or None."""
    edges: list[tuple[str, str, Term]] = []
    for a in pool:
        sa = to_text(nf(ctx, iterated_boundary(a, d, SRC, ctx)))
        ta = to_text(nf(ctx, iterated_boundary(a, d, TGT, ctx)))
        if sa != ta:
            edges.append((sa, ta, a))
    start = to_text(nf(ctx, u))
    goal = to_text(nf(ctx, v))
    parents: dict[str, tuple[str, Term]] = {}
    queue: deque[str] = deque([start])
    visited = {start}
    while queue:
        cur = queue.popleft()
        if cur == goal:
            chain: list[Term] = []
            while cur != start:
                prev, a = parents[cur]
                chain.append(a)
                cur = prev
            chain.reverse()
            return chain
        for sa, ta, a in edges:
            if sa == cur and ta not in visited:
                visited.add(ta)
                parents[ta] = (cur, a)
                queue.append(ta)
    return None


def _counts_solvable(ctx: Context, u: Term, v: Term, d: int) -> bool:
    """Rational solvability of the endpoint generator-count system: can
    signed multiplicities of the (d+1)-generators account for the count
    difference of the endpoints?  Necessary for top-level chains only, so
    the result is advisory."""
    gens_d = sorted(c for c in ctx.cells() if ctx.cell_dim(c) == d)
    gens_up = sorted(c for c in ctx.cells() if ctx.cell_dim(c) == d + 1)
    if d == 0:
        return True
    cu, cv = signed_gen_count(u, ctx), signed_gen_count(v, ctx)
    rhs = [Fraction(cv.get(g, 0) - cu.get(g, 0)) for g in gens_d]
    cols = []
    for g in gens_up:
        cs = signed_gen_count(iterated_boundary(Gen(g), d, SRC, ctx), ctx)
        ct = signed_gen_count(iterated_boundary(Gen(g), d, TGT, ctx), ctx)
        cols.append([Fraction(ct.get(x, 0) - cs.get(x, 0)) for x in gens_d])
    # Gaussian elimination on the augmented system
    rows = [[cols[c][r] for c in range(len(cols))] + [rhs[r]] for r in range(len(gens_d))]
    lead = 0
    for col in range(len(cols)):
        pivot = next((r for r in range(lead, len(rows)) if rows[r][col] != 0), None)
        if pivot is None:
            continue
        rows[lead], rows[pivot] = rows[pivot], rows[lead]
        pr = rows[lead]
        for r in range(len(rows)):
            if r != lead and rows[r][col] != 0:
                f = rows[r][col] / pr[col]
                rows[r] = [a - f * b for a, b in zip(rows[r], pr)]
        lead += 1
        if lead == len(rows):
            break
    return all(
        row[-1] == 0 for row in rows if all(x == 0 for x in row[:-1])
    )
