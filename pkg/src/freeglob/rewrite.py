"""Equational reasoning for groupoid terms.

Three layers, each built on the one below:

1. a terminating rewrite system (``normalize``, ``nf``) whose rules are the
   oriented groupoid laws; every step is recorded so derivations can be
   replayed independently;
2. a complete decision procedure for terms of dimension at most one
   (``reduced_word``), where the theory is a free groupoid on a graph;
3. a bounded bidirectional search (inside ``equal_terms``) joining normal
   forms by exchange, reassociation and identity peeling, for the higher
   dimensional cases the rewrite rules alone cannot close.

``equal_terms`` returns an ``EqVerdict``: "equal" always carries a
step-by-step certificate, "distinct" carries a witness, and "unknown" means
the search budget ran out before a join was found.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .terms import (
    Comp,
    Context,
    Gen,
    Id,
    Inv,
    SRC,
    TGT,
    Term,
    TypedTerm,
    boundary,
    children,
    comp_at,
    id_depth,
    id_pow,
    iterated_boundary,
    positions,
    signed_gen_count,
    splice,
    subterm_at,
    term_dim,
    to_text,
)

__all__ = [
    "CheckItem",
    "CheckReport",
    "ContextMismatch",
    "DEFAULT_BUDGET",
    "DimTooHigh",
    "EqVerdict",
    "ReplayError",
    "RewriteStep",
    "RewriteTrace",
    "SearchBudget",
    "cheap_eq",
    "equal",
    "equal_terms",
    "measure_greater",
    "nf",
    "normalize",
    "reduced_word",
    "replay",
    "verify_inverse_telescope",
    "verify_sharp_chain_absorption",
]


class ContextMismatch(ValueError):
    pass


class DimTooHigh(ValueError):
    pass


class ReplayError(ValueError):
    pass


@dataclass(frozen=True)
class SearchBudget:
    """Resource limits for the closure search.

    ``closure_depth`` bounds the number of search moves per side,
    ``node_cap`` the total states generated, ``time_cap`` the wall-clock
    seconds for one join attempt.
    """

    closure_depth: int = 6
    node_cap: int = 20_000
    time_cap: float = 5.0

    def __post_init__(self) -> None:
        if self.closure_depth < 0 or self.node_cap <= 0 or self.time_cap <= 0:
            raise ValueError("search budget limits must be positive")


DEFAULT_BUDGET = SearchBudget()


# ---------------------------------------------------------------------------
# traces


@dataclass(frozen=True)
class RewriteStep:
    """One rewrite at ``pos``: the subterm there changes from ``before`` to
    ``after``.  ``rule`` names the equation used; steps may apply a rule in
    either orientation."""

    rule: str
    pos: tuple[int, ...]
    before: Term
    after: Term


@dataclass(frozen=True)
class RewriteTrace:
    start: Term
    steps: tuple[RewriteStep, ...]
    result: Term

    def expand(self):
        """Yield the full intermediate terms, ``start`` first."""
        cur = self.start
        yield cur
        for st in self.steps:
            cur = splice(cur, st.pos, st.after)
            yield cur


def _flip_steps(steps) -> tuple[RewriteStep, ...]:
    return tuple(
        RewriteStep(s.rule, s.pos, s.after, s.before) for s in reversed(tuple(steps))
    )


@dataclass(frozen=True)
class EqVerdict:
    """Outcome of an equality query.

    ``kind`` is "equal", "distinct" or "unknown".  Equal verdicts carry a
    replayable trace from the left term to the right one.  Distinct verdicts
    carry a witness pair (name, data) where name is one of
    "BoundaryMismatch", "GenCountMismatch", "WordOracleMismatch".
    ``nodes`` and ``depth`` report search effort when the closure ran.
    """

    kind: str
    detail: str = ""
    trace: RewriteTrace | None = None
    witness: tuple | None = None
    nodes: int = 0
    depth: int = 0

    @property
    def is_equal(self) -> bool:
        return self.kind == "equal"

    @property
    def is_distinct(self) -> bool:
        return self.kind == "distinct"

    @property
    def is_unknown(self) -> bool:
        return self.kind == "unknown"


# ---------------------------------------------------------------------------
# termination measure
#
# A recursive path order with precedence Gen < Comp < Id < Inv; Comp uses
# left-to-right lexicographic status, composition levels and generator names
# separate symbols of equal precedence.  Every rewrite rule below strictly
# decreases it, in any context.

_RPO_CACHE: dict[tuple[Term, Term], bool] = {}


def _prec(t: Term) -> int:
    if isinstance(t, Gen):
        return 0
    if isinstance(t, Comp):
        return 1
    if isinstance(t, Id):
        return 2
    return 3


def _same_head(s: Term, t: Term) -> bool:
    if type(s) is not type(t):
        return False
    if isinstance(s, Comp):
        return s.level == t.level
    if isinstance(s, Gen):
        return s.cell == t.cell
    return True


def measure_greater(s: Term, t: Term) -> bool:
    """Strict well-founded order on terms; rewriting always descends."""
    if s == t:
        return False
    key = (s, t)
    hit = _RPO_CACHE.get(key)
    if hit is not None:
        return hit
    res = False
    for a in children(s):
        if a == t or measure_greater(a, t):
            res = True
            break
    if not res:
        if _same_head(s, t):
            if all(measure_greater(s, b) for b in children(t)):
                for a, b in zip(children(s), children(t)):
                    if a != b:
                        res = measure_greater(a, b)
                        break
        elif _prec(s) > _prec(t):
            res = all(measure_greater(s, b) for b in children(t))
    _RPO_CACHE[key] = res
    return res


# ---------------------------------------------------------------------------
# the rewrite system


def neutral_depth(t: Term) -> int:
    """How many iterated identities ``t`` provably is, seeing through
    composites.  A composite of k-fold identities is a k-fold identity at
    any level, and the inverse of an identity is that identity, so this
    count survives the functoriality rule distributing Id over Comp."""
    if isinstance(t, Id):
        return 1 + neutral_depth(t.body)
    if isinstance(t, Comp):
        return min(neutral_depth(t.u), neutral_depth(t.v))
    if isinstance(t, Inv):
        return neutral_depth(t.body)
    return 0


def _root_step(ctx: Context, t: Term) -> tuple[str, Term] | None:
    """The unique rule applicable at the root of ``t``, if any."""
    if isinstance(t, Inv):
        x = t.body
        if isinstance(x, Inv):
            return "inverse-involution", x.body
        if neutral_depth(x) >= 1:
            return "inverse-of-identity", x
        if isinstance(x, Comp) and x.level == term_dim(x, ctx) - 1:
            return "inverse-antihom", Comp(x.level, Inv(x.v), Inv(x.u))
        return None
    if isinstance(t, Id):
        x = t.body
        if isinstance(x, Comp):
            return "identity-functoriality", Comp(x.level, Id(x.u), Id(x.v))
        return None
    if isinstance(t, Comp):
        d = term_dim(t, ctx)
        j = t.level
        if neutral_depth(t.u) >= d - j:
            return "unit-left", t.v
        if neutral_depth(t.v) >= d - j:
            return "unit-right", t.u
        if j == d - 1:
            if isinstance(t.u, Inv) and t.u.body == t.v:
                return "left-inverse", Id(boundary(t.v, SRC, ctx))
            if isinstance(t.v, Inv) and t.v.body == t.u:
                return "right-inverse", Id(boundary(t.u, TGT, ctx))
        if isinstance(t.u, Comp) and t.u.level == j:
            return "associativity", Comp(j, t.u.u, Comp(j, t.u.v, t.v))
    return None


def _innermost_redex(ctx: Context, term: Term, pos: tuple[int, ...] = ()):
    for i, c in enumerate(children(term)):
        hit = _innermost_redex(ctx, c, pos + (i,))
        if hit is not None:
            return hit
    step = _root_step(ctx, term)
    if step is None:
        return None
    return pos, step[0], term, step[1]


def normalize(ctx: Context, term: Term) -> RewriteTrace:
    """Reduce to normal form, leftmost-innermost, recording every step."""
    steps: list[RewriteStep] = []
    cur = term
    while True:
        hit = _innermost_redex(ctx, cur)
        if hit is None:
            break
        pos, rule, before, after = hit
        steps.append(RewriteStep(rule, pos, before, after))
        cur = splice(cur, pos, after)
    return RewriteTrace(term, tuple(steps), cur)


def nf(ctx: Context, term: Term) -> Term:
    """Normal form only, memoized on the context.  Agrees with
    ``normalize(ctx, term).result`` by construction (same strategy)."""
    res = ctx.nf_cache.get(term)
    if res is not None:
        return res
    if isinstance(term, Gen):
        res = term
    else:
        if isinstance(term, Comp):
            t2: Term = Comp(term.level, nf(ctx, term.u), nf(ctx, term.v))
        elif isinstance(term, Id):
            t2 = Id(nf(ctx, term.body))
        else:
            t2 = Inv(nf(ctx, term.body))
        hit = _root_step(ctx, t2)
        res = nf(ctx, hit[1]) if hit is not None else t2
    ctx.nf_cache[term] = res
    return res


# ---------------------------------------------------------------------------
# dimension <= 1: free groupoid word calculus


def reduced_word(ctx: Context, term: Term) -> tuple[str, tuple[tuple[str, int], ...]]:
    """The freely reduced word of a term of dimension at most 1, with its
    basepoint (the source object).  Letters are (cell, +1 or -1) pairs,
    first-applied first.  Two parallel such terms are equal exactly when
    their reduced words and basepoints agree."""
    d = term_dim(term, ctx)
    if d >= 2:
        raise DimTooHigh(f"word reduction applies up to dimension 1, got {d}")
    if d == 0:
        if isinstance(term, Gen):
            return term.cell, ()
        raise DimTooHigh("a zero-dimensional term must be a bare generator")

    letters: list[tuple[str, int]] = []
    work: list[tuple[Term, int]] = [(term, 1)]
    while work:
        t, sign = work.pop()
        if isinstance(t, Gen):
            letters.append((t.cell, sign))
        elif isinstance(t, Id):
            continue
        elif isinstance(t, Inv):
            work.append((t.body, -sign))
        elif isinstance(t, Comp):
            # second factor applies after the first; signs flip the order
            if sign > 0:
                work.append((t.u, sign))
                work.append((t.v, sign))
            else:
                work.append((t.v, sign))
                work.append((t.u, sign))

    stack: list[tuple[str, int]] = []
    for cell, sign in letters:
        if stack and stack[-1] == (cell, -sign):
            stack.pop()
        else:
            stack.append((cell, sign))

    base = boundary(term, SRC, ctx)
    while not isinstance(base, Gen):
        base = boundary(base, SRC, ctx)
    return base.cell, tuple(stack)


def _comb_atoms(n: Term) -> list[Term]:
    """Factors of a dimension-1 normal form, first-applied first.  An
    identity arrow has no factors."""
    if isinstance(n, Id):
        return []
    out = []
    cur = n
    while isinstance(cur, Comp):
        out.append(cur.u)
        cur = cur.v
    out.append(cur)
    out.reverse()
    return out


def _cancel_step(ctx: Context, pos: tuple[int, ...], later: Term, earlier: Term) -> RewriteStep:
    node = Comp(0, later, earlier)
    if isinstance(later, Inv) and later.body == earlier:
        return RewriteStep("left-inverse", pos, node, Id(boundary(earlier, SRC, ctx)))
    return RewriteStep("right-inverse", pos, node, Id(boundary(later, TGT, ctx)))


def _word_certificate(ctx: Context, n: Term) -> tuple[list[RewriteStep], Term]:
    """Steps taking a dimension-1 normal form to its fully cancelled comb.

    Normal forms can still contain non-adjacent inverse pairs; this walks the
    comb greedily, reassociating once to expose each cancelling pair.  Both
    members of an equal pair of words land on the identical term.
    """
    atoms = _comb_atoms(n)
    steps: list[RewriteStep] = []
    cur = n
    while True:
        k = len(atoms)
        idx = None
        for i in range(k - 1):
            p, q = atoms[i], atoms[i + 1]
            if (isinstance(q, Inv) and q.body == p) or (isinstance(p, Inv) and p.body == q):
                idx = i
                break
        if idx is None:
            break
        earlier, later = atoms[idx], atoms[idx + 1]
        if idx == 0:
            pos = (1,) * (k - 2)
            cancel = _cancel_step(ctx, pos, later, earlier)
            steps.append(cancel)
            cur = splice(cur, pos, cancel.after)
            if k > 2:
                parent_pos = (1,) * (k - 3)
                before = subterm_at(cur, parent_pos)
                steps.append(RewriteStep("unit-right", parent_pos, before, before.u))
                cur = splice(cur, parent_pos, before.u)
        else:
            pos_x = (1,) * (k - idx - 2)
            node = subterm_at(cur, pos_x)
            rest = node.v.v
            assoc_after = Comp(0, Comp(0, later, earlier), rest)
            steps.append(RewriteStep("associativity", pos_x, node, assoc_after))
            cur = splice(cur, pos_x, assoc_after)
            cancel = _cancel_step(ctx, pos_x + (0,), later, earlier)
            steps.append(cancel)
            cur = splice(cur, pos_x + (0,), cancel.after)
            before = subterm_at(cur, pos_x)
            steps.append(RewriteStep("unit-left", pos_x, before, rest))
            cur = splice(cur, pos_x, rest)
        del atoms[idx : idx + 2]
    return steps, cur


# ---------------------------------------------------------------------------
# equality


def cheap_eq(ctx: Context, a: Term, b: Term) -> bool:
    """Sound but incomplete equality check; never searches."""
    if a == b:
        return True
    da = term_dim(a, ctx)
    if da != term_dim(b, ctx):
        return False
    na, nb = nf(ctx, a), nf(ctx, b)
    if na == nb:
        return True
    if da <= 1:
        return reduced_word(ctx, na) == reduced_word(ctx, nb)
    return False


def _join_traces(ctx: Context, t: Term, u: Term, middle) -> RewriteTrace:
    left = normalize(ctx, t)
    right = normalize(ctx, u)
    steps = tuple(left.steps) + tuple(middle) + _flip_steps(right.steps)
    return RewriteTrace(t, steps, u)


def equal(ctx: Context, t, u, budget: SearchBudget | None = None, ctx_u: Context | None = None) -> EqVerdict:
    """Equality of two terms (or typed terms) over ``ctx``.  A second
    context may be supplied for the right term; it must coincide."""
    if isinstance(t, TypedTerm):
        t = t.term
    if isinstance(u, TypedTerm):
        u = u.term
    if ctx_u is not None and ctx_u != ctx:
        raise ContextMismatch("the two terms live over different contexts")
    return equal_terms(ctx, t, u, budget)


def equal_terms(ctx: Context, t: Term, u: Term, budget: SearchBudget | None = None) -> EqVerdict:
    b = budget if budget is not None else DEFAULT_BUDGET
    key = (t, u, b)
    hit = ctx.eq_cache.get(key)
    if hit is not None:
        return hit
    verdict = _decide_equal(ctx, t, u, b)
    ctx.eq_cache[key] = verdict
    return verdict


def _decide_equal(ctx: Context, t: Term, u: Term, b: SearchBudget) -> EqVerdict:
    dt, du = term_dim(t, ctx), term_dim(u, ctx)
    if dt != du:
        msg = f"dimensions {dt} vs {du}"
        return EqVerdict("distinct", detail=msg, witness=("BoundaryMismatch", msg))

    nt, nu = nf(ctx, t), nf(ctx, u)
    if nt == nu:
        return EqVerdict("equal", detail="normal forms coincide", trace=_join_traces(ctx, t, u, ()))

    if dt <= 1:
        wt, wu = reduced_word(ctx, nt), reduced_word(ctx, nu)
        if wt != wu:
            return EqVerdict(
                "distinct",
                detail="reduced words differ",
                witness=("WordOracleMismatch", (wt, wu)),
            )
        steps_t, final_t = _word_certificate(ctx, nt)
        steps_u, final_u = _word_certificate(ctx, nu)
        if final_t != final_u:
            raise AssertionError("word certificates did not meet")
        middle = tuple(steps_t) + _flip_steps(steps_u)
        return EqVerdict("equal", detail="reduced words agree", trace=_join_traces(ctx, t, u, middle))

    boundaries_known = True
    for side in (SRC, TGT):
        bv = equal_terms(ctx, boundary(nt, side, ctx), boundary(nu, side, ctx), b)
        if bv.is_distinct:
            return EqVerdict(
                "distinct",
                detail=f"{side} boundaries differ: {bv.detail}",
                witness=("BoundaryMismatch", (side, bv.witness)),
            )
        if bv.is_unknown:
            boundaries_known = False

    if boundaries_known:
        ct, cu = signed_gen_count(nt, ctx), signed_gen_count(nu, ctx)
        if ct != cu:
            return EqVerdict(
                "distinct",
                detail="signed generator counts differ",
                witness=("GenCountMismatch", (ct, cu)),
            )

    return _closure_join(ctx, t, u, nt, nu, b)


# ---------------------------------------------------------------------------
# closure search
#
# States are normal forms.  Moves apply an equation normalization does not
# orient usefully, then renormalize: exchange of composition levels,
# reassociation to the left, and peeling a shared identity layer off both
# factors of a composite (which can expose a cancellation one dimension
# down).  The search runs from both ends and meets in the middle.


def _moves(ctx: Context, s: Term) -> list[tuple]:
    out: list[tuple] = []
    for pos in sorted(positions(s)):
        x = subterm_at(s, pos)
        if not isinstance(x, Comp):
            continue
        j = x.level
        if (
            isinstance(x.u, Comp)
            and isinstance(x.v, Comp)
            and x.u.level == x.v.level != j
        ):
            inner = x.u.level
            if j < inner:
                out.append(("exchange", pos))
            else:
                ok1 = cheap_eq(
                    ctx,
                    iterated_boundary(x.u.u, j, SRC, ctx),
                    iterated_boundary(x.v.u, j, TGT, ctx),
                )
                ok2 = ok1 and cheap_eq(
                    ctx,
                    iterated_boundary(x.u.v, j, SRC, ctx),
                    iterated_boundary(x.v.v, j, TGT, ctx),
                )
                if ok2:
                    out.append(("exchange", pos))
        if isinstance(x.v, Comp) and x.v.level == j:
            out.append(("assoc", pos))
        m = min(id_depth(x.u), id_depth(x.v), term_dim(x, ctx) - 1 - j)
        if m >= 1:
            out.append(("peel", pos, m))
    return out


def _strip_id(t: Term, m: int) -> Term:
    for _ in range(m):
        t = t.body
    return t


def _move_steps(s: Term, move: tuple) -> tuple[list[RewriteStep], Term]:
    """The axiom steps realizing ``move`` on ``s`` and the raw result."""
    kind, pos = move[0], move[1]
    x = subterm_at(s, pos)
    if kind == "exchange":
        a, b = x.level, x.u.level
        after = Comp(b, Comp(a, x.u.u, x.v.u), Comp(a, x.u.v, x.v.v))
        steps = [RewriteStep("exchange", pos, x, after)]
    elif kind == "assoc":
        after = Comp(x.level, Comp(x.level, x.u, x.v.u), x.v.v)
        steps = [RewriteStep("associativity", pos, x, after)]
    else:
        m = move[2]
        j = x.level
        u0, v0 = _strip_id(x.u, m), _strip_id(x.v, m)
        steps = []
        for k in range(m):
            before = Comp(j, id_pow(u0, m - k), id_pow(v0, m - k))
            stepped = Id(Comp(j, id_pow(u0, m - k - 1), id_pow(v0, m - k - 1)))
            steps.append(
                RewriteStep("identity-functoriality", pos + (0,) * k, before, stepped)
            )
        after = id_pow(Comp(j, u0, v0), m)
    return steps, splice(s, pos, after)


def _closure_join(
    ctx: Context, t: Term, u: Term, nt: Term, nu: Term, b: SearchBudget
) -> EqVerdict:
    deadline = time.monotonic() + b.time_cap
    visited: tuple[set, set] = ({nt}, {nu})
    parents: tuple[dict, dict] = ({}, {})
    frontier: list[list[Term]] = [[nt], [nu]]
    nodes = 2
    depth_reached = 0
    meet: Term | None = None

    for depth in range(1, b.closure_depth + 1):
        progressed = False
        for side in (0, 1):
            fresh: list[Term] = []
            for s in sorted(frontier[side], key=to_text):
                for move in _moves(ctx, s):
                    if time.monotonic() > deadline:
                        return EqVerdict(
                            "unknown",
                            detail="time budget exhausted",
                            nodes=nodes,
                            depth=depth_reached,
                        )
                    ns = nf(ctx, _move_steps(s, move)[1])
                    if ns in visited[side]:
                        continue
                    visited[side].add(ns)
                    parents[side][ns] = (s, move)
                    fresh.append(ns)
                    nodes += 1
                    if ns in visited[1 - side]:
                        meet = ns
                        break
                    if nodes >= b.node_cap:
                        return EqVerdict(
                            "unknown",
                            detail="node budget exhausted",
                            nodes=nodes,
                            depth=depth,
                        )
                if meet is not None:
                    break
            frontier[side] = fresh
            if fresh:
                progressed = True
                depth_reached = depth
            if meet is not None:
                break
        if meet is not None or not progressed:
            break

    if meet is None:
        return EqVerdict("unknown", detail="no join within budget", nodes=nodes, depth=depth_reached)

    middle: list[RewriteStep] = []
    for prev, move, _nxt in _parent_chain(parents[0], meet, nt):
        steps, raw = _move_steps(prev, move)
        tail = normalize(ctx, raw)
        middle.extend(steps)
        middle.extend(tail.steps)
    for prev, move, _nxt in reversed(_parent_chain(parents[1], meet, nu)):
        steps, raw = _move_steps(prev, move)
        tail = normalize(ctx, raw)
        middle.extend(_flip_steps(tuple(steps) + tuple(tail.steps)))
    return EqVerdict(
        "equal",
        detail=f"joined after {nodes} states",
        trace=_join_traces(ctx, t, u, middle),
        nodes=nodes,
        depth=depth_reached,
    )


def _parent_chain(parents: dict, state: Term, root: Term) -> list[tuple[Term, tuple, Term]]:
    out = []
    cur = state
    while cur != root:
        prev, move = parents[cur]
        out.append((prev, move, cur))
        cur = prev
    out.reverse()
    return out


# ---------------------------------------------------------------------------
# independent replay


def replay(ctx: Context, trace: RewriteTrace) -> bool:
    """Re-run a trace from scratch, validating every step against the
    axioms.  Raises ReplayError on the first defect; returns True."""
    cur = trace.start
    for k, step in enumerate(trace.steps):
        try:
            sub = subterm_at(cur, step.pos)
        except (IndexError, TypeError) as exc:
            raise ReplayError(f"step {k}: no subterm at {step.pos}") from exc
        if sub != step.before:
            raise ReplayError(
                f"step {k}: expected {to_text(step.before)} at {step.pos}, "
                f"found {to_text(sub)}"
            )
        if not _is_axiom_instance(ctx, step.rule, step.before, step.after):
            raise ReplayError(f"step {k}: not an instance of {step.rule}")
        cur = splice(cur, step.pos, step.after)
    if cur != trace.result:
        raise ReplayError("trace does not end at its declared result")
    return True


def _eq_chk(ctx: Context, a: Term, b: Term) -> bool:
    # syntactic, then normal forms and words, then the full engine
    return cheap_eq(ctx, a, b) or equal_terms(ctx, a, b).is_equal


def _axiom_forward(ctx: Context, rule: str, b: Term, a: Term) -> bool:
    if rule == "inverse-involution":
        return isinstance(b, Inv) and isinstance(b.body, Inv) and b.body.body == a
    if rule == "inverse-of-identity":
        return isinstance(b, Inv) and neutral_depth(b.body) >= 1 and b.body == a
    if rule == "inverse-antihom":
        if not (isinstance(b, Inv) and isinstance(b.body, Comp)):
            return False
        c = b.body
        if c.level != term_dim(c, ctx) - 1:
            return False
        return a == Comp(c.level, Inv(c.v), Inv(c.u))
    if rule == "identity-functoriality":
        if not (isinstance(b, Id) and isinstance(b.body, Comp)):
            return False
        c = b.body
        return a == Comp(c.level, Id(c.u), Id(c.v))
    if rule == "unit-left":
        if not isinstance(b, Comp) or a != b.v:
            return False
        k = term_dim(b, ctx) - b.level
        if neutral_depth(b.u) < k:
            return False
        # reject only on provable mismatch; typing already fixes the base
        neutral = id_pow(iterated_boundary(b.v, b.level, TGT, ctx), k)
        return not equal_terms(ctx, b.u, neutral).is_distinct
    if rule == "unit-right":
        if not isinstance(b, Comp) or a != b.u:
            return False
        k = term_dim(b, ctx) - b.level
        if neutral_depth(b.v) < k:
            return False
        neutral = id_pow(iterated_boundary(b.u, b.level, SRC, ctx), k)
        return not equal_terms(ctx, b.v, neutral).is_distinct
    if rule == "left-inverse":
        if not (isinstance(b, Comp) and isinstance(a, Id)):
            return False
        if b.level != term_dim(b, ctx) - 1:
            return False
        return _eq_chk(ctx, b.u, Inv(b.v)) and _eq_chk(
            ctx, a.body, boundary(b.v, SRC, ctx)
        )
    if rule == "right-inverse":
        if not (isinstance(b, Comp) and isinstance(a, Id)):
            return False
        if b.level != term_dim(b, ctx) - 1:
            return False
        return _eq_chk(ctx, b.v, Inv(b.u)) and _eq_chk(
            ctx, a.body, boundary(b.u, TGT, ctx)
        )
    if rule == "associativity":
        return (
            isinstance(b, Comp)
            and isinstance(b.u, Comp)
            and b.u.level == b.level
            and a == Comp(b.level, b.u.u, Comp(b.level, b.u.v, b.v))
        )
    if rule == "exchange":
        if not (
            isinstance(b, Comp)
            and isinstance(b.u, Comp)
            and isinstance(b.v, Comp)
            and b.u.level == b.v.level != b.level
        ):
            return False
        inner, outer = b.u.level, b.level
        return a == Comp(inner, Comp(outer, b.u.u, b.v.u), Comp(outer, b.u.v, b.v.v))
    return False


def _is_axiom_instance(ctx: Context, rule: str, before: Term, after: Term) -> bool:
    return _axiom_forward(ctx, rule, before, after) or _axiom_forward(
        ctx, rule, after, before
    )


# ---------------------------------------------------------------------------
# named verification suites


@dataclass(frozen=True)
class CheckItem:
    name: str
    verdict: EqVerdict


@dataclass(frozen=True)
class CheckReport:
    title: str
    items: tuple[CheckItem, ...]

    @property
    def all_equal(self) -> bool:
        return all(i.verdict.is_equal for i in self.items)

    @property
    def any_unknown(self) -> bool:
        return any(i.verdict.is_unknown for i in self.items)

    def as_dict(self) -> dict:
        return {
            "title": self.title,
            "all_equal": self.all_equal,
            "items": [
                {
                    "name": i.name,
                    "verdict": i.verdict.kind,
                    "detail": i.verdict.detail,
                    "trace_steps": len(i.verdict.trace.steps) if i.verdict.trace else None,
                }
                for i in self.items
            ],
        }


def _chain_equal(ctx: Context, forms: list[Term], budget: SearchBudget | None) -> EqVerdict:
    """Equality of the two ends of a chain, one join per adjacent pair,
    certificates concatenated."""
    middle: list[RewriteStep] = []
    nodes = 0
    depth = 0
    for a, b in zip(forms, forms[1:]):
        v = equal_terms(ctx, a, b, budget)
        if not v.is_equal:
            return EqVerdict(
                v.kind,
                detail=f"stuck between stages: {v.detail}",
                witness=v.witness,
                nodes=nodes + v.nodes,
                depth=max(depth, v.depth),
            )
        middle.extend(v.trace.steps)
        nodes += v.nodes
        depth = max(depth, v.depth)
    return EqVerdict(
        "equal",
        detail="chained" if len(forms) > 2 else "",
        trace=RewriteTrace(forms[0], tuple(middle), forms[-1]),
        nodes=nodes,
        depth=depth,
    )


def verify_inverse_telescope(n: int, budget: SearchBudget | None = None) -> CheckReport:
    """Composing the descending chain of inverted side cells against the
    stage-(i-1) side cell collapses to an iterated identity on the base
    object, for every stage i up to n+1."""
    from .cylinder import side_cell

    ctx = _disk_ctx(n)
    items = []
    for i in range(1, n + 2):
        lhs = side_cell(n, i - 1, "flat")
        for k in range(i - 1, 0, -1):
            lhs = comp_at(k - 1, Inv(side_cell(n, k, "flat")), lhs, ctx)
        rhs = id_pow(side_cell(n, 0, "flat"), i - 1)
        items.append(CheckItem(f"stage {i}", equal_terms(ctx, lhs, rhs, budget)))
    return CheckReport(f"inverse telescope collapse, n={n}", tuple(items))


_ABSORPTION_BUDGET = SearchBudget(closure_depth=6, node_cap=200_000, time_cap=60.0)


def verify_sharp_chain_absorption(n: int, budget: SearchBudget | None = None) -> CheckReport:
    """Folding the corrected-inverse chains onto a side cell equals folding
    the bare inverted side cells, for all 0 <= j < i <= n+1 and both side
    flavors.

    Each instance is proved through hybrid forms that swap one corrected
    factor for a bare inverse at a time; the joins stay small (the direct
    distance grows quadratically with j) and the concatenated certificate
    replays end to end.
    """
    from .cylinder import hybrid_inverse_forms

    if budget is None:
        budget = _ABSORPTION_BUDGET
    ctx = _disk_ctx(n)
    items = []
    for i in range(1, n + 2):
        for j in range(0, i):
            for flag in ("flat", "sharp"):
                forms = hybrid_inverse_forms(ctx, n, i, j, flag)
                verdict = _chain_equal(ctx, forms, budget)
                items.append(CheckItem(f"i={i} j={j} {flag}", verdict))
    return CheckReport(f"corrected chain absorption, n={n}", tuple(items))


def _disk_ctx(n: int) -> Context:
    from .globset import DEFAULT_DIM_BOUND
    from .terms import disk_context

    if n <= DEFAULT_DIM_BOUND:
        return disk_context(n)
    return disk_context(n, n)
