"""Term-valued morphisms between table sums, lifting, and towers.

A morphism here sends each summand top cell of the source sum to a term
over the target sum, with the gluing equations checked by the rewrite
engine; every other cell's image is forced by taking boundaries.  On top
of that sit admissible pairs of parallel disk-shaped morphisms, the
search for a lifting arrow between the two legs (delegated to
:func:`freeglob.homotopy.connect_arrow`), presentations that adjoin a
formal lifting cell per pair stage by stage, and their evaluation back
into honest terms.

The dimension side condition on admissible pairs matters: a pair of
object-picking maps into the 1-disk sum would otherwise admit two
genuinely different liftings, so ``is_admissible`` enforces it and
reports the violated bound.

The last section builds the comultiplication-and-counit pair of
morphisms (duplicate a generator along a chosen level, collapse a
generator to an identity) and verifies their equations against the
boundary legs, one report item per equation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .globset import DomainMismatch, Table, globular_sum, validate_table
from .homotopy import ConnectBudget, connect_arrow
from .rewrite import (
    CheckItem,
    CheckReport,
    EqVerdict,
    SearchBudget,
    equal_terms,
)
from .terms import (
    SRC,
    TGT,
    Context,
    FormalCell,
    Gen,
    Id,
    Term,
    comp_at,
    iterated_boundary,
    substitute,
    sum_context,
    type_check,
)
from .theta0 import ShapeMismatch, is_globally_parallel

__all__ = [
    "AdmissiblePair",
    "EvaluationStuck",
    "ExtPresentation",
    "FormalLift",
    "InadmissiblePair",
    "JunctionMismatch",
    "LiftNotFound",
    "PrecatOps",
    "ThetaTildeMor",
    "compose_theta_tilde",
    "disk_table",
    "evaluate_tower",
    "extend_tower",
    "identity_theta_tilde",
    "is_admissible",
    "lift_in_theta_tilde",
    "mor_equal",
    "precat_ops",
    "uniqueness_check",
    "verify_precat_equations",
]


class JunctionMismatch(ValueError):
    """Assigned terms disagree on a glued boundary."""


class InadmissiblePair(ValueError):
    pass


class LiftNotFound(LookupError):
    pass


class EvaluationStuck(RuntimeError):
    pass


def disk_table(n: int) -> Table:
    return Table((n,), ())


# target contexts are shared per (table, formal cells) so engine caches
# accumulate across morphisms
_CTX_CACHE: dict[tuple[Table, tuple[FormalCell, ...]], Context] = {}


def _target_context(dst: Table, formal: tuple[FormalCell, ...]) -> Context:
    key = (dst, formal)
    ctx = _CTX_CACHE.get(key)
    if ctx is None:
        ctx = sum_context(dst).extend(*formal) if formal else sum_context(dst)
        _CTX_CACHE[key] = ctx
    return ctx


@dataclass(frozen=True)
class ThetaTildeMor:
    """A term-valued morphism between table sums.

    ``tops[l]`` is the image of summand ``l``'s top cell, a term over the
    sum of ``dst`` (extended by ``formal`` cells, if any).  Images of all
    other cells are boundaries of these, so gluings of the source impose
    equations between adjacent tops; they are verified here once.
    """

    src: Table
    dst: Table
    tops: tuple[Term, ...]
    formal: tuple[FormalCell, ...] = ()

    def __post_init__(self) -> None:
        validate_table(self.src)
        validate_table(self.dst)
        if len(self.tops) != self.src.width:
            raise ValueError(
                f"need one top term per summand: {self.src.width} != {len(self.tops)}"
            )
        ctx = self.target_context()
        for l, top in enumerate(self.tops):
            tt = type_check(top, ctx)
            if tt.dim != self.src.upper[l]:
                raise JunctionMismatch(
                    f"summand {l} has dimension {self.src.upper[l]}, "
                    f"its image has dimension {tt.dim}"
                )
        for l, d in enumerate(self.src.lower):
            v = equal_terms(
                ctx,
                iterated_boundary(self.tops[l], d, SRC, ctx),
                iterated_boundary(self.tops[l + 1], d, TGT, ctx),
            )
            if not v.is_equal:
                raise JunctionMismatch(
                    f"summands {l} and {l + 1} disagree on their dimension-{d} "
                    f"gluing ({v.kind})"
                )

    def target_context(self) -> Context:
        return _target_context(self.dst, self.formal)

    def assignment(self) -> dict[str, Term]:
        """Image of every cell of the source sum, tops included."""
        from .globset import parse_cell_name

        ctx = self.target_context()
        out: dict[str, Term] = {}
        for c in globular_sum(self.src).gs.cells():
            l, flag, k = parse_cell_name(c)
            if flag == "g":
                out[c] = self.tops[l]
            else:
                side = SRC if flag == "s" else TGT
                out[c] = iterated_boundary(self.tops[l], k, side, ctx)
        return out


def identity_theta_tilde(table: Table) -> ThetaTildeMor:
    gsum = globular_sum(table)
    tops = tuple(Gen(gsum.top_cell(l)) for l in range(table.width))
    return ThetaTildeMor(table, table, tops)


def compose_theta_tilde(f: ThetaTildeMor, g: ThetaTildeMor) -> ThetaTildeMor:
    """The composite ``f after g``: each top of ``g`` is rewritten by
    substituting ``f``'s assignment for the cells it mentions."""
    if f.src != g.dst:
        raise DomainMismatch("source of the outer morphism must be the target of the inner")
    if g.formal:
        raise DomainMismatch("cannot compose onto a morphism with formal target cells")
    assign = f.assignment()
    src_ctx = g.target_context()
    dst_ctx = f.target_context()
    tops = tuple(substitute(t, assign, src_ctx, dst_ctx) for t in g.tops)
    return ThetaTildeMor(g.src, f.dst, tops, f.formal)


def mor_equal(
    f: ThetaTildeMor, g: ThetaTildeMor, budget: SearchBudget | None = None
) -> EqVerdict:
    """Componentwise engine equality; the worst component verdict wins."""
    if f.src != g.src or f.dst != g.dst or f.formal != g.formal:
        raise DomainMismatch("morphisms must share source, target, and formal cells")
    ctx = f.target_context()
    worst: EqVerdict | None = None
    for l, (a, b) in enumerate(zip(f.tops, g.tops)):
        v = equal_terms(ctx, a, b, budget)
        if v.kind == "distinct":
            return EqVerdict("distinct", detail=f"summand {l}: {v.detail}")
        if v.kind == "unknown" and worst is None:
            worst = EqVerdict("unknown", detail=f"summand {l}: {v.detail}")
    return worst if worst is not None else EqVerdict("equal")


# ---------------------------------------------------------------------------
# admissible pairs and lifting


@dataclass(frozen=True)
class AdmissiblePair:
    """A parallel pair of morphisms out of a disk, the data a lifting
    cell is adjoined for.  Admissibility itself is checked separately so
    rejected candidates can report a reason."""

    n: int
    target: Table
    f: ThetaTildeMor
    g: ThetaTildeMor

    def __post_init__(self) -> None:
        want = disk_table(self.n)
        for leg in (self.f, self.g):
            if leg.src != want:
                raise ShapeMismatch(f"legs must start at the {self.n}-disk")
            if leg.dst != self.target:
                raise ShapeMismatch("legs must end at the pair's target")
        if self.f.formal != self.g.formal:
            raise ShapeMismatch("legs must share formal target cells")


def is_admissible(p: AdmissiblePair) -> tuple[bool, str]:
    """The three admissibility conditions, with the first failure as the
    reason: the legs are globally parallel, the target is a globular sum
    (true for every table), and the target dimension is at most n+1."""
    if not is_globally_parallel(p.f, p.g, p.n):
        return False, "legs are not globally parallel"
    if p.target.dim > p.n + 1:
        return False, f"dimension {p.target.dim} > {p.n + 1}"
    return True, "admissible"


def lift_in_theta_tilde(
    p: AdmissiblePair, budget: ConnectBudget | None = None
) -> ThetaTildeMor:
    """The canonical lifting of an admissible pair: an arrow one
    dimension up whose boundary legs are the pair, found by the
    connecting-arrow search and re-verified there."""
    ok, reason = is_admissible(p)
    if not ok:
        raise InadmissiblePair(reason)
    ctx = p.f.target_context()
    r = connect_arrow(ctx, p.f.tops[0], p.g.tops[0], budget)
    if not r.is_found:
        raise LiftNotFound(r.detail)
    return ThetaTildeMor(disk_table(p.n + 1), p.target, (r.h.term,), p.f.formal)


def uniqueness_check(
    p: AdmissiblePair,
    liftings,
    budget: SearchBudget | None = None,
) -> bool:
    """Are all the given liftings of ``p`` rewrite-equal to each other?"""
    liftings = tuple(liftings)
    return all(
        mor_equal(liftings[i], liftings[k], budget).is_equal
        for i in range(len(liftings))
        for k in range(i + 1, len(liftings))
    )


# ---------------------------------------------------------------------------
# towers of formal liftings


@dataclass(frozen=True)
class FormalLift:
    """A named formal cell together with the pair it is a lifting for."""

    name: str
    pair: AdmissiblePair


@dataclass(frozen=True)
class ExtPresentation:
    """Stages of formal lifting cells over the base category of tables;
    the implicit stage zero adjoins nothing."""

    stages: tuple[tuple[FormalLift, ...], ...] = ()

    def cell_names(self) -> tuple[str, ...]:
        return tuple(fl.name for st in self.stages for fl in st)


def extend_tower(ext: ExtPresentation, pairs, names=None) -> ExtPresentation:
    """Append a stage with one fresh formal cell per pair occurrence.

    Each occurrence gets its own cell even if a pair repeats.  Explicit
    ``names`` (one per pair) let later stages refer to the cells; they
    default to stage-and-position labels.
    """
    pairs = tuple(pairs)
    stage_no = len(ext.stages) + 1
    if names is None:
        names = tuple(f"lift{stage_no}_{k}" for k in range(len(pairs)))
    names = tuple(names)
    if len(names) != len(pairs):
        raise ValueError(f"{len(pairs)} pairs need {len(pairs)} names, got {len(names)}")
    taken = set(ext.cell_names())
    for name in names:
        if name in taken:
            raise ValueError(f"formal cell name {name!r} is already in use")
        taken.add(name)
    cells = []
    for name, p in zip(names, pairs):
        ok, reason = is_admissible(p)
        if not ok:
            raise InadmissiblePair(reason)
        cells.append(FormalLift(name, p))
    return ExtPresentation(ext.stages + (tuple(cells),))


def _resolve(
    m: ThetaTildeMor, images: dict[str, ThetaTildeMor]
) -> ThetaTildeMor:
    """Replace formal cells in a morphism's tops by their evaluated terms."""
    if not m.formal:
        return m
    assign: dict[str, Term] = {}
    for fc in m.formal:
        hit = images.get(fc.name)
        if hit is None:
            raise ValueError(
                f"formal cell {fc.name!r} is not defined by an earlier stage"
            )
        if hit.dst != m.dst:
            raise ValueError(
                f"formal cell {fc.name!r} was defined over table "
                f"{hit.dst.text()}, used over {m.dst.text()}"
            )
        assign[fc.name] = hit.tops[0]
    plain = sum_context(m.dst)
    tops = tuple(
        substitute(t, assign, m.target_context(), plain) for t in m.tops
    )
    return ThetaTildeMor(m.src, m.dst, tops)


def evaluate_tower(
    ext: ExtPresentation, budget: ConnectBudget | None = None
) -> dict[str, ThetaTildeMor]:
    """Interpret every formal cell as an honest lifting, stage by stage.

    Earlier images are substituted into later pairs before searching, so
    each search runs over the plain target sum.
    """
    images: dict[str, ThetaTildeMor] = {}
    for stage in ext.stages:
        for fl in stage:
            p = fl.pair
            rp = AdmissiblePair(p.n, p.target, _resolve(p.f, images), _resolve(p.g, images))
            try:
                images[fl.name] = lift_in_theta_tilde(rp, budget)
            except LiftNotFound as e:
                raise EvaluationStuck(
                    f"no lifting found for cell {fl.name!r}: {e}"
                ) from e
    return images


# ---------------------------------------------------------------------------
# precategorical structure


@dataclass(frozen=True)
class PrecatOps:
    nabla: ThetaTildeMor
    kappa: ThetaTildeMor


def boundary_leg(i: int, side: str) -> ThetaTildeMor:
    """The morphism from the (i-1)-disk into the i-disk sum picking the
    chosen side of the top cell."""
    if i < 1:
        raise IndexError("boundary legs need i >= 1")
    flag = "s" if side == SRC else "t"
    return ThetaTildeMor(disk_table(i - 1), disk_table(i), (Gen(f"0{flag}{i - 1}"),))


def injection_leg(i: int, j: int, l: int) -> ThetaTildeMor:
    """The inclusion of copy ``l`` of the i-disk into the two-copy sum
    glued at level ``j``."""
    tbl = Table((i, i), (j,))
    return ThetaTildeMor(disk_table(i), tbl, (Gen(globular_sum(tbl).top_cell(l)),))


def precat_ops(i: int, j: int) -> PrecatOps:
    """The duplicate-and-collapse pair at (i, j): ``nabla`` sends the
    i-generator to the level-j composite of the two copies (copy 0 after
    copy 1, the gluing orientation), ``kappa`` sends the (i+1)-generator
    to the identity of the i-generator."""
    if not 0 <= j < i:
        raise IndexError(f"need i > j >= 0, got i={i} j={j}")
    tbl = Table((i, i), (j,))
    ctx = sum_context(tbl)
    gsum = globular_sum(tbl)
    top = comp_at(j, Gen(gsum.top_cell(0)), Gen(gsum.top_cell(1)), ctx)
    nabla = ThetaTildeMor(disk_table(i), tbl, (top,))
    kappa = ThetaTildeMor(disk_table(i + 1), disk_table(i), (Id(Gen(f"0g{i}")),))
    return PrecatOps(nabla, kappa)


def verify_precat_equations(
    i: int, j: int, budget: SearchBudget | None = None
) -> CheckReport:
    """All four equations at (i, j): the duplicate morphism against both
    boundary legs (against an injection when j = i-1, against the doubled
    leg over the smaller duplicate otherwise), and the collapse morphism
    splitting both boundary legs of the next disk."""
    ops = precat_ops(i, j)
    items = []
    for side, eps_copy in ((SRC, 1), (TGT, 0)):
        leg = boundary_leg(i, side)
        lhs = compose_theta_tilde(ops.nabla, leg)
        if j == i - 1:
            rhs = compose_theta_tilde(injection_leg(i, j, eps_copy), leg)
            case = f"against copy {eps_copy}"
        else:
            doubled = _doubled_leg(i, j, side)
            rhs = compose_theta_tilde(doubled, precat_ops(i - 1, j).nabla)
            case = "against the doubled leg"
        items.append(
            CheckItem(f"duplicate then {side} leg, {case}", mor_equal(lhs, rhs, budget))
        )
    for side in (SRC, TGT):
        lhs = compose_theta_tilde(ops.kappa, boundary_leg(i + 1, side))
        rhs = identity_theta_tilde(disk_table(i))
        items.append(
            CheckItem(f"collapse then {side} leg", mor_equal(lhs, rhs, budget))
        )
    return CheckReport(f"precategory equations, i={i} j={j}", tuple(items))


def _doubled_leg(i: int, j: int, side: str) -> ThetaTildeMor:
    """The boundary leg applied to both copies: the sum of two (i-1)-disks
    glued at level j mapping into the sum of two i-disks glued at level j."""
    src = Table((i - 1, i - 1), (j,))
    dst = Table((i, i), (j,))
    gsum = globular_sum(dst)
    flag = "s" if side == SRC else "t"
    tops = tuple(
        Gen(gsum.injections[l].mapping[f"{flag}{i - 1}"]) for l in range(2)
    )
    return ThetaTildeMor(src, dst, tops)
