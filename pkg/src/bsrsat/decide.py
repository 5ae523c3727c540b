"""Decision procedures for the two clause fragments.

Satisfiability is decided by exhaustively realizing the nondeterministic
choices of the uniform-model construction: an ordered partition of the
base constants (slr only), a ground witness gamma for it, a free domain
with a free-constant assignment, and finally the predicate table.  The
table is one bit per (predicate, free arguments, region class), found by
reduction to propositional satisfiability; a candidate that solves the
propositional instance is re-verified semantically on class
representatives before SAT is reported.

All choice points are iterated in a fixed order, so verdicts, models and
statistics are deterministic.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from fractions import Fraction

from .linarith import GroundSystem, solve_ground
from .normalize import NormalizedClauseSet, validate_normal_form
from .propsat import PropInstance
from .propsat import solve as _dpll
from .regions import (
    BUCKET_ABOVE,
    BUCKET_BELOW,
    BUCKET_IN,
    BdUnboundedClass,
    PartitionJ,
    class_of_bd,
    class_of_slr,
    enumerate_bd_unbounded,
    enumerate_slr_classes,
    ordered_set_partitions,
    representative,
    select_class,
)
from .report import (
    STATUS_SAT,
    STATUS_UNSAT,
    ResultReport,
    SolveStats,
)
from .terms import (
    MODE_BD,
    MODE_SLR,
    ClauseSet,
    DeltaEq,
    DiffConst,
    Equation,
    FragmentError,
    FreeTerm,
    GroundCmp,
    GroundTerm,
    Relation,
    SkolemDef,
    VarConst,
    VarVar,
    eval_clause,
    eval_constraint,
)


class ResourceLimitError(RuntimeError):
    """Candidate budget exhausted before a verdict; distinct from UNSAT."""

    def __init__(self, message: str, stats: SolveStats | None = None):
        super().__init__(message)
        self.stats = stats


class NaiveBudgetError(RuntimeError):
    """The naive table enumerator would exceed its atom budget."""


@dataclass(frozen=True)
class PropAtom:
    """One bit of a uniform interpretation: P on a free tuple and a class."""

    pred: str
    free_args: tuple[str, ...]
    cls: object


@dataclass
class InterpretationDescriptor:
    """A candidate uniform interpretation, complete enough to re-verify.

    The predicate table is total on the atoms that occurred during
    grounding; atoms never touched by any clause instance default to
    false, which is sound because no clause constrains them.
    """

    mode: str
    domain: tuple[str, ...]
    fconst_assign: dict[str, str]
    gamma: dict[str, Fraction]
    table: dict[PropAtom, bool]
    kappa: int | None
    partition: PartitionJ | None
    class_index: dict
    class_reps: dict[int, tuple[Fraction, ...]]

    def table_lines(self) -> list[str]:
        order = sorted(
            self.table, key=lambda a: (a.pred, a.free_args, self.class_index[a.cls])
        )
        return [
            f"{a.pred} ({','.join(a.free_args)}) class#{self.class_index[a.cls]}"
            f" = {'true' if self.table[a] else 'false'}"
            for a in order
        ]

    def legend_lines(self) -> list[str]:
        return [
            f"class#{i} rep: ({', '.join(str(v) for v in rep)})"
            for i, rep in sorted(self.class_reps.items())
        ]


class _DescriptorModel:
    """Interpretation-protocol adapter: truth via classify-then-lookup."""

    def __init__(self, desc: InterpretationDescriptor):
        self.desc = desc
        self.gamma = desc.gamma

    def free_value(self, const: str) -> str:
        return self.desc.fconst_assign[const]

    def holds(self, pred, free_args, base_args) -> bool:
        d = self.desc
        if d.mode == MODE_SLR:
            cls = class_of_slr(base_args, d.partition)
        else:
            cls = class_of_bd(base_args, d.kappa, bounded=False)
        return d.table.get(PropAtom(pred, tuple(free_args), cls), False)


# --- combinatorial constraint evaluation on class encodings ----------------


def _rel_sign(rel: Relation, s: int) -> bool:
    if rel is Relation.LT:
        return s < 0
    if rel is Relation.LE:
        return s <= 0
    if rel is Relation.EQ:
        return s == 0
    if rel is Relation.NEQ:
        return s != 0
    if rel is Relation.GE:
        return s >= 0
    return s > 0


def _bd_cmp_const(cls, i: int, c: Fraction) -> int:
    """Sign of (coordinate i - c), class-determined for integer |c| <= kappa."""
    if isinstance(cls, BdUnboundedClass):
        bk = cls.bucket(i)
        if bk == BUCKET_BELOW:
            return -1
        if bk == BUCKET_ABOVE:
            return 1
    f = cls.floors[i]
    if f < c:
        return -1
    if f > c:
        return 1
    return 0 if i in cls.zero else 1


def _bd_cmp_diff(cls, i: int, j: int, c: Fraction) -> int:
    """Sign of (coord i - coord j - c); needs both coordinates in range,
    which the difference-bound guard discipline guarantees whenever the
    surrounding bounds hold."""
    if i == j:
        return (c < 0) - (c > 0)
    if isinstance(cls, BdUnboundedClass):
        assert cls.bucket(i) == BUCKET_IN and cls.bucket(j) == BUCKET_IN
    d = cls.floors[i] - cls.floors[j]
    fc = cls.fr_cmp(i, j)
    if fc == 0:
        return (d > c) - (d < c)
    if fc > 0:
        return 1 if d >= c else -1
    return 1 if d - 1 >= c else -1


# --- grounding context ------------------------------------------------------


class _Context:
    """One fully fixed arithmetic side: mode plus gamma plus kappa/partition.

    Class streams are materialized lazily and cached per (arity, hints);
    hints are per-coordinate floor clamps extracted from premise bounds.
    """

    def __init__(self, mode, gamma, kappa=None, partition=None):
        self.mode = mode
        self.gamma = gamma
        self.kappa = kappa
        self.partition = partition
        self._streams: dict = {}

    def classes(self, arity: int, hints=None) -> list:
        key = (arity, hints)
        if key not in self._streams:
            if self.mode == MODE_SLR:
                lst = list(enumerate_slr_classes(arity, self.partition))
            elif hints is None:
                lst = list(enumerate_bd_unbounded(arity, self.kappa))
            else:
                lo, hi = hints
                lst = list(
                    enumerate_bd_unbounded(
                        arity,
                        self.kappa,
                        allow_below=[b is None for b in lo],
                        allow_above=[b is None for b in hi],
                        floor_lo=[-self.kappa if b is None else b for b in lo],
                        floor_hi=[self.kappa if b is None else b for b in hi],
                    )
                )
            self._streams[key] = lst
        return self._streams[key]

    def rep(self, cls) -> tuple[Fraction, ...]:
        return representative(cls, self.partition)

    def classify(self, values):
        if self.mode == MODE_SLR:
            return class_of_slr(values, self.partition)
        return class_of_bd(values, self.kappa, bounded=False)


def _kappa_of(cs: ClauseSet) -> int:
    biggest = max((abs(r) for r in cs.rationals()), default=Fraction(0))
    return max(1, int(biggest))


def _make_context(N: NormalizedClauseSet, gamma=None) -> _Context:
    cs = N.as_clause_set()
    if N.mode == MODE_BD:
        return _Context(MODE_BD, {}, kappa=_kappa_of(cs))
    gamma = dict(gamma or {})
    points = set(gamma.values()) | cs.rationals()
    return _Context(MODE_SLR, gamma, partition=PartitionJ.make(points))


def _floor_hints(bounds, nvars: int, vidx) -> tuple | None:
    """Per-coordinate floor clamps implied by rational variable bounds.

    Sound to restrict the class stream by: every member of an excluded
    class violates one of the bounds, so the clause holds there anyway.
    """
    lo: list[int | None] = [None] * nvars
    hi: list[int | None] = [None] * nvars
    for c in bounds:
        b = c.bound.offset
        if b.denominator != 1:
            continue
        i = vidx[c.var]
        bi = int(b)
        if c.rel in (Relation.GE, Relation.GT, Relation.EQ):
            lo[i] = bi if lo[i] is None else max(lo[i], bi)
        if c.rel in (Relation.LE, Relation.EQ):
            hi[i] = bi if hi[i] is None else min(hi[i], bi)
        elif c.rel is Relation.LT:
            hi[i] = bi - 1 if hi[i] is None else min(hi[i], bi - 1)
    if all(b is None for b in lo) and all(b is None for b in hi):
        return None
    return tuple(lo), tuple(hi)


def _clause_hints(mode: str, cl, bvars) -> tuple | None:
    if mode != MODE_BD:
        return None
    vidx = {v: i for i, v in enumerate(bvars)}
    bounds = [
        c for c in cl.lam if isinstance(c, VarConst) and c.bound.is_rational
    ]
    return _floor_hints(bounds, len(bvars), vidx)


# --- clause grounding -------------------------------------------------------


@dataclass
class _GClause:
    """A clause reduced to its candidate-independent propositional shape."""

    free_vars: tuple[str, ...]
    eq_neg: tuple[Equation, ...]
    eq_pos: tuple[Equation, ...]
    skeletons: tuple[tuple[int, str, tuple[FreeTerm, ...]], ...]
    rows: list[tuple]  # per surviving class: selected class per skeleton


def _compile_checks(ctx: _Context, var_cons, vidx):
    """Premise constraints as integer comparisons on class encodings.

    Bounds come first so that difference comparisons, which assume their
    coordinates are in range, only run once the guard bounds held.
    """
    checks = []
    for c in var_cons:
        if isinstance(c, VarConst):
            if ctx.mode == MODE_SLR:
                tv = c.bound.evaluate(ctx.gamma)
                pidx = ctx.partition.point_interval_index(tv)
                checks.append(("slr_const", c.rel, vidx[c.var], pidx))
            else:
                b = c.bound.offset
                if b.denominator != 1:
                    raise FragmentError(
                        f"difference-bound grounding needs integer constants, got {b}"
                    )
                checks.append(("bd_const", c.rel, vidx[c.var], b))
    for c in var_cons:
        if isinstance(c, VarVar):
            checks.append(("varvar", c.rel, vidx[c.var], vidx[c.other]))
    for c in var_cons:
        if isinstance(c, DiffConst):
            if c.const.denominator != 1:
                raise FragmentError(
                    f"difference-bound grounding needs integer constants, got {c.const}"
                )
            checks.append(("diff", c.rel, vidx[c.var], vidx[c.other], c.const))
    return checks


def _class_ok(cls, checks) -> bool:
    for ch in checks:
        kind, rel = ch[0], ch[1]
        if kind == "bd_const":
            s = _bd_cmp_const(cls, ch[2], ch[3])
        elif kind == "slr_const":
            d = cls.coord_interval(ch[2]) - ch[3]
            s = (d > 0) - (d < 0)
        elif kind == "varvar":
            s = cls.value_cmp(ch[2], ch[3])
        else:
            s = _bd_cmp_diff(cls, ch[2], ch[3], ch[4])
        if not _rel_sign(rel, s):
            return False
    return True


def _ground_clause(ctx: _Context, cl, stats: SolveStats) -> _GClause | None:
    """Candidate-independent grounding; None when the clause can never
    constrain a candidate (a ground premise conjunct is false, or no
    region class satisfies the variable premise)."""
    for c in cl.lam:
        if isinstance(c, DeltaEq):
            raise FragmentError("delay equations must be lowered before deciding")
    for c in cl.lam:
        if isinstance(c, (GroundCmp, SkolemDef)):
            if not eval_constraint(c, {}, ctx.gamma):
                return None
    var_cons = [c for c in cl.lam if not isinstance(c, (GroundCmp, SkolemDef))]
    bvars = cl.base_vars()
    vidx = {v: i for i, v in enumerate(bvars)}
    checks = _compile_checks(ctx, var_cons, vidx)
    hints = _clause_hints(ctx.mode, cl, bvars)
    stream = ctx.classes(len(bvars), hints)
    stats.classes += len(stream)
    survivors = [cls for cls in stream if _class_ok(cls, checks)]
    if not survivors:
        return None
    eq_neg, eq_pos, skel = [], [], []
    for sign, part in ((-1, cl.gamma), (1, cl.delta)):
        for a in part:
            if isinstance(a, Equation):
                (eq_neg if sign < 0 else eq_pos).append(a)
            else:
                skel.append(
                    (sign, a.pred, a.free_args, tuple(vidx[v] for v in a.base_args))
                )
    rows = dict.fromkeys(
        tuple(select_class(cls, s[3]) for s in skel) for cls in survivors
    )
    return _GClause(
        cl.free_vars(),
        tuple(eq_neg),
        tuple(eq_pos),
        tuple((s, p, f) for s, p, f, _ in skel),
        list(rows),
    )


def _instantiate(gclauses, domain, assign):
    """Propositional instance for one candidate (domain, assignment)."""
    atom_ids: dict[PropAtom, int] = {}
    clauses: list[tuple[int, ...]] = []
    seen: set[frozenset[int]] = set()
    for g in gclauses:
        for env_vals in itertools.product(domain, repeat=len(g.free_vars)):
            env = dict(zip(g.free_vars, env_vals))

            def res(t: FreeTerm) -> str:
                return assign[t.name] if t.is_const else env[t.name]

            if any(res(e.left) != res(e.right) for e in g.eq_neg):
                continue  # a premise equation is false: clause holds
            if any(res(e.left) == res(e.right) for e in g.eq_pos):
                continue  # a conclusion equation is true: clause holds
            resolved = [tuple(res(t) for t in fts) for _, _, fts in g.skeletons]
            for row in g.rows:
                lits = []
                for (sign, pred, _), fa, scls in zip(g.skeletons, resolved, row):
                    atom = PropAtom(pred, fa, scls)
                    vid = atom_ids.setdefault(atom, len(atom_ids) + 1)
                    lits.append(sign * vid)
                key = frozenset(lits)
                if any(-l in key for l in key):
                    continue
                if key in seen:
                    continue
                seen.add(key)
                clauses.append(tuple(lits))
    return PropInstance(len(atom_ids), clauses), atom_ids


def ground_to_prop(
    N: NormalizedClauseSet, domain, fconst_assign, gamma=None
) -> PropInstance:
    """Propositional reduction of N for one candidate interpretation."""
    ctx = _make_context(N, gamma)
    stats = SolveStats()
    gclauses = []
    for cl in N.as_clause_set().clauses:
        g = _ground_clause(ctx, cl, stats)
        if g is not None:
            gclauses.append(g)
    inst, _ = _instantiate(gclauses, tuple(domain), dict(fconst_assign))
    return inst


def prop_solve(inst: PropInstance) -> dict[int, bool] | None:
    return _dpll(inst)


# --- preorder enumeration (slr) --------------------------------------------


def enumerate_preorders(skolems, rationals=()):
    """Ordered partitions of the base constants, rational-order consistent.

    Elements are skolem names and rational values; a partition is kept
    when distinct rationals occupy distinct blocks in ascending order.
    """
    elements = tuple(sorted(set(rationals))) + tuple(sorted(set(skolems)))
    for part in ordered_set_partitions(elements):
        if _rationals_ordered(part):
            yield part


def _rationals_ordered(part) -> bool:
    prev = None
    for block in part:
        rs = [e for e in block if isinstance(e, Fraction)]
        if len(rs) > 1:
            return False
        if rs:
            if prev is not None and not prev < rs[0]:
                return False
            prev = rs[0]
    return True


def _gterm(e) -> GroundTerm:
    return GroundTerm.constant(e) if isinstance(e, Fraction) else GroundTerm.skolem(e)


def _preorder_gamma(pre, def_constraints, skolems):
    """Witness realizing the preorder exactly: equal within blocks, strictly
    increasing across blocks; None when infeasible.

    Strictness across blocks keeps the branch enumeration complete: a
    witness that merged two blocks would duplicate the coarser ordered
    partition, which is enumerated in its own right.
    """
    sys = GroundSystem()
    for left, rel, right in def_constraints:
        sys.add(left, rel, right)
    for bi, block in enumerate(pre):
        for bj in range(bi, len(pre)):
            for c in block:
                for c2 in pre[bj]:
                    if c == c2 or (
                        isinstance(c, Fraction) and isinstance(c2, Fraction)
                    ):
                        continue
                    rel = Relation.LE if bi == bj else Relation.LT
                    sys.add(_gterm(c), rel, _gterm(c2))
    return solve_ground(sys, names=list(skolems))


def _order_key(pre, gamma):
    """Order type induced by gamma on the preorder's elements."""

    def label(e):
        return ("q", str(e)) if isinstance(e, Fraction) else ("s", e)

    def value(e):
        return e if isinstance(e, Fraction) else gamma[e]

    groups: dict[Fraction, list] = {}
    for block in pre:
        for e in block:
            groups.setdefault(value(e), []).append(label(e))
    return tuple(tuple(sorted(g)) for _, g in sorted(groups.items()))


def _contexts(N: NormalizedClauseSet, cs: ClauseSet, stats: SolveStats):
    """The arithmetic branches: one for bd, one per distinct gamma order
    type for slr (ordering guesses that merge to the same gamma order are
    explored once)."""
    if N.mode == MODE_BD:
        yield _make_context(N)
        return
    skolems = sorted(cs.skolems)
    rats = sorted(cs.rationals())
    defs = [
        (GroundTerm.skolem(c.lam[0].skolem), Relation.EQ, c.lam[0].term)
        for c in cs.def_clauses()
    ]
    seen = set()
    for pre in enumerate_preorders(skolems, rats):
        stats.preorders += 1
        gamma = _preorder_gamma(pre, defs, skolems)
        if gamma is None:
            continue
        key = _order_key(pre, gamma)
        if key in seen:
            continue
        seen.add(key)
        points = set(gamma.values()) | set(rats)
        yield _Context(MODE_SLR, gamma, partition=PartitionJ.make(points))


# --- candidate enumeration --------------------------------------------------


def _canonical_assignment(values, domain) -> bool:
    seen: list[str] = []
    for v in values:
        if v not in seen:
            seen.append(v)
    return list(domain[: len(seen)]) == seen


def _candidates(fconsts, symmetry: bool):
    """Nonempty domains by size then lexicographic; assignments lexicographic.

    With symmetry on, assignments are kept only when domain elements make
    their first appearance in domain order (isomorphic candidates pruned).

    Without free constants a single anonymous element suffices: the clauses
    are universal, and substructures of models of universal clauses are
    models.
    """
    names = sorted(fconsts)
    if not names:
        yield ("e1",), {}
        return
    for size in range(1, len(names) + 1):
        for domain in itertools.combinations(names, size):
            for values in itertools.product(domain, repeat=len(names)):
                if symmetry and not _canonical_assignment(values, domain):
                    continue
                yield domain, dict(zip(names, values))


# --- deciding ---------------------------------------------------------------


def _descriptor_from_table(ctx: _Context, domain, assign, table):
    classes = sorted({a.cls for a in table}, key=lambda c: (c.arity, c.sort_key()))
    class_index = {c: i for i, c in enumerate(classes)}
    reps = {i: ctx.rep(c) for c, i in class_index.items()}
    return InterpretationDescriptor(
        ctx.mode,
        tuple(domain),
        dict(assign),
        dict(ctx.gamma),
        dict(table),
        ctx.kappa,
        ctx.partition,
        class_index,
        reps,
    )


def decide(
    N: NormalizedClauseSet,
    *,
    max_candidates: int | None = None,
    symmetry: bool = True,
) -> ResultReport:
    """Exhaustive uniform-model search; SAT with a verified model, or UNSAT.

    Raises ResourceLimitError once more than ``max_candidates`` candidate
    interpretations have been attempted.
    """
    t0 = time.perf_counter()
    stats = SolveStats()
    counters = {"decisions": 0}
    try:
        return _decide_inner(N, stats, counters, max_candidates, symmetry)
    finally:
        stats.decisions = counters["decisions"]
        stats.wall_ms = int((time.perf_counter() - t0) * 1000)


def _decide_inner(N, stats, counters, max_candidates, symmetry) -> ResultReport:
    validate_normal_form(N)
    cs = N.as_clause_set()
    for ctx in _contexts(N, cs, stats):
        gclauses = []
        for cl in cs.clauses:
            g = _ground_clause(ctx, cl, stats)
            if g is not None:
                gclauses.append(g)
        for domain, assign in _candidates(cs.fconsts, symmetry):
            stats.candidates += 1
            if max_candidates is not None and stats.candidates > max_candidates:
                raise ResourceLimitError(
                    f"candidate limit exceeded ({max_candidates})", stats
                )
            inst, atom_ids = _instantiate(gclauses, domain, assign)
            stats.prop_vars += inst.n_vars
            stats.prop_clauses += len(inst.clauses)
            model = _dpll(inst, counters)
            if model is None:
                continue
            table = {atom: model[vid] for atom, vid in atom_ids.items()}
            desc = _descriptor_from_table(ctx, domain, assign, table)
            if not verify_model(N, desc):
                raise RuntimeError(
                    "internal error: candidate model failed semantic re-verification"
                )
            return ResultReport(STATUS_SAT, desc, stats)
    return ResultReport(STATUS_UNSAT, None, stats)


def verify_model(N: NormalizedClauseSet, desc: InterpretationDescriptor) -> bool:
    """Semantic check of every clause on every class representative and
    free assignment.  Classes cut off by the floor hints need no check:
    each of their members falsifies a premise bound."""
    cs = N.as_clause_set()
    ctx = _Context(desc.mode, desc.gamma, kappa=desc.kappa, partition=desc.partition)
    interp = _DescriptorModel(desc)
    for cl in cs.clauses:
        bvars = cl.base_vars()
        fvars = cl.free_vars()
        hints = _clause_hints(desc.mode, cl, bvars)
        for cls in ctx.classes(len(bvars), hints):
            rep = ctx.rep(cls)
            for env_vals in itertools.product(desc.domain, repeat=len(fvars)):
                assign: dict[str, object] = dict(zip(bvars, rep))
                assign.update(zip(fvars, env_vals))
                if not eval_clause(cl, interp, assign):
                    return False
    return True


# --- naive oracle -----------------------------------------------------------


def naive_decide(N: NormalizedClauseSet, *, atom_budget: int = 16) -> ResultReport:
    """Uniform-interpretation search by exhaustive predicate-table
    enumeration, no propositional reduction, no symmetry pruning, no
    class-stream restriction; clause truth comes from representative
    evaluation and classify-after-project.  Test oracle for decide."""
    t0 = time.perf_counter()
    stats = SolveStats()
    validate_normal_form(N)
    cs = N.as_clause_set()
    try:
        for ctx in _contexts(N, cs, stats):
            sem = _semantic_clauses(ctx, cs, stats)
            for domain, assign in _candidates(cs.fconsts, symmetry=False):
                stats.candidates += 1
                found = _naive_candidate(sem, domain, assign, atom_budget)
                if found is None:
                    continue
                bits, t = found
                table = {atom: bool(t >> b & 1) for atom, b in bits.items()}
                desc = _descriptor_from_table(ctx, domain, assign, table)
                if not verify_model(N, desc):
                    raise RuntimeError(
                        "internal error: naive model failed semantic re-verification"
                    )
                return ResultReport(STATUS_SAT, desc, stats)
        return ResultReport(STATUS_UNSAT, None, stats)
    finally:
        stats.wall_ms = int((time.perf_counter() - t0) * 1000)


def _semantic_clauses(ctx: _Context, cs: ClauseSet, stats: SolveStats):
    """Clause truth material, derived semantically per class representative."""
    out = []
    for cl in cs.clauses:
        bvars = cl.base_vars()
        stream = ctx.classes(len(bvars), None)
        stats.classes += len(stream)
        rows = []
        for cls in stream:
            base = dict(zip(bvars, ctx.rep(cls)))
            if not all(eval_constraint(c, base, ctx.gamma) for c in cl.lam):
                continue
            atoms = []
            for sign, part in ((-1, cl.gamma), (1, cl.delta)):
                for a in part:
                    if isinstance(a, Equation):
                        continue
                    vals = tuple(base[v] for v in a.base_args)
                    atoms.append((sign, a.pred, a.free_args, ctx.classify(vals)))
            rows.append(tuple(atoms))
        rows = list(dict.fromkeys(rows))
        if not rows:
            continue
        eq_neg = tuple(a for a in cl.gamma if isinstance(a, Equation))
        eq_pos = tuple(a for a in cl.delta if isinstance(a, Equation))
        out.append((cl.free_vars(), eq_neg, eq_pos, rows))
    return out


def _naive_candidate(sem, domain, assign, atom_budget):
    """Exhaustive table search for one candidate; (bits, table) or None."""
    bits: dict[PropAtom, int] = {}
    masks: set[tuple[int, int]] = set()
    for fvars, eq_neg, eq_pos, rows in sem:
        for env_vals in itertools.product(domain, repeat=len(fvars)):
            env = dict(zip(fvars, env_vals))

            def res(t: FreeTerm) -> str:
                return assign[t.name] if t.is_const else env[t.name]

            if any(res(e.left) != res(e.right) for e in eq_neg):
                continue
            if any(res(e.left) == res(e.right) for e in eq_pos):
                continue
            for row in rows:
                neg = pos = 0
                for sign, pred, fts, cls in row:
                    atom = PropAtom(pred, tuple(res(t) for t in fts), cls)
                    b = bits.setdefault(atom, len(bits))
                    if len(bits) > atom_budget:
                        raise NaiveBudgetError(
                            f"naive oracle needs {len(bits)} atoms, budget {atom_budget}"
                        )
                    if sign < 0:
                        neg |= 1 << b
                    else:
                        pos |= 1 << b
                if not neg & pos:
                    masks.add((neg, pos))
    if (0, 0) in masks:
        return None
    for t in range(1 << len(bits)):
        if all((t & neg) != neg or (t & pos) for neg, pos in masks):
            return bits, t
    return None
