"""Normal-form transformation for the two clause fragments.

The pipeline pads predicates to a uniform sort, scales difference-bound
constants to integers, eliminates variables that occur only in the
constraint part (Fourier-Motzkin, with disequations split into clause
copies), names compound ground terms through definitional Skolem clauses,
renames clauses apart, and guarantees at least one free constant.  The
result is equisatisfiable with the input and satisfies the normal-form
invariants checked by ``validate_normal_form``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .linarith import GroundSystem, fm_project
from .terms import (
    MODE_BD,
    MODE_SLR,
    Clause,
    ClauseSet,
    Constraint,
    DeltaEq,
    DiffConst,
    Equation,
    FragmentError,
    FreeTerm,
    GroundCmp,
    GroundTerm,
    PredAtom,
    Relation,
    SkolemDef,
    VarConst,
    VarVar,
    atom_base_vars,
    atom_free_vars,
    constraint_vars,
)

_VAR_MARK = "#"  # prefix marking clause variables inside FM ground terms

SKOLEM_PREFIX = "_sk"
VAR_PREFIX = "_v"
FCONST_PREFIX = "_fc"


@dataclass
class NormalizedClauseSet:
    """Definitional clauses plus the core clauses, with symbol provenance."""

    mode: str
    n_def: list[Clause]
    n_prime: list[Clause]
    signature: dict[str, tuple[int, int]]
    fconsts: list[str]
    skolems: list[str]
    provenance: dict[str, str] = field(default_factory=dict)

    def as_clause_set(self) -> ClauseSet:
        return ClauseSet(
            self.mode,
            list(self.n_def) + list(self.n_prime),
            dict(self.signature),
            list(self.fconsts),
            list(self.skolems),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NormalizedClauseSet):
            return NotImplemented
        return (
            self.mode == other.mode
            and self.n_def == other.n_def
            and self.n_prime == other.n_prime
            and self.signature == other.signature
            and self.fconsts == other.fconsts
            and self.skolems == other.skolems
        )


class NormalFormError(ValueError):
    """The clause set violates a normal-form invariant."""


# --- padding ---------------------------------------------------------------


def pad_predicates(cs: ClauseSet) -> ClauseSet:
    """Give every predicate the maximal sort S^mf x R^mb.

    Each atom occurrence is padded with one fresh variable per sort,
    repeated across all the new positions of that occurrence.
    """
    if not cs.signature:
        return _copy(cs)
    mf = max(a for a, _ in cs.signature.values())
    mb = max(b for _, b in cs.signature.values())
    if all((a, b) == (mf, mb) for a, b in cs.signature.values()):
        return _copy(cs)
    counter = _FreshNames(VAR_PREFIX, _used_names(cs))
    clauses = []
    for cl in cs.clauses:
        gamma = [_pad_atom(a, cs.signature, mf, mb, counter) for a in cl.gamma]
        delta = [_pad_atom(a, cs.signature, mf, mb, counter) for a in cl.delta]
        clauses.append(Clause.make(cl.lam, gamma, delta))
    signature = {p: (mf, mb) for p in cs.signature}
    return ClauseSet(cs.mode, clauses, signature, list(cs.fconsts), list(cs.skolems))


def _pad_atom(atom, signature, mf: int, mb: int, counter: "_FreshNames"):
    if isinstance(atom, Equation):
        return atom
    pf, pb = signature[atom.pred]
    free = atom.free_args
    base = atom.base_args
    if pf < mf:
        v = counter.next()
        free = free + (FreeTerm(v, False),) * (mf - pf)
    if pb < mb:
        v = counter.next()
        base = base + (v,) * (mb - pb)
    return PredAtom(atom.pred, free, base)


# --- scaling ---------------------------------------------------------------


def scale_to_integers(cs: ClauseSet) -> ClauseSet:
    """Multiply all difference-bound constants by the least common multiple
    of their denominators; satisfiability is preserved by rescaling models."""
    if cs.mode != MODE_BD:
        raise FragmentError("scaling applies to bd mode only")
    denoms = [q.denominator for q in cs.rationals()]
    scale = math.lcm(*denoms) if denoms else 1
    if scale == 1:
        return _copy(cs)
    clauses = []
    for cl in cs.clauses:
        lam = [_scale_constraint(c, scale) for c in cl.lam]
        clauses.append(Clause.make(lam, cl.gamma, cl.delta))
    return ClauseSet(cs.mode, clauses, dict(cs.signature), list(cs.fconsts), list(cs.skolems))


def _scale_constraint(c: Constraint, scale: int) -> Constraint:
    if isinstance(c, VarConst):
        return VarConst(c.var, c.rel, c.bound.scale(scale))
    if isinstance(c, DiffConst):
        return DiffConst(c.var, c.other, c.rel, c.const * scale)
    if isinstance(c, GroundCmp):
        return GroundCmp(c.left.scale(scale), c.rel, c.right.scale(scale))
    if isinstance(c, VarVar):
        return c
    raise FragmentError(f"cannot scale constraint {c}")


# --- purification ----------------------------------------------------------


def purify(cs: ClauseSet) -> ClauseSet:
    """Base terms inside atoms would be abstracted out here; the clause
    grammar only admits variables in base positions, so this validates and
    returns the set unchanged."""
    for cl in cs.clauses:
        for a in cl.gamma + cl.delta:
            if isinstance(a, PredAtom):
                for v in a.base_args:
                    if not isinstance(v, str):
                        raise FragmentError(f"non-variable base argument in {a}")
    return _copy(cs)


# --- constraint-only variable elimination ----------------------------------


def eliminate_constraint_only_vars(cs: ClauseSet) -> ClauseSet:
    """Project out variables that occur in constraints but in no atom.

    Disequations over such variables split the clause in two (premise-side
    disjunction), then each copy goes through exact Fourier-Motzkin.  Clauses
    whose constraint part becomes unsatisfiable are dropped (they hold
    vacuously); tautological residue constraints are folded away.
    """
    clauses: list[Clause] = []
    for cl in cs.clauses:
        clauses.extend(_eliminate_clause(cl, cs.mode))
    deduped: list[Clause] = []
    for cl in clauses:
        if cl not in deduped:
            deduped.append(cl)
    return ClauseSet(cs.mode, deduped, dict(cs.signature), list(cs.fconsts), list(cs.skolems))


def _eliminate_clause(cl: Clause, mode: str) -> list[Clause]:
    atom_vars = set()
    for a in cl.gamma + cl.delta:
        atom_vars.update(atom_base_vars(a))
    elim: list[str] = []
    for c in cl.lam:
        if isinstance(c, DeltaEq):
            raise FragmentError("synchronous delay constraints cannot be normalized")
        for v in constraint_vars(c):
            if v not in atom_vars and v not in elim:
                elim.append(v)
    if not elim:
        return [cl]
    out: list[Clause] = []
    for lam in _split_disequations(list(cl.lam), set(elim)):
        reduced = _project_vars(lam, elim, mode)
        if reduced is not None:
            out.append(Clause.make(reduced, cl.gamma, cl.delta))
    return out


def _split_disequations(lam: list[Constraint], elim: set[str]) -> list[list[Constraint]]:
    for i, c in enumerate(lam):
        if _is_var_neq(c) and set(constraint_vars(c)) & elim:
            lo = lam[:i] + [_with_rel(c, Relation.LT)] + lam[i + 1 :]
            hi = lam[:i] + [_with_rel(c, Relation.GT)] + lam[i + 1 :]
            return _split_disequations(lo, elim) + _split_disequations(hi, elim)
    return [lam]


def _is_var_neq(c: Constraint) -> bool:
    return isinstance(c, (VarConst, VarVar, DiffConst)) and c.rel is Relation.NEQ


def _with_rel(c: Constraint, rel: Relation) -> Constraint:
    if isinstance(c, VarConst):
        return VarConst(c.var, rel, c.bound)
    if isinstance(c, VarVar):
        return VarVar(c.var, rel, c.other)
    return DiffConst(c.var, c.other, rel, c.const)


def _mark(var: str) -> GroundTerm:
    return GroundTerm.skolem(_VAR_MARK + var)


def _encode_constraint(c: Constraint) -> tuple[GroundTerm, Relation, GroundTerm] | None:
    """Constraint as a ground comparison with clause variables marked."""
    if isinstance(c, VarConst):
        return _mark(c.var), c.rel, c.bound
    if isinstance(c, VarVar):
        return _mark(c.var), c.rel, _mark(c.other)
    if isinstance(c, DiffConst):
        return _mark(c.var).sub(_mark(c.other)), c.rel, GroundTerm.constant(c.const)
    if isinstance(c, GroundCmp):
        return c.left, c.rel, c.right
    return None  # SkolemDef: variable-free, reattached verbatim


def _project_vars(lam: list[Constraint], elim: list[str], mode: str) -> list[Constraint] | None:
    kept: list[Constraint] = []
    sys = GroundSystem()
    for c in lam:
        enc = _encode_constraint(c)
        if enc is None:
            kept.append(c)
        else:
            sys.add(*enc)
    for v in elim:
        sys = fm_project(sys, _VAR_MARK + v)
    for left, rel, right in sys.constraints:
        dec = _decode_constraint(left, rel, right, mode)
        if dec is _VALID:
            continue
        if dec is _UNSAT:
            return None
        kept.append(dec)
    return kept


_VALID = object()
_UNSAT = object()


def _decode_constraint(left: GroundTerm, rel: Relation, right: GroundTerm, mode: str):
    e = left.sub(right)
    vars_part = {n[len(_VAR_MARK) :]: q for n, q in e.coeffs if n.startswith(_VAR_MARK)}
    ground = GroundTerm.make(
        e.offset, {n: q for n, q in e.coeffs if not n.startswith(_VAR_MARK)}
    )
    if not vars_part:
        if ground.is_rational:
            return _VALID if rel.holds(ground.offset, Fraction(0)) else _UNSAT
        return GroundCmp(GroundTerm.make(0, dict(ground.coeffs)), rel, GroundTerm.constant(-ground.offset))
    if len(vars_part) == 1:
        (x, a), = vars_part.items()
        rel2 = rel if a > 0 else rel.flip()
        return VarConst(x, rel2, ground.scale(Fraction(-1, 1) / a))
    if len(vars_part) == 2:
        (x, a), (y, b) = sorted(vars_part.items())
        if a + b != 0:
            raise FragmentError(f"elimination left a non-difference constraint on {x}, {y}")
        if a < 0:
            x, y, a, b = y, x, b, a
        const = ground.scale(Fraction(-1, 1) / a)
        if not const.is_rational:
            raise FragmentError(f"difference of {x}, {y} bounded by a non-constant term")
        if const.offset == 0:
            return VarVar(x, rel, y)
        if mode != MODE_BD:
            raise FragmentError("elimination would need a difference constraint outside bd mode")
        return DiffConst(x, y, rel, const.offset)
    raise FragmentError("elimination left a constraint over three or more variables")


# --- ground-term naming ----------------------------------------------------


def split_ground_terms(cs: ClauseSet) -> tuple[ClauseSet, list[Clause], dict[str, str]]:
    """Name every compound ground term with a definitional Skolem constant.

    Returns the rewritten core set, the definitional clauses (existing ones
    are carried over), and the provenance of fresh names.  Structurally equal
    terms share one name.
    """
    provenance: dict[str, str] = {}
    defs: list[Clause] = [c for c in cs.clauses if c.is_def_clause()]
    skolems = list(cs.skolems)
    counter = _FreshNames(SKOLEM_PREFIX, set(skolems))
    by_term: dict[GroundTerm, str] = {}
    for cl in defs:
        d = cl.lam[0]
        by_term.setdefault(d.term, d.skolem)

    def name_of(t: GroundTerm) -> GroundTerm:
        if t.is_constant_ref:
            return t
        if t not in by_term:
            fresh = counter.next()
            by_term[t] = fresh
            skolems.append(fresh)
            provenance[fresh] = str(t)
            defs.append(Clause.make([SkolemDef(fresh, t)], [], []))
        return GroundTerm.skolem(by_term[t])

    core: list[Clause] = []
    for cl in cs.clauses:
        if cl.is_def_clause():
            continue
        lam = []
        for c in cl.lam:
            if isinstance(c, VarConst):
                lam.append(VarConst(c.var, c.rel, name_of(c.bound)))
            elif isinstance(c, GroundCmp):
                lam.append(GroundCmp(name_of(c.left), c.rel, name_of(c.right)))
            elif isinstance(c, SkolemDef):
                lam.append(GroundCmp(GroundTerm.skolem(c.skolem), Relation.NEQ, name_of(c.term)))
            else:
                lam.append(c)
        core.append(Clause.make(lam, cl.gamma, cl.delta))
    out = ClauseSet(cs.mode, core, dict(cs.signature), list(cs.fconsts), skolems)
    return out, defs, provenance


# --- renaming and assembly -------------------------------------------------


class _FreshNames:
    def __init__(self, prefix: str, used: set[str]):
        self.prefix = prefix
        self.used = set(used)
        self.n = 0

    def next(self) -> str:
        while True:
            name = f"{self.prefix}{self.n}"
            self.n += 1
            if name not in self.used:
                self.used.add(name)
                return name


def _used_names(cs: ClauseSet) -> set[str]:
    used = set(cs.fconsts) | set(cs.skolems) | set(cs.signature)
    for cl in cs.clauses:
        used.update(cl.base_vars())
        used.update(cl.free_vars())
    return used


def _copy(cs: ClauseSet) -> ClauseSet:
    return ClauseSet(cs.mode, list(cs.clauses), dict(cs.signature), list(cs.fconsts), list(cs.skolems))


def rename_apart(cs: ClauseSet) -> tuple[ClauseSet, dict[str, str]]:
    """Give every clause its own disjoint variable names (_v0, _v1, ...)."""
    counter = _FreshNames(VAR_PREFIX, set(cs.fconsts) | set(cs.skolems) | set(cs.signature))
    provenance: dict[str, str] = {}
    clauses = []
    for i, cl in enumerate(cs.clauses):
        mapping: dict[str, str] = {}
        for v in cl.base_vars() + cl.free_vars():
            if v not in mapping:
                fresh = counter.next()
                mapping[v] = fresh
                provenance[fresh] = f"{v} in clause {i}"
        clauses.append(_rename_clause(cl, mapping))
    return ClauseSet(cs.mode, clauses, dict(cs.signature), list(cs.fconsts), list(cs.skolems)), provenance


def _rename_clause(cl: Clause, mapping: dict[str, str]) -> Clause:
    def rv(v: str) -> str:
        return mapping.get(v, v)

    lam = []
    for c in cl.lam:
        if isinstance(c, VarConst):
            lam.append(VarConst(rv(c.var), c.rel, c.bound))
        elif isinstance(c, VarVar):
            lam.append(VarVar(rv(c.var), c.rel, rv(c.other)))
        elif isinstance(c, DiffConst):
            lam.append(DiffConst(rv(c.var), rv(c.other), c.rel, c.const))
        else:
            lam.append(c)

    def ra(a):
        if isinstance(a, Equation):
            return Equation(_rt(a.left, rv), _rt(a.right, rv))
        return PredAtom(a.pred, tuple(_rt(t, rv) for t in a.free_args), tuple(rv(v) for v in a.base_args))

    return Clause.make(lam, [ra(a) for a in cl.gamma], [ra(a) for a in cl.delta])


def _rt(t: FreeTerm, rv) -> FreeTerm:
    return t if t.is_const else FreeTerm(rv(t.name), False)


def normalize(cs: ClauseSet) -> NormalizedClauseSet:
    """Full pipeline; the result is equisatisfiable and in normal form."""
    cs.validate()
    if cs.mode not in (MODE_SLR, MODE_BD):
        raise FragmentError(f"cannot normalize mode {cs.mode!r}")
    out = pad_predicates(cs)
    if cs.mode == MODE_BD:
        out = scale_to_integers(out)
    out = purify(out)
    out = eliminate_constraint_only_vars(out)
    provenance: dict[str, str] = {}
    if cs.mode == MODE_SLR:
        out, defs, prov_sk = split_ground_terms(out)
        provenance.update(prov_sk)
    else:
        defs = []
    out, prov_var = rename_apart(out)
    provenance.update(prov_var)
    fconsts = list(out.fconsts)
    if not fconsts:
        name = _FreshNames(FCONST_PREFIX, _used_names(out)).next()
        fconsts.append(name)
        provenance[name] = "added free constant"
    ncs = NormalizedClauseSet(
        out.mode, defs, list(out.clauses), dict(out.signature), fconsts, list(out.skolems), provenance
    )
    validate_normal_form(ncs)
    return ncs


# --- validation ------------------------------------------------------------


def validate_normal_form(ncs: NormalizedClauseSet) -> None:
    cs = ncs.as_clause_set()
    cs.validate()
    if not ncs.fconsts:
        raise NormalFormError("normal form requires at least one free constant")
    for cl in ncs.n_def:
        if not cl.is_def_clause():
            raise NormalFormError(f"not a definitional clause: {cl}")
    seen_vars: set[str] = set()
    for cl in ncs.n_prime:
        atom_vars = set()
        for a in cl.gamma + cl.delta:
            atom_vars.update(atom_base_vars(a))
        for c in cl.lam:
            if isinstance(c, SkolemDef):
                raise NormalFormError(f"definitional constraint outside n_def: {c}")
            if isinstance(c, GroundCmp):
                if not (c.left.is_constant_ref and c.right.is_constant_ref):
                    raise NormalFormError(f"compound ground comparison remains: {c}")
            if isinstance(c, VarConst) and not c.bound.is_constant_ref:
                raise NormalFormError(f"compound variable bound remains: {c}")
            for v in constraint_vars(c):
                if v not in atom_vars:
                    raise NormalFormError(f"constraint-only variable {v!r} remains in {cl}")
        if ncs.mode == MODE_BD:
            for q in cl.rationals():
                if q.denominator != 1:
                    raise NormalFormError(f"non-integer constant remains: {q}")
        cl_vars = set(cl.base_vars()) | {v for a in cl.gamma + cl.delta for v in atom_free_vars(a)}
        if cl_vars & seen_vars:
            raise NormalFormError(f"clauses share variables: {sorted(cl_vars & seen_vars)}")
        seen_vars |= cl_vars
