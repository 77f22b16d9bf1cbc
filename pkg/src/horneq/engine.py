"""Fixed-point evaluation of relational Horn theories.

Each iteration matches every sequent's premise against an immutable snapshot,
then applies the pending conclusions as a batch: relation atoms insert tuples,
equality atoms merge union-find classes, conclusion-only variables create
fresh elements.  Matches whose conclusion already holds are skipped, which
keeps fresh-element creation bounded for non-surjective sequents.  Evaluation
stops at the first iteration that changes nothing.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .core import El, Morphism, SignatureError, Structure
from .syntax import (DefinedAtom, EqualAtom, Formula, RelAtom, Sequent,
                     Theory, Var, formula_vars, is_rhl)


class EvaluationBudgetError(RuntimeError):
    """Iteration budget exhausted before a fixed point; carries the partial
    result."""

    def __init__(self, partial: Structure, unit: "Morphism",
                 report: "EvalReport"):
        super().__init__(
            f"no fixed point within {report.iterations} iterations")
        self.partial = partial
        self.unit = unit
        self.report = report


@dataclass(frozen=True)
class EvalConfig:
    max_iterations: Optional[int] = None
    strategy: str = "naive"  # "naive" | "seminaive"
    strictness: str = "warn"  # "warn" | "error"
    epic_origin: bool = False  # set by callers that flattened an epic PHL theory

    def __post_init__(self):
        if self.max_iterations is not None and self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.strategy not in ("naive", "seminaive"):
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.strictness not in ("warn", "error"):
            raise ValueError(f"unknown strictness {self.strictness!r}")


@dataclass
class IterationStats:
    matches: int = 0
    tuples_added: int = 0
    merges: int = 0
    elements_created: int = 0

    @property
    def changed(self) -> bool:
        return bool(self.tuples_added or self.merges or self.elements_created)


@dataclass
class EvalReport:
    iterations: int = 0
    per_iteration: list[IterationStats] = field(default_factory=list)
    fixed_point: bool = False


@dataclass(frozen=True)
class Match:
    sequent: Sequent
    assignment: tuple[tuple[Var, El], ...]

    def as_dict(self) -> dict[Var, El]:
        return dict(self.assignment)


@dataclass(frozen=True)
class Delta:
    """Tuples and elements new since the previous iteration."""

    tuples: frozenset[tuple[str, tuple[El, ...]]]
    elements: frozenset[El]


# -- premise matching ------------------------------------------------------


def _match_atoms(atoms, x: Structure, assignment: dict[Var, El],
                 used_delta: bool, delta: Optional[Delta],
                 tuple_cache: dict) -> Iterator[tuple[dict[Var, El], bool]]:
    if not atoms:
        if delta is None or used_delta:
            yield assignment, used_delta
        return
    atom, rest = atoms[0], atoms[1:]
    if isinstance(atom, RelAtom):
        name = atom.rel.name
        if name not in tuple_cache:
            tuple_cache[name] = x.sorted_tuples(name)
        get = assignment.get
        for t in tuple_cache[name]:
            local: dict[Var, El] = {}
            ok = True
            for v, e in zip(atom.args, t):
                bound = get(v)
                if bound is None:
                    bound = local.get(v)
                if bound is None:
                    local[v] = e
                elif bound != e:
                    ok = False
                    break
            if not ok:
                continue
            new = dict(assignment)
            new.update(local)
            hit = used_delta or (delta is not None and (name, t) in delta.tuples)
            yield from _match_atoms(rest, x, new, hit, delta, tuple_cache)
    elif isinstance(atom, DefinedAtom):
        v = atom.term
        bound = assignment.get(v)
        if bound is not None:
            hit = used_delta or (delta is not None and bound in delta.elements)
            yield from _match_atoms(rest, x, assignment, hit, delta, tuple_cache)
        else:
            for e in x.elements(v.sort):
                new = dict(assignment)
                new[v] = e
                hit = used_delta or (delta is not None and e in delta.elements)
                yield from _match_atoms(rest, x, new, hit, delta, tuple_cache)
    else:  # EqualAtom
        u, v = atom.lhs, atom.rhs
        bu, bv = assignment.get(u), assignment.get(v)
        if bu is not None and bv is not None:
            if bu == bv:
                yield from _match_atoms(rest, x, assignment, used_delta, delta,
                                        tuple_cache)
        elif bu is not None:
            new = dict(assignment)
            new[v] = bu
            yield from _match_atoms(rest, x, new, used_delta, delta, tuple_cache)
        elif bv is not None:
            new = dict(assignment)
            new[u] = bv
            yield from _match_atoms(rest, x, new, used_delta, delta, tuple_cache)
        else:
            for e in x.elements(u.sort):
                new = dict(assignment)
                new[u] = e
                new[v] = e
                hit = used_delta or (delta is not None and e in delta.elements)
                yield from _match_atoms(rest, x, new, hit, delta, tuple_cache)


def find_matches(f: Formula, x: Structure, delta: Optional[Delta] = None,
                 binding: Optional[dict[Var, El]] = None) -> Iterator[dict[Var, El]]:
    """All interpretations of an RHL formula in ``x``, in deterministic
    order.  With ``delta``, only interpretations touching at least one
    delta-marked tuple or element are yielded.  ``binding`` pre-binds
    variables (used for conclusion extension tests)."""
    if not is_rhl(f):
        raise SignatureError("find_matches expects an RHL formula")
    start = {v: x.find(e) for v, e in (binding or {}).items()}
    for assignment, _ in _match_atoms(f.atoms, x, start, False, delta, {}):
        yield assignment


def _extends(x: Structure, s: Sequent, assignment: dict[Var, El]) -> bool:
    """Can the premise interpretation be extended over the conclusion?"""
    return next(find_matches(s.conclusion, x, binding=assignment), None) is not None


def satisfies(x: Structure, s: Sequent) -> bool:
    """Def.-level satisfaction: every premise interpretation extends."""
    return all(_extends(x, s, m) for m in find_matches(s.premise, x))


def satisfies_theory(x: Structure, t: Theory) -> bool:
    return all(satisfies(x, s) for s in t.sequents)


# -- PHL satisfaction (independent term-evaluation semantics) --------------


def _eval_term(x: Structure, term, assignment: dict[Var, El]) -> Optional[El]:
    if isinstance(term, Var):
        return assignment[term]
    args = []
    for a in term.args:
        e = _eval_term(x, a, assignment)
        if e is None:
            return None
        args.append(e)
    for t in x.rels[term.func.name]:
        if list(t[:-1]) == args:
            return t[-1]
    return None


def _phl_atom_holds(x: Structure, atom, assignment) -> bool:
    if isinstance(atom, RelAtom):
        args = [_eval_term(x, t, assignment) for t in atom.args]
        if any(a is None for a in args):
            return False
        return x.has_tuple(atom.rel.name, tuple(args))
    if isinstance(atom, DefinedAtom):
        return _eval_term(x, atom.term, assignment) is not None
    l = _eval_term(x, atom.lhs, assignment)
    r = _eval_term(x, atom.rhs, assignment)
    return l is not None and l == r


def satisfies_phl(x: Structure, s: Sequent) -> bool:
    """PHL satisfaction over an algebraic structure by direct term
    evaluation; brute-force over variable assignments."""
    pvars = formula_vars(s.premise)
    all_vars = {v: None for v in pvars}
    for v in formula_vars(s.conclusion):
        all_vars.setdefault(v)
    cvars = [v for v in all_vars if v not in set(pvars)]
    spaces = [x.elements(v.sort) for v in pvars]
    for images in itertools.product(*spaces):
        assignment = dict(zip(pvars, images))
        if not all(_phl_atom_holds(x, a, assignment) for a in s.premise.atoms):
            continue
        ext_spaces = [x.elements(v.sort) for v in cvars]
        found = False
        for ext in itertools.product(*ext_spaces):
            full = dict(assignment)
            full.update(zip(cvars, ext))
            if all(_phl_atom_holds(x, a, full) for a in s.conclusion.atoms):
                found = True
                break
        if not found:
            return False
    return True


# -- conclusion application ------------------------------------------------


@dataclass
class ChangeSet:
    tuples_added: list[tuple[str, tuple[El, ...]]] = field(default_factory=list)
    merges: list[tuple[El, El]] = field(default_factory=list)
    elements_created: list[El] = field(default_factory=list)
    recanonicalized: list[tuple[str, tuple[El, ...]]] = field(default_factory=list)

    @property
    def changed(self) -> bool:
        return bool(self.tuples_added or self.merges or self.elements_created)


def apply_match(x: Structure, s: Sequent, assignment: dict[Var, El]) -> ChangeSet:
    """Adjoin the conclusion along a premise match: the pushout of the
    sequent's classifying morphism along the match, realized in place."""
    changes = ChangeSet()
    full = {v: x.find(e) for v, e in assignment.items()}
    for v in formula_vars(s.conclusion):
        if v not in full:
            e = x.add_element(v.sort)
            full[v] = e
            changes.elements_created.append(e)
    for atom in s.conclusion.atoms:
        if isinstance(atom, RelAtom):
            t = tuple(x.find(full[v]) for v in atom.args)
            if x.add_tuple(atom.rel.name, t):
                changes.tuples_added.append((atom.rel.name, x.canonical(t)))
        elif isinstance(atom, EqualAtom):
            a, b = x.find(full[atom.lhs]), x.find(full[atom.rhs])
            if a != b:
                touched = [(rel, t) for rel, ts in x.rels.items() for t in ts
                           if a in t or b in t]
                x.merge(a, b)
                changes.merges.append((a, b))
                changes.recanonicalized.extend(
                    (rel, x.canonical(t)) for rel, t in touched)
        # DefinedAtom: the element exists by construction.
    return changes


# -- the evaluation loop ---------------------------------------------------


DEFAULT_MAX_ITERATIONS = 10000


def evaluate(t: Theory, x: Structure,
             cfg: EvalConfig = EvalConfig()) -> tuple[Structure, Morphism, EvalReport]:
    """Iterate the theory to a fixed point; returns the result, the unit
    morphism from the input, and a report.

    The result is the free model for strong theories and one particular
    weakly free model otherwise.
    """
    if not is_rhl(t):
        raise SignatureError("evaluate expects an RHL theory; flatten first")
    if x.sig != t.signature:
        raise SignatureError("structure signature does not match the theory")

    from .classify import classify_sequent  # syntactic check only

    all_surjective = all(classify_sequent(s).surjective for s in t.sequents)
    if not all_surjective and not cfg.epic_origin:
        message = ("theory has non-surjective sequents of unknown origin; "
                   "the result is only weakly free")
        if cfg.strictness == "error":
            raise SignatureError(message)
        warnings.warn(message, stacklevel=2)

    max_iterations = cfg.max_iterations
    if max_iterations is None and not all_surjective:
        max_iterations = DEFAULT_MAX_ITERATIONS

    result = x.copy()
    report = EvalReport()
    delta: Optional[Delta] = None

    while True:
        snapshot = result.copy()
        stats = IterationStats()
        pending: list[tuple[Sequent, dict[Var, El]]] = []
        for s in t.sequents:
            it_delta = delta if cfg.strategy == "seminaive" else None
            for m in find_matches(s.premise, snapshot, delta=it_delta):
                pending.append((s, m))
        new_tuples: set[tuple[str, tuple[El, ...]]] = set()
        new_elements: set[El] = set()
        for s, m in pending:
            live = {v: result.find(e) for v, e in m.items()}
            if not all(_premise_atom_holds(result, a, live)
                       for a in s.premise.atoms):
                continue  # invalidated by a merge earlier in this batch
            if _extends(result, s, live):
                continue
            stats.matches += 1
            changes = apply_match(result, s, live)
            stats.tuples_added += len(changes.tuples_added)
            stats.merges += len(changes.merges)
            stats.elements_created += len(changes.elements_created)
            new_tuples.update(changes.tuples_added)
            new_tuples.update(changes.recanonicalized)
            new_elements.update(changes.elements_created)
        report.iterations += 1
        report.per_iteration.append(stats)
        if not stats.changed:
            report.fixed_point = True
            break
        # Re-canonicalize the delta against the post-iteration structure.
        delta = Delta(
            frozenset((rel, result.canonical(tp)) for rel, tp in new_tuples
                      if result.canonical(tp) in result.rels[rel]),
            frozenset(result.find(e) for e in new_elements),
        )
        if max_iterations is not None and report.iterations >= max_iterations:
            unit = _unit_morphism(x, result)
            raise EvaluationBudgetError(result, unit, report)

    unit = _unit_morphism(x, result)
    return result, unit, report


def _premise_atom_holds(x: Structure, atom, assignment) -> bool:
    if isinstance(atom, RelAtom):
        return x.has_tuple(atom.rel.name,
                           tuple(assignment[v] for v in atom.args))
    if isinstance(atom, DefinedAtom):
        return True
    return x.find(assignment[atom.lhs]) == x.find(assignment[atom.rhs])


def _unit_morphism(x: Structure, result: Structure) -> Morphism:
    # Element indices of the input are preserved by copy-then-extend.
    mapping = {e: result.find(e) for s in x.sig.sorts for e in x.elements(s)}
    return Morphism(x, result, mapping)


# -- lifting-property checkers --------------------------------------------


def is_injective_to(x: Structure, f: Morphism) -> bool:
    """Every map dom(f) -> x extends along f.  Brute-force enumeration."""
    from .core import enumerate_morphisms

    for a in enumerate_morphisms(f.dom, x):
        if _count_lifts(x, f, a, stop_at=1) == 0:
            return False
    return True


def is_orthogonal_to(x: Structure, f: Morphism) -> bool:
    """Every map dom(f) -> x extends along f in exactly one way."""
    from .core import enumerate_morphisms

    for a in enumerate_morphisms(f.dom, x):
        if _count_lifts(x, f, a, stop_at=2) != 1:
            return False
    return True


def _count_lifts(x: Structure, f: Morphism, a: Morphism, stop_at: int) -> int:
    """Number of maps b : cod(f) -> x with b . f = a, up to ``stop_at``."""
    b, sig = f.cod, f.cod.sig
    fixed: dict[El, El] = {}
    for s in sig.sorts:
        for e in f.dom.elements(s):
            img = f.apply(e)
            want = a.apply(e)
            if img in fixed and fixed[img] != want:
                return 0
            fixed[img] = want
    free = [e for s in sig.sorts for e in b.elements(s) if e not in fixed]
    spaces = [x.elements(e.sort) for e in free]
    count = 0
    for images in itertools.product(*spaces):
        mapping = dict(fixed)
        mapping.update(zip(free, images))
        ok = True
        for rel, tuples in b.rels.items():
            for t in tuples:
                if not x.has_tuple(rel, tuple(mapping[e] for e in t)):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            count += 1
            if count >= stop_at:
                return count
    return count
