"""Shared random generators and brute-force oracles for the test suite.

Everything here is deliberately naive: oracles recompute results by
exhaustive enumeration so the package code under test never certifies
itself.
"""

from __future__ import annotations

import itertools
import random
from typing import Iterator, Optional

from horneq.core import (El, Morphism, RelDecl, Signature, Structure,
                         enumerate_morphisms)
from horneq.syntax import (DefinedAtom, EqualAtom, Formula, RelAtom,
                           Sequent, Theory, Var, formula_vars)


def random_signature(rng: random.Random, max_sorts: int = 2,
                     max_rels: int = 3) -> Signature:
    sorts = tuple(f"S{i}" for i in range(rng.randint(1, max_sorts)))
    rels = []
    for i in range(rng.randint(1, max_rels)):
        arity = tuple(rng.choice(sorts) for _ in range(rng.randint(1, 2)))
        rels.append(RelDecl(f"R{i}", arity, "pred"))
    return Signature(sorts, tuple(rels))


def random_structure(rng: random.Random, sig: Signature,
                     max_elements: int = 3,
                     min_elements: int = 0) -> Structure:
    x = Structure(sig)
    for s in sig.sorts:
        for _ in range(rng.randint(min_elements, max_elements)):
            x.add_element(s)
    for r in sig.relations:
        pools = [x.elements(s) for s in r.arity]
        if any(not p for p in pools):
            continue
        for _ in range(rng.randint(0, 3)):
            x.add_tuple(r.name, tuple(rng.choice(p) for p in pools))
    return x


def _var_pool(sig: Signature) -> dict[str, list[Var]]:
    names = iter("uvwxyz")
    pool: dict[str, list[Var]] = {s: [] for s in sig.sorts}
    for s in sig.sorts:
        for _ in range(3):
            pool[s].append(Var(next(names), s))
    return pool


def random_formula(rng: random.Random, sig: Signature,
                   pool: dict[str, list[Var]], max_atoms: int = 3,
                   allow_eq: bool = True,
                   restrict: Optional[set[Var]] = None) -> Formula:
    """Random conjunction; with ``restrict``, only those variables are
    used (for surjective conclusions)."""

    def pick(s: str) -> Optional[Var]:
        options = pool[s]
        if restrict is not None:
            options = [v for v in options if v in restrict]
        return rng.choice(options) if options else None

    atoms = []
    for _ in range(rng.randint(0 if restrict is not None else 1, max_atoms)):
        kind = rng.random()
        if kind < 0.15:
            v = pick(rng.choice(sig.sorts))
            if v is not None:
                atoms.append(DefinedAtom(v))
        elif allow_eq and kind < 0.3:
            s = rng.choice(sig.sorts)
            a, b = pick(s), pick(s)
            if a is not None and b is not None:
                atoms.append(EqualAtom(a, b))
        else:
            r = rng.choice(sig.relations)
            args = [pick(s) for s in r.arity]
            if all(a is not None for a in args):
                atoms.append(RelAtom(r, tuple(args)))
    return Formula(tuple(atoms))


def _anchored(premise: Formula, conclusion: Formula
              ) -> tuple[Formula, Formula]:
    """Drop equality and sort-quantification atoms over variables that
    never occur in a relation atom; the surface syntax cannot recover
    their sorts on re-parse."""
    anchored = {v for f in (premise, conclusion) for a in f.atoms
                if isinstance(a, RelAtom) for v in a.args}

    def keep(a) -> bool:
        if isinstance(a, RelAtom):
            return True
        if isinstance(a, DefinedAtom):
            return a.term in anchored
        return a.lhs in anchored and a.rhs in anchored

    return (Formula(tuple(a for a in premise.atoms if keep(a))),
            Formula(tuple(a for a in conclusion.atoms if keep(a))))


def random_sequent(rng: random.Random, sig: Signature,
                   surjective: bool = False, max_atoms: int = 3) -> Sequent:
    pool = _var_pool(sig)
    premise = random_formula(rng, sig, pool, max_atoms)
    if surjective and not any(isinstance(a, RelAtom) for a in premise.atoms):
        r = rng.choice(sig.relations)
        args = tuple(rng.choice(pool[s]) for s in r.arity)
        premise = premise & Formula((RelAtom(r, args),))
    # only variables anchored by a premise relation atom survive pruning,
    # so restrict to those to keep the sequent surjective
    restrict = ({v for a in premise.atoms if isinstance(a, RelAtom)
                 for v in a.args}
                if surjective else None)
    conclusion = random_formula(rng, sig, pool, max_atoms, restrict=restrict)
    premise, conclusion = _anchored(premise, conclusion)
    if not conclusion.atoms:
        pvars = formula_vars(premise)
        if pvars:
            v = rng.choice(pvars)
            conclusion = Formula((EqualAtom(v, v),))
        else:
            r = min(sig.relations, key=lambda d: (len(d.arity), d.name))
            args = tuple(pool[s][0] for s in r.arity)
            conclusion = Formula((RelAtom(r, args),))
    return Sequent(premise, conclusion)


def random_theory(rng: random.Random, sig: Signature, max_sequents: int = 3,
                  surjective: bool = False) -> Theory:
    n = rng.randint(1, max_sequents)
    return Theory(sig, tuple(random_sequent(rng, sig, surjective)
                             for _ in range(n)))


# -- brute-force oracles ---------------------------------------------------


def transitive_closure(n: int, edges: set[tuple[int, int]]
                       ) -> set[tuple[int, int]]:
    reach = set(edges)
    changed = True
    while changed:
        changed = False
        for a, c in list(reach):
            for c2, b in list(reach):
                if c == c2 and (a, b) not in reach:
                    reach.add((a, b))
                    changed = True
    return reach


def all_isomorphisms(a: Structure, b: Structure) -> Iterator[Morphism]:
    for s in a.sig.sorts:
        if len(a.elements(s)) != len(b.elements(s)):
            return
    for m in enumerate_morphisms(a, b):
        if not m.is_injective():
            continue
        inverse = {e2: e1 for e1, e2 in m.mapping.items()}
        try:
            Morphism(b, a, inverse).check_valid()
        except Exception:
            continue
        yield m


def morphisms_isomorphic(f: Morphism, g: Morphism) -> bool:
    """Commuting-square isomorphism of arrows: isos i on domains and j on
    codomains with j . f = g . i."""
    for i in all_isomorphisms(f.dom, g.dom):
        gi = g.compose(i)
        for j in all_isomorphisms(f.cod, g.cod):
            if j.compose(f).mapping == gi.mapping:
                return True
    return False


def structure_from_edges(sig: Signature, rel: str, n: int,
                         edges: set[tuple[int, int]]) -> Structure:
    x = Structure(sig)
    els = [x.add_element(sig.sorts[0]) for _ in range(n)]
    for a, b in sorted(edges):
        x.add_tuple(rel, (els[a], els[b]))
    return x


def relational_reduct(x: Structure, sig: Signature) -> Structure:
    """Copy of ``x`` restricted to the relations of ``sig`` (matched by
    name), re-kinded to predicates."""
    red = Structure(sig)
    mapping: dict[El, El] = {}
    for s in sig.sorts:
        for e in x.elements(s):
            mapping[e] = red.add_element(s)
    for r in sig.relations:
        for t in x.sorted_tuples(r.name):
            red.add_tuple(r.name, tuple(mapping[e] for e in t))
    return red


def enumerate_structures(sig: Signature, max_elements: int
                         ) -> Iterator[Structure]:
    """Every structure with at most ``max_elements`` per sort (labeled,
    not up to isomorphism).  Exponential; keep signatures tiny."""
    sizes = itertools.product(*(range(max_elements + 1)
                                for _ in sig.sorts))
    for size in sizes:
        base = Structure(sig)
        for s, k in zip(sig.sorts, size):
            for _ in range(k):
                base.add_element(s)
        spaces = []
        for r in sig.relations:
            pools = [base.elements(s) for s in r.arity]
            tuples = list(itertools.product(*pools))
            spaces.append([frozenset(c)
                           for k in range(len(tuples) + 1)
                           for c in itertools.combinations(tuples, k)])
        for choice in itertools.product(*spaces):
            x = base.copy()
            for r, ts in zip(sig.relations, choice):
                for t in sorted(ts):
                    x.add_tuple(r.name, t)
            yield x
