"""Random instance generators shared by the property and acceptance tests."""

from __future__ import annotations

import random
from fractions import Fraction

from credarg.credal import CredalSet, ProbStatement, assert_consistent
from credarg.logic import TOP, And, Formula, Not, Or, Implies, Var, world_space

TENTHS = [Fraction(k, 10) for k in range(11)]


def random_formula(rng: random.Random, atoms, depth: int = 2) -> Formula:
    if depth == 0 or rng.random() < 0.3:
        return Var(rng.choice(atoms))
    op = rng.choice(["not", "and", "or", "imp"])
    if op == "not":
        return Not(random_formula(rng, atoms, depth - 1))
    left = random_formula(rng, atoms, depth - 1)
    right = random_formula(rng, atoms, depth - 1)
    return {"and": And, "or": Or, "imp": Implies}[op](left, right)


def random_statement(rng: random.Random, atoms) -> ProbStatement:
    target = random_formula(rng, atoms)
    condition = TOP if rng.random() < 0.5 else random_formula(rng, atoms, 1)
    kind = rng.choice(["=", ">=", "<=", "in"])
    if kind == "=":
        return ProbStatement.equal(target, rng.choice(TENTHS), condition)
    if kind == ">=":
        return ProbStatement.at_least(target, rng.choice(TENTHS), condition)
    if kind == "<=":
        return ProbStatement.at_most(target, rng.choice(TENTHS), condition)
    lo, hi = sorted(rng.sample(TENTHS, 2))
    return ProbStatement.between(target, lo, hi, condition)


def random_credal_set(rng: random.Random, max_atoms: int = 3, max_statements: int = 4) -> CredalSet:
    """A consistent random credal set over at most ``max_atoms`` atoms."""
    while True:
        names = ["a", "b", "c"][: rng.randint(1, max_atoms)]
        space = world_space(names)
        stmts = [random_statement(rng, names) for _ in range(rng.randint(0, max_statements))]
        c = CredalSet(space, tuple(stmts))
        if assert_consistent(c):
            return c


def random_query(rng: random.Random, c: CredalSet) -> tuple[Formula, Formula]:
    names = list(c.space.atoms)
    target = random_formula(rng, names)
    evidence = TOP if rng.random() < 0.4 else random_formula(rng, names, 1)
    return target, evidence


def random_pinned(rng: random.Random, names, denominator: int = 20):
    """Equality statements pinning a strictly positive random joint."""
    space = world_space(names)
    n = space.world_count
    while True:
        cuts = sorted(rng.sample(range(1, denominator), n - 1))
        parts = [b - a for a, b in zip([0] + cuts, cuts + [denominator])]
        if all(parts):
            break
    masses = [Fraction(p, denominator) for p in parts]
    stmts = tuple(
        ProbStatement.equal(space.world_formula(w), m) for w, m in enumerate(masses)
    )
    return space, stmts, masses


def random_elimination(rng: random.Random, k: int):
    """A pinned-joint main argument with ``k`` accepted supports.

    Returns ``(main, supports, masses)``; every support's conditional
    is copied from the joint, so combining the premises stays consistent.
    """
    from credarg.logic import model_mask
    from credarg.schema import SchemaIArgument, SchemaIIArgument, UncertaintyPremise

    names = ["a", "b", "c"][: rng.randint(1, 3)]
    while True:
        space, stmts, masses = random_pinned(rng, names)

        def prob(f):
            m = model_mask(f, space)
            return sum((x for w, x in enumerate(masses) if m >> w & 1), Fraction(0))

        query = random_formula(rng, names)
        extra = random_formula(rng, names, 1) if rng.random() < 0.3 else TOP
        targets, supports, ok = [], [], True
        for _ in range(k):
            t, s = random_formula(rng, names), random_formula(rng, names, 1)
            if t in targets or prob(s) == 0 or prob(And(t, s)) / prob(s) <= Fraction(1, 2):
                ok = False
                break
            level = prob(And(t, s)) / prob(s)
            premise = UncertaintyPremise((ProbStatement.equal(t, level, s),))
            base = SchemaIArgument(space, premise, t, (), (s,))
            targets.append(t)
            supports.append((t, SchemaIIArgument(base, level)))
        if not ok:
            continue
        evidence = tuple(targets) + ((extra,) if extra != TOP else ())
        e_new = extra
        for _, s in supports:
            e_new = And(e_new, s.base.evidence[0])
        if prob(conjoin_all(evidence)) == 0 or prob(e_new) == 0:
            continue
        main = SchemaIArgument(space, UncertaintyPremise(stmts), query, (), evidence)
        return main, supports, masses


def conjoin_all(formulas):
    from credarg.logic import conjoin

    return conjoin(list(formulas))
