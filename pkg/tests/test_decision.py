import random
from fractions import Fraction as F

import pytest

from credarg.credal import ProbStatement, cond_bounds
from credarg.decision import (
    GAMMA_MAXIMIN,
    INTERVAL_DOMINANCE,
    Act,
    DecisionProblem,
    ExpectedUtility,
    act,
    choose,
    expected_utility_interval,
)
from credarg.errors import PartitionError
from credarg.logic import Not, conjoin, parse_formula, world_space
from credarg.schema import UncertaintyPremise
from generators import random_credal_set, random_formula, random_query

p = parse_formula


def outing():
    s = world_space(["rain"])
    u = UncertaintyPremise((ProbStatement.between(p("rain"), "0.2", "0.3"),))
    hold = act("hold", [("rain", -10), ("!rain", 10)], s)
    cancel = act("cancel", [("true", 0)], s)
    return DecisionProblem(s, u, (hold, cancel))


def test_outing_expectations():
    prob = outing()
    hold, cancel = prob.acts
    assert expected_utility_interval(prob, hold) == ExpectedUtility(F(4), F(6))
    assert expected_utility_interval(prob, cancel) == ExpectedUtility(F(0), F(0))


def test_rules_on_outing():
    prob = outing()
    assert [a.name for a in choose(prob, GAMMA_MAXIMIN)] == ["hold"]
    assert [a.name for a in choose(prob, INTERVAL_DOMINANCE)] == ["hold"]


def test_identical_acts_tie_by_name():
    s = world_space(["rain"])
    u = UncertaintyPremise((ProbStatement.between(p("rain"), "0.2", "0.3"),))
    a1 = act("zeta", [("rain", 1), ("!rain", 2)], s)
    a2 = act("alpha", [("rain", 1), ("!rain", 2)], s)
    prob = DecisionProblem(s, u, (a1, a2))
    assert [a.name for a in choose(prob)] == ["alpha", "zeta"]


def test_overlapping_intervals_survive_dominance():
    s = world_space(["rain"])
    u = UncertaintyPremise((ProbStatement.between(p("rain"), "0.2", "0.8"),))
    a1 = act("umbrella", [("rain", 5), ("!rain", 1)], s)
    a2 = act("sunhat", [("rain", 0), ("!rain", 6)], s)
    prob = DecisionProblem(s, u, (a1, a2))
    # umbrella [1.8, 4.2], sunhat [1.2, 4.8]
    assert expected_utility_interval(prob, a1) == ExpectedUtility(F(9, 5), F(21, 5))
    assert [a.name for a in choose(prob, INTERVAL_DOMINANCE)] == ["umbrella", "sunhat"]
    assert [a.name for a in choose(prob, GAMMA_MAXIMIN)] == ["umbrella"]


def test_constant_utility():
    rng = random.Random(4)
    c = random_credal_set(rng)
    a = act("flat", [("true", "7/3")], c.space)
    prob = DecisionProblem(c.space, UncertaintyPremise(c.statements), (a,))
    assert expected_utility_interval(prob, a) == ExpectedUtility(F(7, 3), F(7, 3))


def test_partition_errors():
    s = world_space(["a", "b"])
    u = UncertaintyPremise(())
    gap = act("gap", [("a", 1)], s)
    overlap = act("overlap", [("a", 1), ("a | b", 2), ("!a & !b", 0)], s)
    for bad in (gap, overlap):
        with pytest.raises(PartitionError):
            expected_utility_interval(DecisionProblem(s, u, (bad,)), bad)


def test_problem_validation():
    s = world_space(["a"])
    with pytest.raises(ValueError):
        DecisionProblem(s, UncertaintyPremise(()), ())
    a = act("x", [("true", 0)], s)
    with pytest.raises(ValueError):
        DecisionProblem(s, UncertaintyPremise(()), (a, a))
    with pytest.raises(ValueError):
        choose(DecisionProblem(s, UncertaintyPremise(()), (a,)), "minimax_regret")


def random_problem(rng):
    c = random_credal_set(rng)
    names = list(c.space.atoms)
    acts = []
    for i in range(rng.randint(1, 4)):
        f = random_formula(rng, names)
        acts.append(act(f"act{i}", [(f, rng.randint(-5, 5)), (Not(f), rng.randint(-5, 5))], c.space))
    _, e = random_query(rng, c)
    return c, DecisionProblem(c.space, UncertaintyPremise(c.statements), tuple(acts), evidence=(e,))


def feasible(c, e):
    from credarg.credal import upper_prob

    return upper_prob(c, e) > 0


@pytest.mark.parametrize("seed", range(40))
def test_indicator_utility_matches_cond_bounds(seed):
    rng = random.Random(seed)
    c = random_credal_set(rng)
    target, evidence = random_query(rng, c)
    if not feasible(c, evidence):
        return
    a = act("bet", [(target, 1), (Not(target), 0)], c.space)
    prob = DecisionProblem(c.space, UncertaintyPremise(c.statements), (a,), evidence=(evidence,))
    lo, hi = expected_utility_interval(prob, a)
    iv = cond_bounds(c, target, evidence)
    assert (lo, hi) == (iv.lower, iv.upper)


@pytest.mark.parametrize("seed", range(40))
def test_maximin_within_dominance_and_affine_invariance(seed):
    rng = random.Random(seed)
    c, prob = random_problem(rng)
    if not feasible(c, conjoin(list(prob.evidence))):
        return
    g = {a.name for a in choose(prob, GAMMA_MAXIMIN)}
    d = {a.name for a in choose(prob, INTERVAL_DOMINANCE)}
    assert g <= d
    scale, shift = F(rng.randint(1, 5), rng.randint(1, 3)), F(rng.randint(-9, 9))
    moved = DecisionProblem(
        prob.space,
        prob.uncertainty,
        tuple(Act(a.name, tuple((f, scale * u + shift) for f, u in a.clauses)) for a in prob.acts),
        evidence=prob.evidence,
    )
    assert {a.name for a in choose(moved, GAMMA_MAXIMIN)} == g
    assert {a.name for a in choose(moved, INTERVAL_DOMINANCE)} == d
    for a, b in zip(prob.acts, moved.acts):
        lo, hi = expected_utility_interval(prob, a)
        assert expected_utility_interval(moved, b) == ExpectedUtility(scale * lo + shift, scale * hi + shift)
