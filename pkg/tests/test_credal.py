import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from credarg.credal import (
    CredalSet,
    Interval,
    ProbStatement,
    as_fraction,
    assert_consistent,
    cond_bounds,
    lower_prob,
    minimal_conflict,
    prob_bounds,
    restrict,
    upper_prob,
)
from credarg.errors import ImpossibleEvidenceError, InconsistentPremisesError
from credarg.logic import BOTTOM, TOP, Not, Or, model_mask, parse_formula, world_space
from generators import random_credal_set, random_pinned, random_query

p = parse_formula


def urn():
    s = world_space(["typeI", "black"])
    return CredalSet(
        s,
        (
            ProbStatement.equal(p("typeI"), "0.6"),
            ProbStatement.equal(p("black"), "0.9", p("typeI")),
            ProbStatement.equal(p("black"), "0.2", p("!typeI")),
        ),
    )


def rain():
    s = world_space(["rain", "wet"])
    return CredalSet(s, (ProbStatement.between(p("rain"), "0.2", "0.3"),))


class TestNumbers:
    def test_exact_decimals(self):
        assert as_fraction(0.95) == F(19, 20)
        assert as_fraction("0.3") == F(3, 10)
        assert as_fraction("27/31") == F(27, 31)

    def test_interval_validation(self):
        with pytest.raises(ValueError):
            Interval(F(1, 2), F(1, 3))
        with pytest.raises(ValueError):
            Interval(0, F(3, 2))
        assert Interval(0, 1).contains(Interval(F(1, 3), F(1, 2)))
        assert Interval(F(1, 2), F(1, 2)).is_point


class TestConsistency:
    def test_witness(self):
        s = world_space(["a"])
        res = assert_consistent(CredalSet(s, (ProbStatement.equal(p("a"), "0.3"),)))
        assert res.satisfiable
        assert res.witness.masses == (F(7, 10), F(3, 10))

    def test_contradiction(self):
        s = world_space(["a"])
        c = CredalSet(s, (ProbStatement.equal(p("a"), "0.3"), ProbStatement.equal(p("a"), "0.5")))
        assert not assert_consistent(c)
        assert len(minimal_conflict(c)) == 2
        with pytest.raises(InconsistentPremisesError):
            cond_bounds(c, p("a"))

    def test_urn_consistent(self):
        res = assert_consistent(urn())
        assert res
        for stmt in urn().statements:
            assert res.witness.satisfies(stmt)


class TestBounds:
    def test_urn_posterior(self):
        assert cond_bounds(urn(), p("typeI"), p("black")) == Interval(F(27, 31), F(27, 31))

    def test_rain_structural(self):
        c = restrict(rain(), p("rain -> wet"))
        assert lower_prob(c, p("wet")) == F(1, 5)
        assert upper_prob(c, p("wet")) == 1

    def test_rain_as_evidence(self):
        assert cond_bounds(rain(), p("wet"), p("rain -> wet")) == Interval(0, 1)

    def test_lower_of_conjunction_matches_frechet(self):
        s = world_space(["a", "b"])
        c = CredalSet(s, (ProbStatement.at_least(p("a"), "0.6"), ProbStatement.at_least(p("b"), "0.7")))
        assert lower_prob(c, p("a & b")) == F(3, 10)

    def test_tautology(self):
        assert lower_prob(urn(), TOP) == 1
        assert cond_bounds(urn(), p("black"), TOP) == prob_bounds(urn(), p("black"))

    def test_impossible_evidence(self):
        s = world_space(["a"])
        c = CredalSet(s, (ProbStatement.equal(p("a"), 1),))
        with pytest.raises(ImpossibleEvidenceError):
            cond_bounds(c, p("a"), p("!a"))
        with pytest.raises(ImpossibleEvidenceError):
            cond_bounds(c, p("a"), BOTTOM)

    def test_zero_probability_condition_statement(self):
        # P(b | a) = 0.9 is vacuous when P(a) = 0
        s = world_space(["a", "b"])
        c = CredalSet(s, (ProbStatement.equal(p("a"), 0), ProbStatement.equal(p("b"), "0.9", p("a"))))
        assert prob_bounds(c, p("b")) == Interval(0, 1)


class TestRestrict:
    def test_top_is_identity(self):
        assert restrict(urn(), TOP) == urn()

    def test_zeroes_violating_world(self):
        c = restrict(rain(), p("rain -> wet"))
        assert upper_prob(c, p("rain & !wet")) == 0

    def test_bottom_inconsistent(self):
        assert not assert_consistent(restrict(urn(), BOTTOM))


@pytest.mark.parametrize("seed", range(40))
def test_conjugacy_and_superadditivity(seed):
    rng = random.Random(seed)
    c = random_credal_set(rng)
    f, _ = random_query(rng, c)
    assert upper_prob(c, f) == 1 - lower_prob(c, Not(f))
    g, _ = random_query(rng, c)
    s = c.space
    if model_mask(f, s) & model_mask(g, s) == 0:
        assert lower_prob(c, Or(f, g)) >= lower_prob(c, f) + lower_prob(c, g)
    h = Not(f)
    assert lower_prob(c, Or(f, h)) >= lower_prob(c, f) + lower_prob(c, h)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 3))
def test_point_collapse(seed, n_atoms):
    rng = random.Random(seed)
    names = ["a", "b", "c"][:n_atoms]
    space, stmts, masses = random_pinned(rng, names)
    c = CredalSet(space, stmts)
    from generators import random_formula

    target = random_formula(rng, names)
    evidence = random_formula(rng, names, 1)
    e = model_mask(evidence, space)
    te = model_mask(target, space) & e
    pe = sum(m for w, m in enumerate(masses) if e >> w & 1)
    if pe == 0:
        return
    expected = sum(m for w, m in enumerate(masses) if te >> w & 1) / pe
    assert cond_bounds(c, target, evidence) == Interval(expected, expected)
