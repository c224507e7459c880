import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lppdom.errors import ConfigurationError
from lppdom.predicates import (AllOf, AnyOf, CardAtLeast, ContainsOffsets, ReachesDiagonal,
                               evaluate, make_predicate, monotone_selftest, parse_predicate)
from lppdom.tree import SubtreeOffsets, build_forest, subtree_offsets
from lppdom.weights import SiteWindow


@pytest.fixture
def c_subtree(fixture_c):
    return subtree_offsets(build_forest(fixture_c), (1, 1))


def test_trivial_predicates(c_subtree):
    assert evaluate(make_predicate("card", 0), c_subtree)
    assert evaluate(make_predicate("contains", []), c_subtree)
    assert evaluate(make_predicate("card", 1), c_subtree)


def test_fixture_c_subtree_evaluations(c_subtree):
    assert evaluate(CardAtLeast(2), c_subtree)
    assert not evaluate(CardAtLeast(3), c_subtree)
    assert evaluate(ReachesDiagonal(1), c_subtree)
    assert not evaluate(ReachesDiagonal(2), c_subtree)
    assert evaluate(ContainsOffsets(frozenset({(0, 1)})), c_subtree)
    assert not evaluate(ContainsOffsets(frozenset({(1, 0)})), c_subtree)


def test_diag_beyond_window_is_false():
    s = SubtreeOffsets.from_offsets((0, 0), {(0, 0), (1, 1)}, SiteWindow(1, 1))
    assert ReachesDiagonal(2)(s)
    assert not ReachesDiagonal(3)(s)


@pytest.mark.parametrize("bad", [float("inf"), -1, 1.5, True])
def test_invalid_card_parameter(bad):
    with pytest.raises(ConfigurationError):
        make_predicate("card", bad)


def test_unknown_kind():
    with pytest.raises(ConfigurationError):
        make_predicate("branches", 2)


@pytest.mark.parametrize("pred", [CardAtLeast(3), ReachesDiagonal(4),
                                  ContainsOffsets(frozenset({(1, 1)})),
                                  parse_predicate("card:5&diag:3|contains:(0,2);(2,0)")])
def test_builtin_monotone(pred):
    rep = monotone_selftest(pred, trials=1000, seed=3)
    assert rep.ok and rep.violations == 0


def test_non_monotone_control_detected():
    rep = monotone_selftest(lambda s: s.card % 2 == 0, trials=1000, seed=3)
    assert rep.violations > 0
    small, big = rep.examples[0]
    assert small <= big and len(small) % 2 == 0 and len(big) % 2 == 1


def test_selftest_needs_trials():
    with pytest.raises(ConfigurationError):
        monotone_selftest(CardAtLeast(1), 0, 0)


def test_parse_forms():
    assert parse_predicate("card:5") == CardAtLeast(5)
    assert parse_predicate("diag:15") == ReachesDiagonal(15)
    assert parse_predicate("contains:(1,1);(0,2)") == ContainsOffsets(frozenset({(1, 1), (0, 2)}))
    p = parse_predicate("card:2&diag:1|card:9")
    assert isinstance(p, AnyOf) and isinstance(p.parts[0], AllOf)
    assert str(p) == "card:2&diag:1|card:9"


@pytest.mark.parametrize("text, msg", [("diag:-1", "predicate parameter out of range"),
                                       ("card:inf", "infinite"), ("card", "malformed"),
                                       ("card:x", "malformed"), ("", "empty"),
                                       ("contains:(1,1", "malformed offset"), ("foo:1", "unknown")])
def test_parse_errors(text, msg):
    with pytest.raises(ConfigurationError, match=msg):
        parse_predicate(text)


masks = st.integers(1, 7).flatmap(lambda wx: st.integers(1, 7).flatmap(
    lambda wy: st.tuples(st.lists(st.booleans(), min_size=wx * wy, max_size=wx * wy),
                         st.lists(st.booleans(), min_size=wx * wy, max_size=wx * wy),
                         st.just((wx, wy)))))

preds = st.one_of(st.integers(0, 20).map(CardAtLeast), st.integers(0, 14).map(ReachesDiagonal),
                  st.sets(st.tuples(st.integers(0, 4), st.integers(0, 4)), max_size=3)
                  .map(lambda s: ContainsOffsets(frozenset(s))))


@given(masks, preds, preds)
@settings(max_examples=300, deadline=None)
def test_monotone_under_inclusion_and_combinators(m, p, q):
    a, b, shape = m
    small = np.array(a).reshape(shape)
    small[0, 0] = True
    big = small | np.array(b).reshape(shape)
    for pred in (p, q, p & q, p | q):
        assert not pred.holds(small) or pred.holds(big)
