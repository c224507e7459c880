import numpy as np
import pytest

from lppdom.errors import DomainError, PreconditionError
from lppdom.events import in_omega_lower, in_omega_upper
from lppdom.lpp import passage_times
from lppdom.surgery import (build_config_a, build_config_b, find_inclusion_counterexample,
                            random_condeps_eps, satisfies_condeps, strict_gain_violations,
                            subtree_inclusion, verify_inclusion, verify_length_conjugacy,
                            verify_omega_equivalence, verify_subtree_shift)
from lppdom.tree import build_forest, subtree_offsets
from lppdom.weights import AxisPerturbation, DistributionSpec, SiteWindow, apply_perturbation, sample_field

GEOM = DistributionSpec.geometric(0.5)
EXP = DistributionSpec.exponential(1)


def random_field(r, window=SiteWindow(9, 8)):
    if r % 2:
        return sample_field(GEOM, window, 41, r, scale=1)
    return sample_field(EXP, window, 41, r)


# -- fixture examples ---------------------------------------------------------

def test_config_a_at_origin_is_identity(fixture_e):
    s = build_config_a(fixture_e, (0, 0))
    assert s.result.same_weights(fixture_e)
    assert s.eps.e00 == 0 and not any(s.eps.ex) and not any(s.eps.ey)


def test_config_a_fixture_e(fixture_e):
    s = build_config_a(fixture_e, (1, 1))
    assert s.eps.e00 == 6 and s.eps.ex == (0,) and s.eps.ey == (0,)
    assert s.result.window == SiteWindow(1, 1)
    assert s.result[(0, 0)] == 9 and s.result[(1, 1)] == 6
    assert passage_times(s.result)[(1, 1)] == 17
    assert verify_length_conjugacy(s) and verify_subtree_shift(s)
    assert subtree_offsets(build_forest(s.result), (1, 1)).offsets == {(0, 0)}
    assert subtree_offsets(build_forest(fixture_e), (2, 2)).offsets == {(0, 0)}


def test_config_a_axis_values(fixture_e):
    g = passage_times(fixture_e)
    s = build_config_a(fixture_e, (1, 0))
    assert s.result[(0, 0)] == g[(1, 0)]
    assert s.result[(1, 0)] == g[(2, 0)] - g[(1, 0)]
    for y in (1, 2):
        assert s.result[(0, y)] == g[(1, y)] - g[(1, y - 1)]


def test_config_a_outside(fixture_e):
    with pytest.raises(DomainError):
        build_config_a(fixture_e, (3, 0))


def test_config_b_examples(fixture_e):
    s = build_config_b(fixture_e, 1)
    assert s.result.same_weights(fixture_e) and s.eps.e00 == 0
    s = build_config_b(fixture_e, 2)
    assert (s.result[(0, 0)], s.result[(0, 1)], s.result[(0, 2)]) == (6, 3, 2)
    assert s.result[(1, 0)] == 1
    assert verify_length_conjugacy(s)


def test_config_b_out_of_range(fixture_e):
    for m in (0, 4):
        with pytest.raises(DomainError):
            build_config_b(fixture_e, m)


def test_omega_equivalence_fixture_e(fixture_e):
    assert not in_omega_lower(fixture_e, 2)
    s = build_config_b(fixture_e, 2)
    assert not in_omega_lower(s.result, 1)
    assert verify_omega_equivalence(fixture_e, 2)
    assert verify_omega_equivalence(fixture_e, 1)


def test_condeps_examples():
    assert satisfies_condeps(AxisPerturbation(0, (0, 0), (0, 0)))
    assert not satisfies_condeps(AxisPerturbation(0, (3, 0), (1, 0)))
    with pytest.raises(PreconditionError):
        satisfies_condeps(AxisPerturbation(0, (1,), (0, 0)))


def test_zero_eps_inclusion(fixture_e):
    zero = AxisPerturbation.zero(fixture_e.window)
    assert verify_inclusion(fixture_e, zero, "thm2")


# -- randomized lemma suites ----------------------------------------------------

def test_conjugacy_and_shift_random():
    rng = np.random.default_rng(5)
    for r in range(1000):
        f = sample_field(GEOM, SiteWindow(10, 10), 9, r, scale=1)
        a = tuple(int(v) for v in rng.integers(0, 10, size=2))
        s = build_config_a(f, a)
        assert verify_length_conjugacy(s), (r, a)
        assert verify_subtree_shift(s), (r, a)
        assert np.all(s.result.weights >= 0)


def test_conjugacy_float_fields():
    for r in range(200):
        f = sample_field(EXP, SiteWindow(8, 6), 2, r)
        assert verify_length_conjugacy(build_config_a(f, (r % 7, r % 5)))


def test_eps_vanishes_next_to_anchor_on_upper_event():
    seen = 0
    for r in range(400):
        f = random_field(r)
        a = (r % 6, (r // 6) % 5)
        if not in_omega_upper(f, a):
            continue
        seen += 1
        eps = build_config_a(f, a).eps
        assert eps.ex[0] == 0 and eps.ey[0] == 0
        assert satisfies_condeps(eps)
    assert seen > 50


def test_inclusion_thm2_random():
    rng = np.random.default_rng(17)
    for r in range(1000):
        f = random_field(r)
        eps = random_condeps_eps(f.window, rng, integer=f.is_integer)
        assert verify_inclusion(f, eps, "thm2"), r


def test_inclusion_thm3_random():
    rng = np.random.default_rng(23)
    held = 0
    for r in range(1000):
        f = sample_field(GEOM, SiteWindow(8, 8), 3, r, scale=1)
        eps = AxisPerturbation(int(rng.integers(0, 4)), [0] * 8, rng.integers(0, 4, size=8).tolist())
        try:
            ok = verify_inclusion(f, eps, "thm3")
        except PreconditionError:
            continue
        held += 1
        assert ok, r
    assert held > 100


def test_thm3_preconditions_distinct_from_failure(fixture_e):
    with pytest.raises(PreconditionError):
        verify_inclusion(fixture_e, AxisPerturbation(0, (1, 0), (0, 0)), "thm3")
    with pytest.raises(PreconditionError, match="field \\+ eps"):
        verify_inclusion(fixture_e, AxisPerturbation(0, (0, 0), (4, 0)), "thm3")
    with pytest.raises(PreconditionError, match="cross conditions"):
        verify_inclusion(fixture_e, AxisPerturbation(0, (3, 0), (1, 0)), "thm2")
    with pytest.raises(PreconditionError):
        verify_inclusion(fixture_e, AxisPerturbation(0, (-1, 0), (0, 0)), "thm2")


def test_omega_equivalence_random():
    for r in range(600):
        f = random_field(r)
        for m in range(2, 7):
            assert verify_omega_equivalence(f, m), (r, m)


def test_strict_gain_random():
    rng = np.random.default_rng(31)
    for r in range(300):
        f = random_field(r, SiteWindow(7, 7))
        eps = AxisPerturbation(int(rng.integers(0, 3)), rng.integers(0, 4, size=7).tolist(),
                               rng.integers(0, 4, size=7).tolist())
        assert strict_gain_violations(f, eps) == [], r


def test_negative_control_finds_counterexample():
    found = find_inclusion_counterexample(GEOM, SiteWindow(6, 6), trials=2000, seed=1)
    assert found is not None
    f, eps = found
    assert not satisfies_condeps(eps)
    assert not subtree_inclusion(f, eps)
    with pytest.raises(PreconditionError):
        verify_inclusion(f, eps, "thm2")


def test_perturbed_field_stays_nonnegative():
    rng = np.random.default_rng(0)
    f = sample_field(GEOM, SiteWindow(5, 5), 0, 0, scale=1)
    eps = random_condeps_eps(f.window, rng)
    assert np.all(apply_perturbation(f, eps).weights >= f.weights)
