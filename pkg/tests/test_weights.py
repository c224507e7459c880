import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lppdom.errors import ConfigurationError, DomainError
from lppdom.rng import site_uniforms
from lppdom.weights import (AxisPerturbation, DistributionSpec, SiteWindow, WeightField,
                            apply_perturbation, field_from_json, field_to_json, sample_field,
                            translate_field)

from oracles import streaming_mean


def test_constant_law_all_ones():
    f = sample_field(DistributionSpec.constant(1), SiteWindow(2, 2), seed=123, replicate=4)
    assert np.all(f.values == 1.0)


@pytest.mark.parametrize("spec", ["exp:1", "geom:0.5", "unif:0,2", "bern:0.3,0,2", "stencil:1:exp:2"])
def test_sampling_is_deterministic(spec):
    s = DistributionSpec.parse(spec)
    a = sample_field(s, SiteWindow(7, 5), 99, 3)
    b = sample_field(s, SiteWindow(7, 5), 99, 3)
    assert a.weights.tobytes() == b.weights.tobytes()
    c = sample_field(s, SiteWindow(7, 5), 99, 4)
    assert not np.array_equal(a.weights, c.weights)


def test_site_draw_independent_of_window():
    s = DistributionSpec.exponential(1)
    small = sample_field(s, SiteWindow(3, 2), 5, 0)
    big = sample_field(s, SiteWindow(9, 11), 5, 0)
    assert np.array_equal(small.weights, big.weights[:4, :3])


def test_stencil_window_independent():
    s = DistributionSpec.parse("stencil:2:unif:0,1")
    small = sample_field(s, SiteWindow(3, 3), 5, 1)
    big = sample_field(s, SiteWindow(8, 8), 5, 1)
    assert np.allclose(small.weights, big.weights[:4, :4], rtol=0, atol=1e-15)


def test_exponential_mean_streaming_oracle():
    f = sample_field(DistributionSpec.exponential(1), SiteWindow(315, 316), 2024, 0)
    assert f.window.n_sites >= 10**5
    m = streaming_mean(f.values.ravel().tolist())
    assert 0.98 <= m <= 1.02


def test_uniforms_open_interval():
    u = site_uniforms(0, 0, np.arange(-500, 500), np.arange(1000))
    assert u.min() > 0 and u.max() < 1


def test_geometric_support_and_mean():
    f = sample_field(DistributionSpec.geometric(0.5), SiteWindow(199, 199), 7, 0, scale=1)
    assert f.weights.min() >= 1
    assert abs(f.weights.mean() - 2.0) < 0.05


@pytest.mark.parametrize("bad", ["exp:0", "exp:-1", "geom:1", "geom:0", "unif:1,1", "unif:-1,2",
                                 "const:-1", "bern:1.5,0,1", "bern:0.5,2,1", "stencil:-1:exp:1",
                                 "nope:1", "exp", "exp:1,2"])
def test_invalid_distribution_parameters(bad):
    with pytest.raises(ConfigurationError):
        DistributionSpec.parse(bad)


@pytest.mark.parametrize("text", ["exp:1", "geom:0.5", "unif:0,2", "const:3", "bern:0.3,0,2",
                                  "stencil:1:geom:0.25"])
def test_distribution_string_round_trip(text):
    s = DistributionSpec.parse(text)
    assert DistributionSpec.parse(str(s)) == s


def test_translate_identity(fixture_e):
    t = translate_field(fixture_e, (0, 0))
    assert t.same_weights(fixture_e)


def test_translate_fixture_e_by_one_one(fixture_e):
    t = translate_field(fixture_e, (1, 1))
    assert t.window == SiteWindow(1, 1)
    assert [t[(0, 0)], t[(1, 0)], t[(0, 1)], t[(1, 1)]] == [3, 1, 2, 6]


@given(st.integers(0, 4), st.integers(0, 4), st.integers(0, 3), st.integers(0, 3))
@settings(max_examples=60, deadline=None)
def test_translation_additive(ax, ay, bx, by):
    f = sample_field(DistributionSpec.exponential(1), SiteWindow(8, 7), 11, 0)
    two = translate_field(translate_field(f, (ax, ay)), (bx, by))
    one = translate_field(f, (ax + bx, ay + by))
    assert two.same_weights(one)
    assert two.origin == (ax + bx, ay + by)


def test_translate_outside_window(fixture_e):
    with pytest.raises(DomainError):
        translate_field(fixture_e, (3, 0))


def test_zero_perturbation(fixture_e):
    assert apply_perturbation(fixture_e, AxisPerturbation.zero(fixture_e.window)).same_weights(fixture_e)


def test_single_site_perturbation(fixture_e):
    out = apply_perturbation(fixture_e, AxisPerturbation(6, (0, 0), (0, 0)))
    diff = out.weights - fixture_e.weights
    assert out[(0, 0)] == 7
    assert np.count_nonzero(diff) == 1


def test_perturbation_touches_only_axes(rng):
    f = sample_field(DistributionSpec.exponential(1), SiteWindow(5, 4), 1, 0)
    eps = AxisPerturbation(0.5, rng.random(5).tolist(), rng.random(4).tolist())
    out = apply_perturbation(f, eps)
    assert np.array_equal(out.weights[1:, 1:], f.weights[1:, 1:])
    assert out.weights[3, 0] == f.weights[3, 0] + eps.ex[2]
    assert out.weights[0, 2] == f.weights[0, 2] + eps.ey[1]


def test_negative_perturbation_rejected(fixture_e):
    with pytest.raises(DomainError):
        apply_perturbation(fixture_e, AxisPerturbation(0, (-6, 0), (0, 0)))


def test_negative_weights_rejected():
    with pytest.raises(DomainError):
        WeightField(SiteWindow(1, 0), [1.0, -0.5])


def test_json_round_trip_layout(fixture_e):
    d = json.loads(field_to_json(fixture_e))
    assert d["window"] == [2, 2]
    assert d["weights"] == [[1, 5, 1], [2, 3, 1], [4, 2, 6]]
    back = field_from_json(field_to_json(fixture_e))
    assert back.same_weights(fixture_e)


def test_json_round_trip_float():
    f = sample_field(DistributionSpec.exponential(1), SiteWindow(4, 6), 3, 2)
    back = field_from_json(field_to_json(f))
    assert back.weights.tobytes() == f.weights.tobytes()
    assert (back.dist, back.seed, back.replicate) == ("exp:1", 3, 2)


def test_integer_scaled_mode():
    f = sample_field(DistributionSpec.bernoulli(0.5, 0.25, 1.5), SiteWindow(6, 6), 0, 0, scale=4)
    assert f.weights.dtype == np.int64
    assert set(np.unique(f.weights)) <= {1, 6}
    back = field_from_json(field_to_json(f))
    assert back.scale == 4 and back.same_weights(f)
