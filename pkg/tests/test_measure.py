import math

import numpy as np
import pytest

from condavg import (
    Concept,
    ConfigError,
    Distribution,
    LabeledSample,
    UndefinedConditionalError,
    balanced_vertex,
    complete_bidirected_graph,
    conditional_average,
    degree_mass_sums,
    distribution_from_json,
    distribution_to_json,
    draw_sample,
    edgeless_graph,
    empirical_mean_sq_error,
    independence_number,
    is_independent,
    light_mass,
    light_removal_witness,
    pointwise_loss,
    risk,
    star_graph,
)

from conftest import random_graph


def random_distribution(rng, n):
    return Distribution.normalized(rng.uniform(0.0, 1.0, size=n) ** 2)


def random_concept(rng, n):
    return Concept(tuple(int(b) for b in rng.integers(0, 2, size=n)))


def test_distribution_constructor_tolerance():
    Distribution([0.5, 0.5 + 5e-10])  # inside tolerance, renormalized
    with pytest.raises(ValueError):
        Distribution([0.5, 0.5 + 5e-9])
    with pytest.raises(ValueError):
        Distribution([1.5, -0.5])
    with pytest.raises(ValueError):
        Distribution([float("inf"), 0.0])
    d = Distribution([0.25] * 4)
    assert math.fsum(d.weights) == pytest.approx(1.0, abs=1e-15)


def test_distribution_normalized_and_builders():
    d = Distribution.normalized([2, 6])
    assert d.weights == (0.25, 0.75)
    with pytest.raises(ValueError):
        Distribution.normalized([0.0, 0.0])
    u = Distribution.uniform(5)
    assert u.weights == (0.2,) * 5
    with pytest.raises(ValueError):
        Distribution.uniform(0)
    p = Distribution.point_mass(4, 2)
    assert p.weights == (0.0, 0.0, 1.0, 0.0)
    assert p.support == (2,)
    with pytest.raises(ValueError):
        Distribution.point_mass(4, 4)


def test_distribution_mass_dedupes():
    d = Distribution.uniform(4)
    assert d.mass([1, 1, 2]) == pytest.approx(0.5)
    assert d.mass([]) == 0.0


def test_labeled_sample_bookkeeping():
    s = LabeledSample([(3, 1), (0, 0), (3, 1), (2, 0)])
    assert len(s) == 4
    assert s.distinct == (0, 2, 3)
    assert s.count(3) == 2 and s.ones(3) == 2
    assert s.count(7) == 0 and s.ones(7) == 0
    assert s.label(3) == 1 and s.label(0) == 0 and s.label(9) is None
    with pytest.raises(ValueError):
        LabeledSample([(1, 0), (1, 1)])
    with pytest.raises(ValueError):
        LabeledSample([(0, 2)])
    with pytest.raises(ValueError):
        LabeledSample([(-1, 0)])


def test_labeled_sample_blocks():
    s = LabeledSample([(v, 0) for v in range(10)])
    blocks = s.blocks(3)
    assert [b.items for b in blocks] == [
        ((0, 0), (1, 0), (2, 0)),
        ((3, 0), (4, 0), (5, 0)),
        ((6, 0), (7, 0), (8, 0)),  # remainder (9, 0) discarded
    ]
    with pytest.raises(ValueError):
        s.blocks(0)
    with pytest.raises(ValueError):
        s.blocks(11)


def test_labeled_sample_csv():
    s = LabeledSample([(2, 1), (0, 0)])
    assert s.to_csv() == "vertex,label\n2,1\n0,0\n"


def test_conditional_average_star():
    g = star_graph(4)
    d = Distribution.uniform(5)
    c = Concept((1, 0, 0, 0, 0))
    assert conditional_average(g, d, c, 0) == pytest.approx(0.2)
    assert conditional_average(g, d, c, 1) == pytest.approx(0.5)


def test_conditional_average_monochromatic_is_exact(rng):
    # Identical term ordering in numerator and denominator makes a
    # monochromatic neighborhood average exactly 0.0 or 1.0.
    for _ in range(30):
        n = int(rng.integers(1, 9))
        g = random_graph(rng, n, 0.4)
        d = random_distribution(rng, n)
        ones = Concept((1,) * n)
        zeros = Concept((0,) * n)
        for x in d.support:
            assert conditional_average(g, d, ones, x) == 1.0
            assert conditional_average(g, d, zeros, x) == 0.0


def test_conditional_average_undefined():
    g = edgeless_graph(3)
    d = Distribution.point_mass(3, 0)
    with pytest.raises(UndefinedConditionalError):
        conditional_average(g, d, Concept((1, 1, 1)), 1)


def test_pointwise_loss_validation():
    assert pointwise_loss(lambda x: 0.25, 0.75, 0) == pytest.approx(0.25)
    with pytest.raises(ValueError):
        pointwise_loss(lambda x: 0.5, 1.5, 0)
    with pytest.raises(ValueError):
        pointwise_loss(lambda x: -0.1, 0.5, 0)


def test_risk_matches_reordered_sum(rng):
    for _ in range(25):
        n = int(rng.integers(1, 9))
        g = random_graph(rng, n, 0.4)
        d = random_distribution(rng, n)
        c = random_concept(rng, n)
        h = lambda x: 0.5  # noqa: E731
        got = risk(g, d, c, h)
        expected = 0.0
        for x in reversed(d.support):
            y = conditional_average(g, d, c, x)
            expected += d.weight(x) * (y - 0.5) ** 2
        assert got == pytest.approx(expected, abs=1e-12)


def test_risk_of_exact_target_is_zero(rng):
    for _ in range(10):
        n = int(rng.integers(1, 8))
        g = random_graph(rng, n, 0.5)
        d = random_distribution(rng, n)
        c = random_concept(rng, n)
        h = lambda x: conditional_average(g, d, c, x)  # noqa: E731
        assert risk(g, d, c, h) == 0.0


def test_draw_sample_point_mass_and_determinism():
    d = Distribution.point_mass(5, 3)
    c = Concept((0, 0, 0, 1, 0))
    s = draw_sample(d, c, 20, seed=99)
    assert s.items == ((3, 1),) * 20
    s2 = draw_sample(d, c, 20, seed=99)
    assert s2.items == s.items
    s3 = draw_sample(d, c, 20, seed=100)
    assert s3.items == s.items  # point mass regardless of seed
    assert len(draw_sample(d, c, 0, seed=1)) == 0
    with pytest.raises(ValueError):
        draw_sample(d, c, -1, seed=1)
    with pytest.raises(ValueError):
        draw_sample(d, Concept((0,)), 1, seed=1)


def test_draw_sample_skips_zero_weight_and_matches_frequencies():
    d = Distribution([0.5, 0.0, 0.5])
    c = Concept((1, 0, 1))
    s = draw_sample(d, c, 4000, seed=7)
    assert s.count(1) == 0
    assert all(lab == c(v) for v, lab in s.items)
    f0 = s.count(0) / 4000
    assert abs(f0 - 0.5) < 0.03  # ~4 sigma for m=4000


def test_degree_mass_identity(rng):
    # Oracle: both sides equal the total edge weight computed edge by edge.
    for _ in range(40):
        n = int(rng.integers(1, 11))
        g = random_graph(rng, n, 0.4)
        d = random_distribution(rng, n)
        out_total, in_total = degree_mass_sums(g, d)
        edge_total = math.fsum(d.weight(u) * d.weight(v) for (u, v) in g.edges)
        assert abs(out_total - in_total) <= 1e-12
        assert abs(out_total - edge_total) <= 1e-12


def test_balanced_vertex_is_lowest_valid(rng):
    for _ in range(40):
        n = int(rng.integers(1, 10))
        g = random_graph(rng, n, 0.5)
        d = random_distribution(rng, n)
        v = balanced_vertex(g, d)
        out_m = math.fsum(d.weight(u) for u in sorted(g.out_neighbors(v)))
        in_m = math.fsum(d.weight(u) for u in sorted(g.in_neighbors(v)))
        assert out_m >= in_m
        for w in range(v):
            out_w = math.fsum(d.weight(u) for u in sorted(g.out_neighbors(w)))
            in_w = math.fsum(d.weight(u) for u in sorted(g.in_neighbors(w)))
            assert out_w < in_w
    with pytest.raises(ValueError):
        balanced_vertex(edgeless_graph(0), Distribution.uniform(1))


def test_light_mass_non_strict_boundary():
    g = edgeless_graph(4)
    d = Distribution.uniform(4)
    mass, members = light_mass(g, d, 0.25)
    assert members == frozenset(range(4))
    assert mass == pytest.approx(1.0)
    mass, members = light_mass(g, d, 0.2499999)
    assert members == frozenset()
    assert mass == 0.0
    with pytest.raises(ValueError):
        light_mass(g, d, -0.1)


def test_light_removal_witness_properties(rng):
    for _ in range(30):
        n = int(rng.integers(1, 10))
        g = random_graph(rng, n, 0.35)
        d = random_distribution(rng, n)
        lam = float(rng.uniform(0.0, 0.6))
        total, light = light_mass(g, d, lam)
        rounds = light_removal_witness(g, d, lam)
        picked = [v for v, _ in rounds]
        assert is_independent(g, picked)
        removed_union = set()
        for v, removed in rounds:
            assert v in removed
            assert removed <= light
            assert not (removed & removed_union)
            assert d.mass(removed) <= 2 * lam + 1e-12
            removed_union |= removed
        assert removed_union == light
        alpha, _ = independence_number(g)
        assert total <= 2 * lam * alpha + 1e-12


def test_empirical_mean_sq_error():
    assert empirical_mean_sq_error(0.5, 10) == pytest.approx(0.025)
    assert empirical_mean_sq_error(0.0, 3) == 0.0
    with pytest.raises(ValueError):
        empirical_mean_sq_error(1.2, 3)
    with pytest.raises(ValueError):
        empirical_mean_sq_error(0.5, 0)


def test_distribution_json_round_trip(rng):
    d = random_distribution(rng, 6)
    d2 = distribution_from_json(distribution_to_json(d))
    assert np.allclose(d.weights, d2.weights, atol=1e-15)
    # unnormalized input is normalized at load
    d3 = distribution_from_json('{"weights": [2, 2]}')
    assert d3.weights == (0.5, 0.5)
    with pytest.raises(ConfigError):
        distribution_from_json("[0.5, 0.5]")
    with pytest.raises(ConfigError):
        distribution_from_json('{"weights": [-1, 2]}')
    with pytest.raises(ConfigError):
        distribution_from_json("{bad")
