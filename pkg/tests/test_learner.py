import statistics

import pytest

from condavg import (
    AmplifiedModel,
    Concept,
    Distribution,
    ExplicitClass,
    FullClass,
    LabeledSample,
    RealizabilityError,
    SingletonClass,
    ThresholdClass,
    choose_k,
    draw_sample,
    edgeless_graph,
    fit_amplified,
    fit_erm,
    fit_neighbor_average,
    median_combine,
    path_graph,
    risk,
    star_graph,
)

from conftest import random_graph


def test_median_combine_matches_statistics(rng):
    for _ in range(50):
        vals = [float(x) for x in rng.uniform(0, 1, size=int(rng.integers(1, 12)))]
        assert median_combine(vals) == pytest.approx(statistics.median(vals))
    assert median_combine([0.2]) == 0.2
    assert median_combine([0.0, 1.0]) == 0.5
    with pytest.raises(ValueError):
        median_combine([])


def test_choose_k_pinned():
    assert choose_k(0.05) == 69
    assert choose_k(0.5) == 16
    assert choose_k(0.99) == 1
    assert choose_k(0.1) == 53
    with pytest.raises(ValueError):
        choose_k(0.0)
    with pytest.raises(ValueError):
        choose_k(1.0)


def test_neighbor_average_counts_with_multiplicity():
    g = star_graph(4)
    cc = FullClass(5)
    sample = LabeledSample([(0, 1), (1, 0), (1, 0)])
    model = fit_neighbor_average(g, cc, sample)
    assert model.predict(1) == pytest.approx(1 / 3)  # N[1] = {1, 0}
    assert model.predict(2) == pytest.approx(1.0)  # N[2] = {2, 0}, only root hit
    assert model.predict(0) == pytest.approx(1 / 3)  # root sees everything
    assert model.mode == "neighbor_avg"
    assert model(1) == model.predict(1)
    assert len(model.predict_all()) == 5


def test_neighbor_average_validation():
    g = edgeless_graph(3)
    with pytest.raises(ValueError):
        fit_neighbor_average(g, FullClass(3), LabeledSample([(3, 0)]))
    with pytest.raises(ValueError):
        fit_neighbor_average(g, FullClass(4), LabeledSample([]))
    single = SingletonClass(Concept((1, 1, 1)))
    with pytest.raises(RealizabilityError):
        fit_neighbor_average(g, single, LabeledSample([(0, 0)]))
    model = fit_neighbor_average(g, FullClass(3), LabeledSample([(0, 1)]))
    with pytest.raises(ValueError):
        model.predict(3)


def test_fallback_unique_pattern_is_forced():
    # Only one restriction pattern is consistent with the isolated sampled
    # vertex, so the fallback must return its bit.
    g = edgeless_graph(3)
    cc = ExplicitClass((Concept((1, 0, 0)), Concept((0, 1, 1))))
    model = fit_neighbor_average(g, cc, LabeledSample([(0, 1)]))
    assert model.predict(2) == 0.0
    assert model.predict(1) == 0.0


def test_fallback_singleton_fast_path_returns_concept_label():
    g = edgeless_graph(4)
    c = Concept((0, 1, 1, 0))
    model = fit_neighbor_average(
        g, SingletonClass(c), LabeledSample([(0, 0), (1, 1)])
    )
    for x in (2, 3):
        assert model.predict(x) == float(c(x))


def test_fallback_only_when_neighborhood_empty():
    # A sampled out-neighbor suppresses the fallback even if x is unsampled.
    g = path_graph(3)
    cc = FullClass(3)
    model = fit_neighbor_average(g, cc, LabeledSample([(1, 1)]))
    assert model.predict(0) == 1.0  # N[0] = {0, 1}, count 1, ones 1
    assert model.predict(1) == 1.0


def test_fallback_values_are_binary(rng):
    for _ in range(20):
        n = int(rng.integers(2, 7))
        g = random_graph(rng, n, 0.3)
        c_labels = tuple(int(b) for b in rng.integers(0, 2, size=n))
        d = Distribution.uniform(n)
        sample = draw_sample(d, Concept(c_labels), 2, seed=int(rng.integers(1 << 30)))
        model = fit_neighbor_average(g, FullClass(n), sample)
        for x in range(n):
            v = model.predict(x)
            assert 0.0 <= v <= 1.0


def test_amplified_k1_equals_core():
    g = star_graph(5)
    cc = FullClass(6)
    c = Concept((1, 0, 0, 0, 0, 0))
    sample = draw_sample(Distribution.uniform(6), c, 24, seed=5)
    amp = fit_amplified(g, cc, sample, k=1)
    core = fit_neighbor_average(g, cc, sample)
    assert amp.predict_all() == core.predict_all()
    assert amp.mode == "amplified"


def test_amplified_is_pointwise_median_of_blocks():
    g = star_graph(5)
    cc = FullClass(6)
    c = Concept((1, 0, 1, 0, 0, 0))
    sample = draw_sample(Distribution.uniform(6), c, 30, seed=11)
    k = 4
    amp = fit_amplified(g, cc, sample, k=k)
    blocks = [fit_neighbor_average(g, cc, b) for b in sample.blocks(k)]
    assert isinstance(amp, AmplifiedModel)
    for x in range(6):
        expected = median_combine([b.predict(x) for b in blocks])
        assert amp.predict(x) == expected


def test_amplified_validation():
    g = edgeless_graph(2)
    sample = LabeledSample([(0, 1), (1, 0)])
    with pytest.raises(ValueError):
        fit_amplified(g, FullClass(2), sample, k=0)
    with pytest.raises(ValueError):
        fit_amplified(g, FullClass(2), sample, k=3)


def test_erm_formula_by_hand():
    g = path_graph(2)
    cc = ThresholdClass(2)
    fitting = LabeledSample([(0, 1)])
    smoothing = LabeledSample([(1, 0), (1, 0)])
    model = fit_erm(g, cc, fitting, smoothing)
    # first consistent threshold with c(0)=1 is t=1 -> labels (1, 0)
    assert model.concept.labels == (1, 0)
    assert model.predict(0) == pytest.approx((1 + 0) / 3)  # sees both smoothing hits
    assert model.predict(1) == pytest.approx((0 + 0) / 3)
    assert model.mode == "erm"


def test_erm_takes_first_consistent_concept():
    g = edgeless_graph(3)
    cc = ThresholdClass(3)
    model = fit_erm(g, cc, LabeledSample([(2, 0)]), LabeledSample([]))
    # thresholds t=0 labels (0,0,0) is consistent and enumerated first
    assert model.concept.labels == (0, 0, 0)
    assert model.predict(0) == 0.0


def test_erm_validation():
    g = edgeless_graph(2)
    single = SingletonClass(Concept((1, 0)))
    with pytest.raises(RealizabilityError):
        fit_erm(g, single, LabeledSample([(0, 0)]), LabeledSample([]))
    with pytest.raises(RealizabilityError):
        fit_erm(g, single, LabeledSample([]), LabeledSample([(1, 1)]))
    with pytest.raises(ValueError):
        fit_erm(g, FullClass(2), LabeledSample([(2, 0)]), LabeledSample([]))


def test_risk_decreases_with_sample_size():
    g = star_graph(6)
    c = Concept((1, 0, 0, 1, 0, 0, 1))
    d = Distribution.uniform(7)
    cc = FullClass(7)
    small = []
    large = []
    for seed in range(8):
        small.append(risk(g, d, c, fit_neighbor_average(g, cc, draw_sample(d, c, 4, seed))))
        large.append(
            risk(g, d, c, fit_neighbor_average(g, cc, draw_sample(d, c, 400, seed)))
        )
    assert sum(large) / len(large) < sum(small) / len(small)


def test_prediction_memoized_and_stable():
    g = star_graph(3)
    sample = draw_sample(Distribution.uniform(4), Concept((1, 0, 0, 0)), 6, seed=3)
    model = fit_neighbor_average(g, FullClass(4), sample)
    first = model.predict_all()
    assert model.predict_all() == first
