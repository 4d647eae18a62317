from itertools import combinations, product

import pytest

from condavg import (
    Concept,
    ConfigError,
    Distribution,
    EnumerationGuardError,
    ExplicitClass,
    FullClass,
    PartialConcept,
    SingletonClass,
    ThresholdClass,
    concept_class_from_json,
    concept_class_to_json,
    conditional_average,
    encode_partial_class,
    encode_partial_concept,
    first_consistent_concept,
    is_realizable,
    partial_concepts_from_json,
    restrict,
    shatters,
    vc_dimension,
)

from conftest import random_explicit_class


def brute_force_shatters(cc, s) -> bool:
    realized = {tuple(c.labels[v] for v in s) for c in cc.members()}
    return all(tuple(want) in realized for want in product((0, 1), repeat=len(s)))


def brute_force_vc(cc) -> int:
    best = 0
    for k in range(1, cc.n + 1):
        if any(brute_force_shatters(cc, s) for s in combinations(range(cc.n), k)):
            best = k
        else:
            break
    return best


def test_concept_basics():
    c = Concept((0, 1, True, False))
    assert c.labels == (0, 1, 1, 0)
    assert c.n == 4
    assert c(1) == 1 and c(3) == 0
    assert c.mask() == 0b0110
    with pytest.raises(ValueError):
        Concept((0, 2))


def test_explicit_class_validation():
    with pytest.raises(ValueError):
        ExplicitClass(())
    with pytest.raises(ValueError):
        ExplicitClass((Concept((0,)), Concept((0,))))
    with pytest.raises(ValueError):
        ExplicitClass((Concept((0,)), Concept((0, 1))))
    cc = ExplicitClass((Concept((1, 0)), Concept((0, 0))))
    assert cc.size == 2
    assert [c.labels for c in cc.members()] == [(1, 0), (0, 0)]  # constructor order


def test_full_class_counting_order():
    cc = FullClass(3)
    assert cc.size == 8
    members = list(cc.members())
    assert members[0].labels == (0, 0, 0)
    assert members[5].labels == (1, 0, 1)  # vertex 0 is the least significant bit
    assert members[7].labels == (1, 1, 1)


def test_full_class_enumeration_guard():
    gen = FullClass(21).members()
    with pytest.raises(EnumerationGuardError):
        next(gen)
    assert FullClass(21).size == 2**21  # size itself is fine


def test_threshold_class_shape():
    cc = ThresholdClass(4)
    assert cc.size == 5
    members = [c.labels for c in cc.members()]
    assert members[0] == (0, 0, 0, 0)
    assert members[2] == (1, 1, 0, 0)
    assert members[4] == (1, 1, 1, 1)


def test_shatters_against_brute_force(rng):
    for _ in range(80):
        n = int(rng.integers(1, 7))
        cc = random_explicit_class(rng, n, int(rng.integers(1, 12)))
        k = int(rng.integers(0, min(n, 4) + 1))
        s = sorted(rng.choice(n, size=k, replace=False).tolist())
        assert shatters(cc, s) == brute_force_shatters(cc, s)


def test_shatters_full_class_and_cap():
    assert shatters(FullClass(40), range(25))
    with pytest.raises(ValueError):
        shatters(FullClass(40), range(31))
    with pytest.raises(ValueError):
        shatters(FullClass(4), [1, 1])
    with pytest.raises(ValueError):
        shatters(FullClass(4), [4])


def test_vc_dimension_against_brute_force(rng):
    for _ in range(40):
        n = int(rng.integers(1, 7))
        cc = random_explicit_class(rng, n, int(rng.integers(1, 16)))
        assert vc_dimension(cc) == brute_force_vc(cc)


def test_vc_dimension_known_classes():
    assert vc_dimension(FullClass(9)) == 9
    assert vc_dimension(SingletonClass(Concept((0, 1, 0)))) == 0
    assert vc_dimension(ThresholdClass(6)) == 1
    assert vc_dimension(ThresholdClass(0)) == 0
    assert vc_dimension(ExplicitClass((Concept((1, 1, 0)),))) == 0


def test_vc_dimension_pigeonhole(rng):
    for _ in range(20):
        cc = random_explicit_class(rng, 8, int(rng.integers(1, 20)))
        assert vc_dimension(cc) <= cc.size.bit_length() - 1


def test_restrict_matches_projection(rng):
    for _ in range(40):
        n = int(rng.integers(1, 8))
        cc = random_explicit_class(rng, n, int(rng.integers(1, 12)))
        k = int(rng.integers(1, n + 1))
        s = rng.permutation(n)[:k].tolist()
        out = restrict(cc, s)
        expected = sorted({tuple(c.labels[v] for v in s) for c in cc.members()})
        assert [c.labels for c in out.concepts] == expected


def test_restrict_full_class_fast_path():
    fast = restrict(FullClass(12), [3, 11, 0])
    slow = restrict(ExplicitClass(tuple(FullClass(3).members())), [0, 1, 2])
    assert [c.labels for c in fast.concepts] == [c.labels for c in slow.concepts]
    with pytest.raises(EnumerationGuardError):
        restrict(FullClass(25), range(21))


def test_is_realizable_against_scan(rng):
    for _ in range(60):
        n = int(rng.integers(1, 7))
        cc = random_explicit_class(rng, n, int(rng.integers(1, 10)))
        k = int(rng.integers(0, 2 * n + 1))
        items = [
            (int(rng.integers(0, n)), int(rng.integers(0, 2))) for _ in range(k)
        ]
        by_vertex = {}
        consistent = True
        for v, lab in items:
            if by_vertex.setdefault(v, lab) != lab:
                consistent = False
        expected = consistent and any(
            all(c.labels[v] == lab for v, lab in by_vertex.items())
            for c in cc.members()
        )
        assert is_realizable(cc, items) == expected
        got = first_consistent_concept(cc, items)
        if expected:
            assert got is not None
            assert all(got.labels[v] == lab for v, lab in by_vertex.items())
            # first in enumeration order
            for c in cc.members():
                if all(c.labels[v] == lab for v, lab in by_vertex.items()):
                    assert c == got
                    break
        else:
            assert got is None


def test_realizability_fast_paths():
    assert is_realizable(FullClass(5), [(0, 1), (4, 0)])
    assert not is_realizable(FullClass(5), [(2, 1), (2, 0)])
    single = SingletonClass(Concept((1, 0, 1)))
    assert is_realizable(single, [(0, 1), (1, 0)])
    assert not is_realizable(single, [(1, 1)])
    assert first_consistent_concept(FullClass(4), [(1, 1), (3, 1)]).labels == (
        0,
        1,
        0,
        1,
    )
    assert first_consistent_concept(ThresholdClass(5), [(2, 1)]).labels == (
        1,
        1,
        1,
        0,
        0,
    )


def test_realizable_validates_items():
    with pytest.raises(ValueError):
        is_realizable(FullClass(3), [(3, 0)])
    with pytest.raises(ValueError):
        is_realizable(FullClass(3), [(0, 2)])


def test_partial_concept_support():
    pc = PartialConcept((0, None, 1, None))
    assert pc.n == 4
    assert pc.support == frozenset({0, 2})
    with pytest.raises(ValueError):
        PartialConcept((0, 3))


def test_encode_partial_concept_reproduces_labels():
    pc = PartialConcept((0, None, 1, None, None))
    g, c = encode_partial_concept(pc)
    d = Distribution.uniform(5)
    for v in pc.support:
        assert g.total_degree(v) == 0
        assert conditional_average(g, d, c, v) == float(pc.labels[v])
    for v in range(5):
        if v not in pc.support:
            assert conditional_average(g, d, c, v) == 1.0


def test_encode_partial_class_validation():
    with pytest.raises(ValueError):
        encode_partial_class([])
    with pytest.raises(ValueError):
        encode_partial_class([PartialConcept((0,)), PartialConcept((0, 1))])
    pairs = encode_partial_class([PartialConcept((0, None)), PartialConcept((1, 1))])
    assert len(pairs) == 2


def test_class_json_round_trips():
    classes = [
        ExplicitClass((Concept((0, 1)), Concept((1, 1)))),
        FullClass(6),
        SingletonClass(Concept((1, 0, 0))),
        ThresholdClass(4),
    ]
    for cc in classes:
        assert concept_class_from_json(concept_class_to_json(cc)) == cc


def test_class_json_errors():
    with pytest.raises(ConfigError):
        concept_class_from_json("[1, 2]")
    with pytest.raises(ConfigError):
        concept_class_from_json('{"kind": "mystery"}')
    with pytest.raises(ConfigError):
        concept_class_from_json('{"kind": "explicit", "concepts": []}')
    with pytest.raises(ConfigError):
        concept_class_from_json('{"kind": "explicit", "concepts": [[0], [0]]}')
    with pytest.raises(ConfigError):
        concept_class_from_json('{"kind": "full"}')
    with pytest.raises(ConfigError):
        concept_class_from_json('{"kind": "singleton", "labels": [0, 7]}')


def test_partial_concepts_json():
    out = partial_concepts_from_json('[{"labels": [0, 1, null]}, {"labels": [1]}]')
    assert out[0].labels == (0, 1, None)
    assert out[1].labels == (1,)
    with pytest.raises(ConfigError):
        partial_concepts_from_json('{"labels": [0]}')
    with pytest.raises(ConfigError):
        partial_concepts_from_json("[{}]")
