"""Locating discontinuities from observed pattern sets."""

import random

import pytest

from pcsamp import (
    InconsistentObservations,
    ObservationSet,
    SignalSpec,
    chain_analysis,
    cumulative_values,
    enumerate_atlas,
    infer_model,
    random_spec,
    translate,
    validate_spec,
)


def _full_obs(spec):
    return ObservationSet.from_atlas(enumerate_atlas(spec), spec.g)


def test_cumulative_values_running(running_spec):
    obs = _full_obs(running_spec)
    assert cumulative_values(obs, 0, 1) == {1, 2}
    assert cumulative_values(obs, 0, 2) == {4, 5}   # sums 5, 4, 4


def test_cumulative_values_single(example6_spec):
    obs = ObservationSet.of([(3, 3, 2), (3, 3, 1)], example6_spec.g)
    assert cumulative_values(obs, 0, 1) == {3}


def test_cumulative_values_rejects_spread():
    obs = ObservationSet.of([(2, 3), (4, 3)], [4, 2])
    with pytest.raises(InconsistentObservations):
        cumulative_values(obs, 0, 1)


def test_infer_full_atlas_running(running_spec):
    model = infer_model(_full_obs(running_spec), 0)
    assert model.C == (0, 2, 5)
    assert model.U == frozenset()
    assert model.G == ((0, 0), (1, 2), (4, 5))
    truth = translate(running_spec, 0).D
    assert model.G[1][0] < truth[1] < model.G[1][1]
    assert model.G[2][0] < truth[2] < model.G[2][1]


def test_infer_example6_widths(example6_spec):
    obs = ObservationSet.of([(3, 3, 2), (3, 3, 1)], example6_spec.g)
    left = infer_model(obs, 0)
    assert [left.width(i) for i in (1, 2, 3)] == [2, 2, 1]
    assert left.U == frozenset({1, 2})
    right = infer_model(obs, 3)
    assert [right.width(i) for i in (0, 1, 2)] == [1, 1, 1]
    assert right.U == frozenset()


def test_chain_from_single_pattern():
    obs = ObservationSet.of([(3, 1)], [4, 2])
    model = infer_model(obs, 0)
    assert model.C == (0, 3, 4)
    assert model.U == frozenset({1, 2})
    assert model.G == ((0, 0), (2, 4), (3, 5))
    assert len(model.chains.plus) == 1
    chain = model.chains.plus[0]
    assert chain.anchor == 1
    assert chain.length == 1
    assert chain.members == (1, 2)
    assert chain.b == (5 - 2) - 1
    assert model.chains.minus == ()
    assert model.chains.free == frozenset()


def test_chain_mirror_from_single_pattern():
    # the reversed signal observed as (1, 3) from the right reference
    obs = ObservationSet.of([(1, 3)], [2, 4])
    model = infer_model(obs, 2)
    assert model.U == frozenset({0, 1})
    assert model.G[1] == (-4, -2)
    assert model.G[0] == (-5, -3)
    assert len(model.chains.minus) == 1
    chain = model.chains.minus[0]
    assert chain.anchor == 1
    assert chain.length == 1
    assert chain.members == (0, 1)
    assert chain.b == 2


def test_full_atlas_never_chains(running_spec):
    for l in range(running_spec.m + 1):
        model = infer_model(_full_obs(running_spec), l)
        assert model.U == frozenset()
        assert model.chains.empty
        assert model.chains.free == frozenset()


def test_example6_with_big_eta2_has_no_chains(example6_spec):
    # eta_2 = 3 > 1 everywhere, so the width-two run stays uncoupled
    obs = ObservationSet.of([(3, 3, 2), (3, 3, 1)], example6_spec.g)
    model = infer_model(obs, 0)
    assert model.chains.empty
    assert model.chains.free == frozenset({1, 2})


def test_chain_analysis_direct_call():
    obs = ObservationSet.of([(3, 1)], [4, 2])
    structure = chain_analysis(obs, 0, frozenset({1, 2}), ((0, 0), (2, 4), (3, 5)))
    assert structure.plus[0].members == (1, 2)


def test_round_trip_strict_containment_random():
    rng = random.Random(5)
    for _ in range(15):
        spec = random_spec(rng, m_range=(1, 6))
        obs = _full_obs(spec)
        for l in range(spec.m + 1):
            model = infer_model(obs, l)
            assert model.U == frozenset()
            truth = translate(spec, l).D
            for i in range(spec.m + 1):
                if i == l:
                    continue
                lo, hi = model.G[i]
                assert hi - lo == 1
                assert lo < truth[i] < hi


def test_partial_subsets_contain_truth_and_never_widen():
    rng = random.Random(17)
    for _ in range(12):
        spec = random_spec(rng, m_range=(2, 6))
        atlas = enumerate_atlas(spec)
        patterns = list(atlas.patterns)
        rng.shuffle(patterns)
        l = rng.randint(0, spec.m)
        truth = translate(spec, l).D
        previous = None
        for count in range(1, len(patterns) + 1):
            obs = ObservationSet.of(patterns[:count], spec.g)
            model = infer_model(obs, l)
            for i in range(spec.m + 1):
                if i == l:
                    continue
                lo, hi = model.G[i]
                assert lo < truth[i] < hi
                if previous is not None:
                    plo, phi = previous.G[i]
                    assert plo <= lo and hi <= phi   # intervals only narrow
            previous = model
        assert previous.U == frozenset()
        assert all(previous.width(i) == 1 for i in range(spec.m + 1) if i != l)


def test_width_one_intervals_are_disjoint():
    rng = random.Random(29)
    for _ in range(10):
        spec = random_spec(rng, m_range=(2, 6))
        obs = _full_obs(spec)
        for l in range(spec.m + 1):
            model = infer_model(obs, l)
            ordered = sorted(model.Ucomp)
            for a, b in zip(ordered, ordered[1:]):
                assert model.G[a][1] <= model.G[b][0]


def test_mirrored_observations_mirror_the_model():
    rng = random.Random(41)
    for _ in range(10):
        spec = random_spec(rng, m_range=(2, 5))
        mirror = validate_spec(
            SignalSpec.from_columns(
                g=tuple(reversed(spec.g)), n=tuple(reversed(spec.n)), f=tuple(reversed(spec.f))
            )
        )
        atlas = enumerate_atlas(spec)
        subset = [p for k, p in enumerate(atlas.patterns) if k % 2 == 0]
        obs = ObservationSet.of(subset, spec.g)
        mirrored_obs = ObservationSet.of(
            [tuple(reversed(p.eta)) for p in obs.patterns], mirror.g
        )
        m = spec.m
        for l in range(m + 1):
            a = infer_model(obs, l)
            b = infer_model(mirrored_obs, m - l)
            for i in range(m + 1):
                assert a.G[i] == (-b.G[m - i][1], -b.G[m - i][0])
            assert {m - i for i in a.U} == set(b.U)
