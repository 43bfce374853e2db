"""Direct counting, the closed-form count, and the pattern atlas."""

import random
from fractions import Fraction

import pytest

from pcsamp import (
    SignalSpec,
    count_direct,
    cumulative_count,
    delta_chain,
    enumerate_atlas,
    kappa_d,
    random_spec,
    validate_spec,
)


def test_count_direct_examples(running_spec):
    # samples 0.1, 1.1 in [0, 7/4); 2.1, 3.1, 4.1 in [7/4, 17/4)
    assert count_direct(running_spec, Fraction(1, 10)).eta == (2, 3)
    # 4.3 >= 17/4 drops out of region 2
    assert count_direct(running_spec, Fraction(3, 10)).eta == (2, 2)
    # 1.8 >= 7/4 drops out of region 1
    assert count_direct(running_spec, Fraction(4, 5)).eta == (1, 3)


def test_count_direct_rejects_offsets_outside_unit(running_spec):
    with pytest.raises(ValueError):
        count_direct(running_spec, Fraction(5, 4))
    with pytest.raises(ValueError):
        count_direct(running_spec, Fraction(-1, 4))


def test_kappa_d_examples(running_spec):
    assert kappa_d(running_spec, 1, 1) == (0, 5)   # 1/4 + 1/2 < 1
    assert kappa_d(running_spec, 1, 0) == (0, 2)
    spec = validate_spec(SignalSpec.from_columns(g=[4, 2], n=[2, 2], f=["3/5", "3/5"]))
    kappa, d = kappa_d(spec, 1, 1)                  # 6/5 >= 1 carries
    assert kappa == 1
    assert d == 2 + 2 - 1


def test_kappa_d_bounds(running_spec):
    with pytest.raises(IndexError):
        kappa_d(running_spec, 1, 2)
    with pytest.raises(IndexError):
        kappa_d(running_spec, 0, 0)


def test_cumulative_count_examples(running_spec):
    assert cumulative_count(running_spec, 1, 1, Fraction(1, 10)) == 5   # below 1/4
    assert cumulative_count(running_spec, 1, 1, Fraction(3, 10)) == 4
    # a tie with the threshold takes the lower branch
    assert cumulative_count(running_spec, 1, 0, Fraction(3, 4)) == 1


def test_atlas_running(running_spec):
    cells = enumerate_atlas(running_spec).cells
    assert [(c.delta_lo, c.delta_hi, c.pattern.eta) for c in cells] == [
        (0, Fraction(1, 4), (2, 3)),
        (Fraction(1, 4), Fraction(3, 4), (2, 2)),
        (Fraction(3, 4), 1, (1, 3)),
    ]


def test_atlas_single_region():
    spec = validate_spec(SignalSpec.from_columns(g=[5], n=[3], f=["1/2"]))
    cells = enumerate_atlas(spec).cells
    assert [(c.delta_lo, c.delta_hi, c.pattern.eta) for c in cells] == [
        (0, Fraction(1, 2), (3,)),
        (Fraction(1, 2), 1, (2,)),
    ]


def test_atlas_cardinality_and_midpoints_random():
    rng = random.Random(11)
    for _ in range(40):
        spec = random_spec(rng)
        atlas = enumerate_atlas(spec)
        assert len(atlas.cells) == spec.m + 1
        assert len(set(atlas.patterns)) == spec.m + 1
        assert atlas.cells[0].delta_lo == 0
        assert atlas.cells[-1].delta_hi == 1
        for a, b in zip(atlas.cells, atlas.cells[1:]):
            assert a.delta_hi == b.delta_lo
            assert a.pattern != b.pattern
        for cell in atlas.cells:
            mid = (cell.delta_lo + cell.delta_hi) / 2
            assert count_direct(spec, mid) == cell.pattern


def test_delta_chain_examples(running_spec):
    offsets = delta_chain(running_spec, Fraction(1, 10))
    # first sample at or after 7/4 is 2.1, so the second offset is 7/20
    assert offsets == [Fraction(1, 10), Fraction(7, 20)]
    assert delta_chain(running_spec, 0)[0] == 0


def test_delta_chain_matches_direct_placement():
    rng = random.Random(3)
    for _ in range(20):
        spec = random_spec(rng, m_range=(2, 6))
        delta1 = Fraction(rng.randint(0, 100), 101)
        offsets = delta_chain(spec, delta1)
        points = spec.breakpoints
        for i in range(1, spec.m):
            # offset i+1 is the gap from P_i to the first sample at or after it
            k = 0
            while delta1 + k < points[i]:
                k += 1
            assert offsets[i] == delta1 + k - points[i]


def test_formula_equals_direct_counting_everywhere():
    rng = random.Random(23)
    for _ in range(25):
        spec = random_spec(rng, m_range=(1, 6))
        for j in range(101):
            delta1 = Fraction(j, 101)
            pattern = count_direct(spec, delta1)
            for eta_i, n_i in zip(pattern.eta, spec.n):
                assert eta_i in (n_i - 1, n_i)
            offsets = delta_chain(spec, delta1)
            cumulative = [0]
            for eta_i in pattern.eta:
                cumulative.append(cumulative[-1] + eta_i)
            for i in range(1, spec.m + 1):
                for span in range(spec.m - i + 1):
                    direct = cumulative[i + span] - cumulative[i - 1]
                    assert direct == cumulative_count(spec, i, span, offsets[i - 1])
