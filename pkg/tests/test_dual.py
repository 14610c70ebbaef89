import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ubp_forge.core import Functional, SeqVector, inner, norm, operator_norm
from ubp_forge.dual import (
    BASEL,
    DualWitness,
    SetSample,
    coordinate_unbounded_direction,
    diagonal_certificate,
    diagonal_dual_witness,
    dual_witness,
)
from ubp_forge.errors import FamilyUniformlyBounded, SampleExhausted


class TestDualWitness:
    def test_sqrt_n_diagonal(self):
        sample = SetSample.diagonal([math.sqrt(n) for n in range(1, 4097)])
        w, cert = dual_witness(sample, 2)
        assert cert.passed
        # sqrt(4096) = 64 = 4^3 * 1 is the first admissible second link
        assert w.subsequence == (1, 4096)
        # disjoint supports: value_k = 4^-k |s_(n_k)|
        assert w.values == (0.25, 4.0)
        assert w.norms == (1.0, 64.0)

    def test_bounded_sample(self):
        sample = SetSample(tuple(SeqVector.basis(n, 3.0) for n in range(1, 50)))
        with pytest.raises(FamilyUniformlyBounded):
            dual_witness(sample, 2)

    def test_k2_on_k4(self):
        sample = SetSample(tuple(SeqVector.basis(k**4, float(k * k)) for k in range(1, 9)))
        w, cert = dual_witness(sample, 2)
        assert cert.passed
        assert w.subsequence == (1, 8)
        assert set(w.rep.support) == {1, 8**4}
        assert w.values == (0.25 * 1, 4.0**-2 * 64)

    def test_transfer_bound_and_isometry(self, rng):
        for _ in range(40):
            d = 6
            els = []
            scale = 1.0
            for _ in range(12):
                scale *= rng.uniform(1.0, 40.0)
                els.append(SeqVector.from_array(rng.standard_normal(d) * scale))
            sample = SetSample(tuple(els))
            try:
                w, cert = dual_witness(sample, 2)
            except FamilyUniformlyBounded:
                continue
            assert cert.passed
            for k, (v, s) in enumerate(zip(w.values, w.norms), start=1):
                assert v >= 4.0**-k * s / 6
                assert v == pytest.approx(abs(inner(sample.elements[w.subsequence[k - 1] - 1], w.rep)))

    def test_isometry(self, rng):
        for _ in range(200):
            s = SeqVector.from_array(rng.standard_normal(int(rng.integers(1, 20))))
            assert operator_norm(Functional(s)).value == pytest.approx(norm(s, 2), rel=1e-12)

    @settings(max_examples=60)
    @given(st.lists(st.floats(min_value=1.0, max_value=63.9), min_size=1, max_size=30))
    def test_bounded_samples_never_certify(self, radii):
        # no norm ratio reaches 4^3, so no depth-2 chain exists
        sample = SetSample(tuple(SeqVector.basis(i, r) for i, r in enumerate(radii, start=1)))
        with pytest.raises(FamilyUniformlyBounded):
            dual_witness(sample, 2)

    def test_sample_json_round_trip(self):
        sample = SetSample((SeqVector({1: 2.5}), SeqVector({3: -1e-3, 7: 4.0})))
        assert SetSample.from_json(sample.to_json()) == sample


class TestDiagonalDualWitness:
    def test_sqrt_n_picks_fourth_powers(self):
        xs = [math.sqrt(n) for n in range(1, 10**4 + 1)]
        w = diagonal_dual_witness(xs, 10)
        assert w.subsequence == tuple(k**4 for k in range(1, 11))
        assert w.values == tuple(float(k) for k in range(1, 11))
        assert w.rep == SeqVector({k**4: 1.0 / k for k in range(1, 11)})
        assert diagonal_certificate(xs, w).passed

    def test_identity_sequence_hand_trace(self):
        # k=1: 1; k=2: n >= max(4, 2*1) -> 4; k=3: n >= 9 and n/3 > 2 -> 9
        w = diagonal_dual_witness([float(n) for n in range(1, 200)], 5)
        assert w.subsequence == (1, 4, 9, 16, 25)
        assert w.values == (1.0, 2.0, 3.0, 4.0, 5.0)

    def test_single_pick(self):
        w = diagonal_dual_witness([0.2, 0.5, 1.0, 3.0], 1)
        assert w.subsequence == (3,)

    def test_strictness_when_growth_outpaces_squares(self):
        # after x=10 at k=2 (value 5), k=3 must exceed 15, not just (4/3)*10
        xs = [1.0, 10.0, 13.4, 14.9, 15.0, 15.1, 40.0]
        w = diagonal_dual_witness(xs, 3)
        assert w.subsequence == (1, 2, 6)
        assert w.values[2] > w.values[1]

    def test_exhausted(self):
        with pytest.raises(SampleExhausted) as info:
            diagonal_dual_witness([math.sqrt(n) for n in range(1, 100)], 5)
        assert info.value.k == 4

    def test_rejects_non_increasing(self):
        with pytest.raises(ValueError):
            diagonal_dual_witness([1.0, 2.0, 2.0], 1)

    @settings(max_examples=100)
    @given(st.lists(st.floats(min_value=1e-3, max_value=5.0), min_size=10, max_size=200),
           st.integers(1, 6))
    def test_invariants(self, increments, count):
        xs = list(np.cumsum(increments))
        try:
            w = diagonal_dual_witness(xs, count)
        except SampleExhausted:
            return
        assert w.rep_norm**2 <= BASEL + 1e-9
        assert all(b > a for a, b in zip(w.values, w.values[1:]))
        assert all(v >= k for k, v in enumerate(w.values, start=1))
        assert diagonal_certificate(xs, w).passed

    def test_json_round_trip(self):
        w = diagonal_dual_witness([float(n) for n in range(1, 50)], 3)
        assert DualWitness.from_json(w.to_json()) == w


class TestCoordinateProjection:
    def test_one_active_coordinate(self):
        r = coordinate_unbounded_direction([(k, 0) for k in range(1, 101)])
        assert (r.index, r.bounds, r.norm_bound) == (1, (100.0, 0.0), 100.0)

    def test_three_four_five(self):
        r = coordinate_unbounded_direction([(3, 0), (0, 4)])
        assert (r.index, r.norm_bound) == (2, 5.0)

    def test_tie_breaks_to_smallest(self):
        assert coordinate_unbounded_direction([(2, -2)]).index == 1

    def test_bound_dominates_sample(self, rng):
        pts = rng.standard_normal((50, 3)) * 10
        r = coordinate_unbounded_direction(pts.tolist())
        brute = max(math.sqrt(math.fsum(c * c for c in p)) for p in pts.tolist())
        assert brute <= r.norm_bound

    def test_rejects_ragged(self):
        with pytest.raises(ValueError):
            coordinate_unbounded_direction([(1, 2), (3,)])
