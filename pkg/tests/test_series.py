import math

import mpmath as mp
import numpy as np
import pytest

from ubp_forge.errors import HorizonExceeded, HypothesisViolated, NotConvergent
from ubp_forge.series import (
    SeriesSpec,
    accelerate_convergent,
    boundary_experiment,
    decelerate_divergent,
    q3_divergence_certificate,
    recompute_partial_sum,
    slower_divergent_sequence,
)


def first_harmonic_at_least(target):
    """Exact-summation oracle: smallest N with H_N >= target, in 40-digit arithmetic."""
    with mp.workdps(40):
        h, n = mp.mpf(0), 0
        while h < target:
            n += 1
            h += mp.mpf(1) / n
        return n


class TestAccelerate:
    def test_geometric_half(self):
        res = accelerate_convergent(SeriesSpec("geometric", 0.5), 50)
        n = np.arange(1, 51)
        np.testing.assert_allclose(res.y, 2.0 ** ((n - 1) / 2), rtol=1e-14)
        # x_n y_n = 2^{-(n+1)/2}: geometric partial sums in closed form
        q = 2**-0.5
        closed = 0.5 * (1 - q**n) / (1 - q)
        np.testing.assert_allclose(res.partial_sums, closed, rtol=1e-13)
        assert res.bound == 2.0
        assert res.partial_sums.max() <= 2.0
        assert res.certificate.passed

    def test_single_term_list(self):
        res = accelerate_convergent(SeriesSpec.explicit([1.0]), 1)
        assert res.y.tolist() == [1.0]
        assert res.partial_sums.tolist() == [1.0]
        assert res.bound == 2.0

    def test_inverse_squares_against_tail_oracle(self):
        spec = SeriesSpec.parse("one-over-n-squared")
        horizon = 200
        with mp.workdps(30):
            r = [float(mp.zeta(2, n + 1)) for n in range(horizon + 1)]  # Hurwitz zeta tail
        np.testing.assert_allclose(spec.remainders(horizon), r, rtol=1e-12)
        res = accelerate_convergent(spec, horizon)
        bound = 2 * math.sqrt(math.pi**2 / 6)
        assert res.bound == pytest.approx(bound, rel=1e-14)
        assert np.all(res.partial_sums <= bound)
        assert res.certificate.passed

    @pytest.mark.parametrize("gen", ["geometric:0.5", "geometric:0.9", "one-over-n-squared"])
    @pytest.mark.parametrize("horizon", [1, 7, 60])
    def test_telescoping_term_by_term(self, gen, horizon):
        spec = SeriesSpec.parse(gen)
        res = accelerate_convergent(spec, horizon)
        r = spec.remainders(horizon)
        step = 2 * (np.sqrt(r[:-1]) - np.sqrt(r[1:]))
        assert np.all(res.weighted <= step * (1 + 1e-9))
        assert res.partial_sums[-1] <= res.telescoped[-1] * (1 + 1e-9)
        assert res.telescoped[-1] <= res.bound
        assert np.all(np.diff(res.y) > 0)

    def test_explicit_list_uses_own_remainders(self):
        res = accelerate_convergent(SeriesSpec.explicit([0.5, 0.25, 0.25]), 3)
        np.testing.assert_allclose(res.y, [1.0, 1 / math.sqrt(0.5), 2.0])

    def test_divergent_rejected(self):
        with pytest.raises(NotConvergent):
            accelerate_convergent(SeriesSpec("one-over-n"), 10)


class TestDecelerate:
    def test_constant_reaches_ten_at_harmonic_crossing(self):
        res = decelerate_divergent(SeriesSpec("constant"), 10.0)
        cert = res.certificate
        assert cert.index == first_harmonic_at_least(10) == 12367
        assert cert.partial_sum >= 10 > cert.previous_partial_sum
        np.testing.assert_allclose(res.y, 1.0 / np.arange(1, 12368), rtol=1e-15)
        assert cert.passed

    def test_harmonic_terms(self):
        res = decelerate_divergent(SeriesSpec("one-over-n"), 3.0)
        # direct 40-digit summation of (1/n)/H_n
        with mp.workdps(40):
            s, h, n = mp.mpf(0), mp.mpf(0), 0
            while s < 3:
                n += 1
                h += mp.mpf(1) / n
                s += 1 / (n * h)
        assert res.certificate.index == n == 2197
        assert res.y[-1] < res.y[0]

    def test_zero_target(self):
        assert decelerate_divergent(SeriesSpec("one-over-n"), 0.0).certificate.index == 1

    def test_budget(self):
        with pytest.raises(HorizonExceeded) as info:
            decelerate_divergent(SeriesSpec("constant"), 10.0, budget=1000)
        assert info.value.budget == 1000

    def test_progress_is_reported(self):
        events = []
        decelerate_divergent(SeriesSpec("constant"), 15.0, progress=events.append)
        assert events and events[0]["terms"] >= 10**6

    def test_doubling_blocks_contribute_half(self):
        x = np.ones(5000) / np.arange(1, 5001) ** 0.5
        s = np.cumsum(x)
        t = np.cumsum(x / s)
        N = 10
        while True:
            M = int(np.searchsorted(s, 2 * s[N - 1]))  # first index (0-based) with s >= 2 s_N
            if M >= len(s):
                break
            block = t[M] - t[N - 1]
            assert block >= (s[M] - s[N - 1]) / s[M] - 1e-12
            assert block >= 0.5
            N = M + 1
        assert np.all(np.diff(t) > 0)

    def test_certificate_recomputes_from_terms(self):
        res = decelerate_divergent(SeriesSpec("constant", 2.0), 5.0)
        cert = res.certificate
        terms = 1.0 / np.arange(1, cert.index + 1)
        assert recompute_partial_sum(terms, cert.index) == pytest.approx(cert.partial_sum, rel=1e-9)
        assert cert.to_certificate().recheck()


class TestQ3Certificate:
    def test_inverse_sqrt_crosses_ten(self):
        cert = q3_divergence_certificate("one-over-sqrt-n", 1.0, 1, 10.0)
        assert cert.index == first_harmonic_at_least(10) == 12367
        assert cert.passed
        assert cert.min_ratio == pytest.approx(1.0, rel=1e-12)

    def test_inverse_n_violates_at_two(self):
        with pytest.raises(HypothesisViolated) as info:
            q3_divergence_certificate("one-over-n", 1.0, 1, 10.0)
        assert info.value.n == 2

    def test_zero_target_stops_at_threshold(self):
        assert q3_divergence_certificate("one-over-sqrt-n", 1.0, 5, 0.0).index == 5

    def test_callable_oracle(self):
        cert = q3_divergence_certificate(lambda n: np.sqrt(np.log(n + 1) / n), math.log(2), 1, 5.0)
        assert cert.passed
        n = np.arange(1, cert.index + 1)
        assert math.fsum(np.log(n + 1) / n) == pytest.approx(cert.partial_sum, rel=1e-12)

    def test_violation_after_threshold_only(self):
        # y_1 is tiny but n0 = 2 excludes it
        cert = q3_divergence_certificate(lambda n: np.where(n == 1, 1e-9, 1 / np.sqrt(n)), 1.0, 2, 2.0)
        assert cert.passed

    def test_budget(self):
        with pytest.raises(HorizonExceeded):
            q3_divergence_certificate("one-over-sqrt-n", 1.0, 1, 10.0, budget=100)


class TestSlowerDivergent:
    def test_linear(self):
        y = slower_divergent_sequence([float(n) for n in range(1, 101)])
        assert y[-1] == 10.0
        ratios = [b / a for a, b in zip(range(1, 101), y)]
        assert ratios[-1] < ratios[10] < ratios[0]

    def test_squares(self):
        assert slower_divergent_sequence([float(n * n) for n in range(1, 6)]) == [1, 2, 3, 4, 5]

    def test_slow_growth_stays_unbounded(self):
        x = np.log(np.arange(2, 10**6))
        y = np.array(slower_divergent_sequence(x))
        prefix_max = [y[: 10**k].max() for k in range(1, 6)]
        assert all(b > a for a, b in zip(prefix_max, prefix_max[1:]))


def test_boundary_experiment_reports_without_verdict():
    rows = boundary_experiment(np.sqrt, lambda n: 1 / np.sqrt(n), 2.0, 1000)
    assert rows[0]["m"] == 1 and rows[-1]["m"] == 1000
    assert all(r["x_times_y"] == pytest.approx(1.0) for r in rows)


@pytest.mark.parametrize("text", ["bogus", "geometric", "geometric:-1"])
def test_parse_rejects(text):
    with pytest.raises(ValueError):
        SeriesSpec.parse(text)
