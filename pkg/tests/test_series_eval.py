"""Accelerated series evaluation against closed-form sums.

Every reference value here is a rational function evaluated analytically;
the accelerator must reproduce it inside the disk, on the boundary (Abel
limits), and slightly beyond (analytic continuation).
"""

import numpy as np
import pytest

from gkdv.errors import SeriesEvaluationError
from gkdv.series_eval import eval_series, eval_series_checked, partial_sums, wynn_epsilon


def geometric(t):
    return t / (1.0 - t)


def n_tn(t):
    return t / (1.0 - t) ** 2


class TestPartialSums:
    def test_matches_cumsum(self):
        c = np.array([1.0, 2.0, 3.0])
        t = np.array([0.5])
        s = partial_sums(c, t)
        assert np.allclose(s[0], [0.5, 0.5 + 2 * 0.25, 0.5 + 0.5 + 3 * 0.125])


class TestEpsilonTable:
    def test_geometric_sequence_resummed_exactly(self):
        # s_n = sum_{j<=n} r^j has a single geometric tail: one Shanks level
        # suffices, the table must hit machine precision
        r = -0.95
        sums = np.cumsum(r ** np.arange(1, 41))[None, :]
        val, err, conv = wynn_epsilon(sums)
        assert abs(val[0] - geometric(r)) < 1e-13
        assert conv[0]

    def test_alternating_slow_series(self):
        coeffs = np.arange(1.0, 61.0)
        for t in (-0.905, -0.99, -1.0):
            v, e, acc = eval_series(coeffs, t)
            assert acc
            assert abs(v - n_tn(t)) < 1e-12
            assert e < 1e-9

    def test_analytic_continuation(self):
        coeffs = np.arange(1.0, 61.0)
        for t in (-1.1, -1.25):
            v, _, _ = eval_series(coeffs, t)
            assert abs(v - n_tn(t)) < 1e-10

    def test_boundary_zero_of_derivative_series(self):
        # sum n^2 w^(n-1) = (1+w)/(1-w)^3 has its root exactly on the
        # convergence boundary at w = -1
        c = np.arange(1.0, 61.0) ** 2
        v, _, _ = eval_series(c, -1.0)
        assert abs(v / -1.0) < 1e-12

    def test_long_series_boundary_accuracy(self):
        # K = 200 exercises the freeze-on-convergence path; without it the
        # degenerate deep columns poison the table
        K = 200
        coeffs = np.arange(1.0, K + 1.0)
        ws = np.linspace(-1.2, -0.8, 101)
        vals, errs, _ = eval_series(coeffs, ws)
        assert np.max(np.abs(vals - n_tn(ws))) < 1e-9


class TestDirectPath:
    def test_small_t_is_direct(self):
        coeffs = np.arange(1.0, 61.0)
        v, e, acc = eval_series(coeffs, 0.3)
        assert not acc
        assert abs(v - n_tn(0.3)) < 1e-14
        assert e < 1e-25

    def test_zero_t(self):
        v, e, acc = eval_series(np.ones(10), 0.0)
        assert v == 0.0 and not acc


class TestGuards:
    def test_rejects_far_continuation(self):
        with pytest.raises(SeriesEvaluationError):
            eval_series(np.ones(20), 1.5)

    def test_checked_eval_refuses_impossible_tolerance(self):
        # continuation points carry a finite certified error; demanding
        # better than the estimator can vouch for must raise
        c = np.arange(1.0, 61.0)
        with pytest.raises(SeriesEvaluationError):
            eval_series_checked(c, np.array([-1.2]), rtol=1e-16)

    def test_checked_eval_passes_good_points(self):
        c = np.arange(1.0, 81.0)
        vals = eval_series_checked(c, np.array([-0.3, -0.95, -1.0]), rtol=1e-8)
        assert np.allclose(vals, n_tn(np.array([-0.3, -0.95, -1.0])), atol=1e-11)

    def test_degenerate_terminating_series(self):
        c = np.zeros(60)
        c[0] = 1.0
        for t in (-0.9, -1.0, 0.49):
            v, _, _ = eval_series(c, t)
            assert v == pytest.approx(t, abs=1e-14)
