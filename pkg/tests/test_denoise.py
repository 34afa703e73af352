import numpy as np
import pytest

from aural.errors import EmptyBank
from aural.spectral import TimeSeries, ke_index
from aural.wavelets import (denoise, denoise_batch, dwt, ke_batch,
                            list_bank, load_filter_bank, select_wavelet,
                            soft_threshold, universal_thresholds)

MEDIAN_TO_SIGMA = 0.6745


def make_decomposition(x, name="db4", level=3):
    fb = load_filter_bank(name)
    return dwt(TimeSeries(x, 1.0), fb, level), fb


class TestSoftThreshold:
    def test_shrink_arithmetic(self, rng):
        d, _ = make_decomposition(rng.standard_normal(512))
        out = soft_threshold(d)
        for det_in, det_out in zip(d.details, out.details):
            t = np.median(np.abs(det_in)) / MEDIAN_TO_SIGMA * \
                np.sqrt(2.0 * np.log(det_in.size))
            expect = np.sign(det_in) * np.maximum(np.abs(det_in) - t, 0.0)
            assert det_out == pytest.approx(expect, abs=1e-12)

    def test_coefficients_below_threshold_zeroed(self, rng):
        d, _ = make_decomposition(rng.standard_normal(512))
        thresholds = universal_thresholds(d)
        out = soft_threshold(d)
        for det_in, det_out, t in zip(d.details, out.details, thresholds):
            assert np.all(det_out[np.abs(det_in) < t] == 0.0)

    def test_magnitudes_never_grow_signs_preserved(self, rng):
        d, _ = make_decomposition(rng.standard_normal(1024), "sym5", 4)
        out = soft_threshold(d)
        for det_in, det_out in zip(d.details, out.details):
            assert np.all(np.abs(det_out) <= np.abs(det_in) + 1e-15)
            nz = det_out != 0
            assert np.all(np.sign(det_out[nz]) == np.sign(det_in[nz]))

    def test_noiseless_level_unchanged(self):
        # sparse details: median is 0, so T = 0 and the level passes through
        x = np.zeros(256)
        x[64] = 10.0
        d, _ = make_decomposition(x, "db1", 2)
        out = soft_threshold(d)
        for det_in, det_out in zip(d.details, out.details):
            if np.median(np.abs(det_in)) == 0.0:
                assert np.array_equal(det_in, det_out)

    def test_approximation_untouched(self, rng):
        d, _ = make_decomposition(rng.standard_normal(300))
        out = soft_threshold(d)
        assert np.array_equal(d.approx, out.approx)


class TestDenoise:
    def test_pure_noise_variance_drops(self):
        fb = load_filter_bank("db4")
        wins = 0
        for seed in range(50):
            x = np.random.default_rng(seed).standard_normal(2048)
            res = denoise(TimeSeries(x, 1.0), fb, 5)
            if res.denoised.samples.var() < x.var():
                wins += 1
        assert wins == 50

    def test_clean_impulse_train_preserved(self):
        n = 4096
        x = np.zeros(n)
        x[::256] = 1.0
        fb = load_filter_bank("db2")
        res = denoise(TimeSeries(x, 1.0), fb, 4)
        corr = np.corrcoef(res.denoised.samples, x)[0, 1]
        assert corr > 0.99

    def test_double_denoise_never_adds_energy(self, rng):
        fb = load_filter_bank("sym4")
        x = TimeSeries(rng.standard_normal(2048), 1.0)
        once = denoise(x, fb, 5).denoised
        twice = denoise(once, fb, 5).denoised
        assert twice.samples.var() <= once.samples.var() + 1e-15

    def test_ke_matches_public_index(self, rng):
        # the pooled-detail KE must equal ke_index applied to the
        # concatenated thresholded details
        fb = load_filter_bank("db6")
        x = TimeSeries(rng.standard_normal(1024), 1.0)
        d = dwt(x, fb, 3)
        pooled = np.concatenate(soft_threshold(d).details)
        want = ke_index(TimeSeries(pooled, 1.0))
        got = denoise(x, fb, 3).ke_of_details
        assert got == pytest.approx(want, rel=1e-12)

    def test_degenerate_details_flagged_not_raised(self):
        fb = load_filter_bank("db1")
        res = denoise(TimeSeries(np.full(64, 5.0), 1.0), fb, 2)
        assert res.details_degenerate
        assert res.ke_of_details == 0.0

    def test_batch_path_matches_single(self, rng):
        fb = load_filter_bank("coif2")
        rows = rng.standard_normal((5, 512))
        den, ke, thr, deg = denoise_batch(rows, fb, 3)
        for i in range(5):
            res = denoise(TimeSeries(rows[i], 1.0), fb, 3)
            assert np.array_equal(den[i], res.denoised.samples)
            assert res.ke_of_details == ke[i]


class TestKeBatch:
    def test_matches_scalar_ke(self, rng):
        rows = rng.standard_normal((4, 300))
        ke, deg = ke_batch(rows)
        assert not deg.any()
        for i in range(4):
            assert ke[i] == pytest.approx(
                ke_index(TimeSeries(rows[i], 1.0)), rel=1e-12)

    def test_constant_rows_flagged(self):
        rows = np.vstack([np.full(64, 2.0), np.zeros(64)])
        ke, deg = ke_batch(rows)
        assert deg.all()
        assert np.all(ke == 0.0)


class TestSelectWavelet:
    def test_empty_bank_rejected(self, rng):
        with pytest.raises(EmptyBank):
            select_wavelet(TimeSeries(rng.standard_normal(64), 1.0), [])

    def test_single_candidate_wins(self, rng):
        x = TimeSeries(rng.standard_normal(256), 1.0)
        report = select_wavelet(x, ["sym3"], level=3)
        assert report.chosen_wavelet == "sym3"
        assert set(report.ke_table) == {"sym3"}

    def test_chosen_attains_maximum(self, rng):
        x = TimeSeries(rng.standard_normal(512), 1.0)
        bank = ["db2", "db8", "sym5", "coif1", "bior3.1", "rbio1.3"]
        report = select_wavelet(x, bank, level=4)
        best = report.ke_table[report.chosen_wavelet]
        for name in bank:
            assert best >= report.ke_table[name]

    def test_table_matches_exhaustive_recompute(self, rng):
        x = TimeSeries(rng.standard_normal(512), 1.0)
        bank = ["db3", "sym7", "coif1"]
        report = select_wavelet(x, bank, level=3)
        for name in bank:
            res = denoise(x, load_filter_bank(name), 3)
            assert report.ke_table[name] == res.ke_of_details

    def test_deterministic(self, rng):
        x = TimeSeries(rng.standard_normal(400), 1.0)
        bank = ["db2", "sym4", "rbio2.2"]
        a = select_wavelet(x, bank, level=3)
        b = select_wavelet(x, bank, level=3)
        assert a.chosen_wavelet == b.chosen_wavelet
        assert a.ke_table == b.ke_table
        assert a.threshold_per_level == b.threshold_per_level
        assert np.array_equal(a.denoised.samples, b.denoised.samples)

    def test_thresholds_positive_for_noisy_input(self, rng):
        x = TimeSeries(rng.standard_normal(512), 1.0)
        report = select_wavelet(x, ["db4"], level=3)
        assert all(t > 0 for t in report.threshold_per_level)
        assert len(report.winner_level_ke) == 3

    def test_full_registry_sweep_smoke(self, rng):
        x = TimeSeries(rng.standard_normal(1024), 1.0)
        report = select_wavelet(x, list_bank(), level=3)
        assert len(report.ke_table) == 92
        assert report.chosen_wavelet in report.ke_table
