import math

import numpy as np
import pytest

from aural.errors import (BadGeometry, BandOutOfRange, ConstantFeature,
                          TooShort, ZeroVariance)
from aural.features import (DEFAULT_GEOMETRY, BearingGeometry,
                            FaultFrequencies, FeatureVector,
                            NormalizationStats, apply_normalization,
                            band_peak, denormalize, extract_features,
                            fault_frequencies, feature_matrix,
                            features_batch, normalize, normalize_matrix,
                            segment, segment_matrix)
from aural.spectral import Spectrum, TimeSeries, kurtosis


class TestGeometry:
    def test_default_is_valid(self):
        assert DEFAULT_GEOMETRY.n_balls == 9

    def test_rejects_ball_larger_than_pitch(self):
        with pytest.raises(BadGeometry):
            BearingGeometry(9, 40.0, 39.0)

    def test_rejects_bad_angle(self):
        with pytest.raises(BadGeometry):
            BearingGeometry(9, 7.94, 39.04, contact_angle_rad=np.pi / 2)


class TestFaultFrequencies:
    def test_reference_bearing_values(self):
        # direct evaluation of the kinematic formulas:
        # (9/2)*(3010/60)*(1 -/+ 7.94/39.04) = 179.8367... / 271.6633...
        ff = fault_frequencies(DEFAULT_GEOMETRY, 3010.0 / 60.0)
        assert ff.bpfo_hz == pytest.approx(179.8367059426229, rel=1e-12)
        assert ff.bpfi_hz == pytest.approx(271.6632940573771, rel=1e-12)
        assert ff.bpfo_hz < ff.bpfi_hz

    def test_degenerate_ratio_limit(self):
        tiny = BearingGeometry(10, 1e-9, 50.0)
        ff = fault_frequencies(tiny, 10.0)
        assert ff.bpfo_hz == pytest.approx(50.0, rel=1e-6)
        assert ff.bpfi_hz == pytest.approx(50.0, rel=1e-6)

    def test_linear_in_shaft_rate(self):
        a = fault_frequencies(DEFAULT_GEOMETRY, 10.0)
        b = fault_frequencies(DEFAULT_GEOMETRY, 20.0)
        assert b.bpfo_hz == pytest.approx(2 * a.bpfo_hz, rel=1e-12)
        assert b.bpfi_hz == pytest.approx(2 * a.bpfi_hz, rel=1e-12)

    def test_rejects_nonpositive_shaft(self):
        with pytest.raises(BadGeometry):
            fault_frequencies(DEFAULT_GEOMETRY, 0.0)


def tone_spectrum(n, fs, freq, amp):
    t = np.arange(n) / fs
    x = TimeSeries(amp * np.sin(2 * np.pi * freq * t), fs)
    from aural.spectral import magnitude_spectrum
    return magnitude_spectrum(x)


class TestBandPeak:
    def test_tone_at_second_harmonic(self):
        n, fs = 4096, 4096.0
        s = tone_spectrum(n, fs, 200.0, 3.0)
        got = band_peak(s, 100.0, max_harmonic=5)
        assert got == pytest.approx(3.0 * n / 2, rel=1e-9)

    def test_zero_spectrum(self):
        s = Spectrum(np.zeros(2049), 1.0)
        assert band_peak(s, 100.0) == 0.0

    def test_out_of_range(self):
        s = Spectrum(np.ones(100), 1.0)
        with pytest.raises(BandOutOfRange):
            band_peak(s, 30.0, max_harmonic=5)

    def test_midpoint_tone_excluded_from_both(self):
        # overlapping third BPFO band and second BPFI band: a tone at the
        # clipping boundary must contribute to neither feature
        bpfo, bpfi = 180.0, 270.0
        n, fs = 51200, 51200.0
        boundary = (3 * bpfo + 2 * bpfi) / 2.0   # 540 < boundary < 541
        # oracle: explicit band edges
        assert 3 * bpfo * 1.02 > boundary > 2 * bpfi * 0.98
        s = tone_spectrum(n, fs, boundary, 1.0)
        assert band_peak(s, bpfo, exclude_hz=(bpfi,)) < 1e-6 * n
        assert band_peak(s, bpfi, exclude_hz=(bpfo,)) < 1e-6 * n

    def test_tone_inside_unclipped_band_counted(self):
        s = tone_spectrum(51200, 51200.0, 180.0, 2.0)
        assert band_peak(s, 180.0, exclude_hz=(270.0,)) == \
            pytest.approx(2.0 * 51200 / 2, rel=1e-9)


SMALL_FF = FaultFrequencies(bpfo_hz=3.5, bpfi_hz=5.4, shaft_hz=1.0)


class TestExtractFeatures:
    def test_full_period_sine_closed_forms(self):
        fs, n, amp = 1000.0, 1000, 2.5
        t = np.arange(n) / fs
        x = TimeSeries(amp * np.sin(2 * np.pi * 10.0 * t), fs)
        fv = extract_features(x, SMALL_FF)
        assert fv.f[2] == pytest.approx(amp / math.sqrt(2), rel=1e-9)   # RMS
        assert fv.f[3] == pytest.approx(amp, rel=1e-12)                 # peak
        assert fv.f[6] == pytest.approx(math.sqrt(2), rel=1e-9)        # crest

    def test_single_spike_kurtosis_matches_core(self):
        x = TimeSeries(np.array([0, 0, 0, 0, 0, 0, 0, 1.0]), 8.0)
        ff = FaultFrequencies(bpfo_hz=1.5, bpfi_hz=2.5, shaft_hz=1.0)
        fv = extract_features(x, ff, max_harmonic=1)
        assert fv.f[5] == pytest.approx(5.375, abs=1e-12)
        assert fv.f[5] == pytest.approx(kurtosis(x), abs=1e-12)

    def test_definitional_identities(self, rng):
        x = TimeSeries(rng.standard_normal(2000), 1000.0)
        fv = extract_features(x, SMALL_FF)
        f = fv.f
        assert f[6] * f[2] == pytest.approx(f[3], rel=1e-9)     # f7*f3 = f4
        assert f[6] * f[7] == pytest.approx(f[8], rel=1e-9)     # f7*f8 = f9
        mean_abs = np.abs(x.samples).mean()
        assert f[8] * mean_abs == pytest.approx(f[3], rel=1e-9)

    def test_scale_covariance(self, rng):
        x = rng.standard_normal(2000)
        base = extract_features(TimeSeries(x, 1000.0), SMALL_FF).f
        a = 3.7
        scaled = extract_features(TimeSeries(a * x, 1000.0), SMALL_FF).f
        linear = [0, 2, 3, 10, 11, 12]
        quadratic = [1, 13]
        for i in linear:
            assert scaled[i] == pytest.approx(a * base[i], rel=1e-9), i
        for i in quadratic:
            assert scaled[i] == pytest.approx(a * a * base[i], rel=1e-9), i
        for i in [4, 5, 6, 7, 8, 9]:
            assert scaled[i] == pytest.approx(base[i], rel=1e-9), i

    def test_constant_window_rejected(self):
        with pytest.raises(ZeroVariance):
            extract_features(TimeSeries(np.ones(1000), 1000.0), SMALL_FF)

    def test_too_short_window_rejected(self):
        # 100 samples at 1 kHz: bin width 10 Hz cannot resolve BPFO 3.5 Hz
        with pytest.raises(TooShort):
            extract_features(TimeSeries(np.arange(100.0), 1000.0), SMALL_FF)

    def test_batch_matches_single(self, rng):
        rows = rng.standard_normal((6, 1500))
        batch = features_batch(rows, 1000.0, SMALL_FF)
        for i in range(6):
            single = extract_features(TimeSeries(rows[i], 1000.0), SMALL_FF)
            assert np.array_equal(batch[i], single.f)

    def test_envelope_mode_runs(self, rng):
        x = TimeSeries(rng.standard_normal(2000), 1000.0)
        plain = extract_features(x, SMALL_FF, envelope=False).f
        env = extract_features(x, SMALL_FF, envelope=True).f
        assert np.array_equal(plain[:10], env[:10])   # time features agree
        assert not np.array_equal(plain[10:], env[10:])

    def test_label_validation(self):
        with pytest.raises(ValueError):
            FeatureVector(np.zeros(14), label="bogus")


class TestNormalize:
    def test_columns_zero_mean_unit_std(self, rng):
        rows = [FeatureVector(rng.standard_normal(14) * 5 + 3,
                              label="normal", window_index=i)
                for i in range(40)]
        scaled, stats = normalize(rows)
        matrix, labels, indices = feature_matrix(scaled)
        assert np.all(np.abs(matrix.mean(axis=0)) < 1e-9)
        assert np.all(np.abs(matrix.std(axis=0) - 1) < 1e-9)
        assert labels == ["normal"] * 40
        assert indices == list(range(40))

    def test_constant_column_raises_with_index(self, rng):
        matrix = rng.standard_normal((10, 14))
        matrix[:, 7] = 2.0
        with pytest.raises(ConstantFeature) as err:
            normalize_matrix(matrix)
        assert err.value.index == 7

    def test_round_trip(self, rng):
        matrix = rng.standard_normal((25, 14)) * 9 - 4
        scaled, stats = normalize_matrix(matrix)
        back = denormalize(scaled, stats)
        assert np.max(np.abs(back - matrix)) < 1e-9

    def test_apply_matches_training_transform(self, rng):
        matrix = rng.standard_normal((25, 14))
        scaled, stats = normalize_matrix(matrix)
        assert np.allclose(apply_normalization(matrix, stats), scaled,
                           atol=1e-12)

    def test_stats_require_positive_std(self):
        with pytest.raises(ValueError):
            NormalizationStats(np.zeros(3), np.array([1.0, 0.0, 2.0]))


class TestSegment:
    def test_ten_seconds_gives_eleven_windows(self, rng):
        fs = 51200.0
        x = TimeSeries(rng.standard_normal(512000), fs)
        windows = segment(x)
        assert len(windows) == 11
        assert all(len(w) == 51200 for w in windows)

    def test_zero_overlap_tiles_exactly(self, rng):
        x = TimeSeries(rng.standard_normal(1050), 100.0)
        windows = segment(x, window_s=1.0, overlap_frac=0.0)
        assert len(windows) == 10
        assert np.array_equal(windows[3].samples, x.samples[300:400])

    def test_exactly_one_window(self, rng):
        x = TimeSeries(rng.standard_normal(100), 100.0)
        assert len(segment(x, window_s=1.0)) == 1

    def test_too_short(self, rng):
        with pytest.raises(TooShort):
            segment(TimeSeries(rng.standard_normal(99), 100.0), window_s=1.0)

    def test_starts_at_hop_multiples(self, rng):
        x = TimeSeries(rng.standard_normal(300), 100.0)
        windows = segment(x, window_s=1.0, overlap_frac=0.10)
        # hop = 90 samples
        assert np.array_equal(windows[1].samples, x.samples[90:190])
        assert np.array_equal(windows[2].samples, x.samples[180:280])

    def test_matrix_view_matches_list(self, rng):
        x = TimeSeries(rng.standard_normal(5000), 1000.0)
        view = segment_matrix(x.samples, 1000.0)
        listed = segment(x)
        assert view.shape[0] == len(listed)
        for i, w in enumerate(listed):
            assert np.array_equal(view[i], w.samples)
