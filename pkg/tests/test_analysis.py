"""Spectra, histograms, CDFs and the distribution studies."""
import math

import numpy as np
import pytest
from pytest import approx

from gridspectra.services import analysis
from gridspectra.services.analysis import (
    SpectrumSummary,
    cdf_distance,
    combinatorial_limit,
    default_range,
    eigen_table,
    eigenvalue_histogram,
    empirical_cdf,
    full_spectrum,
    ks_uniformity,
    limit_cdf_combinatorial,
    limit_cdf_normalized,
    normalized_limit,
    paired_spectra,
    shift_profile,
)
from gridspectra.services.errors import DomainError
from gridspectra.services.gridmodel import GridSpec, LaplacianKind

from .grids import spec_id, suite_specs


def _arcsine(v):
    return 2 / math.pi * math.asin(math.sqrt(v / 4))


class TestFullSpectrum:
    def test_square(self):
        summary = full_spectrum(GridSpec.unweighted([2, 2]), LaplacianKind.COMBINATORIAL)
        assert summary.values == approx((0.0, 2.0, 2.0, 4.0), abs=1e-14)
        assert summary.fiedler == approx(2.0)
        assert summary.max == approx(4.0)

    def test_path_fiedler(self):
        summary = full_spectrum(GridSpec.unweighted([4]), LaplacianKind.COMBINATORIAL)
        assert summary.fiedler == approx(2 - math.sqrt(2), abs=1e-14)

    def test_normalized_path(self):
        summary = full_spectrum(GridSpec.unweighted([3]), LaplacianKind.NORMALIZED)
        assert summary.values == approx((0.0, 1.0, 2.0), abs=1e-14)

    @pytest.mark.parametrize("spec", suite_specs(), ids=spec_id)
    def test_sorted_with_zero_first(self, spec):
        for kind in (LaplacianKind.COMBINATORIAL, LaplacianKind.NORMALIZED):
            values = full_spectrum(spec, kind, threads=1).values
            assert len(values) == spec.n
            assert list(values) == sorted(values)
            assert values[0] == approx(0.0, abs=1e-9)

    def test_random_walk_matches_normalized(self):
        spec = GridSpec((3, 4), (1.0, 2.0))
        assert (full_spectrum(spec, LaplacianKind.RANDOM_WALK, threads=1).values
                == full_spectrum(spec, LaplacianKind.NORMALIZED, threads=1).values)

    def test_wrong_count(self):
        with pytest.raises(DomainError):
            SpectrumSummary.from_values(GridSpec.unweighted([3]), LaplacianKind.COMBINATORIAL, [0.0, 1.0])


class TestEigenTable:
    def test_closed_form_rows(self):
        rows = eigen_table(GridSpec.unweighted([2, 2]), LaplacianKind.COMBINATORIAL)
        assert [r.index for r in rows] == [1, 2, 3, 4]
        assert [r.z for r in rows] == [(0, 0), (0, 1), (1, 0), (1, 1)]
        assert all(r.shifts is None for r in rows)

    def test_shift_rows(self):
        rows = eigen_table(GridSpec((2, 3), (1.0, 2.0)), LaplacianKind.NORMALIZED, threads=1)
        assert len(rows) == 6
        assert all(len(r.shifts) == 2 for r in rows)
        assert rows[0].eigenvalue == approx(2.0)


class TestHistogram:
    def test_examples(self):
        assert list(eigenvalue_histogram([0, 1, 3], 4, 4)) == [1, 1, 0, 1]
        assert list(eigenvalue_histogram([0, 2, 2, 4], 2, 4)) == [1, 3]
        assert list(eigenvalue_histogram([], 3, 2)) == [0, 0, 0]

    def test_tolerates_rounding_at_the_ends(self):
        assert list(eigenvalue_histogram([-1e-12, 2 + 1e-12], 2, 2)) == [1, 1]

    def test_out_of_range(self):
        with pytest.raises(DomainError):
            eigenvalue_histogram([5.0], 4, 4)

    def test_bins_must_be_positive(self):
        with pytest.raises(DomainError):
            eigenvalue_histogram([1.0], 0, 4)

    def test_default_range(self):
        assert default_range(GridSpec((3, 4), (1.0, 2.0)), LaplacianKind.COMBINATORIAL) == 12.0
        assert default_range(GridSpec((3, 4), (1.0, 2.0)), LaplacianKind.RANDOM_WALK) == 2.0


class TestEmpiricalCdf:
    def test_examples(self):
        assert empirical_cdf([0, 1, 3]) == [(0.0, 1 / 3), (1.0, 2 / 3), (3.0, 1.0)]
        assert empirical_cdf([0.7]) == [(0.7, 1.0)]

    def test_ties_jump_together(self):
        assert empirical_cdf([0, 2, 2, 4]) == [(0.0, 0.25), (2.0, 0.75), (4.0, 1.0)]

    def test_empty(self):
        assert empirical_cdf([]) == []


class TestLimitCdf:
    def test_arcsine_law(self):
        f = combinatorial_limit(1, 512)
        points = np.array([0.5, 1.0, 2.0, 3.0, 3.9])
        assert f(points) == approx([_arcsine(v) for v in points], abs=5e-3)
        assert f(np.array([2.0]))[0] == approx(0.5)

    def test_endpoints(self):
        samples = limit_cdf_combinatorial(2, 64)
        assert samples[0] == (0.0, 0.0)
        assert samples[-1] == approx((8.0, 1.0))
        assert len(samples) == analysis.LIMIT_SAMPLES
        fractions = [f for _, f in samples]
        assert fractions == sorted(fractions)

    def test_single_dimension_full_support(self):
        assert limit_cdf_combinatorial(1, 128)[-1] == approx((4.0, 1.0))

    def test_convolution_agrees_with_exact_quadrature(self):
        points = np.array([0.0, 3.0, 6.0, 9.0, 12.0])
        exact = combinatorial_limit(3, 100)(points)
        binned = combinatorial_limit(3, 200)(points)
        assert binned == approx(exact, abs=1e-2)
        assert binned[0] == 0.0
        assert binned[-1] == approx(1.0)

    def test_normalized_is_a_rescaling(self):
        samples = limit_cdf_normalized(2, 128, samples=5)
        assert [v for v, _ in samples] == approx([0.0, 0.5, 1.0, 1.5, 2.0])
        assert samples[2][1] == approx(combinatorial_limit(2, 128)(np.array([4.0]))[0])
        assert samples[-1][1] == approx(1.0)

    @pytest.mark.parametrize("d,resolution", [(0, 16), (1, 1)])
    def test_invalid_arguments(self, d, resolution):
        with pytest.raises(DomainError):
            limit_cdf_combinatorial(d, resolution)

    def test_large_path_tracks_the_limit(self):
        values = full_spectrum(GridSpec.unweighted([256]), LaplacianKind.COMBINATORIAL).values
        assert cdf_distance(values, combinatorial_limit(1, 4096)) <= 0.02

    def test_weighted_limit_rescales(self):
        values = full_spectrum(GridSpec((256,), (3.0,)), LaplacianKind.COMBINATORIAL).values
        assert cdf_distance(values, combinatorial_limit(1, 4096, weight=3.0)) <= 0.02

    def test_normalized_path_tracks_the_limit(self):
        values = full_spectrum(GridSpec.unweighted([128]), LaplacianKind.NORMALIZED).values
        assert cdf_distance(values, normalized_limit(1, 4096)) <= 0.02


class TestUniformity:
    def test_uniform_grid(self):
        n = 200
        values = [(k - 0.5) / n * 2 for k in range(1, n + 1)]
        assert ks_uniformity(values, 2.0) <= 1 / (2 * n) + 1e-12

    def test_point_mass_at_zero(self):
        assert ks_uniformity([0.0, 0.0, 0.0], 2.0) == approx(1.0)

    def test_empty(self):
        with pytest.raises(DomainError):
            ks_uniformity([], 2.0)


class TestProperties:
    def test_fiedler_decays(self):
        for kind in (LaplacianKind.COMBINATORIAL, LaplacianKind.NORMALIZED):
            fiedlers = [full_spectrum(GridSpec.unweighted([n]), kind).fiedler for n in (4, 8, 16, 32, 64)]
            assert all(a > b for a, b in zip(fiedlers, fiedlers[1:]))
            assert fiedlers[-1] < 0.01

    def test_combinatorial_max_approaches_bound(self):
        summary = full_spectrum(GridSpec.unweighted([64]), LaplacianKind.COMBINATORIAL)
        assert 0.99 <= summary.max / 4.0 <= 1.0

    @pytest.mark.parametrize("spec", suite_specs(), ids=spec_id)
    def test_bounds(self, spec):
        assert full_spectrum(spec, LaplacianKind.COMBINATORIAL).max <= 4 * spec.weight_sum
        assert full_spectrum(spec, LaplacianKind.NORMALIZED, threads=1).max == approx(2.0, abs=1e-9)


class TestPaired:
    def test_path_of_two(self):
        rows = paired_spectra(GridSpec.unweighted([2]), threads=1)
        assert [(r.z, r.combinatorial) for r in rows] == [((0,), 0.0), ((1,), approx(2.0))]
        assert [r.normalized for r in rows] == approx([0.0, 2.0], abs=1e-14)

    def test_kernels_pair_up(self):
        rows = paired_spectra(GridSpec((3, 3), (1.0, 2.0)), threads=1)
        assert len(rows) == 9
        assert rows[0].combinatorial == 0.0
        assert rows[0].normalized == approx(0.0, abs=1e-12)
        assert all(0 <= r.normalized <= 2 + 1e-9 for r in rows)


class TestShiftProfile:
    def test_fiedler_pattern(self):
        rows = shift_profile(2, [4, 6, 8])
        assert [r.layers for r in rows] == [4, 6, 8]
        assert [r.z for r in rows] == [(2, 3), (4, 5), (6, 7)]
        assert all(abs(r.delta_first) < math.pi / 2 and abs(r.delta_rest) < math.pi / 2 for r in rows)
        eigenvalues = [r.eigenvalue for r in rows]
        assert eigenvalues == sorted(eigenvalues, reverse=True)

    def test_middle_pattern(self):
        rows = shift_profile(3, [8], pattern="middle")
        assert rows[0].z == (2, 4, 4)

    def test_one_dimension_has_no_shift(self):
        rows = shift_profile(1, [5, 9])
        assert [r.delta_rest for r in rows] == [None, None]
        assert [r.delta_first for r in rows] == [0.0, 0.0]

    def test_unknown_pattern(self):
        with pytest.raises(DomainError, match="unknown pattern"):
            shift_profile(2, [4], pattern="edge")


class TestAnalyze:
    def test_report(self):
        report = analysis.analyze(GridSpec.unweighted([3, 3]), LaplacianKind.NORMALIZED, bins=10, threads=1)
        assert sum(report.counts) == 9
        assert len(report.edges) == 11
        assert report.range_max == 2.0
        assert report.cdf[-1][1] == 1.0
        assert 0.0 <= report.ks_statistic <= 1.0
        assert report.paired == []

    def test_paired_on_request(self):
        report = analysis.analyze(GridSpec.unweighted([2, 3]), LaplacianKind.COMBINATORIAL, threads=1, paired=True)
        assert len(report.paired) == 6
        assert len(report.counts) == 50
