#include <gtest/gtest.h>

#include <random>

#include "pdc/peak_fit.hpp"

using namespace pdc;
using namespace pdc::fit;

namespace {

double gauss(double x, double c, double w, double a) { return a * std::exp(-4.0 * std::log(2.0) * (x - c) * (x - c) / (w * w)); }

Spectrum two_gaussians(double noise = 0.0, std::uint64_t seed = 0) {
    Spectrum s;
    s.kind = AxisKind::kDetuning;
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> g(0.0, noise > 0.0 ? noise : 1.0);
    for (int k = 0; k <= 400; ++k) {
        const double x = -100.0 + 0.5 * k;
        s.axis.push_back(x);
        s.intensity.push_back(0.05 + gauss(x, -30.0, 12.0, 1.0) + gauss(x, 40.0, 9.0, 0.6) + (noise > 0 ? noise * g(gen) : 0.0));
    }
    return s;
}

Spectrum simulated_marginal(double delta, jsa::Beam beam, double noise, std::uint64_t seed,
                            std::vector<double>* roots_out) {
    const auto spec = jsa::WaveguideSpec::degenerate(1870.0, 0.179, VacuumWavelength::from_nm(1535.2));
    const auto p = jsa::DispersionParams::from_normalized(-1.37e-3, 0.983, 0.8e-3, 0.7e-3);
    std::vector<double> axis;
    for (double x = -150.0; x <= 150.0; x += 0.25) axis.push_back(x);
    auto s = jsa::marginal_spectrum(spec, p, {spec.omega0_p().value + delta}, axis, beam);
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> g;
    for (auto& v : s.intensity) v += noise * g(gen);
    for (const auto& r : jsa::marginal_contour_roots(p, {delta}, false)) {
        roots_out->push_back(beam == jsa::Beam::kSignal ? r.nu_s : r.nu_i);
    }
    return s;
}

} // namespace

TEST(DetectPeaks, FindsBothRankedByProminence) {
    const auto peaks = detect_peaks(two_gaussians(0.01, 1), 3);
    ASSERT_EQ(peaks.size(), 2u);
    EXPECT_NEAR(peaks[0].position, -30.0, 1.0);
    EXPECT_NEAR(peaks[1].position, 40.0, 1.0);
    EXPECT_GT(peaks[0].prominence, peaks[1].prominence);
}

TEST(DetectPeaks, ProminenceThresholdDropsSmallBumps) {
    auto s = two_gaussians();
    for (std::size_t k = 0; k < s.size(); ++k) s.intensity[k] += gauss(s.axis[k], 80.0, 4.0, 0.08);
    EXPECT_EQ(detect_peaks(s, 5, 0.15).size(), 2u);
    EXPECT_EQ(detect_peaks(s, 5, 0.05).size(), 3u);
}

TEST(FitGaussians, RecoversNoiseFreeParameters) {
    const auto s = two_gaussians();
    const std::vector<double> seeds{-29.0, 41.0};
    const auto r = fit_gaussians(s, seeds);
    ASSERT_TRUE(r.converged);
    ASSERT_EQ(r.peaks.size(), 2u);
    EXPECT_NEAR(r.peaks[0].center, -30.0, 1e-6);
    EXPECT_NEAR(r.peaks[0].fwhm, 12.0, 1e-6);
    EXPECT_NEAR(r.peaks[0].amplitude, 1.0, 1e-6);
    EXPECT_NEAR(r.peaks[1].center, 40.0, 1e-6);
    EXPECT_NEAR(r.peaks[1].fwhm, 9.0, 1e-6);
    EXPECT_NEAR(r.peaks[1].amplitude, 0.6, 1e-6);
    EXPECT_NEAR(r.offset, 0.05, 1e-6);
    EXPECT_LE(r.residual_norm, r.initial_residual_norm);
}

TEST(FitGaussians, CovarianceReflectsNoise) {
    const auto s = two_gaussians(0.01, 2);
    const std::vector<double> seeds{-29.0, 41.0};
    const auto r = fit_gaussians(s, seeds);
    // Center error should be consistent with the reported sigma.
    EXPECT_GT(r.peaks[0].center_sigma(), 0.0);
    EXPECT_LT(std::abs(r.peaks[0].center + 30.0), 5.0 * r.peaks[0].center_sigma());
    EXPECT_LT(r.peaks[0].center_sigma(), 0.1);
}

TEST(FitGaussians, ResidualNeverIncreases) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto s = two_gaussians(0.05, seed);
        const std::vector<double> seeds{-20.0, 50.0};
        const auto r = fit_gaussians(s, seeds);
        EXPECT_LE(r.residual_norm, r.initial_residual_norm);
    }
}

TEST(FitGaussians, CentersInvariantUnderScaleAndOffset) {
    auto s = two_gaussians(0.01, 3);
    const std::vector<double> seeds{-29.0, 41.0};
    const auto a = fit_gaussians(s, seeds);
    for (auto& v : s.intensity) v = 4.0 * v + 2.5;
    const auto b = fit_gaussians(s, seeds);
    for (std::size_t k = 0; k < 2; ++k) EXPECT_NEAR(a.peaks[k].center, b.peaks[k].center, 1e-6);
}

TEST(FitGaussians, SpuriousSeedIsRejected) {
    Spectrum s;
    s.kind = AxisKind::kDetuning;
    for (int k = 0; k <= 200; ++k) {
        s.axis.push_back(k - 100.0);
        s.intensity.push_back(gauss(k - 100.0, 0.0, 10.0, 1.0));
    }
    const std::vector<double> seeds{0.0, 70.0};
    const auto r = fit_gaussians(s, seeds);
    EXPECT_EQ(r.peaks.size(), 1u);
    EXPECT_EQ(r.rejected_seeds.size(), 1u);
    EXPECT_NEAR(r.peaks[0].center, 0.0, 1e-6);
}

TEST(FitGaussians, NonConvergenceCarriesBestResult) {
    const auto s = two_gaussians(0.02, 4);
    FitOptions o;
    o.max_iterations = 2;
    const std::vector<double> seeds{-20.0, 50.0};
    try {
        fit_gaussians(s, seeds, o);
        FAIL() << "expected FitFailure";
    } catch (const FitFailure& e) {
        EXPECT_EQ(e.best_so_far.peaks.size(), 2u);
        EXPECT_FALSE(e.best_so_far.converged);
        EXPECT_LE(e.best_so_far.residual_norm, e.best_so_far.initial_residual_norm);
    }
}

TEST(FitGaussians, RejectsDegenerateInput) {
    Spectrum z;
    z.kind = AxisKind::kDetuning;
    z.axis = {0, 1, 2, 3, 4, 5, 6};
    z.intensity.assign(7, 0.0);
    const std::vector<double> seeds{3.0};
    EXPECT_THROW(fit_gaussians(z, seeds), DegenerateInputError);
    EXPECT_THROW(fit_gaussians(two_gaussians(), {}), DegenerateInputError);
}

TEST(FitGaussians, CentersConvergeToContourRoots) {
    // Well separated branches at low noise.
    std::vector<double> roots;
    const auto s = simulated_marginal(2.88, jsa::Beam::kSignal, 1e-3, 5, &roots);
    ASSERT_EQ(roots.size(), 2u);
    const auto coarse = detect_peaks(s, 2);
    ASSERT_EQ(coarse.size(), 2u);
    std::vector<double> seeds;
    for (const auto& c : coarse) seeds.push_back(c.position);
    const auto r = fit_gaussians(s, seeds);
    ASSERT_EQ(r.peaks.size(), 2u);
    for (std::size_t k = 0; k < 2; ++k) {
        EXPECT_LT(std::abs(r.peaks[k].center - roots[k]), r.peaks[k].fwhm / 100.0)
            << "center " << r.peaks[k].center << " root " << roots[k] << " fwhm " << r.peaks[k].fwhm;
    }
}

TEST(Observation, DetuningsAndMask) {
    // Wavelength-axis spectrum with two Gaussian bands.
    Spectrum s;
    s.kind = AxisKind::kWavelengthUm;
    for (int k = 0; k <= 600; ++k) {
        const double l = 1.40 + 0.3 * k / 600.0;
        s.axis.push_back(l);
        s.intensity.push_back(gauss(l, 1.48, 0.02, 1.0) + gauss(l, 1.66, 0.015, 0.8));
    }
    const auto degeneracy = VacuumWavelength::from_nm(1535.2);
    const auto all = observation_from_spectrum(s, VacuumWavelength::from_nm(767.1), degeneracy, jsa::Beam::kSignal, {});
    ASSERT_EQ(all.peaks.size(), 2u);
    const double w0 = wavelength_to_angular_frequency(degeneracy).value;
    const auto w = [](double l) { return 2.0 * std::numbers::pi * kSpeedOfLight / l; };
    // Ordered by detuning: the long-wavelength band first.
    EXPECT_NEAR(all.peaks[0].center_detuning, w(1.66) - w0, 0.05);
    EXPECT_NEAR(all.peaks[1].center_detuning, w(1.48) - w0, 0.05);
    EXPECT_NEAR(all.peaks[1].fwhm_detuning, w(1.47) - w(1.49), 0.05);
    EXPECT_NEAR(all.band.lo_um, 1.40, 1e-12);
    EXPECT_NEAR(all.band.hi_um, 1.70, 1e-12);

    const std::vector<WavelengthInterval> mask{{1.65, std::numeric_limits<double>::infinity()}};
    const auto masked = observation_from_spectrum(s, VacuumWavelength::from_nm(767.1), degeneracy, jsa::Beam::kSignal, mask);
    ASSERT_EQ(masked.peaks.size(), 1u);
    EXPECT_FALSE(masked.observes(w(1.66) - w0, degeneracy));
    EXPECT_TRUE(masked.observes(w(1.48) - w0, degeneracy));
    EXPECT_FALSE(masked.observes(w(1.35) - w0, degeneracy));
}

TEST(Observation, FlatSpectrumHasNoPeaks) {
    Spectrum s;
    s.kind = AxisKind::kWavelengthUm;
    for (int k = 0; k < 50; ++k) {
        s.axis.push_back(1.4 + 0.01 * k);
        s.intensity.push_back(1.0);
    }
    const auto o = observation_from_spectrum(s, VacuumWavelength::from_nm(767.1), VacuumWavelength::from_nm(1535.2),
                                             jsa::Beam::kIdler, {});
    EXPECT_TRUE(o.peaks.empty());
}
