#include "pdc/peak_fit.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pdc::fit {

namespace {

constexpr double kFourLn2 = 4.0 * std::numbers::ln2;

std::vector<double> median5(const std::vector<double>& y) {
    std::vector<double> out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        const std::size_t lo = i >= 2 ? i - 2 : 0;
        const std::size_t hi = std::min(y.size() - 1, i + 2);
        std::array<double, 5> w{};
        std::size_t n = 0;
        for (std::size_t j = lo; j <= hi; ++j) w[n++] = y[j];
        std::sort(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(n));
        out[i] = n % 2 ? w[n / 2] : 0.5 * (w[n / 2 - 1] + w[n / 2]);
    }
    return out;
}

// Parameter layout: [offset, c0, w0, a0, c1, w1, a1, ...] on scaled axes.
struct Model {
    const Eigen::VectorXd& x;
    const Eigen::VectorXd& y;

    std::size_t n_peaks(const Eigen::VectorXd& p) const { return static_cast<std::size_t>((p.size() - 1) / 3); }

    Eigen::VectorXd residual(const Eigen::VectorXd& p) const {
        Eigen::VectorXd r = Eigen::VectorXd::Constant(x.size(), p[0]) - y;
        for (std::size_t k = 0; k < n_peaks(p); ++k) {
            const double c = p[1 + 3 * k];
            const double w = p[2 + 3 * k];
            const double a = p[3 + 3 * k];
            for (Eigen::Index i = 0; i < x.size(); ++i) {
                const double d = x[i] - c;
                r[i] += a * std::exp(-kFourLn2 * d * d / (w * w));
            }
        }
        return r;
    }

    Eigen::MatrixXd jacobian(const Eigen::VectorXd& p) const {
        Eigen::MatrixXd j(x.size(), p.size());
        j.col(0).setOnes();
        for (std::size_t k = 0; k < n_peaks(p); ++k) {
            const double c = p[1 + 3 * k];
            const double w = p[2 + 3 * k];
            const double a = p[3 + 3 * k];
            for (Eigen::Index i = 0; i < x.size(); ++i) {
                const double d = x[i] - c;
                const double g = std::exp(-kFourLn2 * d * d / (w * w));
                j(i, static_cast<Eigen::Index>(1 + 3 * k)) = a * g * 2.0 * kFourLn2 * d / (w * w);
                j(i, static_cast<Eigen::Index>(2 + 3 * k)) = a * g * 2.0 * kFourLn2 * d * d / (w * w * w);
                j(i, static_cast<Eigen::Index>(3 + 3 * k)) = g;
            }
        }
        return j;
    }
};

bool widths_positive(const Eigen::VectorXd& p) {
    for (Eigen::Index k = 2; k < p.size(); k += 3) {
        if (!(p[k] > 0.0)) return false;
    }
    return true;
}

struct LmOutcome {
    Eigen::VectorXd params;
    bool converged = false;
    int iterations = 0;
    double initial_norm = 0.0;
    double final_norm = 0.0;
};

LmOutcome levenberg_marquardt(const Model& model, Eigen::VectorXd p, const FitOptions& options) {
    LmOutcome out;
    Eigen::VectorXd r = model.residual(p);
    double cost = r.squaredNorm();
    out.initial_norm = std::sqrt(cost);
    double lambda = 1e-3;
    for (int it = 0; it < options.max_iterations; ++it) {
        out.iterations = it + 1;
        const Eigen::MatrixXd j = model.jacobian(p);
        const Eigen::MatrixXd jtj = j.transpose() * j;
        const Eigen::VectorXd g = j.transpose() * r;
        bool accepted = false;
        while (lambda < 1e16) {
            Eigen::MatrixXd a = jtj;
            for (Eigen::Index d = 0; d < a.rows(); ++d) a(d, d) += lambda * std::max(jtj(d, d), 1e-12);
            const Eigen::VectorXd step = a.ldlt().solve(-g);
            const Eigen::VectorXd trial = p + step;
            if (step.allFinite() && widths_positive(trial)) {
                const Eigen::VectorXd r_trial = model.residual(trial);
                const double c_trial = r_trial.squaredNorm();
                if (c_trial < cost) {
                    double rel = 0.0;
                    for (Eigen::Index d = 0; d < p.size(); ++d) {
                        rel = std::max(rel, std::abs(step[d]) / std::max(std::abs(p[d]), 1e-12));
                    }
                    p = trial;
                    r = r_trial;
                    cost = c_trial;
                    lambda = std::max(lambda * 0.3, 1e-12);
                    accepted = true;
                    if (rel < options.relative_tolerance) out.converged = true;
                    break;
                }
            }
            lambda *= 10.0;
        }
        // No descent direction left at machine precision: a stationary point.
        if (!accepted) out.converged = true;
        if (out.converged) break;
    }
    out.params = p;
    out.final_norm = std::sqrt(cost);
    return out;
}

double interpolate_crossing(double x0, double y0, double x1, double y1, double level) {
    if (y1 == y0) return x0;
    return x0 + (level - y0) * (x1 - x0) / (y1 - y0);
}

} // namespace

std::vector<CoarsePeak> detect_peaks(const Spectrum& s, std::size_t max_peaks, double min_prominence) {
    std::vector<CoarsePeak> peaks;
    if (s.size() < 3 || max_peaks == 0) return peaks;
    const auto sm = median5(s.intensity);
    const auto [mn, mx] = std::minmax_element(sm.begin(), sm.end());
    const double range = *mx - *mn;
    if (!(range > 0.0)) return peaks;
    const double threshold = min_prominence * range;

    for (std::size_t i = 1; i + 1 < sm.size(); ++i) {
        if (!(sm[i] > sm[i - 1] && sm[i] >= sm[i + 1])) continue;
        // Topographic prominence on the smoothed curve.
        double left_min = sm[i];
        for (std::size_t j = i; j-- > 0;) {
            if (sm[j] > sm[i]) break;
            left_min = std::min(left_min, sm[j]);
        }
        double right_min = sm[i];
        for (std::size_t j = i + 1; j < sm.size(); ++j) {
            if (sm[j] > sm[i]) break;
            right_min = std::min(right_min, sm[j]);
        }
        const double prominence = sm[i] - std::max(left_min, right_min);
        if (prominence < threshold || prominence <= 0.0) continue;

        std::size_t best = i;
        const std::size_t lo = i >= 2 ? i - 2 : 0;
        const std::size_t hi = std::min(s.size() - 1, i + 2);
        for (std::size_t j = lo; j <= hi; ++j) {
            if (s.intensity[j] > s.intensity[best]) best = j;
        }
        peaks.push_back({best, s.axis[best], sm[i], prominence});
    }
    std::stable_sort(peaks.begin(), peaks.end(),
                     [](const CoarsePeak& a, const CoarsePeak& b) { return a.prominence > b.prominence; });
    if (peaks.size() > max_peaks) peaks.resize(max_peaks);
    return peaks;
}

GaussianFitResult fit_gaussians(const Spectrum& s, std::span<const double> seeds, const FitOptions& options) {
    s.validate();
    if (seeds.empty()) {
        throw DegenerateInputError("fit_gaussians: no seeds");
    }
    const std::size_t n = s.size();
    const double x_mid = 0.5 * (s.axis.front() + s.axis.back());
    const double x_scale = 0.5 * (s.axis.back() - s.axis.front());
    double y_scale = 0.0;
    for (double v : s.intensity) y_scale = std::max(y_scale, std::abs(v));
    if (!(y_scale > 0.0)) {
        throw DegenerateInputError("fit_gaussians: spectrum is identically zero");
    }

    Eigen::VectorXd x(static_cast<Eigen::Index>(n));
    Eigen::VectorXd y(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        x[static_cast<Eigen::Index>(i)] = (s.axis[i] - x_mid) / x_scale;
        y[static_cast<Eigen::Index>(i)] = s.intensity[i] / y_scale;
    }
    const double baseline = y.minCoeff();

    // Initial guesses from the raw samples.
    struct Guess {
        double seed, c, w, a;
    };
    std::vector<Guess> guesses;
    for (double seed : seeds) {
        const auto it = std::lower_bound(s.axis.begin(), s.axis.end(), seed);
        std::size_t k = static_cast<std::size_t>(std::distance(s.axis.begin(), it));
        if (k >= n) k = n - 1;
        if (k > 0 && std::abs(s.axis[k - 1] - seed) < std::abs(s.axis[k] - seed)) --k;
        const double a = y[static_cast<Eigen::Index>(k)] - baseline;
        const double half = baseline + 0.5 * a;
        std::size_t l = k;
        while (l > 0 && y[static_cast<Eigen::Index>(l)] > half) --l;
        std::size_t r = k;
        while (r + 1 < n && y[static_cast<Eigen::Index>(r)] > half) ++r;
        const auto X = [&](std::size_t i) { return x[static_cast<Eigen::Index>(i)]; };
        const auto Y = [&](std::size_t i) { return y[static_cast<Eigen::Index>(i)]; };
        double left = l < k ? interpolate_crossing(X(l), Y(l), X(l + 1), Y(l + 1), half) : X(k);
        double right = r > k ? interpolate_crossing(X(r), Y(r), X(r - 1), Y(r - 1), half) : X(k);
        double w = right - left;
        if (Y(l) > half) w = 2.0 * (right - X(k));   // ran into the left edge
        if (Y(r) > half) w = 2.0 * (X(k) - left);    // ran into the right edge
        if (!(w > 0.0)) w = 2.0 * (X(std::min(k + 1, n - 1)) - X(k > 0 ? k - 1 : 0));
        std::size_t support = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (std::abs(X(i) - X(k)) <= w) ++support;
        }
        if (support < options.min_samples_per_peak) {
            throw DegenerateInputError("fit_gaussians: fewer than " +
                                       std::to_string(options.min_samples_per_peak) + " samples in a peak region");
        }
        guesses.push_back({seed, X(k), w, a > 0.0 ? a : 1e-3});
    }

    GaussianFitResult result;
    while (!guesses.empty()) {
        Eigen::VectorXd p(static_cast<Eigen::Index>(1 + 3 * guesses.size()));
        p[0] = baseline;
        for (std::size_t k = 0; k < guesses.size(); ++k) {
            p[static_cast<Eigen::Index>(1 + 3 * k)] = guesses[k].c;
            p[static_cast<Eigen::Index>(2 + 3 * k)] = guesses[k].w;
            p[static_cast<Eigen::Index>(3 + 3 * k)] = guesses[k].a;
        }
        const Model model{x, y};
        const LmOutcome lm = levenberg_marquardt(model, p, options);

        // Drop seeds that collapsed to a non-positive amplitude and refit.
        std::vector<Guess> kept;
        for (std::size_t k = 0; k < guesses.size(); ++k) {
            if (lm.params[static_cast<Eigen::Index>(3 + 3 * k)] > 0.0) {
                kept.push_back(guesses[k]);
            } else {
                result.rejected_seeds.push_back(guesses[k].seed);
            }
        }
        if (kept.size() != guesses.size()) {
            guesses = std::move(kept);
            continue;
        }

        const Eigen::MatrixXd j = model.jacobian(lm.params);
        const Eigen::Index dof = static_cast<Eigen::Index>(n) - lm.params.size();
        const double s2 = dof > 0 ? lm.final_norm * lm.final_norm / static_cast<double>(dof) : 0.0;
        const Eigen::MatrixXd jtj = j.transpose() * j;
        const Eigen::MatrixXd cov = s2 * jtj.completeOrthogonalDecomposition().pseudoInverse();

        result.peaks.clear();
        result.offset = lm.params[0] * y_scale;
        const std::array<double, 3> scale{x_scale, x_scale, y_scale};
        for (std::size_t k = 0; k < guesses.size(); ++k) {
            const auto base = static_cast<Eigen::Index>(1 + 3 * k);
            PeakFit pf;
            pf.kind = s.kind;
            pf.center = x_mid + lm.params[base] * x_scale;
            pf.fwhm = lm.params[base + 1] * x_scale;
            pf.amplitude = lm.params[base + 2] * y_scale;
            for (int r = 0; r < 3; ++r) {
                for (int c = 0; c < 3; ++c) {
                    pf.covariance[static_cast<std::size_t>(3 * r + c)] = cov(base + r, base + c) * scale[static_cast<std::size_t>(r)] * scale[static_cast<std::size_t>(c)];
                }
            }
            result.peaks.push_back(pf);
        }
        std::sort(result.peaks.begin(), result.peaks.end(),
                  [](const PeakFit& a, const PeakFit& b) { return a.center < b.center; });
        result.converged = lm.converged;
        result.iterations = lm.iterations;
        result.initial_residual_norm = lm.initial_norm * y_scale;
        result.residual_norm = lm.final_norm * y_scale;
        if (!lm.converged) {
            throw FitFailure("fit_gaussians: no convergence within " + std::to_string(options.max_iterations) +
                                 " iterations",
                             result);
        }
        return result;
    }
    throw FitFailure("fit_gaussians: every seed was rejected", result);
}

bool MarginalObservation::observes(double detuning, VacuumWavelength degeneracy) const {
    const double omega = wavelength_to_angular_frequency(degeneracy).value + detuning;
    if (!(omega > 0.0)) return false;
    const double lambda = kTwoPi * kSpeedOfLight / omega;
    if (!band.contains(lambda)) return false;
    for (const auto& m : mask) {
        if (m.contains(lambda)) return false;
    }
    return true;
}

MarginalObservation observation_from_spectrum(const Spectrum& s, VacuumWavelength pump, VacuumWavelength degeneracy,
                                              jsa::Beam beam, std::span<const WavelengthInterval> mask,
                                              const ObservationOptions& options) {
    s.validate();
    const double omega0 = wavelength_to_angular_frequency(degeneracy).value;

    // Converts an axis value to absolute angular frequency.
    const auto to_omega = [&](double v) {
        switch (s.kind) {
        case AxisKind::kWavelengthUm: return kTwoPi * kSpeedOfLight / v;
        case AxisKind::kAngularFrequency: return v;
        case AxisKind::kDetuning: return omega0 + v;
        case AxisKind::kWavenumber: return kTwoPi * kSpeedOfLight * v;
        }
        return v;
    };

    MarginalObservation obs;
    obs.pump = pump;
    obs.beam = beam;
    obs.mask.assign(mask.begin(), mask.end());
    const double w_a = to_omega(s.axis.front());
    const double w_b = to_omega(s.axis.back());
    obs.band = {kTwoPi * kSpeedOfLight / std::max(w_a, w_b), kTwoPi * kSpeedOfLight / std::min(w_a, w_b)};

    const auto coarse = detect_peaks(s, options.max_peaks, options.min_prominence);
    if (coarse.empty()) return obs;
    std::vector<double> seeds;
    for (const auto& c : coarse) seeds.push_back(c.position);
    const auto fitted = fit_gaussians(s, seeds, options.fit);

    for (const auto& pf : fitted.peaks) {
        const double w_center = to_omega(pf.center);
        const double w_lo = to_omega(pf.center - 0.5 * pf.fwhm);
        const double w_hi = to_omega(pf.center + 0.5 * pf.fwhm);
        const double lambda_center = kTwoPi * kSpeedOfLight / w_center;
        bool masked = false;
        for (const auto& m : mask) {
            if (m.contains(lambda_center)) masked = true;
        }
        if (masked) continue;

        // Residual rms near the peak, relative to its amplitude.
        double ss = 0.0;
        std::size_t count = 0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (std::abs(s.axis[i] - pf.center) > pf.fwhm) continue;
            double model = fitted.offset;
            for (const auto& q : fitted.peaks) {
                const double d = s.axis[i] - q.center;
                model += q.amplitude * std::exp(-kFourLn2 * d * d / (q.fwhm * q.fwhm));
            }
            ss += (s.intensity[i] - model) * (s.intensity[i] - model);
            ++count;
        }
        const double rms = count > 0 ? std::sqrt(ss / static_cast<double>(count)) : 0.0;

        MarginalPeak mp;
        mp.fit = pf;
        mp.center_detuning = w_center - omega0;
        mp.fwhm_detuning = std::abs(w_hi - w_lo);
        mp.low_confidence = rms > options.low_confidence_residual * pf.amplitude;
        obs.peaks.push_back(mp);
    }
    std::sort(obs.peaks.begin(), obs.peaks.end(),
              [](const MarginalPeak& a, const MarginalPeak& b) { return a.center_detuning < b.center_detuning; });
    return obs;
}

} // namespace pdc::fit
