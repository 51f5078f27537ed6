#include "pdc/fringe.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fft.hpp"
#include "pdc/random.hpp"

namespace pdc::fringe {

namespace {

std::vector<double> window_weights(Window window, std::size_t n) {
    std::vector<double> w(n, 1.0);
    if (window == Window::kHann && n > 1) {
        for (std::size_t k = 0; k < n; ++k) {
            w[k] = 0.5 * (1.0 - std::cos(kTwoPi * static_cast<double>(k) / static_cast<double>(n - 1)));
        }
    }
    return w;
}

// Full width at half maximum of the magnitude peak, in resolution bins of
// the unwindowed rectangular transform.
double nominal_peak_width_bins(Window window) {
    return window == Window::kHann ? 2.0 : 1.21;
}

double median(std::vector<double> v) {
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    return *mid;
}

// Half-maximum crossing distance around index k, linearly interpolated.
double half_max_width(const std::vector<double>& mag, std::size_t k) {
    const double half = 0.5 * mag[k];
    std::size_t l = k;
    while (l > 0 && mag[l] > half) --l;
    std::size_t r = k;
    while (r + 1 < mag.size() && mag[r] > half) ++r;
    double left = static_cast<double>(l);
    if (mag[l] <= half && mag[l + 1] != mag[l]) {
        left += (half - mag[l]) / (mag[l + 1] - mag[l]);
    }
    double right = static_cast<double>(r);
    if (mag[r] <= half && mag[r - 1] != mag[r]) {
        right -= (half - mag[r]) / (mag[r - 1] - mag[r]);
    }
    return right - left;
}

} // namespace

double airy_transmission(double round_trip_phase, double reflectivity) {
    const double one_minus = 1.0 - reflectivity;
    return one_minus * one_minus /
           (1.0 + reflectivity * reflectivity - 2.0 * reflectivity * std::cos(round_trip_phase));
}

Spectrum synthesize_fringes(std::span<const CavityMode> modes, double length_um,
                            std::span<const double> wavelength_axis_um, double noise_sigma,
                            std::uint64_t seed) {
    if (modes.empty()) {
        throw DegenerateInputError("synthesize_fringes: no cavity modes");
    }
    if (!(length_um > 0.0)) {
        throw DomainError("synthesize_fringes: length must be positive");
    }
    if (!(noise_sigma >= 0.0)) {
        throw DomainError("synthesize_fringes: noise sigma must be non-negative");
    }
    for (const auto& m : modes) {
        if (!(m.group_index.value > 1.0) || !(m.weight >= 0.0) || !(m.facet_reflectivity >= 0.0) ||
            !(m.facet_reflectivity < 1.0)) {
            throw DomainError("synthesize_fringes: invalid cavity mode");
        }
    }

    Spectrum s;
    s.kind = AxisKind::kWavelengthUm;
    s.axis.assign(wavelength_axis_um.begin(), wavelength_axis_um.end());
    if (s.axis.empty() || !strictly_increasing(s.axis)) {
        throw DomainError("synthesize_fringes: wavelength axis must be strictly increasing");
    }
    if (s.axis.front() <= 0.0) {
        throw DomainError("synthesize_fringes: wavelengths must be positive");
    }

    const CounterRng rng(seed, 0x66726e67);
    s.intensity.resize(s.axis.size());
    for (std::size_t k = 0; k < s.axis.size(); ++k) {
        const double wavenumber = 1.0 / s.axis[k];
        double total = 0.0;
        for (const auto& m : modes) {
            const double phase = 2.0 * kTwoPi * wavenumber * m.group_index.value * length_um;
            total += m.weight * airy_transmission(phase, m.facet_reflectivity);
        }
        if (noise_sigma > 0.0) total += noise_sigma * rng.normal(k);
        s.intensity[k] = total;
    }
    return s;
}

Spectrum resample_uniform_wavenumber(const Spectrum& s, std::size_t n_points) {
    if (s.size() < 8) {
        throw DegenerateInputError("resample_uniform_wavenumber: need at least 8 samples");
    }
    s.validate();
    if (n_points < 2) {
        throw DomainError("resample_uniform_wavenumber: need at least 2 output points");
    }

    // Wavenumber axis in ascending order.
    std::vector<double> wn(s.size());
    std::vector<double> y(s.size());
    switch (s.kind) {
    case AxisKind::kWavelengthUm:
        if (s.axis.front() <= 0.0) throw FormatError("resample: wavelengths must be positive");
        for (std::size_t k = 0; k < s.size(); ++k) {
            wn[k] = 1.0 / s.axis[s.size() - 1 - k];
            y[k] = s.intensity[s.size() - 1 - k];
        }
        break;
    case AxisKind::kAngularFrequency:
        for (std::size_t k = 0; k < s.size(); ++k) {
            wn[k] = s.axis[k] / (kTwoPi * kSpeedOfLight);
            y[k] = s.intensity[k];
        }
        break;
    case AxisKind::kWavenumber:
        wn = s.axis;
        y = s.intensity;
        break;
    default:
        throw FormatError("resample: axis must be wavelength, frequency or wavenumber");
    }
    if (!strictly_increasing(wn)) {
        throw FormatError("resample: wavenumber axis not strictly monotone");
    }

    Spectrum out;
    out.kind = AxisKind::kWavenumber;
    out.axis.resize(n_points);
    out.intensity.resize(n_points);
    const double lo = wn.front();
    const double hi = wn.back();
    const double step = (hi - lo) / static_cast<double>(n_points - 1);
    std::size_t j = 0;
    for (std::size_t k = 0; k < n_points; ++k) {
        const double x = k + 1 == n_points ? hi : lo + step * static_cast<double>(k);
        while (j + 2 < wn.size() && wn[j + 1] < x) ++j;
        const double t = (x - wn[j]) / (wn[j + 1] - wn[j]);
        out.axis[k] = x;
        out.intensity[k] = y[j] + t * (y[j + 1] - y[j]);
    }
    const double mean =
        std::accumulate(out.intensity.begin(), out.intensity.end(), 0.0) / static_cast<double>(n_points);
    for (auto& v : out.intensity) v -= mean;
    return out;
}

FringeAnalysis extract_group_indices(const Spectrum& s, const Measured& length_um, std::size_t max_modes,
                                     const AnalysisOptions& options) {
    if (!(length_um.value > 0.0)) {
        throw DomainError("extract_group_indices: length must be positive");
    }
    if (max_modes == 0) {
        throw DomainError("extract_group_indices: max_modes must be at least 1");
    }
    const Spectrum u = resample_uniform_wavenumber(s, s.size());
    const std::size_t n = u.size();
    const double span = u.axis.back() - u.axis.front();
    const double d_wn = span / static_cast<double>(n - 1);

    const auto w = window_weights(options.window, n);
    std::vector<double> tapered(n);
    for (std::size_t k = 0; k < n; ++k) tapered[k] = u.intensity[k] * w[k];
    const double coherent_gain = std::accumulate(w.begin(), w.end(), 0.0);

    const std::size_t pad = std::max<std::size_t>(options.zero_pad, 1);
    const std::size_t m = pad * n;
    auto mag = detail::real_fft_magnitude(tapered, m);
    // Scale so that a fringe term a*cos(2 pi x wn) shows up with height a.
    for (auto& v : mag) v *= 2.0 / coherent_gain;

    const double path_step = 1.0 / (static_cast<double>(m) * d_wn);  // um per padded bin
    const double bins_per_resolution = static_cast<double>(m) / static_cast<double>(n);

    FringeAnalysis result;
    result.resolution_um = 1.0 / (static_cast<double>(n) * d_wn);

    const auto k_min = static_cast<std::size_t>(std::ceil(options.min_path_bins * bins_per_resolution));
    if (k_min + 2 >= mag.size()) {
        throw NoFringeError("extract_group_indices: spectrum too short for Fourier analysis");
    }
    const std::vector<double> band(mag.begin() + static_cast<std::ptrdiff_t>(k_min), mag.end());
    result.noise_floor = median(band);
    const double noise_sigma = result.noise_floor / std::sqrt(2.0 * std::numbers::ln2);  // Rayleigh
    const double global_max = *std::max_element(band.begin(), band.end());
    const double threshold =
        std::max(options.floor_factor * result.noise_floor, options.min_relative_height * global_max);

    const auto exclusion = static_cast<std::ptrdiff_t>(std::ceil(options.exclusion_bins * bins_per_resolution));
    std::vector<std::size_t> candidates;
    for (std::size_t k = k_min; k + 1 < mag.size(); ++k) {
        if (!(mag[k] > mag[k - 1] && mag[k] >= mag[k + 1] && mag[k] > threshold)) continue;
        const auto lo = static_cast<std::ptrdiff_t>(k) - exclusion;
        const auto hi = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(k) + exclusion,
                                                 static_cast<std::ptrdiff_t>(mag.size()) - 1);
        bool dominant = true;
        for (auto j = std::max<std::ptrdiff_t>(lo, 0); j <= hi && dominant; ++j) {
            if (mag[static_cast<std::size_t>(j)] > mag[k]) dominant = false;
        }
        if (dominant) candidates.push_back(k);
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](std::size_t a, std::size_t b) { return mag[a] > mag[b]; });

    const double nominal_width = nominal_peak_width_bins(options.window);
    for (std::size_t k : candidates) {
        if (result.peaks.size() >= max_modes) break;

        // Sub-bin refinement by a parabola through the log magnitudes.
        const double ym = std::log(mag[k - 1]);
        const double y0 = std::log(mag[k]);
        const double yp = std::log(mag[k + 1]);
        const double denom = ym - 2.0 * y0 + yp;
        const double shift = denom != 0.0 ? std::clamp(0.5 * (ym - yp) / denom, -0.5, 0.5) : 0.0;
        const double position = (static_cast<double>(k) + shift) * path_step;

        bool harmonic = false;
        for (const auto& p : result.peaks) {
            const double order = std::round(position / p.position_um);
            if (order >= 2.0 && std::abs(position - order * p.position_um) < 2.0 * order * result.resolution_um) {
                harmonic = true;
                break;
            }
        }
        if (harmonic) continue;

        OpticalLengthPeak peak;
        peak.position_um = position;
        peak.height = std::exp(y0 - 0.25 * (ym - yp) * shift);
        peak.fwhm_um = half_max_width(mag, k) * path_step;
        peak.snr = noise_sigma > 0.0 ? peak.height / noise_sigma : std::numeric_limits<double>::infinity();
        peak.position_sigma_um = std::isfinite(peak.snr) ? 0.5 * peak.fwhm_um / peak.snr : 0.0;
        peak.merged = peak.fwhm_um > 1.5 * nominal_width * result.resolution_um;

        const double ng = position / (2.0 * length_um.value);
        const double rel = std::hypot(peak.position_sigma_um / position, length_um.relative());
        peak.group_index = Measured(ng, ng * rel);
        if (peak.merged) {
            result.warnings.push_back("peak at " + std::to_string(position) +
                                      " um is wider than one resolution bin; modes may be merged");
        }
        result.peaks.push_back(peak);
    }

    if (result.peaks.empty()) {
        throw NoFringeError("extract_group_indices: no fringe peak above the noise floor");
    }
    return result;
}

Measured kappa_bar_from_optical_lengths(const OpticalLengthPeak& peak_pdc, const OpticalLengthPeak& peak_pump,
                                        const Measured& length_um) {
    if (!(length_um.value > 0.0)) {
        throw DomainError("kappa_bar_from_optical_lengths: length must be positive");
    }
    const double scale = 2.0 * length_um.value * kSpeedOfLight;
    const double value = (peak_pdc.position_um - peak_pump.position_um) / scale;
    const double from_paths = std::hypot(peak_pdc.position_sigma_um, peak_pump.position_sigma_um) / scale;
    return Measured(value, std::hypot(from_paths, value * length_um.relative()));
}

} // namespace pdc::fringe
