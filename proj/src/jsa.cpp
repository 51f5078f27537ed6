#include "pdc/jsa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace pdc::jsa {

namespace {

// Below this |K_s + K_i| (ps^2/um) the contour equation is treated as linear.
constexpr double kLinearThreshold = 1e-18;

bool all_finite(const DispersionParams& p) {
    return std::isfinite(p.kappa_s) && std::isfinite(p.kappa_i) && std::isfinite(p.K_s) &&
           std::isfinite(p.K_i) && std::isfinite(p.K_p);
}

} // namespace

void DispersionParams::validate() const {
    if (!all_finite(*this)) {
        throw DomainError("dispersion parameters must be finite");
    }
    if (kappa_i == 0.0) {
        throw DomainError("kappa_i must be nonzero");
    }
}

DispersionParams DispersionParams::from_normalized(double kappa_i, double kappa_ratio, double Ks_norm,
                                                   double Ki_norm, double Kp_norm) {
    const double scale = std::abs(kappa_i);
    return {kappa_ratio * kappa_i, kappa_i, Ks_norm * scale, Ki_norm * scale, Kp_norm * scale};
}

void WaveguideSpec::validate() const {
    if (!(length_um > 0.0) || !std::isfinite(length_um)) {
        throw DomainError("waveguide length must be positive");
    }
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw DomainError("gamma must be positive");
    }
}

WaveguideSpec WaveguideSpec::degenerate(double length_um, double gamma, VacuumWavelength degeneracy) {
    const auto omega0 = wavelength_to_angular_frequency(degeneracy);
    WaveguideSpec spec{length_um, gamma, omega0, omega0};
    spec.validate();
    return spec;
}

double sinc(double x) {
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

FrequencyDetuning pump_detuning(const WaveguideSpec& spec, AngularFrequency pump) {
    return {pump.value - spec.omega0_p().value};
}

double delta_k(const DispersionParams& p, FrequencyDetuning nu_s, FrequencyDetuning nu_i) {
    const double s = nu_s.value;
    const double i = nu_i.value;
    return p.kappa_s * s + p.kappa_i * i + 0.5 * (p.K_s - p.K_p) * s * s + 0.5 * (p.K_i - p.K_p) * i * i -
           p.K_p * s * i;
}

std::complex<double> jsa_amplitude(const WaveguideSpec& spec, const PumpSpec& pump,
                                   const DispersionParams& params, FrequencyDetuning nu_s,
                                   FrequencyDetuning nu_i) {
    if (pump.cw) {
        throw DomainError("jsa_amplitude requires a pulsed pump; use marginal_spectrum for CW");
    }
    const double delta = pump_detuning(spec, pump.omega_c).value;
    const double offset = (nu_s.value + nu_i.value - delta) / pump.sigma_p.value;
    const double envelope = std::exp(-offset * offset);
    const double half_phase = 0.5 * spec.length_um * delta_k(params, nu_s, nu_i);
    return envelope * sinc(half_phase) * std::polar(1.0, -half_phase);
}

std::vector<double> jsd_grid(const WaveguideSpec& spec, const PumpSpec& pump,
                             const DispersionParams& params, std::span<const double> nu_s_axis,
                             std::span<const double> nu_i_axis) {
    std::vector<double> grid(nu_s_axis.size() * nu_i_axis.size());
    for (std::size_t r = 0; r < nu_s_axis.size(); ++r) {
        for (std::size_t c = 0; c < nu_i_axis.size(); ++c) {
            grid[r * nu_i_axis.size() + c] =
                std::norm(jsa_amplitude(spec, pump, params, {nu_s_axis[r]}, {nu_i_axis[c]}));
        }
    }
    return grid;
}

std::vector<double> normalize_jsd(std::span<const double> grid, double cell_area) {
    if (grid.empty()) {
        throw DegenerateInputError("normalize_jsd: empty grid");
    }
    if (!(cell_area > 0.0)) {
        throw DomainError("normalize_jsd: cell area must be positive");
    }
    const double total = std::accumulate(grid.begin(), grid.end(), 0.0) * cell_area;
    if (!(total > 0.0) || !std::isfinite(total)) {
        throw DegenerateInputError("normalize_jsd: grid has no positive weight");
    }
    std::vector<double> out(grid.begin(), grid.end());
    for (auto& v : out) v /= total;
    return out;
}

SymMatrix2 gaussian_ellipse_matrix(const WaveguideSpec& spec, const PumpSpec& pump,
                                   const DispersionParams& params) {
    const double inv_sp2 = pump.cw ? 0.0 : 1.0 / (pump.sigma_p.value * pump.sigma_p.value);
    const double b = spec.gamma * spec.length_um * spec.length_um / 4.0;
    return {inv_sp2 + b * params.kappa_s * params.kappa_s, inv_sp2 + b * params.kappa_s * params.kappa_i,
            inv_sp2 + b * params.kappa_i * params.kappa_i};
}

EllipseAxes ellipse_eigenvalues(const WaveguideSpec& spec, const PumpSpec& pump,
                                const DispersionParams& params) {
    const double inv_sp2 = pump.cw ? 0.0 : 1.0 / (pump.sigma_p.value * pump.sigma_p.value);
    const double b = spec.gamma * spec.length_um * spec.length_um / 4.0;
    const double ks = params.kappa_s;
    const double ki = params.kappa_i;
    const double half_trace = inv_sp2 + 0.5 * b * (ks * ks + ki * ki);
    const double radicand = inv_sp2 * inv_sp2 + std::pow(0.5 * b * (ks * ks + ki * ki), 2) +
                            inv_sp2 * 2.0 * b * ks * ki;
    const double lambda_max = half_trace + std::sqrt(std::max(radicand, 0.0));
    if (!(lambda_max > 0.0) || !std::isfinite(lambda_max)) {
        throw DomainError("ellipse_eigenvalues: non-positive eigenvalue");
    }
    // det = inv_sp2 * b * (ks - ki)^2; lambda_min from the product avoids cancellation.
    const double det = inv_sp2 * b * (ks - ki) * (ks - ki);
    const double lambda_min = det / lambda_max;
    EllipseAxes axes;
    axes.sigma_minus = {1.0 / std::sqrt(lambda_max)};
    axes.sigma_plus = {lambda_min > 0.0 ? 1.0 / std::sqrt(lambda_min)
                                        : std::numeric_limits<double>::infinity()};
    return axes;
}

PhasematchingBandwidth phasematching_bandwidth_from_products(double gamma, double length_kappa_s,
                                                             double length_kappa_i) {
    const double k2 = length_kappa_s * length_kappa_s + length_kappa_i * length_kappa_i;
    if (!(k2 > 0.0)) {
        throw DomainError("phasematching_bandwidth: kappa_s and kappa_i both vanish");
    }
    if (!(gamma > 0.0)) {
        throw DomainError("phasematching_bandwidth: gamma must be positive");
    }
    const double sigma = 1.0 / std::sqrt(gamma * k2 / 4.0);
    return {{sigma}, {sigma * std::sqrt(2.0 * std::numbers::ln2)}};
}

PhasematchingBandwidth phasematching_bandwidth(const WaveguideSpec& spec, const DispersionParams& params) {
    return phasematching_bandwidth_from_products(spec.gamma, spec.length_um * params.kappa_s,
                                                 spec.length_um * params.kappa_i);
}

Tilt phasematching_tilt(const DispersionParams& p, FrequencyDetuning nu_s, FrequencyDetuning nu_i,
                        FrequencyDetuning nu_p) {
    const double num = p.kappa_s + p.K_s * nu_s.value - p.K_p * nu_p.value;
    const double den = p.kappa_i + p.K_i * nu_i.value - p.K_p * nu_p.value;
    if (den == 0.0) {
        throw SingularTiltError("phasematching_tilt: vanishing denominator");
    }
    const double slope = -num / den;
    if (!std::isfinite(slope)) {
        throw SingularTiltError("phasematching_tilt: non-finite slope");
    }
    return {slope, std::atan(slope) * 180.0 / std::numbers::pi};
}

std::vector<ContourRoot> marginal_contour_roots(const DispersionParams& p, FrequencyDetuning delta,
                                                bool drop_Kp) {
    const double d = delta.value;
    // a nu_s^2 + b nu_s + c = 0 after substituting nu_i = delta - nu_s.
    const double a = 0.5 * (p.K_s + p.K_i);
    const double b = p.kappa_s - p.kappa_i - p.K_i * d;
    double c = p.kappa_i * d + 0.5 * p.K_i * d * d;
    if (!drop_Kp) c -= 0.5 * p.K_p * d * d;

    std::vector<double> nus;
    if (std::abs(p.K_s + p.K_i) < kLinearThreshold) {
        if (b == 0.0) {
            if (c == 0.0) {
                throw DegenerateInputError("marginal_contour_roots: contour equation vanishes identically");
            }
        } else {
            nus.push_back(-c / b);
        }
    } else {
        const double disc = b * b - 4.0 * a * c;
        if (disc == 0.0) {
            nus.push_back(-b / (2.0 * a));
        } else if (disc > 0.0) {
            const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
            if (q == 0.0) {
                nus.push_back(0.0);
            } else {
                nus.push_back(q / a);
                nus.push_back(c / q);
            }
            std::sort(nus.begin(), nus.end());
        }
    }

    std::vector<ContourRoot> roots;
    roots.reserve(nus.size());
    for (double s : nus) roots.push_back({s, d - s});
    return roots;
}

double marginal_intensity(const WaveguideSpec& spec, const DispersionParams& params, FrequencyDetuning delta,
                          FrequencyDetuning nu, Beam beam) {
    const double partner = delta.value - nu.value;
    const double dk = beam == Beam::kSignal ? delta_k(params, nu, {partner}) : delta_k(params, {partner}, nu);
    const double s = sinc(0.5 * spec.length_um * dk);
    return s * s;
}

Spectrum marginal_spectrum(const WaveguideSpec& spec, const DispersionParams& params,
                           AngularFrequency pump_cw_omega, std::span<const double> axis, Beam beam) {
    Spectrum out;
    out.kind = AxisKind::kDetuning;
    out.axis.assign(axis.begin(), axis.end());
    if (!strictly_increasing(out.axis)) {
        throw FormatError("marginal_spectrum: axis must be strictly increasing");
    }
    const auto delta = pump_detuning(spec, pump_cw_omega);
    out.intensity.reserve(axis.size());
    for (double nu : axis) out.intensity.push_back(marginal_intensity(spec, params, delta, {nu}, beam));
    return out;
}

double sinc_half_power_point() {
    // sinc^2 decreases monotonically on (0, pi); the half-power point lies in [1, 2].
    double lo = 1.0;
    double hi = 2.0;
    while (hi - lo > 1e-13) {
        const double mid = 0.5 * (lo + hi);
        const double s = sinc(mid);
        if (s * s > 0.5) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double gamma_from_sinc_matching() {
    const double x0 = sinc_half_power_point();
    return std::numbers::ln2 / (2.0 * x0 * x0);
}

} // namespace pdc::jsa
