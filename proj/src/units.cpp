#include "pdc/units.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace pdc {

double um_to_nm(double um) {
    const double guess = um * 1000.0;
    if (!std::isfinite(guess)) return guess;
    double best = guess;
    std::size_t best_len = 64;
    double c = std::nextafter(std::nextafter(guess, -INFINITY), -INFINITY);
    for (int k = 0; k < 5; ++k, c = std::nextafter(c, INFINITY)) {
        if (nm_to_um(c) != um) continue;
        char buf[64];
        const auto res = std::to_chars(buf, buf + sizeof buf, c);
        const auto len = static_cast<std::size_t>(res.ptr - buf);
        if (len < best_len) {
            best = c;
            best_len = len;
        }
    }
    return best;
}

AngularFrequency wavelength_to_angular_frequency(VacuumWavelength lambda) {
    if (!(lambda.value > 0.0) || !std::isfinite(lambda.value)) {
        throw DomainError("wavelength must be positive and finite");
    }
    return {kTwoPi * kSpeedOfLight / lambda.value};
}

VacuumWavelength angular_frequency_to_wavelength(AngularFrequency omega) {
    if (!(omega.value > 0.0) || !std::isfinite(omega.value)) {
        throw DomainError("angular frequency must be positive and finite");
    }
    return {kTwoPi * kSpeedOfLight / omega.value};
}

double detuning_bandwidth_to_wavelength_fwhm(FrequencyDetuning delta_omega, VacuumWavelength lambda0) {
    if (!(lambda0.value > 0.0)) {
        throw DomainError("reference wavelength must be positive");
    }
    const double width_um = lambda0.value * lambda0.value * delta_omega.value / (kTwoPi * kSpeedOfLight);
    return width_um * 1e3;
}

FrequencyDetuning wavelength_fwhm_to_detuning_bandwidth(double fwhm_nm, VacuumWavelength lambda0) {
    if (!(lambda0.value > 0.0)) {
        throw DomainError("reference wavelength must be positive");
    }
    return {fwhm_nm * 1e-3 * kTwoPi * kSpeedOfLight / (lambda0.value * lambda0.value)};
}

std::string format_measured(const Measured& m) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g +/- %.2g", m.value, m.sigma);
    return buf;
}

} // namespace pdc
