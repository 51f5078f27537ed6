#ifndef PDC_UNITS_HPP
#define PDC_UNITS_HPP

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

// Canonical internal units: angular frequency in rad/ps, length in um,
// time in ps. kappa-type coefficients are ps/um, K-type ps^2/um.
namespace pdc {

/// Vacuum speed of light in um/ps. The only definition of c in the project.
inline constexpr double kSpeedOfLight = 299.792458;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class DegenerateInputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Absolute angular frequency in rad/ps.
struct AngularFrequency {
    double value = 0.0;
};

/// Signed angular-frequency offset in rad/ps (nu_s, nu_i, pump detuning).
struct FrequencyDetuning {
    double value = 0.0;
};

/// nm -> um by correctly rounded division.
inline double nm_to_um(double nm) { return nm / 1000.0; }

/// um -> nm, choosing the shortest decimal among the nearest candidates that
/// maps back to exactly `um`, so that files survive repeated read/write.
double um_to_nm(double um);

/// Vacuum wavelength in um.
struct VacuumWavelength {
    double value = 0.0;

    static VacuumWavelength from_nm(double nm) { return {nm_to_um(nm)}; }
    double nm() const { return um_to_nm(value); }
};

/// A scalar with one standard uncertainty in the same unit.
struct Measured {
    double value = 0.0;
    double sigma = 0.0;

    Measured() = default;
    Measured(double v, double s = 0.0) : value(v), sigma(s) {
        if (!(s >= 0.0)) {
            throw DomainError("Measured: uncertainty must be non-negative");
        }
    }

    double relative() const { return value != 0.0 ? sigma / std::abs(value) : 0.0; }
};

AngularFrequency wavelength_to_angular_frequency(VacuumWavelength lambda);
VacuumWavelength angular_frequency_to_wavelength(AngularFrequency omega);

/// First-order conversion of a frequency width at lambda0 into a wavelength
/// width in nm: lambda0^2 * dw / (2 pi c).
double detuning_bandwidth_to_wavelength_fwhm(FrequencyDetuning delta_omega, VacuumWavelength lambda0);

/// Inverse of detuning_bandwidth_to_wavelength_fwhm; width in nm to rad/ps.
FrequencyDetuning wavelength_fwhm_to_detuning_bandwidth(double fwhm_nm, VacuumWavelength lambda0);

std::string format_measured(const Measured& m);

} // namespace pdc

#endif // PDC_UNITS_HPP
