#ifndef PDC_JSA_HPP
#define PDC_JSA_HPP

#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include "pdc/spectrum.hpp"
#include "pdc/units.hpp"

// Closed-form spectral model of parametric down-conversion in a waveguide:
// second-order phase mismatch, joint spectral amplitude, its Gaussian
// ellipse approximation, phasematching bandwidth and tilt, CW marginals.
namespace pdc::jsa {

class SingularTiltError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Expansion coefficients of the phase mismatch around a phasematched
// triplet. kappa_mu = k'_mu - k'_p (ps/um), K_mu = k''_mu (ps^2/um).
struct DispersionParams {
    double kappa_s = 0.0;
    double kappa_i = 0.0;
    double K_s = 0.0;
    double K_i = 0.0;
    double K_p = 0.0;

    /// Throws DomainError unless every coefficient is finite and kappa_i != 0.
    void validate() const;

    /// Signal and idler roles exchanged.
    DispersionParams swapped() const { return {kappa_i, kappa_s, K_i, K_s, K_p}; }

    /// Builds physical coefficients from values normalized to |kappa_i|.
    static DispersionParams from_normalized(double kappa_i, double kappa_ratio, double Ks_norm,
                                            double Ki_norm, double Kp_norm = 0.0);
};

struct WaveguideSpec {
    double length_um = 0.0;
    double gamma = 0.0;
    AngularFrequency omega0_s;
    AngularFrequency omega0_i;

    AngularFrequency omega0_p() const { return {omega0_s.value + omega0_i.value}; }
    void validate() const;

    /// Degenerate triplet: signal and idler both at `degeneracy`.
    static WaveguideSpec degenerate(double length_um, double gamma, VacuumWavelength degeneracy);
};

struct PumpSpec {
    AngularFrequency omega_c;
    FrequencyDetuning sigma_p;  // 1/e amplitude half-width of the Gaussian envelope
    bool cw = false;
};

struct EllipseAxes {
    FrequencyDetuning sigma_minus;  // minor semiaxis
    FrequencyDetuning sigma_plus;   // major semiaxis, +inf when the ellipse is unbounded
};

struct SymMatrix2 {
    double m11 = 0.0;
    double m12 = 0.0;
    double m22 = 0.0;
};

struct PhasematchingBandwidth {
    FrequencyDetuning sigma_pm;
    FrequencyDetuning intensity_fwhm;  // sigma_pm * sqrt(2 ln 2)

    double fwhm_nm(VacuumWavelength lambda0) const {
        return detuning_bandwidth_to_wavelength_fwhm(intensity_fwhm, lambda0);
    }
};

struct Tilt {
    double slope = 0.0;      // d(nu_i)/d(nu_s) along the contour
    double angle_deg = 0.0;  // arctan(slope) in degrees
};

struct ContourRoot {
    double nu_s = 0.0;
    double nu_i = 0.0;
};

enum class Beam { kSignal, kIdler };

/// sin(x)/x with sinc(0) = 1.
double sinc(double x);

/// Pump detuning of a CW or central pump frequency from the phasematched triplet.
FrequencyDetuning pump_detuning(const WaveguideSpec& spec, AngularFrequency pump);

/// Phase mismatch in 1/um, expanded to second order in the detunings.
double delta_k(const DispersionParams& params, FrequencyDetuning nu_s, FrequencyDetuning nu_i);

/// Unnormalized joint spectral amplitude: Gaussian pump envelope times
/// sinc(L dk / 2) exp(-i L dk / 2). Requires a pulsed pump.
std::complex<double> jsa_amplitude(const WaveguideSpec& spec, const PumpSpec& pump,
                                   const DispersionParams& params, FrequencyDetuning nu_s,
                                   FrequencyDetuning nu_i);

/// |f|^2 sampled on the outer product of two detuning axes, row-major with
/// nu_s as the slow index. Each cell is computed independently.
std::vector<double> jsd_grid(const WaveguideSpec& spec, const PumpSpec& pump,
                             const DispersionParams& params, std::span<const double> nu_s_axis,
                             std::span<const double> nu_i_axis);

/// Scales a sampled |f|^2 grid so that the midpoint Riemann sum is one.
/// Throws DegenerateInputError for an empty or all-zero grid.
std::vector<double> normalize_jsd(std::span<const double> grid, double cell_area);

/// Quadratic form of the Gaussian-approximated |f| (units ps^2).
SymMatrix2 gaussian_ellipse_matrix(const WaveguideSpec& spec, const PumpSpec& pump,
                                   const DispersionParams& params);

/// Closed-form eigenvalues of gaussian_ellipse_matrix, as semiaxis scales.
EllipseAxes ellipse_eigenvalues(const WaveguideSpec& spec, const PumpSpec& pump,
                                const DispersionParams& params);

PhasematchingBandwidth phasematching_bandwidth(const WaveguideSpec& spec, const DispersionParams& params);

/// Bandwidth from the product L * kappa directly, for callers where the
/// resonator length cancels (optical-length differences from fringe data).
PhasematchingBandwidth phasematching_bandwidth_from_products(double gamma, double length_kappa_s,
                                                             double length_kappa_i);

Tilt phasematching_tilt(const DispersionParams& params, FrequencyDetuning nu_s, FrequencyDetuning nu_i,
                        FrequencyDetuning nu_p);

/// Real solutions nu_s of dk = 0 along nu_s + nu_i = delta, ascending.
/// With drop_Kp the -K_p delta^2 / 2 term is omitted.
std::vector<ContourRoot> marginal_contour_roots(const DispersionParams& params, FrequencyDetuning delta,
                                                bool drop_Kp);

/// |sinc(L dk / 2)|^2 at one point of the CW marginal of `beam`.
double marginal_intensity(const WaveguideSpec& spec, const DispersionParams& params, FrequencyDetuning delta,
                          FrequencyDetuning nu, Beam beam = Beam::kSignal);

/// CW marginal spectrum on a strictly increasing detuning axis of `beam`.
Spectrum marginal_spectrum(const WaveguideSpec& spec, const DispersionParams& params,
                           AngularFrequency pump_cw_omega, std::span<const double> axis,
                           Beam beam = Beam::kSignal);

/// Positive root of sinc^2(x) = 1/2, by bisection.
double sinc_half_power_point();

/// Factor gamma for which exp(-2 gamma x^2) and sinc^2(x) share their FWHM.
double gamma_from_sinc_matching();

} // namespace pdc::jsa

#endif // PDC_JSA_HPP
