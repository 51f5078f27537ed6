#ifndef PDC_PEAK_FIT_HPP
#define PDC_PEAK_FIT_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdc/jsa.hpp"
#include "pdc/spectrum.hpp"
#include "pdc/units.hpp"

// Peak detection and sum-of-Gaussians fitting for marginal spectra.
namespace pdc::fit {

struct CoarsePeak {
    std::size_t index = 0;   // sample index of the raw argmax near the smoothed maximum
    double position = 0.0;   // axis value at index
    double height = 0.0;     // smoothed height
    double prominence = 0.0; // smoothed prominence
};

// One Gaussian component, A exp(-4 ln2 (x - center)^2 / fwhm^2), in the
// units of the fitted spectrum's axis.
struct PeakFit {
    AxisKind kind = AxisKind::kWavelengthUm;
    double center = 0.0;
    double fwhm = 0.0;
    double amplitude = 0.0;
    // Row-major covariance of (center, fwhm, amplitude).
    std::array<double, 9> covariance{};

    double center_sigma() const { return std::sqrt(std::max(covariance[0], 0.0)); }
};

struct GaussianFitResult {
    std::vector<PeakFit> peaks;  // ordered by center
    double offset = 0.0;
    bool converged = false;
    int iterations = 0;
    double initial_residual_norm = 0.0;
    double residual_norm = 0.0;
    std::vector<double> rejected_seeds;
};

class FitFailure : public std::runtime_error {
public:
    FitFailure(const std::string& what, GaussianFitResult best)
        : std::runtime_error(what), best_so_far(std::move(best)) {}
    GaussianFitResult best_so_far;
};

struct FitOptions {
    int max_iterations = 200;
    double relative_tolerance = 1e-8;
    std::size_t min_samples_per_peak = 5;
};

/// Local maxima of the 5-point median-smoothed spectrum, ranked by
/// prominence, keeping those above min_prominence * (max - min).
std::vector<CoarsePeak> detect_peaks(const Spectrum& s, std::size_t max_peaks, double min_prominence = 0.15);

/// Levenberg-Marquardt fit of a sum of Gaussians plus a shared constant
/// offset to the raw samples. Seeds are axis positions. Throws FitFailure
/// (carrying the best parameters found) if not converged.
GaussianFitResult fit_gaussians(const Spectrum& s, std::span<const double> seeds, const FitOptions& options = {});

struct WavelengthInterval {
    double lo_um = 0.0;
    double hi_um = std::numeric_limits<double>::infinity();

    bool contains(double lambda_um) const { return lambda_um >= lo_um && lambda_um <= hi_um; }
};

struct MarginalPeak {
    PeakFit fit;
    double center_detuning = 0.0;  // rad/ps from the beam's degenerate frequency
    double fwhm_detuning = 0.0;    // rad/ps, used as the full errorbar
    bool low_confidence = false;
};

struct MarginalObservation {
    VacuumWavelength pump;
    jsa::Beam beam = jsa::Beam::kSignal;
    std::vector<MarginalPeak> peaks;   // at most two, ordered by detuning
    std::vector<WavelengthInterval> mask;
    WavelengthInterval band;           // recorded spectral range

    /// True when a detuning of this beam falls inside the recorded, unmasked band.
    bool observes(double detuning, VacuumWavelength degeneracy) const;
};

struct ObservationOptions {
    std::size_t max_peaks = 2;
    double min_prominence = 0.15;
    // Gaussian fits whose residual rms near the peak exceeds this fraction of
    // the amplitude are flagged low-confidence (flat-topped bands).
    double low_confidence_residual = 0.05;
    FitOptions fit;
};

/// detect_peaks + fit_gaussians, converted to detunings from `degeneracy`
/// (the degenerate signal/idler wavelength); peaks centered inside `mask`
/// are dropped.
MarginalObservation observation_from_spectrum(const Spectrum& s, VacuumWavelength pump, VacuumWavelength degeneracy,
                                              jsa::Beam beam, std::span<const WavelengthInterval> mask,
                                              const ObservationOptions& options = {});

} // namespace pdc::fit

#endif // PDC_PEAK_FIT_HPP
