#ifndef PDC_FRINGE_HPP
#define PDC_FRINGE_HPP

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdc/spectrum.hpp"
#include "pdc/units.hpp"

// Fabry-Perot transmission of a multimode waveguide cavity and Fourier
// extraction of modal group indices from the fringe pattern.
//
// Convention: the fundamental fringe peak of a mode sits at the round-trip
// optical path 2 n_g L in the Fourier domain; group_index = path / (2 L).
namespace pdc::fringe {

class NoFringeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Normal-incidence Fresnel reflectivity of an n ~ 3.3 facet against air.
inline constexpr double kDefaultFacetReflectivity = 0.29;

struct CavityMode {
    Measured group_index;
    double weight = 1.0;
    double facet_reflectivity = kDefaultFacetReflectivity;
};

struct OpticalLengthPeak {
    double position_um = 0.0;        // round-trip optical path
    double position_sigma_um = 0.0;
    double height = 0.0;             // fringe amplitude estimate, input intensity units
    double fwhm_um = 0.0;            // width of the Fourier peak
    double snr = 0.0;
    Measured group_index;
    bool merged = false;             // wider than one resolved peak
};

enum class Window { kHann, kRectangular };

struct AnalysisOptions {
    Window window = Window::kHann;
    std::size_t zero_pad = 8;
    double floor_factor = 8.0;           // detection threshold in units of the median magnitude
    double min_relative_height = 0.02;   // relative to the strongest peak
    double min_path_bins = 4.0;          // ignore the DC region below this many resolution bins
    double exclusion_bins = 4.0;         // a peak must dominate +-this many resolution bins
};

struct FringeAnalysis {
    std::vector<OpticalLengthPeak> peaks;  // strongest first
    double resolution_um = 0.0;            // one Fourier resolution bin, 1 / wavenumber span
    double noise_floor = 0.0;              // median magnitude, height units
    std::vector<std::string> warnings;
};

/// Incoherent sum of per-mode Airy transmissions plus white Gaussian noise.
/// The axis is vacuum wavelength in um. Noise is a pure function of `seed`.
Spectrum synthesize_fringes(std::span<const CavityMode> modes, double length_um,
                            std::span<const double> wavelength_axis_um, double noise_sigma,
                            std::uint64_t seed = 0);

/// Airy transmission (1-R)^2 / (1 + R^2 - 2 R cos(phase)).
double airy_transmission(double round_trip_phase, double reflectivity);

/// Linear interpolation onto a uniform vacuum-wavenumber grid spanning the
/// input, with the mean removed. Input axis: wavelength or angular frequency.
Spectrum resample_uniform_wavenumber(const Spectrum& s, std::size_t n_points);

/// Fourier analysis of fringes: resample, window, zero-pad, |FFT| against
/// optical path, detect and refine up to max_modes peaks. Repeating peaks at
/// integer multiples of a stronger peak are treated as its harmonics.
/// Throws NoFringeError when nothing rises above the noise floor.
FringeAnalysis extract_group_indices(const Spectrum& s, const Measured& length_um, std::size_t max_modes,
                                     const AnalysisOptions& options = {});

/// kappa_bar = (P_pdc - P_pump) / (2 L c) in ps/um, uncertainty from the
/// two peak positions and the length.
Measured kappa_bar_from_optical_lengths(const OpticalLengthPeak& peak_pdc, const OpticalLengthPeak& peak_pump,
                                        const Measured& length_um);

} // namespace pdc::fringe

#endif // PDC_FRINGE_HPP
