#ifndef PDC_MC_HPP
#define PDC_MC_HPP

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pdc/jsa.hpp"
#include "pdc/peak_fit.hpp"
#include "pdc/units.hpp"

// Monte Carlo rejection sampling of dispersion parameters normalized to
// |kappa_i| from CW marginal observations at several pump detunings.
//
// In normalized units kappa_i = -1, kappa_s = -kappa_ratio, and K values are
// K / |kappa_i| in ps. The contour dk = 0 is unchanged by this scaling.
namespace pdc::mc {

class EmptyPosteriorError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Branch { kLower, kUpper };

struct ExcludedBranch {
    jsa::Beam beam = jsa::Beam::kSignal;
    Branch branch = Branch::kLower;
};

struct ObservationSet {
    VacuumWavelength degeneracy;  // degenerate signal/idler wavelength
    std::vector<fit::MarginalObservation> observations;
    std::vector<ExcludedBranch> excluded;

    /// Throws DomainError unless at least two distinct pump detunings are present.
    void validate() const;
};

struct PriorRange {
    double lo = 0.0;
    double hi = 0.0;  // exclusive, unless lo == hi (a point prior)

    double draw(double u) const { return lo + u * (hi - lo); }
};

inline constexpr std::size_t kParameterCount = 4;
inline constexpr std::array<std::string_view, kParameterCount> kParameterNames{
    "kappa_ratio", "Ks_norm_ps", "Ki_norm_ps", "delta_offset_rad_per_ps"};

// Defaults are declared choices, not measured values: kappa_ratio below one
// keeps the signal group index above the idler's; K ranges cover low
// positive dispersion; the offset allows a sub-nm pump calibration shift.
struct McPriors {
    PriorRange kappa_ratio{0.90, 1.00};
    PriorRange Ks_norm{0.0, 5e-3};
    PriorRange Ki_norm{0.0, 5e-3};
    PriorRange delta_offset{-1.0, 1.0};

    std::array<PriorRange, kParameterCount> as_array() const { return {kappa_ratio, Ks_norm, Ki_norm, delta_offset}; }
};

struct McConfig {
    std::uint64_t n_runs = 1'000'000;
    std::uint64_t seed = 0;
    McPriors priors;
    bool drop_Kp = true;
    double Kp_norm = 0.0;                         // used only when drop_Kp is false
    bool signal_group_index_above_idler = true;   // rejects kappa_ratio >= 1
    std::size_t histogram_bins = 50;
    unsigned threads = 0;                         // 0: PDC_THREADS or hardware concurrency

    void validate() const;
};

struct McSample {
    double kappa_ratio = 0.0;
    double Ks_norm = 0.0;
    double Ki_norm = 0.0;
    double delta_offset = 0.0;
    bool accepted = false;
    std::uint64_t index = 0;

    std::array<double, kParameterCount> values() const { return {kappa_ratio, Ks_norm, Ki_norm, delta_offset}; }
    jsa::DispersionParams normalized_params(double Kp_norm = 0.0) const {
        return {-kappa_ratio, -1.0, Ks_norm, Ki_norm, Kp_norm};
    }
};

struct Histogram {
    std::vector<double> edges;  // bins + 1 entries
    std::vector<std::uint64_t> counts;
};

struct ParameterEstimate {
    double mode = 0.0;
    double mean = 0.0;
    double std = 0.0;
};

struct McPosterior {
    std::uint64_t n_runs = 0;
    std::uint64_t seed = 0;
    bool drop_Kp = true;
    double Kp_norm = 0.0;
    std::vector<McSample> samples;  // accepted only, in index order
    std::array<Histogram, kParameterCount> histograms;
    std::array<ParameterEstimate, kParameterCount> estimates;

    double acceptance_rate() const {
        return n_runs ? static_cast<double>(samples.size()) / static_cast<double>(n_runs) : 0.0;
    }
};

/// Draw number `index` of the deterministic prior stream for `seed`.
McSample draw_sample(const McPriors& priors, std::uint64_t seed, std::uint64_t index);

/// True when, at every observation, each fitted peak lies within half its
/// FWHM errorbar of a contour root, and every non-excluded root inside the
/// recorded band lies within the errorbar of some peak.
bool accept_sample(const McSample& sample, const ObservationSet& obs, const McConfig& config = {});

/// Same test for unnormalized coefficients; K_p is used unless drop_Kp.
bool accept_params(const jsa::DispersionParams& params, double delta_offset, const ObservationSet& obs,
                   const McConfig& config = {});

/// Draws config.n_runs samples, filters them by accept_sample and summarizes.
/// Bitwise identical for a given (seed, n_runs, obs) regardless of threads.
McPosterior run_mc(const McConfig& config, const ObservationSet& obs);

/// Histograms and point estimates over the accepted samples.
void summarize(McPosterior& post, const McPriors& priors, std::size_t bins);

/// Worker count from PDC_THREADS (0 or unset: hardware concurrency).
unsigned worker_count_from_env();

struct TiltBand {
    double pump_nm = 0.0;
    std::string branch;  // "lower", "upper" or "single", by signal detuning
    std::size_t n = 0;
    double median_deg = 0.0;
    double p16_deg = 0.0;
    double p84_deg = 0.0;
};

struct DerivedReport {
    Measured delta_ng;            // n_g(signal) - n_g(idler)
    Measured tilt_at_degeneracy_deg;
    std::vector<TiltBand> tilt_curve;
};

/// Signal-idler group index difference and tilt-vs-pump bands from the
/// posterior; |kappa_i| comes from the fringe analysis.
DerivedReport derived_quantities(const McPosterior& post, const Measured& kappa_i_abs, VacuumWavelength degeneracy,
                                 std::span<const double> pump_nm);

struct SynthesisSetup {
    double kappa_i_abs = 1.37e-3;   // ps/um
    double length_um = 1870.0;
    VacuumWavelength degeneracy = VacuumWavelength::from_nm(1535.2);
    std::vector<double> pump_nm;
    fit::WavelengthInterval band{1.40, 1.70};
    std::vector<fit::WavelengthInterval> mask;
    std::vector<ExcludedBranch> excluded;
    std::size_t points = 601;
    fit::ObservationOptions observation;
};

/// Marginal spectra of both beams from a known parameter set, fitted into an
/// observation set exactly as measured data would be. Peaks on excluded
/// branches are dropped when two are resolved.
ObservationSet synthesize_observations(const McSample& truth, const SynthesisSetup& setup);

} // namespace pdc::mc

#endif // PDC_MC_HPP
