#ifndef PDC_IO_HPP
#define PDC_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pdc/fringe.hpp"
#include "pdc/jsa.hpp"
#include "pdc/mc.hpp"
#include "pdc/peak_fit.hpp"
#include "pdc/spectrum.hpp"

// File formats: spectra as two-column CSV, everything structured as JSON
// with the unit spelled out in each field name.
namespace pdc::io {

using nlohmann::json;

class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---- Spectrum CSV ----------------------------------------------------------
//
//   # comment lines start with '#'
//   wavelength_nm,intensity            (or angular_frequency_rad_per_ps)
//   1523.0,0.8123
//
// Wavelength columns are stored internally in um.

Spectrum parse_spectrum_csv(std::istream& in, const std::string& source = "<stream>");
Spectrum read_spectrum_csv(const std::filesystem::path& path);
void write_spectrum_csv(std::ostream& out, const Spectrum& s);
void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& s);

/// Doubles in CSV output: 17 significant digits.
std::string format_double(double v);

// ---- JSON helpers ----------------------------------------------------------

json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const json& j);

// ---- Parameter file --------------------------------------------------------

struct PumpSettings {
    double central_wavelength_nm = 0.0;
    double sigma_p_rad_per_ps = 0.0;
    bool cw = true;
};

struct ParamFile {
    Measured length_um;
    double gamma = 0.179;
    jsa::DispersionParams dispersion;
    std::optional<PumpSettings> pump;
    VacuumWavelength degeneracy;
    std::vector<fit::WavelengthInterval> masks;

    jsa::WaveguideSpec waveguide() const { return jsa::WaveguideSpec::degenerate(length_um.value, gamma, degeneracy); }
};

ParamFile param_file_from_json(const json& j);
json to_json(const ParamFile& p);

// ---- Fringe analysis -------------------------------------------------------

struct FringeReport {
    fringe::FringeAnalysis analysis;
    Measured length_um;
    double band_lo_nm = 0.0;
    double band_hi_nm = 0.0;
};

json to_json(const FringeReport& r);
FringeReport fringe_report_from_json(const json& j);

// ---- Observations ----------------------------------------------------------

json to_json(const fit::MarginalObservation& o);
fit::MarginalObservation observation_from_json(const json& j, VacuumWavelength degeneracy);
json to_json(const mc::ObservationSet& set);
mc::ObservationSet observation_set_from_json(const json& j);

// ---- Monte Carlo -----------------------------------------------------------

mc::McConfig mc_config_from_json(const json& j);
json to_json(const mc::McConfig& c);

struct PosteriorFile {
    mc::McPosterior posterior;
    mc::McPriors priors;
    double degeneracy_nm = 0.0;
    std::vector<double> pump_nm;  // distinct observed pump wavelengths, ascending
};

json to_json(const PosteriorFile& p);
PosteriorFile posterior_file_from_json(const json& j);

/// One CSV per parameter: bin_lo,bin_hi,count.
void write_histogram_csvs(const std::filesystem::path& dir, const mc::McPosterior& post);

json to_json(const mc::DerivedReport& r);

std::string beam_name(jsa::Beam beam);
jsa::Beam beam_from_name(const std::string& name);

} // namespace pdc::io

#endif // PDC_IO_HPP
