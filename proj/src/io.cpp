#include "pdc/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace pdc::io {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& field, const std::string& where) {
    const std::string t = trim(field);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
        throw FormatError(where + ": not a number: '" + t + "'");
    }
    if (!std::isfinite(v)) {
        throw FormatError(where + ": NaN or Inf is not allowed");
    }
    return v;
}

// JSON cannot carry inf; null stands for it.
json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_or_inf(const json& j) {
    return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

template <typename T>
T required(const json& j, const char* key, const std::string& context) {
    if (!j.is_object() || !j.contains(key) || j.at(key).is_null()) {
        throw SchemaError(context + ": missing field '" + key + "'");
    }
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw SchemaError(context + ": field '" + key + "' has the wrong type");
    }
}

template <typename T>
T optional_field(const json& j, const char* key, T fallback) {
    if (!j.is_object() || !j.contains(key) || j.at(key).is_null()) return fallback;
    return j.at(key).get<T>();
}

json measured_json(const Measured& m) { return {{"value", m.value}, {"sigma", m.sigma}}; }

Measured measured_from(const json& j, const std::string& context) {
    return Measured(required<double>(j, "value", context), optional_field<double>(j, "sigma", 0.0));
}

json interval_json(const fit::WavelengthInterval& w) {
    return json::array({um_to_nm(w.lo_um), finite_or_null(um_to_nm(w.hi_um))});
}

fit::WavelengthInterval interval_from(const json& j, const std::string& context) {
    if (!j.is_array() || j.size() != 2) {
        throw SchemaError(context + ": interval must be [lo_nm, hi_nm]");
    }
    fit::WavelengthInterval w;
    w.lo_um = j[0].is_null() ? 0.0 : nm_to_um(j[0].get<double>());
    w.hi_um = nm_to_um(number_or_inf(j[1]));
    if (!(w.hi_um > w.lo_um)) throw SchemaError(context + ": interval must have hi > lo");
    return w;
}

json peak_fit_json(const fit::PeakFit& p) {
    return {{"axis", std::string(axis_kind_name(p.kind))},
            {"center", p.center},
            {"fwhm", p.fwhm},
            {"amplitude", p.amplitude},
            {"covariance", p.covariance}};
}

AxisKind axis_kind_from_name(const std::string& name) {
    for (auto k : {AxisKind::kWavelengthUm, AxisKind::kAngularFrequency, AxisKind::kDetuning, AxisKind::kWavenumber}) {
        if (axis_kind_name(k) == name) return k;
    }
    throw SchemaError("unknown axis kind '" + name + "'");
}

const char* branch_name(mc::Branch b) { return b == mc::Branch::kLower ? "lower" : "upper"; }

mc::Branch branch_from_name(const std::string& s) {
    if (s == "lower") return mc::Branch::kLower;
    if (s == "upper") return mc::Branch::kUpper;
    throw SchemaError("branch must be 'lower' or 'upper', got '" + s + "'");
}

json prior_json(const mc::PriorRange& r) { return json::array({r.lo, r.hi}); }

mc::PriorRange prior_from(const json& j, const char* key, mc::PriorRange fallback) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    const auto& a = j.at(key);
    if (!a.is_array() || a.size() != 2) throw SchemaError(std::string("priors.") + key + " must be [lo, hi]");
    return {a[0].get<double>(), a[1].get<double>()};
}

} // namespace

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Spectrum parse_spectrum_csv(std::istream& in, const std::string& source) {
    Spectrum s;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const std::string where = source + ":" + std::to_string(line_no);
        const auto comma = t.find(',');
        if (comma == std::string::npos || t.find(',', comma + 1) != std::string::npos) {
            throw FormatError(where + ": expected exactly two comma-separated columns");
        }
        const std::string a = trim(t.substr(0, comma));
        const std::string b = trim(t.substr(comma + 1));
        if (!have_header) {
            if (b != "intensity") throw FormatError(where + ": second column must be 'intensity'");
            if (a == "wavelength_nm") {
                s.kind = AxisKind::kWavelengthUm;
            } else if (a == "angular_frequency_rad_per_ps") {
                s.kind = AxisKind::kAngularFrequency;
            } else {
                throw FormatError(where + ": first column must be 'wavelength_nm' or 'angular_frequency_rad_per_ps'");
            }
            have_header = true;
            continue;
        }
        double x = parse_number(a, where);
        if (s.kind == AxisKind::kWavelengthUm) x = nm_to_um(x);
        const double y = parse_number(b, where);
        if (!s.axis.empty() && !(x > s.axis.back())) {
            throw FormatError(where + ": axis is not strictly increasing");
        }
        s.axis.push_back(x);
        s.intensity.push_back(y);
    }
    if (!have_header) throw FormatError(source + ": missing header line");
    if (s.empty()) throw FormatError(source + ": no data rows");
    return s;
}

Spectrum read_spectrum_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return parse_spectrum_csv(in, path.string());
}

void write_spectrum_csv(std::ostream& out, const Spectrum& s) {
    const bool wavelength = s.kind == AxisKind::kWavelengthUm;
    switch (s.kind) {
    case AxisKind::kWavelengthUm: out << "wavelength_nm,intensity\n"; break;
    case AxisKind::kAngularFrequency: out << "angular_frequency_rad_per_ps,intensity\n"; break;
    default: throw FormatError("write_spectrum_csv: only wavelength or angular-frequency axes are supported");
    }
    for (std::size_t i = 0; i < s.size(); ++i) {
        out << format_double(wavelength ? um_to_nm(s.axis[i]) : s.axis[i]) << ',' << format_double(s.intensity[i]) << '\n';
    }
}

void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& s) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_spectrum_csv(out, s);
}

json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

void write_json(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

// ---- Parameter file --------------------------------------------------------

ParamFile param_file_from_json(const json& j) {
    ParamFile p;
    const auto& wg = j.contains("waveguide") ? j.at("waveguide") : json();
    if (wg.is_null()) throw SchemaError("params: missing 'waveguide'");
    p.length_um = Measured(required<double>(wg, "length_um", "params.waveguide"),
                           optional_field<double>(wg, "length_sigma_um", 0.0));
    p.gamma = optional_field<double>(wg, "gamma", 0.179);

    if (!j.contains("dispersion")) throw SchemaError("params: missing 'dispersion'");
    const auto& d = j.at("dispersion");
    if (d.contains("kappa_ratio")) {
        p.dispersion = jsa::DispersionParams::from_normalized(
            required<double>(d, "kappa_i_ps_per_um", "params.dispersion"), required<double>(d, "kappa_ratio", "params.dispersion"),
            required<double>(d, "K_s_over_abs_kappa_i_ps", "params.dispersion"),
            required<double>(d, "K_i_over_abs_kappa_i_ps", "params.dispersion"),
            optional_field<double>(d, "K_p_over_abs_kappa_i_ps", 0.0));
    } else {
        p.dispersion.kappa_s = required<double>(d, "kappa_s_ps_per_um", "params.dispersion");
        p.dispersion.kappa_i = required<double>(d, "kappa_i_ps_per_um", "params.dispersion");
        p.dispersion.K_s = optional_field<double>(d, "K_s_ps2_per_um", 0.0);
        p.dispersion.K_i = optional_field<double>(d, "K_i_ps2_per_um", 0.0);
        p.dispersion.K_p = optional_field<double>(d, "K_p_ps2_per_um", 0.0);
    }
    try {
        p.dispersion.validate();
    } catch (const DomainError& e) {
        throw SchemaError(std::string("params.dispersion: ") + e.what());
    }

    if (j.contains("pump")) {
        const auto& pj = j.at("pump");
        PumpSettings ps;
        ps.central_wavelength_nm = optional_field<double>(pj, "central_wavelength_nm", 0.0);
        ps.cw = optional_field<bool>(pj, "cw", !pj.contains("sigma_p_rad_per_ps"));
        ps.sigma_p_rad_per_ps = optional_field<double>(pj, "sigma_p_rad_per_ps", 0.0);
        p.pump = ps;
    }
    p.degeneracy = VacuumWavelength::from_nm(required<double>(j, "degeneracy_nm", "params"));
    if (j.contains("masks_nm")) {
        for (const auto& m : j.at("masks_nm")) p.masks.push_back(interval_from(m, "params.masks_nm"));
    }
    return p;
}

json to_json(const ParamFile& p) {
    json j;
    j["waveguide"] = {{"length_um", p.length_um.value}, {"length_sigma_um", p.length_um.sigma}, {"gamma", p.gamma}};
    j["dispersion"] = {{"kappa_s_ps_per_um", p.dispersion.kappa_s},
                       {"kappa_i_ps_per_um", p.dispersion.kappa_i},
                       {"K_s_ps2_per_um", p.dispersion.K_s},
                       {"K_i_ps2_per_um", p.dispersion.K_i},
                       {"K_p_ps2_per_um", p.dispersion.K_p}};
    if (p.pump) {
        j["pump"] = {{"central_wavelength_nm", p.pump->central_wavelength_nm}, {"cw", p.pump->cw}};
        if (!p.pump->cw) j["pump"]["sigma_p_rad_per_ps"] = p.pump->sigma_p_rad_per_ps;
    }
    j["degeneracy_nm"] = p.degeneracy.nm();
    j["masks_nm"] = json::array();
    for (const auto& m : p.masks) j["masks_nm"].push_back(interval_json(m));
    return j;
}

// ---- Fringe analysis -------------------------------------------------------

json to_json(const FringeReport& r) {
    json peaks = json::array();
    for (const auto& p : r.analysis.peaks) {
        peaks.push_back({{"position_um", p.position_um},
                         {"position_sigma_um", p.position_sigma_um},
                         {"height", p.height},
                         {"fwhm_um", p.fwhm_um},
                         {"snr", finite_or_null(p.snr)},
                         {"group_index", measured_json(p.group_index)},
                         {"merged", p.merged}});
    }
    return {{"kind", "fringe_analysis"},
            {"length_um", measured_json(r.length_um)},
            {"band_nm", json::array({r.band_lo_nm, r.band_hi_nm})},
            {"resolution_um", r.analysis.resolution_um},
            {"noise_floor", r.analysis.noise_floor},
            {"peaks", peaks},
            {"warnings", r.analysis.warnings}};
}

FringeReport fringe_report_from_json(const json& j) {
    FringeReport r;
    if (!j.contains("length_um")) throw SchemaError("fringe: missing 'length_um'");
    r.length_um = measured_from(j.at("length_um"), "fringe.length_um");
    const auto band = required<std::vector<double>>(j, "band_nm", "fringe");
    if (band.size() != 2) throw SchemaError("fringe: band_nm must have two entries");
    r.band_lo_nm = band[0];
    r.band_hi_nm = band[1];
    r.analysis.resolution_um = required<double>(j, "resolution_um", "fringe");
    r.analysis.noise_floor = optional_field<double>(j, "noise_floor", 0.0);
    for (const auto& pj : required<json>(j, "peaks", "fringe")) {
        fringe::OpticalLengthPeak p;
        p.position_um = required<double>(pj, "position_um", "fringe.peaks");
        p.position_sigma_um = optional_field<double>(pj, "position_sigma_um", 0.0);
        p.height = optional_field<double>(pj, "height", 0.0);
        p.fwhm_um = optional_field<double>(pj, "fwhm_um", 0.0);
        p.snr = pj.contains("snr") ? number_or_inf(pj.at("snr")) : 0.0;
        p.group_index = measured_from(required<json>(pj, "group_index", "fringe.peaks"), "fringe.peaks.group_index");
        p.merged = optional_field<bool>(pj, "merged", false);
        r.analysis.peaks.push_back(p);
    }
    r.analysis.warnings = optional_field<std::vector<std::string>>(j, "warnings", {});
    return r;
}

// ---- Observations ----------------------------------------------------------

std::string beam_name(jsa::Beam beam) { return beam == jsa::Beam::kSignal ? "signal" : "idler"; }

jsa::Beam beam_from_name(const std::string& name) {
    if (name == "signal") return jsa::Beam::kSignal;
    if (name == "idler") return jsa::Beam::kIdler;
    throw SchemaError("beam must be 'signal' or 'idler', got '" + name + "'");
}

json to_json(const fit::MarginalObservation& o) {
    json peaks = json::array();
    for (const auto& p : o.peaks) {
        peaks.push_back({{"center_detuning_rad_per_ps", p.center_detuning},
                         {"fwhm_detuning_rad_per_ps", p.fwhm_detuning},
                         {"low_confidence", p.low_confidence},
                         {"fit", peak_fit_json(p.fit)}});
    }
    json mask = json::array();
    for (const auto& m : o.mask) mask.push_back(interval_json(m));
    return {{"pump_nm", o.pump.nm()},
            {"beam", beam_name(o.beam)},
            {"band_nm", interval_json(o.band)},
            {"mask_nm", mask},
            {"peaks", peaks}};
}

fit::MarginalObservation observation_from_json(const json& j, VacuumWavelength degeneracy) {
    fit::MarginalObservation o;
    o.pump = VacuumWavelength::from_nm(required<double>(j, "pump_nm", "observation"));
    o.beam = beam_from_name(required<std::string>(j, "beam", "observation"));
    o.band = j.contains("band_nm") ? interval_from(j.at("band_nm"), "observation.band_nm")
                                   : fit::WavelengthInterval{0.0, std::numeric_limits<double>::infinity()};
    if (j.contains("mask_nm")) {
        for (const auto& m : j.at("mask_nm")) o.mask.push_back(interval_from(m, "observation.mask_nm"));
    }
    const double omega0 = wavelength_to_angular_frequency(degeneracy).value;
    for (const auto& pj : required<json>(j, "peaks", "observation")) {
        fit::MarginalPeak p;
        if (pj.contains("center_detuning_rad_per_ps")) {
            p.center_detuning = required<double>(pj, "center_detuning_rad_per_ps", "observation.peaks");
            p.fwhm_detuning = required<double>(pj, "fwhm_detuning_rad_per_ps", "observation.peaks");
        } else {
            // Hand-entered peaks in nm.
            const double c = nm_to_um(required<double>(pj, "center_nm", "observation.peaks"));
            const double w = nm_to_um(required<double>(pj, "fwhm_nm", "observation.peaks"));
            const auto omega = [](double lambda_um) { return kTwoPi * kSpeedOfLight / lambda_um; };
            p.center_detuning = omega(c) - omega0;
            p.fwhm_detuning = omega(c - 0.5 * w) - omega(c + 0.5 * w);
            p.fit.kind = AxisKind::kWavelengthUm;
            p.fit.center = c;
            p.fit.fwhm = w;
        }
        if (!(p.fwhm_detuning > 0.0)) throw SchemaError("observation.peaks: FWHM must be positive");
        p.low_confidence = optional_field<bool>(pj, "low_confidence", false);
        if (pj.contains("fit")) {
            const auto& f = pj.at("fit");
            p.fit.kind = axis_kind_from_name(required<std::string>(f, "axis", "observation.peaks.fit"));
            p.fit.center = required<double>(f, "center", "observation.peaks.fit");
            p.fit.fwhm = required<double>(f, "fwhm", "observation.peaks.fit");
            p.fit.amplitude = optional_field<double>(f, "amplitude", 0.0);
            p.fit.covariance = optional_field<std::array<double, 9>>(f, "covariance", {});
        }
        o.peaks.push_back(p);
    }
    if (o.peaks.size() > 2) throw SchemaError("observation: at most two peaks per marginal");
    return o;
}

json to_json(const mc::ObservationSet& set) {
    json obs = json::array();
    for (const auto& o : set.observations) obs.push_back(to_json(o));
    json excluded = json::array();
    for (const auto& e : set.excluded) excluded.push_back({{"beam", beam_name(e.beam)}, {"branch", branch_name(e.branch)}});
    return {{"degeneracy_nm", set.degeneracy.nm()}, {"excluded_branches", excluded}, {"observations", obs}};
}

mc::ObservationSet observation_set_from_json(const json& j) {
    mc::ObservationSet set;
    set.degeneracy = VacuumWavelength::from_nm(required<double>(j, "degeneracy_nm", "observation set"));
    if (j.contains("excluded_branches")) {
        for (const auto& e : j.at("excluded_branches")) {
            set.excluded.push_back({beam_from_name(required<std::string>(e, "beam", "excluded_branches")),
                                    branch_from_name(required<std::string>(e, "branch", "excluded_branches"))});
        }
    }
    for (const auto& o : required<json>(j, "observations", "observation set")) {
        set.observations.push_back(observation_from_json(o, set.degeneracy));
    }
    return set;
}

// ---- Monte Carlo -----------------------------------------------------------

mc::McConfig mc_config_from_json(const json& j) {
    mc::McConfig c;
    c.n_runs = optional_field<std::uint64_t>(j, "n_runs", c.n_runs);
    c.seed = optional_field<std::uint64_t>(j, "seed", c.seed);
    if (j.contains("priors")) {
        const auto& p = j.at("priors");
        c.priors.kappa_ratio = prior_from(p, "kappa_ratio", c.priors.kappa_ratio);
        c.priors.Ks_norm = prior_from(p, "Ks_norm_ps", c.priors.Ks_norm);
        c.priors.Ki_norm = prior_from(p, "Ki_norm_ps", c.priors.Ki_norm);
        c.priors.delta_offset = prior_from(p, "delta_offset_rad_per_ps", c.priors.delta_offset);
    }
    c.drop_Kp = optional_field<bool>(j, "drop_Kp", c.drop_Kp);
    c.Kp_norm = optional_field<double>(j, "Kp_norm_ps", c.Kp_norm);
    if (j.contains("constraints")) {
        c.signal_group_index_above_idler =
            optional_field<bool>(j.at("constraints"), "signal_group_index_above_idler", c.signal_group_index_above_idler);
    }
    c.histogram_bins = optional_field<std::size_t>(j, "histogram_bins", c.histogram_bins);
    try {
        c.validate();
    } catch (const DomainError& e) {
        throw SchemaError(e.what());
    }
    return c;
}

json to_json(const mc::McConfig& c) {
    return {{"n_runs", c.n_runs},
            {"seed", c.seed},
            {"priors",
             {{"kappa_ratio", prior_json(c.priors.kappa_ratio)},
              {"Ks_norm_ps", prior_json(c.priors.Ks_norm)},
              {"Ki_norm_ps", prior_json(c.priors.Ki_norm)},
              {"delta_offset_rad_per_ps", prior_json(c.priors.delta_offset)}}},
            {"drop_Kp", c.drop_Kp},
            {"Kp_norm_ps", c.Kp_norm},
            {"constraints", {{"signal_group_index_above_idler", c.signal_group_index_above_idler}}},
            {"histogram_bins", c.histogram_bins}};
}

json to_json(const PosteriorFile& f) {
    const auto& post = f.posterior;
    json j;
    j["kind"] = "mc_posterior";
    j["n_runs"] = post.n_runs;
    j["seed"] = post.seed;
    j["drop_Kp"] = post.drop_Kp;
    j["Kp_norm_ps"] = post.Kp_norm;
    j["n_accepted"] = post.samples.size();
    j["acceptance_rate"] = post.acceptance_rate();
    j["degeneracy_nm"] = f.degeneracy_nm;
    j["pump_nm"] = f.pump_nm;
    j["priors"] = to_json(mc::McConfig{.priors = f.priors})["priors"];
    j["parameters"] = json::array();
    for (std::size_t k = 0; k < mc::kParameterCount; ++k) {
        const std::string name(mc::kParameterNames[k]);
        j["parameters"].push_back(name);
        const auto& e = post.estimates[k];
        j["estimates"][name] = {{"mode", e.mode}, {"mean", e.mean}, {"std", e.std}};
        j["histograms"][name] = {{"edges", post.histograms[k].edges}, {"counts", post.histograms[k].counts}};
    }
    json samples = json::array();
    for (const auto& s : post.samples) {
        samples.push_back(json::array({s.index, s.kappa_ratio, s.Ks_norm, s.Ki_norm, s.delta_offset}));
    }
    j["samples_columns"] = {"index", "kappa_ratio", "Ks_norm_ps", "Ki_norm_ps", "delta_offset_rad_per_ps"};
    j["samples"] = samples;
    return j;
}

PosteriorFile posterior_file_from_json(const json& j) {
    PosteriorFile f;
    auto& post = f.posterior;
    post.n_runs = required<std::uint64_t>(j, "n_runs", "posterior");
    post.seed = optional_field<std::uint64_t>(j, "seed", 0);
    post.drop_Kp = optional_field<bool>(j, "drop_Kp", true);
    post.Kp_norm = optional_field<double>(j, "Kp_norm_ps", 0.0);
    f.degeneracy_nm = required<double>(j, "degeneracy_nm", "posterior");
    f.pump_nm = optional_field<std::vector<double>>(j, "pump_nm", {});
    json cfg = {{"priors", required<json>(j, "priors", "posterior")}};
    f.priors = mc_config_from_json(cfg).priors;
    for (const auto& row : required<json>(j, "samples", "posterior")) {
        if (!row.is_array() || row.size() != 5) throw SchemaError("posterior.samples: rows must have five columns");
        mc::McSample s;
        s.index = row[0].get<std::uint64_t>();
        s.kappa_ratio = row[1].get<double>();
        s.Ks_norm = row[2].get<double>();
        s.Ki_norm = row[3].get<double>();
        s.delta_offset = row[4].get<double>();
        s.accepted = true;
        post.samples.push_back(s);
    }
    const auto& est = required<json>(j, "estimates", "posterior");
    const auto& hist = required<json>(j, "histograms", "posterior");
    for (std::size_t k = 0; k < mc::kParameterCount; ++k) {
        const std::string name(mc::kParameterNames[k]);
        const auto& e = required<json>(est, name.c_str(), "posterior.estimates");
        post.estimates[k] = {required<double>(e, "mode", name), required<double>(e, "mean", name),
                             required<double>(e, "std", name)};
        const auto& h = required<json>(hist, name.c_str(), "posterior.histograms");
        post.histograms[k].edges = required<std::vector<double>>(h, "edges", name);
        post.histograms[k].counts = required<std::vector<std::uint64_t>>(h, "counts", name);
    }
    return f;
}

void write_histogram_csvs(const std::filesystem::path& dir, const mc::McPosterior& post) {
    std::filesystem::create_directories(dir);
    for (std::size_t k = 0; k < mc::kParameterCount; ++k) {
        const auto path = dir / (std::string(mc::kParameterNames[k]) + ".csv");
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        out << "bin_lo,bin_hi,count\n";
        const auto& h = post.histograms[k];
        for (std::size_t b = 0; b < h.counts.size(); ++b) {
            out << format_double(h.edges[b]) << ',' << format_double(h.edges[b + 1]) << ',' << h.counts[b] << '\n';
        }
    }
}

json to_json(const mc::DerivedReport& r) {
    json curve = json::array();
    for (const auto& t : r.tilt_curve) {
        curve.push_back({{"pump_nm", t.pump_nm},
                         {"branch", t.branch},
                         {"n", t.n},
                         {"median_deg", t.median_deg},
                         {"p16_deg", t.p16_deg},
                         {"p84_deg", t.p84_deg}});
    }
    return {{"delta_ng_signal_idler", measured_json(r.delta_ng)},
            {"tilt_at_degeneracy_deg", measured_json(r.tilt_at_degeneracy_deg)},
            {"tilt_curve", curve}};
}

} // namespace pdc::io
