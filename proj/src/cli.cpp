#include "pdc/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>

#include "pdc/fringe.hpp"
#include "pdc/io.hpp"
#include "pdc/jsa.hpp"
#include "pdc/mc.hpp"

namespace pdc::cli {

namespace {

namespace fs = std::filesystem;
using io::json;

std::string pump_label(double nm) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", nm);
    return buf;
}

std::vector<double> uniform_axis(double lo, double hi, std::size_t n) {
    std::vector<double> axis(n);
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t k = 0; k < n; ++k) axis[k] = lo + step * static_cast<double>(k);
    axis.back() = hi;
    return axis;
}

// ---- synth-fringes ---------------------------------------------------------

struct SynthArgs {
    std::vector<double> ng;
    std::vector<double> weights;
    double length_um = 0.0;
    std::vector<double> band_nm;
    std::size_t points = 0;
    double noise = 0.0;
    std::uint64_t seed = 0;
    double reflectivity = fringe::kDefaultFacetReflectivity;
    std::string out;
};

int run_synth_fringes(const SynthArgs& a) {
    std::vector<double> weights = a.weights;
    if (weights.empty()) weights.assign(a.ng.size(), 1.0);
    if (weights.size() != a.ng.size()) throw UsageError("--ng and --weights must have the same length");
    if (a.band_nm.size() != 2 || !(a.band_nm[1] > a.band_nm[0]) || !(a.band_nm[0] > 0.0)) {
        throw UsageError("--band-nm must be lo,hi with 0 < lo < hi");
    }
    if (a.points < 2) throw UsageError("--points must be at least 2");
    if (!(a.length_um > 0.0)) throw UsageError("--length-um must be positive");
    if (!(a.noise >= 0.0)) throw UsageError("--noise must be non-negative");

    std::vector<fringe::CavityMode> modes;
    for (std::size_t k = 0; k < a.ng.size(); ++k) {
        modes.push_back({Measured(a.ng[k]), weights[k], a.reflectivity});
    }
    const auto axis = uniform_axis(nm_to_um(a.band_nm[0]), nm_to_um(a.band_nm[1]), a.points);
    const auto s = fringe::synthesize_fringes(modes, a.length_um, axis, a.noise, a.seed);
    io::write_spectrum_csv(fs::path(a.out), s);
    return kExitOk;
}

// ---- fp-analyze ------------------------------------------------------------

struct AnalyzeArgs {
    std::string input;
    double length_um = 0.0;
    double length_sigma_um = 0.0;
    std::size_t max_modes = 0;
    std::string window = "hann";
    std::string out;
};

int run_fp_analyze(const AnalyzeArgs& a) {
    if (a.max_modes < 1) throw UsageError("--max-modes must be at least 1");
    if (!(a.length_um > 0.0)) throw UsageError("--length-um must be positive");
    if (!(a.length_sigma_um >= 0.0)) throw UsageError("--length-sigma-um must be non-negative");
    fringe::AnalysisOptions options;
    if (a.window == "hann") {
        options.window = fringe::Window::kHann;
    } else if (a.window == "rect") {
        options.window = fringe::Window::kRectangular;
    } else {
        throw UsageError("--window must be 'hann' or 'rect'");
    }

    const auto s = io::read_spectrum_csv(a.input);
    io::FringeReport report;
    report.length_um = Measured(a.length_um, a.length_sigma_um);
    const auto to_nm = [&](double x) {
        return s.kind == AxisKind::kWavelengthUm ? um_to_nm(x) : um_to_nm(kTwoPi * kSpeedOfLight / x);
    };
    report.band_lo_nm = std::min(to_nm(s.axis.front()), to_nm(s.axis.back()));
    report.band_hi_nm = std::max(to_nm(s.axis.front()), to_nm(s.axis.back()));
    report.analysis = fringe::extract_group_indices(s, report.length_um, a.max_modes, options);
    for (const auto& w : report.analysis.warnings) std::cerr << "warning: " << w << '\n';
    io::write_json(a.out, io::to_json(report));
    const auto& best = report.analysis.peaks.front();
    std::cout << "strongest mode: n_g = " << format_measured(best.group_index) << '\n';
    return kExitOk;
}

// ---- bandwidth -------------------------------------------------------------

int run_bandwidth(const std::string& params_path, const std::string& out) {
    const auto p = io::param_file_from_json(io::read_json(params_path));
    const auto spec = p.waveguide();
    const auto bw = jsa::phasematching_bandwidth(spec, p.dispersion);
    json j;
    j["kind"] = "phasematching_bandwidth";
    j["sigma_pm_rad_per_ps"] = bw.sigma_pm.value;
    j["intensity_fwhm_rad_per_ps"] = bw.intensity_fwhm.value;
    j["intensity_fwhm_nm"] = bw.fwhm_nm(p.degeneracy);
    j["at_wavelength_nm"] = p.degeneracy.nm();
    j["inputs"] = io::to_json(p);
    io::write_json(out, j);
    std::cout << "phasematching FWHM: " << bw.fwhm_nm(p.degeneracy) << " nm\n";
    return kExitOk;
}

// ---- marginals -------------------------------------------------------------

struct MarginalArgs {
    std::string params;
    std::vector<double> pump_nm;
    std::vector<double> axis_nm;
    double delta_offset = 0.0;
    std::string out_dir;
};

int run_marginals(const MarginalArgs& a) {
    if (a.axis_nm.size() != 3) throw UsageError("--axis-nm must be lo,hi,n");
    const double lo = a.axis_nm[0];
    const double hi = a.axis_nm[1];
    const double n_real = a.axis_nm[2];
    if (!(lo > 0.0) || !(hi > lo) || !(n_real >= 2.0) || n_real != std::floor(n_real)) {
        throw UsageError("--axis-nm needs 0 < lo < hi and an integer n >= 2");
    }
    if (a.pump_nm.empty()) throw UsageError("--pump-nm needs at least one wavelength");

    const auto p = io::param_file_from_json(io::read_json(a.params));
    const auto spec = p.waveguide();
    const double omega0 = spec.omega0_s.value;
    const auto axis_um = uniform_axis(nm_to_um(lo), nm_to_um(hi), static_cast<std::size_t>(n_real));
    fs::create_directories(a.out_dir);

    json roots_json = json::array();
    for (double pnm : a.pump_nm) {
        if (!(pnm > 0.0)) throw UsageError("--pump-nm values must be positive");
        const double delta = jsa::pump_detuning(spec, wavelength_to_angular_frequency(VacuumWavelength::from_nm(pnm)))
                                 .value +
                             a.delta_offset;
        for (const auto beam : {jsa::Beam::kSignal, jsa::Beam::kIdler}) {
            Spectrum s;
            s.kind = AxisKind::kWavelengthUm;
            s.axis = axis_um;
            s.intensity.resize(axis_um.size());
            for (std::size_t k = 0; k < axis_um.size(); ++k) {
                const double nu = kTwoPi * kSpeedOfLight / axis_um[k] - omega0;
                s.intensity[k] = jsa::marginal_intensity(spec, p.dispersion, {delta}, {nu}, beam);
            }
            io::write_spectrum_csv(fs::path(a.out_dir) / (io::beam_name(beam) + "_" + pump_label(pnm) + "nm.csv"), s);
        }
        json entry;
        entry["pump_nm"] = pnm;
        entry["delta_rad_per_ps"] = delta;
        entry["roots"] = json::array();
        for (const auto& r : jsa::marginal_contour_roots(p.dispersion, {delta}, false)) {
            entry["roots"].push_back({{"nu_s_rad_per_ps", r.nu_s},
                                      {"nu_i_rad_per_ps", r.nu_i},
                                      {"signal_nm", kTwoPi * kSpeedOfLight / (omega0 + r.nu_s) * 1e3},
                                      {"idler_nm", kTwoPi * kSpeedOfLight / (omega0 + r.nu_i) * 1e3}});
        }
        roots_json.push_back(entry);
    }
    io::write_json(fs::path(a.out_dir) / "roots.json",
                   {{"kind", "contour_roots"}, {"drop_Kp", false}, {"delta_offset_rad_per_ps", a.delta_offset},
                    {"degeneracy_nm", p.degeneracy.nm()}, {"pumps", roots_json}});
    return kExitOk;
}

// ---- mc-fit ----------------------------------------------------------------

int run_mc_fit(const std::string& obs_path, const std::string& config_path, const std::string& out,
               const std::string& hist_dir) {
    const auto obs = io::observation_set_from_json(io::read_json(obs_path));
    const auto config = io::mc_config_from_json(io::read_json(config_path));
    io::PosteriorFile f;
    f.posterior = mc::run_mc(config, obs);
    f.priors = config.priors;
    f.degeneracy_nm = obs.degeneracy.nm();
    std::set<double> pumps;
    for (const auto& o : obs.observations) pumps.insert(o.pump.nm());
    f.pump_nm.assign(pumps.begin(), pumps.end());
    io::write_json(out, io::to_json(f));
    if (!hist_dir.empty()) io::write_histogram_csvs(hist_dir, f.posterior);
    std::cout << "accepted " << f.posterior.samples.size() << " of " << f.posterior.n_runs
              << " (acceptance rate " << f.posterior.acceptance_rate() << ")\n";
    return kExitOk;
}

// ---- report ----------------------------------------------------------------

json measured(const Measured& m) { return {{"value", m.value}, {"sigma", m.sigma}}; }

json row(const std::string& name, const std::string& unit, const Measured& m) {
    return {{"quantity", name}, {"unit", unit}, {"value", m.value}, {"sigma", m.sigma}};
}

int run_report(const std::string& posterior_path, const std::vector<std::string>& fringe_paths,
               const std::string& params_path, const std::string& out) {
    const auto p = io::param_file_from_json(io::read_json(params_path));
    const auto post = io::posterior_file_from_json(io::read_json(posterior_path));

    // Near-infrared measurements see the pump modes: the strongest peak is the
    // TIR mode, the lowest group index the Bragg mode. In the telecom band the
    // strongest peak is the TIR mode.
    std::optional<fringe::OpticalLengthPeak> tir_nir, bragg_nir, tir_telecom;
    for (const auto& path : fringe_paths) {
        const auto fr = io::fringe_report_from_json(io::read_json(path));
        if (fr.analysis.peaks.empty()) throw io::SchemaError(path + ": no peaks");
        const auto& peaks = fr.analysis.peaks;
        if (fr.band_hi_nm < 1000.0) {
            tir_nir = peaks.front();
            if (peaks.size() < 2) throw io::SchemaError(path + ": near-infrared report needs two modes");
            bragg_nir = *std::min_element(peaks.begin(), peaks.end(), [](const auto& x, const auto& y) {
                return x.group_index.value < y.group_index.value;
            });
        } else {
            tir_telecom = peaks.front();
        }
    }
    if (!tir_nir || !bragg_nir) throw io::SchemaError("report: missing near-infrared fringe analysis");
    if (!tir_telecom) throw io::SchemaError("report: missing telecom fringe analysis");

    const auto kappa_bar = fringe::kappa_bar_from_optical_lengths(*tir_telecom, *bragg_nir, p.length_um);
    // L * kappa from the optical-length difference directly; L cancels.
    const double dpath = tir_telecom->position_um - bragg_nir->position_um;
    const double dpath_sigma = std::hypot(tir_telecom->position_sigma_um, bragg_nir->position_sigma_um);
    const double l_kappa = dpath / (2.0 * kSpeedOfLight);
    const auto bw = jsa::phasematching_bandwidth_from_products(p.gamma, l_kappa, l_kappa);
    const double fwhm_nm = bw.fwhm_nm(p.degeneracy);
    const Measured pm_fwhm_nm(fwhm_nm, fwhm_nm * std::abs(dpath_sigma / dpath));

    const auto& est = post.posterior.estimates;
    const auto kappa_i_abs = Measured(std::abs(kappa_bar.value), kappa_bar.sigma);
    const auto derived = mc::derived_quantities(post.posterior, kappa_i_abs,
                                                VacuumWavelength::from_nm(post.degeneracy_nm), post.pump_nm);

    json table = json::array();
    table.push_back(row("group_index_TIR_nir", "", tir_nir->group_index));
    table.push_back(row("group_index_Bragg_nir", "", bragg_nir->group_index));
    table.push_back(row("group_index_TIR_telecom", "", tir_telecom->group_index));
    table.push_back(row("kappa_bar", "ps/um", kappa_bar));
    table.push_back(row("phasematching_fwhm", "nm", pm_fwhm_nm));
    table.push_back(row("kappa_ratio", "", Measured(est[0].mode, est[0].std)));
    table.push_back(row("Ks_over_abs_kappa_i", "ps", Measured(est[1].mode, est[1].std)));
    table.push_back(row("Ki_over_abs_kappa_i", "ps", Measured(est[2].mode, est[2].std)));

    json j;
    j["kind"] = "dispersion_report";
    j["table"] = table;
    j["delta_offset_rad_per_ps"] = measured(Measured(est[3].mode, est[3].std));
    j["phasematching_sigma_rad_per_ps"] = bw.sigma_pm.value;
    j["phasematching_fwhm_rad_per_ps"] = bw.intensity_fwhm.value;
    j["phasematching_at_nm"] = p.degeneracy.nm();
    j["derived"] = io::to_json(derived);
    j["posterior_samples"] = post.posterior.samples.size();
    io::write_json(out, j);

    for (const auto& r : table) {
        std::cout << r["quantity"].get<std::string>() << ": "
                  << format_measured(Measured(r["value"].get<double>(), r["sigma"].get<double>())) << '\n';
    }
    std::cout << "delta_ng_signal_idler: " << format_measured(derived.delta_ng) << '\n';
    std::cout << "tilt_at_degeneracy_deg: " << format_measured(derived.tilt_at_degeneracy_deg) << '\n';
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral modelling of parametric down-conversion in waveguides", "pdc"};
    app.require_subcommand(1);

    SynthArgs synth;
    auto* c_synth = app.add_subcommand("synth-fringes", "Synthesize a Fabry-Perot fringe spectrum");
    c_synth->add_option("--ng", synth.ng, "group indices")->delimiter(',')->required();
    c_synth->add_option("--weights", synth.weights, "relative mode weights (default all 1)")->delimiter(',');
    c_synth->add_option("--length-um", synth.length_um, "waveguide length")->required();
    c_synth->add_option("--band-nm", synth.band_nm, "wavelength band lo,hi")->delimiter(',')->required();
    c_synth->add_option("--points", synth.points, "number of samples")->required();
    c_synth->add_option("--noise", synth.noise, "Gaussian noise sigma")->default_val(0.0);
    c_synth->add_option("--seed", synth.seed, "noise seed")->default_val(0);
    c_synth->add_option("--reflectivity", synth.reflectivity, "facet power reflectivity")
        ->default_val(fringe::kDefaultFacetReflectivity);
    c_synth->add_option("--out", synth.out, "output CSV")->required();

    AnalyzeArgs analyze;
    auto* c_fp = app.add_subcommand("fp-analyze", "Extract group indices from fringes");
    c_fp->add_option("--input", analyze.input, "spectrum CSV")->required();
    c_fp->add_option("--length-um", analyze.length_um, "waveguide length")->required();
    c_fp->add_option("--length-sigma-um", analyze.length_sigma_um, "length uncertainty")->default_val(0.0);
    c_fp->add_option("--max-modes", analyze.max_modes, "maximum number of modes")->required();
    c_fp->add_option("--window", analyze.window, "hann or rect")->default_val("hann");
    c_fp->add_option("--out", analyze.out, "output JSON")->required();

    std::string bw_params, bw_out;
    auto* c_bw = app.add_subcommand("bandwidth", "Phasematching bandwidth from a parameter file");
    c_bw->add_option("--params", bw_params, "parameter JSON")->required();
    c_bw->add_option("--out", bw_out, "output JSON")->required();

    MarginalArgs marg;
    auto* c_marg = app.add_subcommand("marginals", "CW marginal spectra and contour roots");
    c_marg->add_option("--params", marg.params, "parameter JSON")->required();
    c_marg->add_option("--pump-nm", marg.pump_nm, "pump wavelengths")->delimiter(',')->required();
    c_marg->add_option("--axis-nm", marg.axis_nm, "wavelength axis lo,hi,n")->delimiter(',')->required();
    c_marg->add_option("--delta-offset", marg.delta_offset, "pump detuning offset, rad/ps")->default_val(0.0);
    c_marg->add_option("--out-dir", marg.out_dir, "output directory")->required();

    std::string mc_obs, mc_config, mc_out, mc_hist;
    auto* c_mc = app.add_subcommand("mc-fit", "Monte Carlo inference of dispersion parameters");
    c_mc->add_option("--obs", mc_obs, "observation set JSON")->required();
    c_mc->add_option("--config", mc_config, "Monte Carlo config JSON")->required();
    c_mc->add_option("--out", mc_out, "posterior JSON")->required();
    c_mc->add_option("--hist-csv", mc_hist, "directory for histogram CSVs");

    std::string rep_post, rep_params, rep_out;
    std::vector<std::string> rep_fringe;
    auto* c_rep = app.add_subcommand("report", "Combine fringe and Monte Carlo results");
    c_rep->add_option("--posterior", rep_post, "posterior JSON")->required();
    c_rep->add_option("--fringe", rep_fringe, "fringe analysis JSON (repeatable)")->required();
    c_rep->add_option("--params", rep_params, "parameter JSON")->required();
    c_rep->add_option("--out", rep_out, "output JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*c_synth) return run_synth_fringes(synth);
        if (*c_fp) return run_fp_analyze(analyze);
        if (*c_bw) return run_bandwidth(bw_params, bw_out);
        if (*c_marg) return run_marginals(marg);
        if (*c_mc) return run_mc_fit(mc_obs, mc_config, mc_out, mc_hist);
        if (*c_rep) return run_report(rep_post, rep_fringe, rep_params, rep_out);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const fringe::NoFringeError& e) {
        std::cerr << "no fringes: " << e.what() << '\n';
        return kExitNoFringe;
    } catch (const mc::EmptyPosteriorError& e) {
        std::cerr << "empty posterior: " << e.what() << '\n';
        return kExitEmptyPosterior;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    }
    return kExitUsage;
}

} // namespace pdc::cli
