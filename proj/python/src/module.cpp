#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <string>
#include <vector>

#include "pdc/fringe.hpp"
#include "pdc/io.hpp"
#include "pdc/jsa.hpp"
#include "pdc/mc.hpp"

namespace py = pybind11;
using namespace pdc;

namespace {

jsa::Beam beam_arg(const std::string& name) { return io::beam_from_name(name); }

py::dict fringe_peak_dict(const fringe::OpticalLengthPeak& p) {
    py::dict d;
    d["group_index"] = p.group_index.value;
    d["group_index_sigma"] = p.group_index.sigma;
    d["optical_path_um"] = p.position_um;
    d["optical_path_sigma_um"] = p.position_sigma_um;
    d["height"] = p.height;
    d["snr"] = p.snr;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Photon-pair spectral modelling and dispersion inference";
    m.attr("SPEED_OF_LIGHT_UM_PER_PS") = kSpeedOfLight;

    py::register_exception<fringe::NoFringeError>(m, "NoFringeError", PyExc_RuntimeError);
    py::register_exception<mc::EmptyPosteriorError>(m, "EmptyPosteriorError", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

    m.def("wavelength_to_angular_frequency",
          [](double lambda_um) { return wavelength_to_angular_frequency(VacuumWavelength{lambda_um}).value; },
          py::arg("lambda_um"));
    m.def("gamma_from_sinc_matching", &jsa::gamma_from_sinc_matching);

    m.def("phasematching_bandwidth",
          [](double length_um, double gamma, double kappa_s, double kappa_i, double degeneracy_nm) {
              const auto spec = jsa::WaveguideSpec::degenerate(length_um, gamma, VacuumWavelength::from_nm(degeneracy_nm));
              const auto bw = jsa::phasematching_bandwidth(spec, {kappa_s, kappa_i, 0.0, 0.0, 0.0});
              py::dict d;
              d["sigma_pm_rad_per_ps"] = bw.sigma_pm.value;
              d["intensity_fwhm_rad_per_ps"] = bw.intensity_fwhm.value;
              d["intensity_fwhm_nm"] = bw.fwhm_nm(VacuumWavelength::from_nm(degeneracy_nm));
              return d;
          },
          py::arg("length_um"), py::arg("gamma"), py::arg("kappa_s"), py::arg("kappa_i"), py::arg("degeneracy_nm"));

    m.def("contour_roots",
          [](double kappa_s, double kappa_i, double K_s, double K_i, double K_p, double delta, bool drop_Kp) {
              std::vector<std::pair<double, double>> out;
              for (const auto& r : jsa::marginal_contour_roots({kappa_s, kappa_i, K_s, K_i, K_p}, {delta}, drop_Kp)) {
                  out.emplace_back(r.nu_s, r.nu_i);
              }
              return out;
          },
          py::arg("kappa_s"), py::arg("kappa_i"), py::arg("K_s") = 0.0, py::arg("K_i") = 0.0, py::arg("K_p") = 0.0,
          py::arg("delta"), py::arg("drop_Kp") = false);

    m.def("marginal_spectrum",
          [](const std::string& params_path, double pump_nm, const std::vector<double>& detuning, const std::string& beam,
             double delta_offset) {
              const auto p = io::param_file_from_json(io::read_json(params_path));
              const auto spec = p.waveguide();
              const double delta =
                  jsa::pump_detuning(spec, wavelength_to_angular_frequency(VacuumWavelength::from_nm(pump_nm))).value +
                  delta_offset;
              std::vector<double> out(detuning.size());
              for (std::size_t k = 0; k < detuning.size(); ++k) {
                  out[k] = jsa::marginal_intensity(spec, p.dispersion, {delta}, {detuning[k]}, beam_arg(beam));
              }
              return out;
          },
          py::arg("params_path"), py::arg("pump_nm"), py::arg("detuning"), py::arg("beam") = "signal",
          py::arg("delta_offset") = 0.0);

    m.def("synthesize_fringes",
          [](const std::vector<double>& ng, const std::vector<double>& weights, double length_um,
             const std::vector<double>& wavelength_um, double noise, std::uint64_t seed) {
              if (!weights.empty() && weights.size() != ng.size()) {
                  throw py::value_error("weights must match ng");
              }
              std::vector<fringe::CavityMode> modes;
              for (std::size_t k = 0; k < ng.size(); ++k) {
                  modes.push_back({Measured(ng[k]), weights.empty() ? 1.0 : weights[k]});
              }
              return fringe::synthesize_fringes(modes, length_um, wavelength_um, noise, seed).intensity;
          },
          py::arg("ng"), py::arg("weights") = std::vector<double>{}, py::arg("length_um"), py::arg("wavelength_um"),
          py::arg("noise") = 0.0, py::arg("seed") = 0);

    m.def("extract_group_indices",
          [](const std::vector<double>& wavelength_um, const std::vector<double>& intensity, double length_um,
             double length_sigma_um, std::size_t max_modes) {
              Spectrum s;
              s.kind = AxisKind::kWavelengthUm;
              s.axis = wavelength_um;
              s.intensity = intensity;
              const auto a = fringe::extract_group_indices(s, Measured(length_um, length_sigma_um), max_modes);
              py::list out;
              for (const auto& p : a.peaks) out.append(fringe_peak_dict(p));
              return out;
          },
          py::arg("wavelength_um"), py::arg("intensity"), py::arg("length_um"), py::arg("length_sigma_um") = 0.0,
          py::arg("max_modes") = 2);

    // JSON in, JSON out, in the same formats as the command-line tool.
    m.def("run_mc",
          [](const std::string& observations_json, const std::string& config_json) {
              const auto obs = io::observation_set_from_json(nlohmann::json::parse(observations_json));
              const auto config = io::mc_config_from_json(nlohmann::json::parse(config_json));
              io::PosteriorFile f;
              {
                  py::gil_scoped_release release;
                  f.posterior = mc::run_mc(config, obs);
              }
              f.priors = config.priors;
              f.degeneracy_nm = obs.degeneracy.nm();
              for (const auto& o : obs.observations) f.pump_nm.push_back(o.pump.nm());
              std::sort(f.pump_nm.begin(), f.pump_nm.end());
              f.pump_nm.erase(std::unique(f.pump_nm.begin(), f.pump_nm.end()), f.pump_nm.end());
              return io::to_json(f).dump();
          },
          py::arg("observations_json"), py::arg("config_json"));
}
