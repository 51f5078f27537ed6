// Regenerates the files under fixtures/ that are derived from known truth.
// Usage: pdc_make_fixtures <fixtures-dir>

#include <filesystem>
#include <iostream>
#include <limits>

#include "pdc/fringe.hpp"
#include "pdc/io.hpp"
#include "pdc/mc.hpp"

namespace fs = std::filesystem;
using namespace pdc;

namespace {

std::vector<double> wavelength_axis(double lo_nm, double hi_nm, std::size_t n) {
    std::vector<double> axis(n);
    for (std::size_t k = 0; k < n; ++k) {
        axis[k] = nm_to_um(lo_nm + (hi_nm - lo_nm) * static_cast<double>(k) / static_cast<double>(n - 1));
    }
    return axis;
}

// Sum of Airy transmissions swings between (1-R)^2/(1+R)^2 and 1 per unit
// weight; noise is set for a peak-to-peak SNR of 100 on the strongest mode.
double snr100_noise(double reflectivity) {
    const double lo = (1.0 - reflectivity) * (1.0 - reflectivity) / ((1.0 + reflectivity) * (1.0 + reflectivity));
    return (1.0 - lo) / 100.0;
}

void write_observations(const fs::path& path, const mc::McSample& truth, const std::vector<double>& pumps,
                        const std::string& note) {
    mc::SynthesisSetup setup;
    setup.pump_nm = pumps;
    setup.mask = {{1.65, std::numeric_limits<double>::infinity()}};
    setup.excluded = {{jsa::Beam::kSignal, mc::Branch::kLower}};
    auto j = io::to_json(mc::synthesize_observations(truth, setup));
    j["provenance"] = note;
    j["truth"] = {{"kappa_ratio", truth.kappa_ratio},
                  {"Ks_norm_ps", truth.Ks_norm},
                  {"Ki_norm_ps", truth.Ki_norm},
                  {"delta_offset_rad_per_ps", truth.delta_offset}};
    io::write_json(path, j);
}

} // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: pdc_make_fixtures <fixtures-dir>\n";
        return 64;
    }
    const fs::path dir(argv[1]);
    fs::create_directories(dir);
    const double R = fringe::kDefaultFacetReflectivity;

    const std::vector<fringe::CavityMode> telecom{{Measured(3.31), 1.0, R}};
    io::write_spectrum_csv(dir / "telecom_fringes.csv",
                           fringe::synthesize_fringes(telecom, 996.0, wavelength_axis(1523.0, 1594.0, 6000),
                                                      snr100_noise(R), 1));

    const std::vector<fringe::CavityMode> nir{{Measured(4.42), 1.0, R}, {Measured(3.72), 0.15, R}};
    io::write_spectrum_csv(dir / "nir_fringes.csv",
                           fringe::synthesize_fringes(nir, 996.0, wavelength_axis(765.0, 785.0, 6000),
                                                      snr100_noise(R), 2));

    // Flat transmission with noise only: zero-weight mode.
    const std::vector<fringe::CavityMode> none{{Measured(3.31), 0.0, R}};
    io::write_spectrum_csv(dir / "noise_only.csv",
                           fringe::synthesize_fringes(none, 996.0, wavelength_axis(1523.0, 1594.0, 6000), 0.01, 3));

    mc::McSample truth;
    truth.kappa_ratio = 0.983;
    truth.Ks_norm = 0.8e-3;
    truth.Ki_norm = 0.7e-3;

    truth.delta_offset = 2.14;
    write_observations(dir / "reconstructed_observations.json", truth, {768.3, 768.0, 767.8, 767.5, 767.1, 766.7},
                       "Reconstruction at the six measured pump wavelengths: marginals simulated from the "
                       "reference dispersion parameters, fitted with Gaussians like measured data. The pump "
                       "offset places 768.3 nm at the onset of the two-branch regime.");

    truth.delta_offset = 0.0;
    write_observations(dir / "closed_loop_observations.json", truth, {767.63, 767.33, 767.13, 766.83, 766.43, 766.03},
                       "Synthetic closed-loop set, no pump offset, same detunings as the reconstruction.");
    return 0;
}
