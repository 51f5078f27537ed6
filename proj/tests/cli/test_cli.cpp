#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "pdc/io.hpp"
#include "pdc/jsa.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kBinary = PDC_BINARY;
const fs::path kFixtures = PDC_FIXTURES_DIR;

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        std::random_device rd;
        dir_ = fs::temp_directory_path() / ("pdc_cli_" + std::to_string(rd()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    // Runs the binary with `args`; stderr goes to dir_/stderr.txt.
    int run(const std::string& args, const std::string& env = "") {
        const std::string cmd = env + " \"" + kBinary + "\" " + args + " >\"" + (dir_ / "stdout.txt").string() +
                                "\" 2>\"" + (dir_ / "stderr.txt").string() + "\"";
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    std::string err() const { return slurp(dir_ / "stderr.txt"); }
    fs::path path(const std::string& name) const { return dir_ / name; }
    static std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

    static std::string slurp(const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    }

    fs::path dir_;
};

} // namespace

TEST_F(CliTest, NoSubcommandIsUsageError) { EXPECT_EQ(run(""), 64); }

TEST_F(CliTest, HelpExitsZero) { EXPECT_EQ(run("--help"), 0); }

TEST_F(CliTest, BandwidthGolden) {
    ASSERT_EQ(run("bandwidth --params " + q(kFixtures / "params_fp.json") + " --out " + q(path("bw.json"))), 0);
    const auto j = pdc::io::read_json(path("bw.json"));
    EXPECT_NEAR(j.at("intensity_fwhm_rad_per_ps").get<double>(), 2.88427260561, 1e-9);
    EXPECT_NEAR(j.at("intensity_fwhm_nm").get<double>(), 3.67968971526, 1e-9);
    EXPECT_NEAR(j.at("sigma_pm_rad_per_ps").get<double>(), 2.44967560191, 1e-9);
}

TEST_F(CliTest, SynthAnalyzeTelecom) {
    ASSERT_EQ(run("synth-fringes --ng 3.31 --length-um 996 --band-nm 1523 1594 --points 6000 --noise 0.007 --seed 4 "
                  "--out " + q(path("f.csv"))),
              0);
    ASSERT_EQ(run("fp-analyze --input " + q(path("f.csv")) + " --length-um 996 --max-modes 1 --out " +
                  q(path("r.json"))),
              0);
    const auto r = pdc::io::fringe_report_from_json(pdc::io::read_json(path("r.json")));
    ASSERT_EQ(r.analysis.peaks.size(), 1u);
    EXPECT_NEAR(r.analysis.peaks[0].group_index.value, 3.31, 3.31 * 5e-3);
    EXPECT_NEAR(r.band_lo_nm, 1523.0, 1e-9);
    EXPECT_NEAR(r.band_hi_nm, 1594.0, 1e-9);
}

TEST_F(CliTest, NoiseFreeSynthIgnoresSeed) {
    const std::string base = "synth-fringes --ng 3.31 --length-um 996 --band-nm 1523 1594 --points 500 --out ";
    ASSERT_EQ(run(base + q(path("a.csv")) + " --seed 1"), 0);
    ASSERT_EQ(run(base + q(path("b.csv")) + " --seed 2"), 0);
    EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
}

TEST_F(CliTest, MalformedCsvReportsLine) {
    std::ofstream(path("bad.csv")) << "wavelength_nm,intensity\n1500,0.1\n1501,abc\n";
    EXPECT_EQ(run("fp-analyze --input " + q(path("bad.csv")) + " --length-um 996 --max-modes 1 --out " +
                  q(path("r.json"))),
              1);
    EXPECT_NE(err().find(":3"), std::string::npos) << err();
}

TEST_F(CliTest, MissingInputIsInputError) {
    EXPECT_EQ(run("fp-analyze --input " + q(path("none.csv")) + " --length-um 996 --max-modes 1 --out " +
                  q(path("r.json"))),
              1);
}

TEST_F(CliTest, NoiseOnlyIsNoFringe) {
    EXPECT_EQ(run("fp-analyze --input " + q(kFixtures / "noise_only.csv") + " --length-um 996 --max-modes 2 --out " +
                  q(path("r.json"))),
              2);
    EXPECT_FALSE(fs::exists(path("r.json")));
}

TEST_F(CliTest, UsageErrors) {
    EXPECT_EQ(run("fp-analyze --input " + q(kFixtures / "telecom_fringes.csv") +
                  " --length-um 996 --max-modes 0 --out " + q(path("r.json"))),
              64);
    EXPECT_EQ(run("synth-fringes --ng 3.31 4.2 --weights 1 --length-um 996 --band-nm 1523 1594 --points 100 --out " +
                  q(path("f.csv"))),
              64);
    EXPECT_EQ(run("fp-analyze --input " + q(kFixtures / "telecom_fringes.csv") + " --length-um 996 --out " +
                  q(path("r.json"))),
              64);
    EXPECT_EQ(run("bandwidth --bogus"), 64);
}

TEST_F(CliTest, EmptyPosterior) {
    auto config = pdc::io::read_json(kFixtures / "mc_config.json");
    config["n_runs"] = 2000;
    config["priors"]["kappa_ratio"] = {0.90, 0.901};
    config["priors"]["delta_offset_rad_per_ps"] = {0.9, 1.0};
    pdc::io::write_json(path("cfg.json"), config);
    EXPECT_EQ(run("mc-fit --obs " + q(kFixtures / "closed_loop_observations.json") + " --config " +
                  q(path("cfg.json")) + " --out " + q(path("post.json"))),
              3);
    EXPECT_NE(err().find("widen"), std::string::npos) << err();
}

TEST_F(CliTest, MarginalsWritesSpectraAndRoots) {
    const auto params = kFixtures / "params_marginal.json";
    ASSERT_EQ(run("marginals --params " + q(params) + " --pump-nm 767.5 766.7 --axis-nm 1400 1700 601 --out-dir " +
                  q(path("m"))),
              0);
    for (const char* f : {"signal_767.5nm.csv", "idler_767.5nm.csv", "signal_766.7nm.csv", "idler_766.7nm.csv"}) {
        EXPECT_TRUE(fs::exists(path("m") / f)) << f;
    }
    const auto s = pdc::io::read_spectrum_csv(path("m") / "signal_767.5nm.csv");
    EXPECT_EQ(s.size(), 601u);

    const auto p = pdc::io::param_file_from_json(pdc::io::read_json(params));
    const auto roots = pdc::io::read_json(path("m") / "roots.json");
    const auto spec = p.waveguide();
    const auto& sets = roots.at("pumps");
    ASSERT_EQ(sets.size(), 2u);
    for (const auto& set : sets) {
        const double pump_nm = set.at("pump_nm").get<double>();
        const double delta =
            pdc::jsa::pump_detuning(spec, pdc::wavelength_to_angular_frequency(pdc::VacuumWavelength::from_nm(pump_nm)))
                .value;
        const auto expect = pdc::jsa::marginal_contour_roots(p.dispersion, {delta}, false);
        ASSERT_EQ(set.at("roots").size(), expect.size());
        for (std::size_t k = 0; k < expect.size(); ++k) {
            EXPECT_NEAR(set.at("roots")[k].at("nu_s_rad_per_ps").get<double>(), expect[k].nu_s, 1e-9);
            EXPECT_NEAR(set.at("roots")[k].at("nu_i_rad_per_ps").get<double>(), expect[k].nu_i, 1e-9);
        }
    }
}

TEST_F(CliTest, OutputsAreByteIdenticalAcrossRuns) {
    const std::string fp = "fp-analyze --input " + q(kFixtures / "nir_fringes.csv") + " --length-um 996 --max-modes 2 --out ";
    ASSERT_EQ(run(fp + q(path("a.json"))), 0);
    ASSERT_EQ(run(fp + q(path("b.json"))), 0);
    EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));

    auto config = pdc::io::read_json(kFixtures / "mc_config.json");
    config["n_runs"] = 200000;
    pdc::io::write_json(path("cfg.json"), config);
    const std::string mc = "mc-fit --obs " + q(kFixtures / "closed_loop_observations.json") + " --config " +
                           q(path("cfg.json")) + " --out ";
    ASSERT_EQ(run(mc + q(path("p1.json")), "PDC_THREADS=1"), 0);
    ASSERT_EQ(run(mc + q(path("p4.json")), "PDC_THREADS=4"), 0);
    EXPECT_EQ(slurp(path("p1.json")), slurp(path("p4.json")));
}
