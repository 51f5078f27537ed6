#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "pdc/io.hpp"

using namespace pdc;
using namespace pdc::io;

namespace {

std::string fixture(const std::string& name) { return std::string(PDC_FIXTURES_DIR) + "/" + name; }

std::string message_of(const std::string& csv) {
    std::istringstream in(csv);
    try {
        parse_spectrum_csv(in, "t.csv");
    } catch (const FormatError& e) {
        return e.what();
    }
    return {};
}

} // namespace

TEST(Csv, ParsesWavelengthWithComments) {
    std::istringstream in("# recorded 2016\nwavelength_nm,intensity\n1523.0,0.5\n# mid comment\n1523.5, -0.25\n");
    const auto s = parse_spectrum_csv(in);
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s.kind, AxisKind::kWavelengthUm);
    EXPECT_DOUBLE_EQ(s.axis[0], 1.523);
    EXPECT_DOUBLE_EQ(s.intensity[1], -0.25);
}

TEST(Csv, ParsesAngularFrequency) {
    std::istringstream in("angular_frequency_rad_per_ps,intensity\n1200,1\n1201,2\n");
    const auto s = parse_spectrum_csv(in);
    EXPECT_EQ(s.kind, AxisKind::kAngularFrequency);
    EXPECT_DOUBLE_EQ(s.axis[1], 1201.0);
}

TEST(Csv, ErrorsCarryLineNumbers) {
    EXPECT_NE(message_of("wavelength_nm,intensity\n1,2\n2,nan\n").find("t.csv:3"), std::string::npos);
    EXPECT_NE(message_of("wavelength_nm,intensity\n1,2\n2,inf\n").find("t.csv:3"), std::string::npos);
    EXPECT_NE(message_of("wavelength_nm,intensity\n1,2\n2,abc\n").find("t.csv:3"), std::string::npos);
    EXPECT_NE(message_of("wavelength_nm,intensity\n2,2\n1,2\n").find("t.csv:3"), std::string::npos);
    EXPECT_NE(message_of("wavelength_nm,intensity\n1,2,3\n").find("t.csv:2"), std::string::npos);
    EXPECT_NE(message_of("freq,intensity\n1,2\n").find("t.csv:1"), std::string::npos);
    EXPECT_FALSE(message_of("wavelength_nm,intensity\n").empty());
    EXPECT_FALSE(message_of("").empty());
    EXPECT_FALSE(message_of("1,2\n").empty());
}

TEST(Csv, WriteReadRoundTripIsExact) {
    Spectrum s;
    s.kind = AxisKind::kWavelengthUm;
    s.axis = {1.5230000000000001, 1.5231234567890123, 1.6};
    s.intensity = {0.1, 1.0 / 3.0, -2e-17};
    std::ostringstream out;
    write_spectrum_csv(out, s);
    std::istringstream in(out.str());
    const auto back = parse_spectrum_csv(in);
    for (std::size_t k = 0; k < s.size(); ++k) {
        EXPECT_DOUBLE_EQ(back.axis[k], s.axis[k]);  // nm scaling costs at most one ulp
        EXPECT_EQ(back.intensity[k], s.intensity[k]);
    }
    std::ostringstream again;
    write_spectrum_csv(again, back);
    std::istringstream in2(again.str());
    const auto third = parse_spectrum_csv(in2);
    std::ostringstream final_out;
    write_spectrum_csv(final_out, third);
    EXPECT_EQ(again.str(), final_out.str());
}

TEST(Csv, SeventeenDigits) {
    EXPECT_EQ(format_double(0.1), "0.10000000000000001");
    EXPECT_EQ(format_double(1.0), "1");
}

TEST(Params, AbsoluteKeys) {
    const auto p = param_file_from_json(read_json(fixture("params_fp.json")));
    EXPECT_DOUBLE_EQ(p.length_um.value, 996.0);
    EXPECT_DOUBLE_EQ(p.length_um.sigma, 4.0);
    EXPECT_DOUBLE_EQ(p.dispersion.kappa_s, -1.37e-3);
    EXPECT_DOUBLE_EQ(p.degeneracy.nm(), 1550.2);
    ASSERT_TRUE(p.pump.has_value());
    EXPECT_TRUE(p.pump->cw);
}

TEST(Params, NormalizedKeys) {
    const auto p = param_file_from_json(read_json(fixture("params_marginal.json")));
    EXPECT_NEAR(p.dispersion.kappa_s, 0.983 * -1.37e-3, 1e-18);
    EXPECT_NEAR(p.dispersion.K_s, 0.8e-3 * 1.37e-3, 1e-18);
    ASSERT_EQ(p.masks.size(), 1u);
    EXPECT_TRUE(std::isinf(p.masks[0].hi_um));
}

TEST(Params, MissingFieldIsSchemaError) {
    auto j = read_json(fixture("params_fp.json"));
    j["dispersion"].erase("kappa_i_ps_per_um");
    EXPECT_THROW(param_file_from_json(j), SchemaError);
    auto k = read_json(fixture("params_fp.json"));
    k.erase("waveguide");
    EXPECT_THROW(param_file_from_json(k), SchemaError);
}

TEST(Params, RoundTrip) {
    const auto p = param_file_from_json(read_json(fixture("params_marginal.json")));
    const auto q = param_file_from_json(to_json(p));
    EXPECT_EQ(to_json(p), to_json(q));
}

TEST(Observations, FixtureRoundTrip) {
    const auto set = observation_set_from_json(read_json(fixture("reconstructed_observations.json")));
    EXPECT_EQ(set.observations.size(), 12u);
    ASSERT_EQ(set.excluded.size(), 1u);
    EXPECT_EQ(set.excluded[0].beam, jsa::Beam::kSignal);
    const auto again = observation_set_from_json(to_json(set));
    EXPECT_EQ(to_json(set), to_json(again));
}

TEST(Observations, PeaksInNanometres) {
    const json j = {{"degeneracy_nm", 1535.2},
                    {"observations",
                     {{{"pump_nm", 767.1},
                       {"beam", "idler"},
                       {"band_nm", {1400.0, 1700.0}},
                       {"peaks", {{{"center_nm", 1580.5}, {"fwhm_nm", 8.0}}}}},
                      {{"pump_nm", 766.7}, {"beam", "signal"}, {"peaks", json::array()}}}}};
    const auto set = observation_set_from_json(j);
    const auto& p = set.observations[0].peaks.at(0);
    const double w0 = wavelength_to_angular_frequency(VacuumWavelength::from_nm(1535.2)).value;
    EXPECT_NEAR(p.center_detuning, wavelength_to_angular_frequency({1.5805}).value - w0, 1e-9);
    EXPECT_NEAR(p.fwhm_detuning,
                wavelength_to_angular_frequency({1.5765}).value - wavelength_to_angular_frequency({1.5845}).value,
                1e-9);
    EXPECT_THROW(observation_set_from_json({{"observations", json::array()}}), SchemaError);
}

TEST(McConfigJson, DefaultsAndRoundTrip) {
    const auto c = mc_config_from_json(read_json(fixture("mc_config.json")));
    EXPECT_EQ(c.n_runs, 1000000u);
    EXPECT_EQ(c.seed, 1u);
    EXPECT_TRUE(c.drop_Kp);
    EXPECT_EQ(c.histogram_bins, 50u);
    EXPECT_EQ(to_json(mc_config_from_json(to_json(c))), to_json(c));
    EXPECT_THROW(mc_config_from_json({{"n_runs", 0}}), SchemaError);
    EXPECT_THROW(mc_config_from_json({{"priors", {{"kappa_ratio", {1.0, 0.9}}}}}), SchemaError);
}

TEST(PosteriorJson, RoundTrip) {
    PosteriorFile f;
    f.degeneracy_nm = 1535.2;
    f.pump_nm = {766.7, 767.1};
    f.posterior.n_runs = 10;
    f.posterior.seed = 3;
    mc::McSample s;
    s.kappa_ratio = 0.98;
    s.Ks_norm = 1e-3;
    s.Ki_norm = 2e-3;
    s.delta_offset = 0.1;
    s.index = 4;
    s.accepted = true;
    f.posterior.samples = {s};
    mc::summarize(f.posterior, f.priors, 50);
    const auto j = to_json(f);
    const auto back = posterior_file_from_json(j);
    EXPECT_EQ(to_json(back), j);
    EXPECT_EQ(back.posterior.samples.at(0).index, 4u);
}

TEST(FringeJson, RoundTrip) {
    FringeReport r;
    r.length_um = Measured(996.0, 4.0);
    r.band_lo_nm = 1523.0;
    r.band_hi_nm = 1594.0;
    r.analysis.resolution_um = 34.2;
    fringe::OpticalLengthPeak p;
    p.position_um = 6593.5;
    p.snr = std::numeric_limits<double>::infinity();
    p.group_index = Measured(3.31, 0.01);
    r.analysis.peaks = {p};
    const auto j = to_json(r);
    EXPECT_TRUE(j["peaks"][0]["snr"].is_null());
    EXPECT_EQ(to_json(fringe_report_from_json(j)), j);
}
