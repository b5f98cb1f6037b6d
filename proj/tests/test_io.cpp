#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "fmosim/io.hpp"
#include "oracles.hpp"

using namespace fmosim;

namespace {

RunConfig sample_config() {
  RunConfig c;
  c.description = "three-site test chain";
  c.fmo = FmoParameters::chain(3, 0.5, 0.1);
  c.fmo.nu(0, 2) = c.fmo.nu(2, 0) = 0.025;
  c.noise = NoiseParameters::uniform(3, 0.01, 0.02);
  c.evolution.t_max = 1.5;
  c.evolution.dt = 0.1;
  c.evolution.method = "both";
  c.evolution.initial_state = "site:2";
  c.output.csv = "out.csv";
  return c;
}

}  // namespace

TEST(ScheduleJson, FlatSingleZRoundTrip) {
  const NmrParameters nmr = NmrParameters::uniform(7, 1.0, 1.0);
  const CompiledSchedule c = compile_single_z(3, 0.7, nmr);
  const json j = schedule_to_json(c);
  EXPECT_FALSE(j.contains("segments"));
  for (const char* key : {"schema_version", "n_qubits", "target", "tau", "coefficient", "interval_duration", "intervals",
                          "pulse_layers"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["target"], "z:3");
  EXPECT_EQ(schedule_from_json(j), c);
  EXPECT_EQ(schedule_from_json(json::parse(j.dump())), c);
}

TEST(ScheduleJson, ZzAndXyRoundTrip) {
  const NmrParameters nmr = NmrParameters::uniform(7, 0.8, 1.3);
  for (const CompiledSchedule& c : {compile_zz(2, 3, 0.4, nmr), compile_xy(4, 5, 0.4, nmr)}) {
    const json j = schedule_to_json(c);
    EXPECT_EQ(schedule_from_json(json::parse(j.dump())), c) << c.target.label();
  }
  EXPECT_TRUE(schedule_to_json(compile_xy(4, 5, 0.4, nmr)).contains("segments"));
}

TEST(ScheduleJson, RejectsMalformed) {
  const json good = schedule_to_json(compile_single_z(1, 1.0, NmrParameters::uniform(7, 1.0, 1.0)));
  json j = good;
  j["extra"] = 1;
  EXPECT_THROW(schedule_from_json(j), std::invalid_argument);
  j = good;
  j["schema_version"] = 2;
  EXPECT_THROW(schedule_from_json(j), std::invalid_argument);
  j = good;
  j.erase("tau");
  EXPECT_THROW(schedule_from_json(j), std::invalid_argument);
  j = good;
  j["pulse_layers"].erase(0);
  EXPECT_THROW(schedule_from_json(j), std::invalid_argument);
  j = good;
  j["target"] = "zz:1,9";
  EXPECT_THROW(schedule_from_json(j), std::exception);
  j = good;
  j["interval_duration"] = -1.0;
  EXPECT_THROW(schedule_from_json(j), std::invalid_argument);
}

TEST(ChannelReport, DissipationFields) {
  const json j = channel_report(dissipation_kraus(1.0, 0.1));
  EXPECT_EQ(j["provenance"], "dissipation");
  EXPECT_EQ(j["cptp_status"], "verified");
  EXPECT_EQ(j["kraus"].size(), 2u);
  EXPECT_NEAR(j["kraus"][0][1][1][0].get<double>(), std::exp(-0.4), 1e-15);
  const auto diag = j["bloch_diag"].get<std::vector<double>>();
  EXPECT_NEAR(diag[0], std::exp(-0.4), 1e-14);
  EXPECT_NEAR(diag[2], std::exp(-0.8), 1e-14);
  EXPECT_NEAR(j["bloch_shift"][2].get<double>(), 1.0 - std::exp(-0.8), 1e-14);
  EXPECT_TRUE(j["circuit"].is_string());
}

TEST(ChannelReport, LiteralDephasingFlagged) {
  const json j = channel_report(dephasing_kraus_paper(1.0, 0.0));
  EXPECT_EQ(j["cptp_status"], "violated");
  EXPECT_NEAR(j["deficit_norm"].get<double>(), 0.75, 1e-15);
  EXPECT_FALSE(j.contains("bloch_diag"));
  EXPECT_TRUE(j["circuit"].is_null());
}

TEST(ConfigJson, RoundTrip) {
  RunConfig c = sample_config();
  EXPECT_EQ(config_from_json(config_to_json(c)), c);
  c.nmr = NmrParameters::uniform(3, 1.0, 0.2);
  c.evolution.lowering = StepLowering::compiled_pulses;
  c.fmo.nu(0, 2) = c.fmo.nu(2, 0) = 0.0;
  const RunConfig back = config_from_json(json::parse(config_to_json(c).dump()));
  EXPECT_EQ(back, c);
  EXPECT_EQ(back.nmr_or_default().J, (std::vector<double>{0.2, 0.2}));
}

TEST(ConfigJson, DefaultsAndDerivedNmr) {
  json j = config_to_json(sample_config());
  j.erase("evolution");
  j.erase("output");
  const RunConfig c = config_from_json(j);
  EXPECT_EQ(c.evolution, EvolutionSettings{});
  EXPECT_EQ(c.nmr_or_default().omega, (std::vector<double>{1.0, 1.0, 1.0}));
}

TEST(ConfigJson, RejectsUnknownKeysAndBadValues) {
  const json good = config_to_json(sample_config());
  json j = good;
  j["noise"]["kappa"] = 1.0;
  EXPECT_THROW(config_from_json(j), std::invalid_argument);
  j = good;
  j["mystery"] = true;
  EXPECT_THROW(config_from_json(j), std::invalid_argument);
  j = good;
  j["noise"]["Gamma"][1] = -0.5;
  EXPECT_THROW(config_from_json(j), std::invalid_argument);
  j = good;
  j["fmo"]["nu"][0][1] = 0.3;
  EXPECT_THROW(config_from_json(j), std::invalid_argument);
  j = good;
  j["evolution"]["dt"] = 0.0;
  EXPECT_THROW(config_from_json(j), std::invalid_argument);
  j = good;
  j["evolution"]["method"] = "rk45";
  EXPECT_THROW(config_from_json(j), std::invalid_argument);
  j = good;
  j["evolution"]["dt"] = "fast";
  EXPECT_THROW(config_from_json(j), std::invalid_argument);
  j = good;
  j["nmr"] = {{"omega", {1.0, 1.0}}, {"J", {1.0}}};
  EXPECT_THROW(config_from_json(j), std::invalid_argument);
}

TEST(ConfigJson, ShippedExampleLoads) {
  const RunConfig c = load_config(std::string(FMOSIM_SOURCE_DIR) + "/configs/example_fmo.json");
  EXPECT_EQ(c.fmo.n_sites, 7);
  EXPECT_TRUE(c.fmo.nearest_neighbour_only());
  EXPECT_EQ(config_from_json(config_to_json(c)), c);
}

TEST(ConfigJson, FileErrors) {
  EXPECT_THROW(read_json_file("/nonexistent/config.json"), std::invalid_argument);
  const auto path = std::filesystem::temp_directory_path() / "fmosim_bad_config.json";
  std::ofstream(path) << "{ not json";
  EXPECT_THROW(read_json_file(path.string()), std::invalid_argument);
  std::filesystem::remove(path);
}

TEST(StatesJson, RowMajorComplexEntries) {
  Matrix rho(2, 2);
  rho << 0.75, Complex(0.1, 0.2), Complex(0.1, -0.2), 0.25;
  Trajectory t;
  t.times = {0.0};
  t.states = {DensityMatrix(rho)};
  const json j = trajectory_states_json(t);
  EXPECT_EQ(j["dim"], 2);
  EXPECT_EQ(j["method"], "exact");
  ASSERT_EQ(j["states"][0].size(), 4u);
  EXPECT_EQ(j["states"][0][1][0].get<double>(), 0.1);
  EXPECT_EQ(j["states"][0][1][1].get<double>(), 0.2);
  EXPECT_EQ(j["states"][0][2][1].get<double>(), -0.2);
}
