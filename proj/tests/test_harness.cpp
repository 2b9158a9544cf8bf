#include <algorithm>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "sio/harness/archive.hpp"
#include "sio/harness/config.hpp"
#include "sio/harness/report.hpp"
#include "sio/harness/suites.hpp"

namespace sio::harness {
namespace {

nlohmann::ordered_json corpus(const std::string& name) {
  std::ifstream in(std::string(SIO_CONFIG_DIR) + "/" + name);
  return nlohmann::ordered_json::parse(in);
}

ExperimentConfig with_reps(const std::string& name, std::size_t n) {
  auto doc = corpus(name);
  doc["n_reps"] = n;
  return parse_config(doc);
}

std::string error_path(const nlohmann::ordered_json& doc) {
  try {
    parse_config(doc);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "";
}

TEST(Config, CorpusFilesParse) {
  for (const char* f : {"mixed.json", "gaussian.json", "jump.json", "coherent.json",
                        "nonstationary.json", "zero.json"}) {
    EXPECT_NO_THROW(load_config(std::string(SIO_CONFIG_DIR) + "/" + f)) << f;
  }
}

TEST(Config, UnknownKeysAreReportedWithTheirPath) {
  auto doc = corpus("mixed.json");
  doc["channel"]["rc"]["tau"] = 1.0;
  EXPECT_EQ(error_path(doc), "$.channel.rc.tau");
  doc = corpus("mixed.json");
  doc["extra"] = 1;
  EXPECT_EQ(error_path(doc), "$.extra");
}

TEST(Config, BadValuesAreReportedWithTheirPath) {
  auto doc = corpus("mixed.json");
  doc["times"][1] = 0.3;
  EXPECT_EQ(error_path(doc).rfind("$.times", 0), 0u);
  doc = corpus("mixed.json");
  doc["suites"] = {"no-such-suite"};
  EXPECT_EQ(error_path(doc), "$.suites[0]");
  doc = corpus("mixed.json");
  doc["channel"]["truncation"] = -1.0;
  EXPECT_EQ(error_path(doc).rfind("$.channel", 0), 0u);
}

TEST(Config, MalformedTextIsAConfigError) {
  EXPECT_THROW(parse_config_text("{"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}

TEST(Suites, StatisticalSuitesNeedEnoughReplications) {
  const auto cfg = with_reps("mixed.json", 500);
  try {
    run_suite(cfg, "sio-isometry");
    FAIL() << "expected a config error";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.path(), "$.n_reps");
  }
  EXPECT_THROW(run_suite(cfg, "no-such-suite"), ConfigError);
}

TEST(Suites, RegistryIsComplete) {
  for (const char* id : {"sio-isometry", "weak-us", "cf-components", "levy-khinchine",
                         "poisson-counts", "fubini-sigma", "eta-spreading", "wssus-isometry",
                         "rho-cs", "decomposition"}) {
    EXPECT_NE(find_suite(id), nullptr) << id;
  }
  EXPECT_EQ(find_suite("nope"), nullptr);
}

TEST(Suites, ZeroChannelGivesZeroCorrelations) {
  const auto cfg = load_config(std::string(SIO_CONFIG_DIR) + "/zero.json");
  const Report r = run_suite(cfg, "weak-us", {1});
  ASSERT_FALSE(r.rows.empty());
  for (const auto& row : r.rows) {
    EXPECT_EQ(row.statistic, 0.0) << row.check;
    EXPECT_TRUE(row.pass) << row.check;
  }
}

TEST(Suites, NonStationaryChannelsSkipTheWssusSuite) {
  const auto cfg = with_reps("nonstationary.json", 1000);
  EXPECT_THROW(run_suite(cfg, "wssus-isometry", {1}), ConfigError);
}

TEST(Suites, ReportDoesNotDependOnTheWorkerCount) {
  const auto cfg = with_reps("mixed.json", 1000);
  const std::vector<std::string> ids{"sio-isometry", "cf-components", "rho-cs"};
  EXPECT_EQ(render_csv(run_suites(cfg, ids, {1})), render_csv(run_suites(cfg, ids, {4})));
}

Report sample_report() {
  Report r;
  r.environment = {7, 1000, version_string()};
  r.add("s", "a, with comma", "x = y", Verdict::make(1.0 / 3.0, 0.0, 1.0, 1000), 0.01);
  r.add("s", "b", "x = y", Verdict::make(2.0, 0.0, 1.0, 1000), 0.5);
  return r;
}

TEST(Report, EmptyReportRendersTheHeaderOnly) {
  EXPECT_EQ(render_csv(Report{}), "suite,check,anchor,statistic,target,tolerance,se,n_reps,pass\n");
}

TEST(Report, FlagsAndCounts) {
  const Report r = sample_report();
  EXPECT_EQ(r.summary.total, 2u);
  EXPECT_EQ(r.summary.passed, 1u);
  EXPECT_FALSE(r.all_passed());
  const std::string csv = render_csv(r);
  EXPECT_NE(csv.find(",1\n"), std::string::npos);
  EXPECT_NE(csv.find(",0\n"), std::string::npos);
  const std::string json = render_json(r);
  EXPECT_NE(json.find("\"pass\": true"), std::string::npos);
  EXPECT_NE(json.find("\"pass\": false"), std::string::npos);
}

TEST(Report, RoundTripsThroughBothFormats) {
  const Report r = sample_report();
  EXPECT_EQ(parse_report_json(render_json(r)), r);
  const Report c = parse_report_csv(render_csv(r));
  EXPECT_EQ(c.rows, r.rows);
  EXPECT_EQ(c.summary, r.summary);
  EXPECT_EQ(parse_format("csv"), Format::csv);
  EXPECT_THROW(parse_format("xml"), ConfigError);
}

TEST(Archive, IsByteIdenticalAcrossRunsAndWorkerCounts) {
  const auto cfg = with_reps("mixed.json", 200);
  const std::string a = write_archive(cfg, 1);
  EXPECT_EQ(write_archive(cfg, 1), a);
  EXPECT_EQ(write_archive(cfg, 4), a);
}

TEST(Archive, ZeroReplicationsGiveAHeaderOnly) {
  const auto cfg = with_reps("mixed.json", 0);
  const std::string a = write_archive(cfg, 1);
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 1);
  EXPECT_EQ(read_archive(a, 1).records, 0u);
}

TEST(Archive, ReloadRegeneratesEveryRecord) {
  const auto cfg = with_reps("mixed.json", 1000);
  const auto check = read_archive(write_archive(cfg, 2), 2);
  EXPECT_EQ(check.records, 1000u);
  EXPECT_EQ(check.mismatches, 0u);
  const std::vector<std::string> ids{"sio-isometry", "weak-us"};
  EXPECT_EQ(render_csv(run_suites(check.config, ids, {2})), render_csv(run_suites(cfg, ids, {2})));
}

TEST(Archive, TamperedRecordsAreDetected) {
  const auto cfg = with_reps("mixed.json", 20);
  std::string a = write_archive(cfg, 1);
  // Change one seed in the second record.
  const auto line = a.find('\n') + 1;
  const auto pos = a.find("\"seed\":", line) + 7;
  a[pos] = a[pos] == '1' ? '2' : '1';
  EXPECT_GE(read_archive(a, 1).mismatches, 1u);
}

}  // namespace
}  // namespace sio::harness
