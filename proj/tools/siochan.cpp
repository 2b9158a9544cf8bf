#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sio/errors.hpp"
#include "sio/harness/archive.hpp"
#include "sio/harness/config.hpp"
#include "sio/harness/report.hpp"
#include "sio/harness/suites.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw sio::harness::ConfigError(path, "cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& path, const std::string& bytes) {
  if (path.empty() || path == "-") {
    std::cout << bytes;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw sio::harness::ConfigError(path, "cannot write");
  out << bytes;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace sio::harness;
  CLI::App app{"Simulate and verify stochastic integral operator channel models"};
  app.require_subcommand(1);
  unsigned workers = sio::worker_count();
  app.add_option("--workers", workers, "Worker threads (default: SIO_WORKERS or all cores)")
      ->check(CLI::Range(1u, 1024u));

  std::string config_path;
  std::string out_path;
  auto* simulate = app.add_subcommand("simulate", "Write a realization archive");
  simulate->add_option("--config", config_path, "Experiment config (JSON)")->required();
  simulate->add_option("--out", out_path, "Archive path")->required();

  std::string archive_path;
  std::vector<std::string> suites;
  std::string report_path;
  std::string format = "csv";
  auto* verify = app.add_subcommand("verify", "Run verification suites");
  auto* vcfg = verify->add_option("--config", config_path, "Experiment config (JSON)");
  auto* varc = verify->add_option("--archive", archive_path, "Rerun from a realization archive");
  vcfg->excludes(varc);
  verify->add_option("--suite", suites, "Suite id or 'all' (default: the config's list)");
  verify->add_option("--report", report_path, "Report path (default: stdout)");
  verify->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  std::string in_path;
  auto* report = app.add_subcommand("report", "Convert a report between csv and json");
  report->add_option("--in", in_path, "Report to read")->required();
  report->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  report->add_option("--out", out_path, "Output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kPass : kUsage;
  }

  try {
    if (*simulate) {
      const ExperimentConfig cfg = load_config(config_path);
      emit(out_path, write_archive(cfg, workers));
      return kPass;
    }
    if (*verify) {
      if (config_path.empty() && archive_path.empty()) {
        std::cerr << "verify: need --config or --archive\n";
        return kUsage;
      }
      ExperimentConfig cfg;
      if (!archive_path.empty()) {
        const ArchiveCheck chk = read_archive(slurp(archive_path), workers);
        if (chk.mismatches != 0) {
          std::cerr << "verify: " << chk.mismatches << " archive records do not regenerate\n";
          return kFail;
        }
        cfg = chk.config;
      } else {
        cfg = load_config(config_path);
      }
      const std::vector<std::string> ids = suites.empty() ? cfg.suites : suites;
      for (const auto& id : ids) {
        if (id != "all" && !find_suite(id)) throw ConfigError("--suite", "unknown suite '" + id + "'");
      }
      const Report r = run_suites(cfg, ids, RunOptions{workers});
      emit(report_path, render(r, parse_format(format)));
      std::cerr << r.summary.passed << "/" << r.summary.total << " checks passed\n";
      return r.all_passed() ? kPass : kFail;
    }
    if (*report) {
      const std::string text = slurp(in_path);
      const bool is_json = text.find_first_not_of(" \t\r\n") != std::string::npos &&
                           text[text.find_first_not_of(" \t\r\n")] == '{';
      const Report r = is_json ? parse_report_json(text) : parse_report_csv(text);
      emit(out_path, render(r, parse_format(format)));
      return kPass;
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const sio::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const sio::WindowError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
