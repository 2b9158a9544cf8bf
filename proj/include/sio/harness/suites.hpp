#ifndef SIO_HARNESS_SUITES_HPP_
#define SIO_HARNESS_SUITES_HPP_

#include <string>
#include <vector>

#include "sio/harness/config.hpp"
#include "sio/harness/report.hpp"
#include "sio/mc_stats.hpp"

namespace sio::harness {

struct SuiteInfo {
  const char* id;
  const char* anchor;
  bool statistical;  // needs n_reps >= 1000
};

const std::vector<SuiteInfo>& suite_registry();
const SuiteInfo* find_suite(const std::string& id);

struct RunOptions {
  unsigned workers = worker_count();
};

// Runs one suite. Throws ConfigError for an unknown id, for too few
// replications, or for a suite that does not apply to the channel.
Report run_suite(const ExperimentConfig& cfg, const std::string& id, const RunOptions& opt = {});
// Runs the listed suites in order; "all" expands to the registry, skipping
// suites that do not apply to the channel.
Report run_suites(const ExperimentConfig& cfg, const std::vector<std::string>& ids,
                  const RunOptions& opt = {});

}  // namespace sio::harness

#endif  // SIO_HARNESS_SUITES_HPP_
