#ifndef SIO_HARNESS_REPORT_HPP_
#define SIO_HARNESS_REPORT_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "sio/mc_stats.hpp"

namespace sio::harness {

struct Row {
  std::string suite;
  std::string check;
  std::string anchor;
  double statistic = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  double se = 0.0;
  std::size_t n_reps = 0;
  bool pass = false;

  friend bool operator==(const Row&, const Row&) = default;
};

struct Summary {
  std::size_t total = 0;
  std::size_t passed = 0;
  std::size_t failed = 0;

  friend bool operator==(const Summary&, const Summary&) = default;
};

struct Environment {
  std::uint64_t master_seed = 0;
  std::size_t n_reps = 0;
  std::string version;

  friend bool operator==(const Environment&, const Environment&) = default;
};

struct Report {
  std::vector<Row> rows;
  Summary summary;
  Environment environment;

  void add(Row r);
  // Verdict-based row: pass iff |statistic - target| <= tolerance.
  void add(const std::string& suite, const std::string& check, const std::string& anchor,
           const Verdict& v, double se);
  void append(const Report& other);
  bool all_passed() const { return summary.failed == 0; }

  friend bool operator==(const Report&, const Report&) = default;
};

enum class Format { csv, json };

Format parse_format(const std::string& name);
std::string render(const Report& r, Format f);
std::string render_csv(const Report& r);
std::string render_json(const Report& r);
Report parse_report_json(const std::string& text);
Report parse_report_csv(const std::string& text);

const char* version_string();

}  // namespace sio::harness

#endif  // SIO_HARNESS_REPORT_HPP_
