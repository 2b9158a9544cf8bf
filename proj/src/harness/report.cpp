#include "sio/harness/report.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "sio/harness/config.hpp"

#ifndef SIO_VERSION
#define SIO_VERSION "0.0.0"
#endif

namespace sio::harness {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kCsvHeader = "suite,check,anchor,statistic,target,tolerance,se,n_reps,pass";

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

Json number_json(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

double json_number(const Json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return j.get<double>();
}

}  // namespace

const char* version_string() { return SIO_VERSION; }

void Report::add(Row r) {
  ++summary.total;
  ++(r.pass ? summary.passed : summary.failed);
  rows.push_back(std::move(r));
}

void Report::add(const std::string& suite, const std::string& check, const std::string& anchor,
                 const Verdict& v, double se) {
  add(Row{suite, check, anchor, v.statistic, v.target, v.tolerance, se, v.n_reps, v.passed});
}

void Report::append(const Report& other) {
  for (const auto& r : other.rows) add(r);
}

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  throw ConfigError("--format", "expected csv or json");
}

std::string render(const Report& r, Format f) {
  return f == Format::csv ? render_csv(r) : render_json(r);
}

std::string render_csv(const Report& r) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const auto& row : r.rows) {
    out += fmt::format("{},{},{},{},{},{},{},{},{}\n", csv_field(row.suite), csv_field(row.check),
                       csv_field(row.anchor), row.statistic, row.target, row.tolerance, row.se,
                       row.n_reps, row.pass ? 1 : 0);
  }
  return out;
}

std::string render_json(const Report& r) {
  Json doc;
  doc["environment"] = {{"master_seed", r.environment.master_seed},
                        {"n_reps", r.environment.n_reps},
                        {"version", r.environment.version}};
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"suite", row.suite},
                    {"check", row.check},
                    {"anchor", row.anchor},
                    {"statistic", number_json(row.statistic)},
                    {"target", number_json(row.target)},
                    {"tolerance", number_json(row.tolerance)},
                    {"se", number_json(row.se)},
                    {"n_reps", row.n_reps},
                    {"pass", row.pass}});
  }
  doc["rows"] = std::move(rows);
  doc["summary"] = {{"total", r.summary.total},
                    {"passed", r.summary.passed},
                    {"failed", r.summary.failed}};
  return doc.dump(2) + "\n";
}

Report parse_report_json(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError("$", std::string("malformed report: ") + e.what());
  }
  Report r;
  try {
    const auto& env = doc.at("environment");
    r.environment.master_seed = env.at("master_seed").get<std::uint64_t>();
    r.environment.n_reps = env.at("n_reps").get<std::size_t>();
    r.environment.version = env.at("version").get<std::string>();
    for (const auto& j : doc.at("rows")) {
      r.add(Row{j.at("suite").get<std::string>(), j.at("check").get<std::string>(),
                j.at("anchor").get<std::string>(), json_number(j.at("statistic")),
                json_number(j.at("target")), json_number(j.at("tolerance")),
                json_number(j.at("se")), j.at("n_reps").get<std::size_t>(),
                j.at("pass").get<bool>()});
    }
    const auto& s = doc.at("summary");
    const Summary stated{s.at("total").get<std::size_t>(), s.at("passed").get<std::size_t>(),
                         s.at("failed").get<std::size_t>()};
    if (!(stated == r.summary)) throw ConfigError("$.summary", "counts do not match the rows");
  } catch (const Json::exception& e) {
    throw ConfigError("$", std::string("malformed report: ") + e.what());
  }
  return r;
}

Report parse_report_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw ConfigError("csv", "missing or wrong header");
  }
  Report r;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = csv_split(line);
    const std::string where = "csv line " + std::to_string(lineno);
    if (f.size() != 9) throw ConfigError(where, "expected 9 fields");
    try {
      r.add(Row{f[0], f[1], f[2], std::stod(f[3]), std::stod(f[4]), std::stod(f[5]),
                std::stod(f[6]), static_cast<std::size_t>(std::stoull(f[7])), f[8] == "1"});
    } catch (const std::logic_error&) {
      throw ConfigError(where, "bad number");
    }
  }
  return r;
}

}  // namespace sio::harness
