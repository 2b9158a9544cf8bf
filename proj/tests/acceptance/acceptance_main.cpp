// Acceptance run: one PASS/FAIL line per criterion at the default scale
// (10^5 replications per corpus channel). Exit status 1 if any line fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "sio/errors.hpp"
#include "sio/harness/archive.hpp"
#include "sio/harness/config.hpp"
#include "sio/harness/report.hpp"
#include "sio/harness/suites.hpp"
#include "sio/measures.hpp"
#include "sio/sio_operator.hpp"

namespace {

using namespace sio;
using namespace sio::harness;
using Clock = std::chrono::steady_clock;

constexpr std::size_t kReps = 100000;

struct Outcome {
  std::string name;
  bool pass = true;
  std::string detail;
};

struct Tally {
  std::size_t rows = 0;
  std::size_t passed = 0;
  std::vector<std::string> failures;

  void add(const Report& r, const std::string& corpus) {
    for (const auto& row : r.rows) {
      ++rows;
      if (row.pass) {
        ++passed;
      } else {
        failures.push_back(fmt::format("{} {} {}: statistic {} target {} tolerance {}", corpus,
                                       row.suite, row.check, row.statistic, row.target,
                                       row.tolerance));
      }
    }
  }
  bool ok() const { return rows > 0 && passed == rows; }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

ExperimentConfig load(const std::string& name, std::size_t reps) {
  auto doc = load_config(std::string(SIO_CONFIG_DIR) + "/" + name).source;
  doc["n_reps"] = reps;
  return parse_config(doc);
}

// Runs every applicable suite on every corpus once; criteria read from here.
class Runs {
 public:
  explicit Runs(const std::vector<std::string>& corpora) {
    for (const auto& c : corpora) {
      const auto cfg = load(c, kReps);
      configs_.emplace(c, cfg);
      for (const auto& s : suite_registry()) {
        if (std::string(s.id) == "wssus-isometry" && !cfg.channel.stationary()) continue;
        const auto t0 = Clock::now();
        reports_[{c, s.id}] = run_suite(cfg, s.id);
        seconds_[{c, s.id}] = seconds_since(t0);
      }
    }
  }

  Tally tally(const std::vector<std::string>& corpora, const std::vector<std::string>& suites,
              double* seconds = nullptr) const {
    Tally t;
    double total = 0.0;
    for (const auto& c : corpora) {
      for (const auto& s : suites) {
        auto it = reports_.find({c, s});
        if (it == reports_.end()) continue;
        t.add(it->second, c);
        total += seconds_.at({c, s});
      }
    }
    if (seconds) *seconds = total;
    return t;
  }

  const ExperimentConfig& config(const std::string& c) const { return configs_.at(c); }

 private:
  std::map<std::string, ExperimentConfig> configs_;
  std::map<std::pair<std::string, std::string>, Report> reports_;
  std::map<std::pair<std::string, std::string>, double> seconds_;
};

Outcome from_tally(const std::string& name, const Tally& t, std::size_t min_rows,
                   std::size_t rows_per_case = 1) {
  Outcome o{name, t.ok() && t.rows >= min_rows * rows_per_case, ""};
  o.detail = fmt::format("{}/{} checks passed, {} cases", t.passed, t.rows, t.rows / rows_per_case);
  for (std::size_t i = 0; i < std::min<std::size_t>(t.failures.size(), 5); ++i) {
    o.detail += "\n    " + t.failures[i];
  }
  return o;
}

StepSignal random_signal(std::mt19937_64& rng, double h) {
  std::uniform_int_distribution<int> cells(1, 4);
  std::uniform_int_distribution<int> node(-16, 16);
  std::normal_distribution<double> coeff(0.0, 1.0);
  for (;;) {
    std::vector<int> ks;
    const int n = cells(rng);
    for (int i = 0; i <= n; ++i) ks.push_back(node(rng));
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    if (ks.size() < 2) continue;
    std::vector<double> bp, c;
    for (int k : ks) bp.push_back(k * h);
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) c.push_back(coeff(rng));
    return StepSignal(bp, c);
  }
}

// Per realization, 100 random (f, t) on the lattice: kernel and impulse forms
// bit for bit, the sigma_T path and, at interior times, the eta_T path.
Outcome representation_sweep(const ExperimentConfig& cfg) {
  const ChannelSampler sampler(cfg.channel, cfg.tgrid(), cfg.ugrid());
  const auto& tg = sampler.tgrid();
  const double h = *sampler.ugrid().spacing();
  const double T_eta = std::min(-tg[0], tg[tg.size() - 1]);
  const double T_kn = cfg.channel.window.u_max;
  std::size_t cases = 0, exact_fail = 0, kn_fail = 0, eta_fail = 0, eta_cases = 0;
  double kn_worst = 0.0, eta_worst = 0.0;
  for (std::size_t r = 0; r < 5; ++r) {
    const auto real = sampler.sample(derive_seed(cfg.master_seed, "acceptance-representation", r));
    const auto eta = build_spreading_symbol(real, T_eta);
    std::mt19937_64 rng(derive_seed(cfg.master_seed, "acceptance-signals", r));
    std::uniform_int_distribution<std::size_t> pick(0, tg.size() - 1);
    for (int k = 0; k < 100; ++k) {
      const auto f = random_signal(rng, h);
      const double t = tg[pick(rng)];
      ++cases;
      const double kernel = apply_kernel(real, f, t);
      if (apply_impulse(real, f, t) != kernel) ++exact_fail;
      const double scale =
          std::max(std::abs(kernel), std::sqrt(weighted_l2(f, mu_measure(cfg.channel, t))));
      double kn_err;
      try {
        kn_err = std::abs(kohn_nirenberg_apply(real, f, t, default_frequency_grid(f, T_kn)).value -
                          kernel) / scale;
      } catch (const AccuracyError&) {
        kn_err = std::numeric_limits<double>::infinity();
      }
      kn_worst = std::max(kn_worst, kn_err);
      if (!(kn_err <= 1e-3)) ++kn_fail;
      if (std::abs(t) < T_eta) {
        ++eta_cases;
        const double e = std::abs(spreading_apply(real, f, t, eta) - kernel) / scale;
        eta_worst = std::max(eta_worst, e);
        if (!(e <= 5e-3)) ++eta_fail;
      }
    }
  }
  Outcome o{"", exact_fail == 0 && kn_fail == 0 && eta_fail == 0, ""};
  o.detail = fmt::format(
      "{} random (f,t): kernel != impulse {}, sigma_T worst rel err {:.2e} ({} over 1e-3), "
      "eta_T worst rel err {:.2e} over {} interior cases ({} over 5e-3)",
      cases, exact_fail, kn_worst, kn_fail, eta_worst, eta_cases, eta_fail);
  return o;
}

Outcome determinism() {
  const auto cfg = load("mixed.json", 10000);
  const auto arc = load("mixed.json", 2000);
  const std::string a1 = write_archive(arc, 1);
  const std::string a8 = write_archive(arc, 8);
  const std::string a1b = write_archive(arc, 1);
  const std::vector<std::string> all{"all"};
  const std::string r1 = render_json(run_suites(cfg, all, {1}));
  const std::string r8 = render_json(run_suites(cfg, all, {8}));
  const auto check = read_archive(a8, 8);
  Outcome o{"", a1 == a8 && a1 == a1b && r1 == r8 && check.mismatches == 0, ""};
  o.detail = fmt::format(
      "archive {} bytes, 1 vs 8 workers {}, rerun {}; report {} bytes, 1 vs 8 workers {}; "
      "reload mismatches {}",
      a1.size(), a1 == a8 ? "identical" : "differ", a1 == a1b ? "identical" : "differs", r1.size(),
      r1 == r8 ? "identical" : "differ", check.mismatches);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::string> corpora{"gaussian.json", "jump.json", "mixed.json",
                                         "coherent.json", "nonstationary.json"};
  const std::vector<std::string> stationary{"gaussian.json", "jump.json", "mixed.json",
                                            "coherent.json"};
  std::vector<Outcome> out;
  try {
    const auto t0 = Clock::now();
    const Runs runs(corpora);
    fmt::print("suites ran on {} corpus channels in {:.1f} s ({} workers)\n", corpora.size(),
               seconds_since(t0), worker_count());

    double iso_seconds = 0.0;
    auto iso = runs.tally({"gaussian.json", "jump.json", "mixed.json"}, {"sio-isometry"},
                          &iso_seconds);
    auto o1 = from_tally("1 isometry", iso, 20);
    o1.pass = o1.pass && iso_seconds < 60.0;
    o1.detail += fmt::format(", {:.1f} s", iso_seconds);
    out.push_back(o1);

    out.push_back(from_tally("2 weak-US", runs.tally(corpora, {"weak-us"}), 20));
    out.push_back(from_tally("3 component CFs", runs.tally(corpora, {"cf-components"}), 10, 3));
    out.push_back(from_tally("4 Levy-Khinchine and Poisson counts",
                             runs.tally(corpora, {"levy-khinchine", "poisson-counts"}), 1));

    auto o5 = from_tally("5 representation equivalence",
                         runs.tally(corpora, {"fubini-sigma", "eta-spreading"}), 1);
    const auto sweep = representation_sweep(runs.config("mixed.json"));
    o5.pass = o5.pass && sweep.pass;
    o5.detail += "; " + sweep.detail;
    out.push_back(o5);

    out.push_back(from_tally("6 WSSUS laws", runs.tally(stationary, {"wssus-isometry"}), 1));
    out.push_back(from_tally("7 rho properties", runs.tally(corpora, {"rho-cs"}), 1));
    out.push_back(from_tally("8 decomposition", runs.tally(corpora, {"decomposition"}), 1));

    auto o9 = determinism();
    o9.name = "9 determinism";
    out.push_back(o9);
  } catch (const std::exception& e) {
    fmt::print("acceptance run aborted: {}\n", e.what());
    return 2;
  }

  bool all = true;
  for (const auto& o : out) {
    fmt::print("{} criterion {}: {}\n", o.pass ? "PASS" : "FAIL", o.name, o.detail);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
