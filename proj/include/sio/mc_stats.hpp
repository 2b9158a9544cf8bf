#ifndef SIO_MC_STATS_HPP_
#define SIO_MC_STATS_HPP_

#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <exception>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace sio {

struct SeedLineage {
  std::uint64_t master = 0;
  std::string experiment;
  std::uint64_t first = 0;
  std::uint64_t count = 0;
};

// BLAKE2b-64 of (master, experiment id, index). Independent of scheduling.
std::uint64_t derive_seed(std::uint64_t master, std::string_view experiment, std::uint64_t index);
inline std::uint64_t derive_seed(const SeedLineage& l, std::uint64_t i) {
  return derive_seed(l.master, l.experiment, l.first + i);
}

template <class T>
struct SampleSet {
  std::vector<T> values;
  SeedLineage lineage;
  std::size_t size() const { return values.size(); }
};

struct Estimate {
  double value = 0.0;
  double se = 0.0;
  std::size_t n = 0;
};

struct Verdict {
  double statistic = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::size_t n_reps = 0;

  static Verdict make(double statistic, double target, double tolerance, std::size_t n) {
    return {statistic, target, tolerance, std::abs(statistic - target) <= tolerance, n};
  }
};

// Sample mean with standard error sd / sqrt(n).
Estimate mean_estimate(const std::vector<double>& x);
// Unbiased sample variance with its large-sample standard error.
Estimate variance_estimate(const std::vector<double>& x);

struct CfEstimate {
  std::vector<std::complex<double>> values;
  double se_bound = 0.0;  // 1 / sqrt(n), valid at every node
};
// (1/n) sum_k exp(i gamma x_k) per node. Needs n >= 100.
CfEstimate empirical_cf(const std::vector<double>& x, const std::vector<double>& gammas);

// Sample covariance with a leave-one-out jackknife standard error.
Estimate covariance_estimate(const std::vector<double>& a, const std::vector<double>& b);
// Covariance divided by its jackknife SE; 0 when either sample is constant.
double cov_zscore(const std::vector<double>& a, const std::vector<double>& b);

struct IndependenceResult {
  double defect = 0.0;
  double threshold = 0.0;
  bool passed = false;
};
// max over the product grid of |phi_ab(g1,g2) - phi_a(g1) phi_b(g2)|, against
// the threshold 3 (2/sqrt(n) + 1/n).
IndependenceResult independence_check(const std::vector<double>& a, const std::vector<double>& b,
                                      const std::vector<double>& gammas);
std::vector<double> default_independence_grid();

// Worker count from SIO_WORKERS, else the hardware concurrency.
unsigned worker_count();

// out[i] = fn(i) for i < n, computed on `workers` threads. The result depends
// only on fn, never on the schedule.
template <class Fn>
auto parallel_map(std::size_t n, Fn fn, unsigned workers = worker_count())
    -> std::vector<decltype(fn(std::size_t{0}))> {
  using R = decltype(fn(std::size_t{0}));
  std::vector<R> out(n);
  if (workers <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        out[i] = fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned w = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  for (unsigned k = 0; k < w; ++k) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace sio

#endif  // SIO_MC_STATS_HPP_
