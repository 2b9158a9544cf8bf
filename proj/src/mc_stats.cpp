#include "sio/mc_stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

#include <sodium.h>

#include "sio/errors.hpp"

namespace sio {

namespace {

// Mean anchored at the first sample, so constant data gives that constant.
double anchored_mean(const std::vector<double>& x) {
  const double x0 = x.front();
  double s = 0.0;
  for (double v : x) s += v - x0;
  return x0 + s / static_cast<double>(x.size());
}

bool constant(const std::vector<double>& x) {
  return std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); });
}

void put_u64(unsigned char* p, std::uint64_t v) {
  for (int k = 0; k < 8; ++k) p[k] = static_cast<unsigned char>(v >> (8 * k));
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::string_view experiment, std::uint64_t index) {
  static const int ready = sodium_init();
  if (ready < 0) throw std::runtime_error("libsodium failed to initialise");
  std::vector<unsigned char> msg(16 + experiment.size());
  put_u64(msg.data(), master);
  std::memcpy(msg.data() + 8, experiment.data(), experiment.size());
  put_u64(msg.data() + 8 + experiment.size(), index);
  unsigned char out[8];
  crypto_generichash(out, sizeof out, msg.data(), msg.size(), nullptr, 0);
  std::uint64_t v = 0;
  for (int k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(out[k]) << (8 * k);
  return v;
}

Estimate mean_estimate(const std::vector<double>& x) {
  if (x.empty()) throw DomainError("mean: empty sample");
  const double m = anchored_mean(x);
  const auto n = static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  const double sd = x.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  return {m, sd / std::sqrt(n), x.size()};
}

Estimate variance_estimate(const std::vector<double>& x) {
  if (x.size() < 4) throw DomainError("variance: need at least four samples");
  const double m = anchored_mean(x);
  const auto n = static_cast<double>(x.size());
  double s2 = 0.0;
  double s4 = 0.0;
  for (double v : x) {
    const double d = (v - m) * (v - m);
    s2 += d;
    s4 += d * d;
  }
  const double var = s2 / (n - 1.0);
  const double m4 = s4 / n;
  const double v = (m4 - var * var * (n - 3.0) / (n - 1.0)) / n;
  return {var, std::sqrt(std::max(v, 0.0)), x.size()};
}

CfEstimate empirical_cf(const std::vector<double>& x, const std::vector<double>& gammas) {
  if (x.size() < 100) throw DomainError("empirical cf: need at least 100 samples");
  CfEstimate r;
  const auto n = static_cast<double>(x.size());
  r.se_bound = 1.0 / std::sqrt(n);
  for (double g : gammas) {
    double re = 0.0;
    double im = 0.0;
    for (double v : x) {
      re += std::cos(g * v);
      im += std::sin(g * v);
    }
    r.values.emplace_back(re / n, im / n);
  }
  return r;
}

Estimate covariance_estimate(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 3) {
    throw DomainError("covariance: need two samples of equal size >= 3");
  }
  const std::size_t n = a.size();
  const auto nd = static_cast<double>(n);
  if (constant(a) || constant(b)) return {0.0, 0.0, n};
  const double ma = anchored_mean(a);
  const double mb = anchored_mean(b);
  std::vector<double> p(n);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = (a[i] - ma) * (b[i] - mb);
    s += p[i];
  }
  const double cov = s / (nd - 1.0);
  // Leave-one-out covariances on centred data, O(n) in total.
  double jm = 0.0;
  std::vector<double> loo(n);
  for (std::size_t i = 0; i < n; ++i) {
    loo[i] = (s - p[i] * nd / (nd - 1.0)) / (nd - 2.0);
    jm += loo[i];
  }
  jm /= nd;
  double jv = 0.0;
  for (double v : loo) jv += (v - jm) * (v - jm);
  return {cov, std::sqrt(jv * (nd - 1.0) / nd), n};
}

double cov_zscore(const std::vector<double>& a, const std::vector<double>& b) {
  const auto e = covariance_estimate(a, b);
  if (e.se == 0.0) return 0.0;
  return e.value / e.se;
}

IndependenceResult independence_check(const std::vector<double>& a, const std::vector<double>& b,
                                      const std::vector<double>& gammas) {
  if (a.size() != b.size() || a.empty()) throw DomainError("independence: sample size mismatch");
  const std::size_t n = a.size();
  const std::size_t m = gammas.size();
  const auto nd = static_cast<double>(n);
  std::vector<std::complex<double>> ea(n * m);
  std::vector<std::complex<double>> eb(n * m);
  std::vector<std::complex<double>> pa(m);
  std::vector<std::complex<double>> pb(m);
  for (std::size_t g = 0; g < m; ++g) {
    for (std::size_t i = 0; i < n; ++i) {
      ea[g * n + i] = {std::cos(gammas[g] * a[i]), std::sin(gammas[g] * a[i])};
      eb[g * n + i] = {std::cos(gammas[g] * b[i]), std::sin(gammas[g] * b[i])};
      pa[g] += ea[g * n + i];
      pb[g] += eb[g * n + i];
    }
    pa[g] /= nd;
    pb[g] /= nd;
  }
  IndependenceResult r;
  for (std::size_t g1 = 0; g1 < m; ++g1) {
    for (std::size_t g2 = 0; g2 < m; ++g2) {
      std::complex<double> joint{0.0, 0.0};
      for (std::size_t i = 0; i < n; ++i) joint += ea[g1 * n + i] * eb[g2 * n + i];
      joint /= nd;
      r.defect = std::max(r.defect, std::abs(joint - pa[g1] * pb[g2]));
    }
  }
  r.threshold = 3.0 * (2.0 / std::sqrt(nd) + 1.0 / nd);
  r.passed = r.defect <= r.threshold;
  return r;
}

std::vector<double> default_independence_grid() {
  return {-2.0, -1.5, -1.0, -0.5, 0.25, 0.5, 1.0, 1.5, 2.0};
}

unsigned worker_count() {
  if (const char* env = std::getenv("SIO_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= 1024) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace sio
