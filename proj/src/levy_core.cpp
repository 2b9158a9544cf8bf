#include "sio/levy_core.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "sio/errors.hpp"

namespace sio {

DelayGrid::DelayGrid(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 2) throw DomainError("delay grid: need at least two nodes");
  bool found = false;
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    if (!std::isfinite(nodes_[k])) throw DomainError("delay grid: non-finite node");
    if (k > 0 && !(nodes_[k - 1] < nodes_[k])) {
      throw DomainError("delay grid: nodes must increase strictly");
    }
    if (nodes_[k] == 0.0) {
      origin_ = k;
      found = true;
    }
  }
  if (!found) throw DomainError("delay grid: the origin must be a node");
}

DelayGrid DelayGrid::uniform(double lo, double hi, std::size_t n) {
  if (n < 2 || !(lo < hi)) throw DomainError("delay grid: need lo < hi and n >= 2");
  const double h = (hi - lo) / static_cast<double>(n - 1);
  const double k0 = std::round(-lo / h);
  if (std::abs(lo + k0 * h) > 1e-9 * h) {
    throw DomainError("delay grid: the origin is not a node of the uniform grid");
  }
  std::vector<double> nodes(n);
  for (std::size_t k = 0; k < n; ++k) nodes[k] = (static_cast<double>(k) - k0) * h;
  return DelayGrid(std::move(nodes));
}

std::optional<std::size_t> DelayGrid::index_of(double v, double tol) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), v);
  std::optional<std::size_t> best;
  double err = tol;
  for (auto cand : {it, it == nodes_.begin() ? it : it - 1}) {
    if (cand == nodes_.end()) continue;
    const double d = std::abs(*cand - v);
    if (d <= err) {
      err = d;
      best = static_cast<std::size_t>(cand - nodes_.begin());
    }
  }
  return best;
}

std::optional<double> DelayGrid::spacing() const {
  const double h = (nodes_.back() - nodes_.front()) / static_cast<double>(nodes_.size() - 1);
  for (std::size_t k = 0; k + 1 < nodes_.size(); ++k) {
    if (std::abs((nodes_[k + 1] - nodes_[k]) - h) > 1e-9 * h) return std::nullopt;
  }
  return h;
}

void LevyTriplet::validate() const {
  if (!(truncation > 0.0) || !std::isfinite(truncation)) {
    throw DomainError("triplet: truncation level must be positive");
  }
  if (!(window.lo <= 0.0 && 0.0 <= window.hi)) {
    throw DomainError("triplet: window must contain the origin");
  }
  if (variance.is_signed()) throw DomainError("triplet: variance measure must be positive");
  if (intensity.is_signed()) throw DomainError("triplet: intensity must be positive");
  if (intensity.has_atoms()) throw DomainError("triplet: intensity may not have atoms");
  for (const auto* m : {&drift, &variance, &intensity}) {
    if (m->window().lo > window.lo + 1e-12 || m->window().hi < window.hi - 1e-12) {
      throw DomainError("triplet: component measures must cover the window");
    }
  }
}

std::vector<double> PathSample::values() const {
  std::vector<double> out(grid.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = value(k);
  return out;
}

SizeSet::SizeSet(std::vector<Interval> pieces) : pieces_(std::move(pieces)) {
  for (const auto& p : pieces_.intervals()) {
    if (p.lo <= 0.0 && 0.0 <= p.hi) {
      throw DomainError("size set: closure may not contain 0");
    }
  }
}

SizeSet SizeSet::single(double y) {
  return SizeSet({{y, std::nextafter(y, std::numeric_limits<double>::infinity())}});
}

bool SizeSet::contains(double y) const {
  for (const auto& p : pieces_.intervals())
    if (p.contains(y)) return true;
  return false;
}

std::complex<double> increment_cf(const LevyTriplet& tr, Interval b, double gamma) {
  if (!std::isfinite(gamma) || !std::isfinite(b.lo) || !std::isfinite(b.hi)) {
    throw DomainError("levy cf: non-finite argument");
  }
  if (b.lo < tr.window.lo - 1e-12 || b.hi > tr.window.hi + 1e-12) {
    throw DomainError("levy cf: delay outside the triplet window");
  }
  if (b.empty() || gamma == 0.0) return {1.0, 0.0};
  using namespace std::complex_literals;
  const double m = tr.drift.mass(b);
  const double al = tr.variance.mass(b);
  const double lam = tr.intensity.mass(b);
  std::complex<double> expo = -1i * gamma * m - 0.5 * al * gamma * gamma;
  if (lam != 0.0) {
    const double a = tr.truncation;
    const auto big = tr.sizes.integrate_complex(
        [gamma](double y) { return std::exp(1i * (y * gamma)) - 1.0; }, Region::large, a);
    const auto small = tr.sizes.integrate_complex(
        [gamma](double y) { return std::exp(1i * (y * gamma)) - 1.0 - 1i * (y * gamma); },
        Region::small, a);
    expo += lam * (big + small);
  }
  return std::exp(expo);
}

std::complex<double> levy_cf(const LevyTriplet& tr, double u, double gamma) {
  if (!std::isfinite(u)) throw DomainError("levy cf: non-finite delay");
  if (u >= 0.0) return increment_cf(tr, {0.0, u}, gamma);
  // Z_u = -(Z_0 - Z_u) for negative delays.
  return increment_cf(tr, {u, 0.0}, -gamma);
}

PathSample sample_path(const LevyTriplet& tr, const DelayGrid& grid, RngSeed seed) {
  tr.validate();
  if (grid.front() < tr.window.lo - 1e-12 || grid.back() > tr.window.hi + 1e-12) {
    throw DomainError("sample path: grid leaves the triplet window");
  }
  const std::size_t n = grid.size();
  const std::size_t o = grid.origin();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  PathSample p;
  p.grid = grid;
  p.gaussian.assign(n, 0.0);
  p.drift.assign(n, 0.0);
  p.small_compensator.assign(n, 0.0);
  p.large_sum.assign(n, 0.0);
  p.small_sum.assign(n, 0.0);

  std::vector<double> inc(n - 1, 0.0);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double da = tr.variance.mass(Interval{grid[k], grid[k + 1]});
    if (da > 0.0) inc[k] = std::sqrt(da) * normal(rng);
  }
  for (std::size_t k = o; k + 1 < n; ++k) p.gaussian[k + 1] = p.gaussian[k] + inc[k];
  for (std::size_t k = o; k > 0; --k) p.gaussian[k - 1] = p.gaussian[k] - inc[k - 1];

  const Interval range{grid.front(), grid.back()};
  for (const auto& c : tr.intensity.cells()) {
    const double lo = std::max(c.lo, range.lo);
    const double hi = std::min(c.hi, range.hi);
    if (!(hi > lo) || c.mass <= 0.0) continue;
    const double mean = c.mass * (hi - lo) / (c.hi - c.lo);
    std::poisson_distribution<long> poisson(mean);
    const long count = poisson(rng);
    std::uniform_real_distribution<double> where(lo, hi);
    for (long j = 0; j < count; ++j) {
      const double u = where(rng);
      const double y = tr.sizes.from_normal_score(normal(rng));
      p.jumps.push_back({u, y, std::abs(y) >= tr.truncation ? JumpClass::large : JumpClass::small});
    }
  }
  std::stable_sort(p.jumps.begin(), p.jumps.end(),
                   [](const JumpRecord& a, const JumpRecord& b) { return a.delay < b.delay; });

  const double small_mean = tr.sizes.integrate([](double y) { return y; }, Region::small,
                                               tr.truncation);
  for (std::size_t k = 0; k < n; ++k) {
    const double u = grid[k];
    p.drift[k] = tr.m(u);
    p.small_compensator[k] = tr.lambda(u) * small_mean;
    double big = 0.0;
    double small = 0.0;
    for (const auto& j : p.jumps) {
      const bool inside = u >= 0.0 ? (j.delay >= 0.0 && j.delay < u) : (j.delay >= u && j.delay < 0.0);
      if (!inside) continue;
      (j.cls == JumpClass::large ? big : small) += j.size;
    }
    const double sgn = u >= 0.0 ? 1.0 : -1.0;
    p.large_sum[k] = sgn * big;
    p.small_sum[k] = sgn * small;
  }
  return p;
}

long count_measure(const PathSample& path, double u, const SizeSet& b) {
  if (!std::isfinite(u)) throw DomainError("count measure: non-finite delay");
  if (u < path.grid.front() || u > path.grid.back()) {
    throw WindowError("count measure: delay outside the sampled grid");
  }
  long n = 0;
  for (const auto& j : path.jumps) {
    const bool inside = u >= 0.0 ? (j.delay > 0.0 && j.delay <= u) : (j.delay >= u && j.delay < 0.0);
    if (inside && b.contains(j.size)) ++n;
  }
  return n;
}

LevyItoParts split_levy_ito(const PathSample& path) {
  LevyItoParts parts;
  const std::size_t n = path.grid.size();
  parts.deterministic.resize(n);
  parts.gaussian = path.gaussian;
  parts.large = path.large_sum;
  parts.small_compensated.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    parts.deterministic[k] = -path.drift[k];
    parts.small_compensated[k] = path.small_sum[k] - path.small_compensator[k];
  }
  return parts;
}

}  // namespace sio
