#include "sio/channel_model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "sio/errors.hpp"

namespace sio {

double CorrFn::operator()(double tau) const {
  switch (kind) {
    case Kind::exponential:
      return std::exp(-std::abs(tau) / tau_c);
    case Kind::gaussian:
      return std::exp(-(tau * tau) / (tau_c * tau_c));
    case Kind::constant:
      return 1.0;
  }
  return 1.0;
}

void CorrFn::validate() const {
  if (kind != Kind::constant && (!(tau_c > 0.0) || !std::isfinite(tau_c))) {
    throw DomainError("correlation: tau_c must be positive");
  }
}

TimeGrid::TimeGrid(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw DomainError("time grid: need at least one node");
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    if (!std::isfinite(nodes_[k])) throw DomainError("time grid: non-finite node");
    if (k > 0 && !(nodes_[k - 1] < nodes_[k])) {
      throw DomainError("time grid: nodes must increase strictly");
    }
  }
}

TimeGrid TimeGrid::uniform(double lo, double hi, std::size_t n) {
  if (n == 1) return TimeGrid({lo});
  if (n < 1 || !(lo < hi)) throw DomainError("time grid: need lo < hi and n >= 1");
  const double h = (hi - lo) / static_cast<double>(n - 1);
  std::vector<double> nodes(n);
  for (std::size_t k = 0; k < n; ++k) nodes[k] = lo + static_cast<double>(k) * h;
  nodes.back() = hi;
  // Keep symmetric grids exactly symmetric.
  if (lo == -hi) {
    for (std::size_t k = 0; k < n / 2; ++k) nodes[k] = -nodes[n - 1 - k];
    if (n % 2 == 1) nodes[n / 2] = 0.0;
  }
  return TimeGrid(std::move(nodes));
}

std::optional<std::size_t> TimeGrid::index_of(double t, double tol) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), t);
  std::optional<std::size_t> best;
  double err = tol;
  for (auto cand : {it, it == nodes_.begin() ? it : it - 1}) {
    if (cand == nodes_.end()) continue;
    const double d = std::abs(*cand - t);
    if (d <= err) {
      err = d;
      best = static_cast<std::size_t>(cand - nodes_.begin());
    }
  }
  return best;
}

std::optional<double> TimeGrid::spacing() const {
  if (nodes_.size() < 2) return std::nullopt;
  const double h = (nodes_.back() - nodes_.front()) / static_cast<double>(nodes_.size() - 1);
  for (std::size_t k = 0; k + 1 < nodes_.size(); ++k) {
    if (std::abs((nodes_[k + 1] - nodes_[k]) - h) > 1e-9 * h) return std::nullopt;
  }
  return h;
}

void TimeGains::validate() const {
  if (gain.empty() || gain.size() != scale.size() || breaks.size() != gain.size() + 1) {
    throw DomainError("time gains: need n+1 breaks and n gains and scales");
  }
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    if (!(breaks[k] < breaks[k + 1])) throw DomainError("time gains: breaks must increase");
  }
  for (std::size_t k = 0; k < gain.size(); ++k) {
    if (!(gain[k] >= 0.0) || !std::isfinite(gain[k])) {
      throw DomainError("time gains: gains must be non-negative");
    }
    if (!(scale[k] > 0.0) || !std::isfinite(scale[k])) {
      throw DomainError("time gains: scales must be positive");
    }
  }
}

std::size_t TimeGains::piece(double t) const {
  auto it = std::upper_bound(breaks.begin(), breaks.end(), t);
  if (it == breaks.begin()) return 0;
  const auto k = static_cast<std::size_t>(it - breaks.begin()) - 1;
  return std::min(k, gain.size() - 1);
}

void ChannelSpec::validate() const {
  if (!(truncation > 0.0) || !std::isfinite(truncation)) {
    throw DomainError("channel: truncation level must be positive");
  }
  if (!(window.t_max > 0.0) || !(window.u_max > 0.0)) {
    throw DomainError("channel: window extents must be positive");
  }
  if (variance.is_signed()) throw DomainError("channel: variance measure must be positive");
  if (variance.has_atoms()) throw DomainError("channel: variance measure may not have atoms");
  if (intensity.is_signed()) throw DomainError("channel: intensity must be positive");
  if (intensity.has_atoms()) throw DomainError("channel: intensity may not have atoms");
  const auto w = delay_window();
  for (const auto* m : {&variance, &intensity}) {
    if (m->window().lo > w.lo + 1e-12 || m->window().hi < w.hi - 1e-12) {
      throw DomainError("channel: delay measures must cover the delay window");
    }
  }
  rc.validate();
  rj.validate();
  if (gains) gains->validate();
}

SizeDist ChannelSpec::sizes_at(double t) const {
  const double k = scale(t);
  return k == 1.0 ? sizes : sizes.scaled(k);
}

LevyTriplet ChannelSpec::triplet_at(double t) const {
  const SizeDist ft = sizes_at(t);
  const double big = ft.integrate([](double y) { return y; }, Region::large, truncation);
  LevyTriplet tr;
  tr.drift = intensity.scaled(big);
  if (big >= 0.0) {
    tr.drift = MeasureRepr(tr.drift.window(), tr.drift.cells(), {},
                           MeasureRepr::Sign::signed_masses);
  }
  tr.variance = variance.scaled(gain(t));
  tr.intensity = intensity;
  tr.sizes = ft;
  tr.truncation = truncation;
  tr.window = delay_window();
  return tr;
}

bool ChannelSpec::classification_time_invariant() const {
  std::set<double> scales;
  if (gains) {
    scales.insert(gains->scale.begin(), gains->scale.end());
  } else {
    scales.insert(1.0);
  }
  if (rj.kind == CorrFn::Kind::constant && scales.size() == 1) return true;
  bool all_large = true;
  bool all_small = true;
  for (double k : scales) {
    const double p = sizes.scaled(k).probability(Region::large, truncation);
    all_large = all_large && std::abs(p - 1.0) < 1e-12;
    all_small = all_small && std::abs(p) < 1e-12;
  }
  return all_large || all_small;
}

ChannelSpec ChannelSpec::zero(ChannelWindow w) {
  ChannelSpec s;
  s.window = w;
  s.variance = MeasureRepr::zero({-w.u_max, w.u_max});
  s.intensity = MeasureRepr::zero({-w.u_max, w.u_max});
  return s;
}

double KernelRealization::y_node(std::size_t ti, std::size_t k) const {
  const auto& d = *data_;
  const std::size_t i = d.at(ti, k);
  if (!view_) return combine(d.drift[i], d.gaussian[i], d.large[i], d.small[i]);
  switch (*view_) {
    case Component::d:
      return d.drift[i];
    case Component::c:
      return d.gaussian[i];
    case Component::j:
      return d.large[i];
    case Component::small:
      return d.small[i];
  }
  return 0.0;
}

double KernelRealization::y_increment(std::size_t ti, std::size_t ka, std::size_t kb) const {
  const auto& d = *data_;
  const std::size_t a = d.at(ti, ka);
  const std::size_t b = d.at(ti, kb);
  const double dd = d.drift[b] - d.drift[a];
  const double dc = d.gaussian[b] - d.gaussian[a];
  const double dj = d.large[b] - d.large[a];
  const double ds = d.small[b] - d.small[a];
  if (!view_) return combine(dd, dc, dj, ds);
  switch (*view_) {
    case Component::d:
      return dd;
    case Component::c:
      return dc;
    case Component::j:
      return dj;
    case Component::small:
      return ds;
  }
  return 0.0;
}

Eigen::MatrixXd correlation_factor(const CorrFn& r, const TimeGrid& tgrid) {
  const auto n = static_cast<Eigen::Index>(tgrid.size());
  Eigen::MatrixXd R(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      R(i, j) = r(tgrid[static_cast<std::size_t>(i)] - tgrid[static_cast<std::size_t>(j)]);
    }
  }
  // LDLT with pivoting copes with the semidefinite (e.g. constant) case.
  Eigen::LDLT<Eigen::MatrixXd> ldlt(R);
  const Eigen::VectorXd d = ldlt.vectorD().cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXd L = ldlt.matrixL();
  Eigen::MatrixXd M = L * d.asDiagonal();
  return ldlt.transpositionsP().transpose() * M;
}

ChannelSampler::ChannelSampler(ChannelSpec spec, TimeGrid tgrid, DelayGrid ugrid)
    : spec_(std::move(spec)), tgrid_(std::move(tgrid)), ugrid_(std::move(ugrid)) {
  spec_.validate();
  const double eps = 1e-12;
  for (double t : tgrid_.nodes()) {
    if (std::abs(t) > spec_.window.t_max + eps) {
      throw WindowError("channel: time grid leaves the channel window");
    }
  }
  if (ugrid_.front() < -spec_.window.u_max - eps || ugrid_.back() > spec_.window.u_max + eps) {
    throw WindowError("channel: delay grid leaves the channel window");
  }
  mc_ = correlation_factor(spec_.rc, tgrid_);
  mj_ = correlation_factor(spec_.rj, tgrid_);
  for (std::size_t k = 0; k + 1 < ugrid_.size(); ++k) {
    cell_alpha_.push_back(spec_.variance.mass(Interval{ugrid_[k], ugrid_[k + 1]}));
  }
  for (double t : tgrid_.nodes()) {
    gain_sqrt_.push_back(std::sqrt(spec_.gain(t)));
    scale_.push_back(spec_.scale(t));
    const SizeDist ft = spec_.sizes_at(t);
    large_mean_.push_back(ft.integrate([](double y) { return y; }, Region::large, spec_.truncation));
    small_mean_.push_back(ft.integrate([](double y) { return y; }, Region::small, spec_.truncation));
  }
  for (double u : ugrid_.nodes()) lambda_node_.push_back(spec_.intensity.cumulative(u));
}

KernelRealization ChannelSampler::sample(RngSeed seed) const {
  const std::size_t nt = tgrid_.size();
  const std::size_t nu = ugrid_.size();
  const std::size_t o = ugrid_.origin();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  auto data = std::make_shared<KernelData>();
  data->tgrid = tgrid_;
  data->ugrid = ugrid_;
  data->truncation = spec_.truncation;
  data->drift.assign(nt * nu, 0.0);
  data->gaussian.assign(nt * nu, 0.0);
  data->large.assign(nt * nu, 0.0);
  data->small.assign(nt * nu, 0.0);

  // Gaussian cells: independent across cells, correlated in time by r_c.
  Eigen::VectorXd xi(static_cast<Eigen::Index>(nt));
  std::vector<double> inc(nt * (nu - 1), 0.0);
  for (std::size_t k = 0; k + 1 < nu; ++k) {
    if (!(cell_alpha_[k] > 0.0)) continue;
    for (std::size_t i = 0; i < nt; ++i) xi[static_cast<Eigen::Index>(i)] = normal(rng);
    const Eigen::VectorXd w = mc_ * xi;
    const double sa = std::sqrt(cell_alpha_[k]);
    for (std::size_t i = 0; i < nt; ++i) {
      inc[i * (nu - 1) + k] = gain_sqrt_[i] * sa * w[static_cast<Eigen::Index>(i)];
    }
  }
  for (std::size_t i = 0; i < nt; ++i) {
    double* g = &data->gaussian[i * nu];
    const double* d = &inc[i * (nu - 1)];
    for (std::size_t k = o; k + 1 < nu; ++k) g[k + 1] = g[k] + d[k];
    for (std::size_t k = o; k > 0; --k) g[k - 1] = g[k] - d[k - 1];
  }

  // Static jump delays; sizes follow a Gaussian copula driven by r_j.
  const Interval range{ugrid_.front(), ugrid_.back()};
  for (const auto& c : spec_.intensity.cells()) {
    const double lo = std::max(c.lo, range.lo);
    const double hi = std::min(c.hi, range.hi);
    if (!(hi > lo) || c.mass <= 0.0) continue;
    std::poisson_distribution<long> poisson(c.mass * (hi - lo) / (c.hi - c.lo));
    const long count = poisson(rng);
    std::uniform_real_distribution<double> where(lo, hi);
    for (long j = 0; j < count; ++j) {
      JumpPath jp;
      jp.delay = where(rng);
      for (std::size_t i = 0; i < nt; ++i) xi[static_cast<Eigen::Index>(i)] = normal(rng);
      const Eigen::VectorXd z = mj_ * xi;
      jp.sizes.resize(nt);
      for (std::size_t i = 0; i < nt; ++i) {
        jp.sizes[i] = scale_[i] * spec_.sizes.from_normal_score(z[static_cast<Eigen::Index>(i)]);
      }
      data->jumps.push_back(std::move(jp));
    }
  }
  std::stable_sort(data->jumps.begin(), data->jumps.end(),
                   [](const JumpPath& a, const JumpPath& b) { return a.delay < b.delay; });

  // Signed jump sums anchored at delay 0, classified per time node.
  const double a = spec_.truncation;
  const auto& J = data->jumps;
  const auto first_pos = static_cast<std::size_t>(
      std::lower_bound(J.begin(), J.end(), 0.0,
                       [](const JumpPath& jp, double v) { return jp.delay < v; }) -
      J.begin());
  for (std::size_t i = 0; i < nt; ++i) {
    double* big = &data->large[i * nu];
    double* sml = &data->small[i * nu];
    double sb = 0.0;
    double ss = 0.0;
    std::size_t p = first_pos;
    for (std::size_t k = o + 1; k < nu; ++k) {
      while (p < J.size() && J[p].delay < ugrid_[k]) {
        const double y = J[p].sizes[i];
        (std::abs(y) >= a ? sb : ss) += y;
        ++p;
      }
      big[k] = sb;
      sml[k] = ss;
    }
    sb = 0.0;
    ss = 0.0;
    std::size_t q = first_pos;
    for (std::size_t k = o; k-- > 0;) {
      while (q > 0 && J[q - 1].delay >= ugrid_[k]) {
        const double y = J[q - 1].sizes[i];
        (std::abs(y) >= a ? sb : ss) += y;
        --q;
      }
      big[k] = -sb;
      sml[k] = -ss;
    }
    for (std::size_t k = 0; k < nu; ++k) {
      data->drift[i * nu + k] = lambda_node_[k] * large_mean_[i];
      sml[k] = sml[k] - lambda_node_[k] * small_mean_[i];
    }
  }
  return KernelRealization(std::move(data));
}

KernelRealization sample_channel(const ChannelSpec& spec, const TimeGrid& tgrid,
                                 const DelayGrid& ugrid, RngSeed seed) {
  return ChannelSampler(spec, tgrid, ugrid).sample(seed);
}

double kernel_increment(const KernelRealization& real, std::size_t ti, Interval cell) {
  if (ti >= real.tgrid().size()) throw WindowError("kernel increment: time index out of range");
  if (!std::isfinite(cell.lo) || !std::isfinite(cell.hi)) {
    throw DomainError("kernel increment: non-finite cell");
  }
  if (cell.empty()) return 0.0;
  const double t = real.tgrid()[ti];
  const auto& ug = real.ugrid();
  const double ya = t - cell.hi;
  const double yb = t - cell.lo;
  const double tol = 1e-9;
  if (ya < ug.front() - tol || yb > ug.back() + tol) {
    throw WindowError("kernel increment: reflected cell leaves the sampled delay grid");
  }
  const auto ka = ug.index_of(ya);
  const auto kb = ug.index_of(yb);
  if (!ka || !kb) throw DomainError("kernel increment: cell edges are not on the delay lattice");
  return real.y_increment(ti, *ka, *kb);
}

ComponentViews component_fields(const KernelRealization& real) {
  return {real.as_view(Component::d), real.as_view(Component::c), real.as_view(Component::j),
          real.as_view(Component::small)};
}

std::complex<double> theoretical_component_cf(const ChannelSpec& spec, Component comp,
                                              const StepSignal& f, double t, double gamma) {
  if (!std::isfinite(gamma) || !std::isfinite(t)) throw DomainError("component cf: non-finite input");
  if (comp == Component::d) {
    throw DomainError("component cf: the deterministic part has no distributional closed form here");
  }
  if (gamma == 0.0) return {1.0, 0.0};
  using namespace std::complex_literals;
  const double a = spec.truncation;
  std::complex<double> expo{0.0, 0.0};
  if (comp == Component::c) {
    const double g = spec.gain(t);
    for (std::size_t k = 0; k < f.cells(); ++k) {
      const auto cell = f.cell(k);
      const double al = spec.variance.mass(Interval{t - cell.hi, t - cell.lo});
      expo += -0.5 * gamma * gamma * f.coeff(k) * f.coeff(k) * g * al;
    }
    return std::exp(expo);
  }
  const SizeDist ft = spec.sizes_at(t);
  for (std::size_t k = 0; k < f.cells(); ++k) {
    const auto cell = f.cell(k);
    const double lam = spec.intensity.mass(Interval{t - cell.hi, t - cell.lo});
    const double c = f.coeff(k);
    if (lam == 0.0 || c == 0.0) continue;
    if (comp == Component::j) {
      expo += lam * ft.integrate_complex(
                        [&](double y) { return std::exp(1i * (gamma * y * c)) - 1.0; },
                        Region::large, a);
    } else {
      expo += lam * ft.integrate_complex(
                        [&](double y) {
                          return std::exp(1i * (gamma * y * c)) - 1.0 - 1i * (gamma * y * c);
                        },
                        Region::small, a);
    }
  }
  return std::exp(expo);
}

}  // namespace sio
