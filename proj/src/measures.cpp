#include "sio/measures.hpp"

#include <cmath>
#include <numbers>

#include "sio/errors.hpp"

namespace sio {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::complex<double> cis(double phase) { return {std::cos(phase), std::sin(phase)}; }

// Second-moment parts of Y(t, B) for a delay set B of the impulse response.
MuParts y_moment_parts(const ChannelSpec& spec, double t, const CellUnion& b) {
  MuParts p;
  const double a = spec.truncation;
  p.c = spec.gain(t) * spec.variance.mass(b);
  const double lam = spec.intensity.mass(b);
  if (lam != 0.0) {
    const SizeDist ft = spec.sizes_at(t);
    p.j = lam * ft.integrate([](double y) { return y * y; }, Region::large, a);
    p.small = lam * ft.integrate([](double y) { return y * y; }, Region::small, a);
  }
  p.total = (p.c + p.j) + p.small;
  return p;
}

std::size_t lattice_index(const DelayGrid& ug, double v) {
  if (v < ug.front() - 1e-9 || v > ug.back() + 1e-9) {
    throw WindowError("measures: delay set leaves the sampled grid");
  }
  const auto k = ug.index_of(v);
  if (!k) throw DomainError("measures: delay set edges are not on the delay lattice");
  return *k;
}

std::size_t time_node(const TimeGrid& tg, double t) {
  const auto i = tg.index_of(t);
  if (!i) throw DomainError("measures: time is not a node of the time grid");
  return *i;
}

struct AxisNodes {
  std::size_t n_t;
  double h_t;
  std::size_t n_s;
  double h_s;
  bool matched;  // both axes share one spacing
};

AxisNodes axis_nodes(double S, double T, std::size_t quad_nodes) {
  if (quad_nodes < 64) throw DomainError("scattering: need at least 64 nodes per axis");
  if (!(S > 0.0) || !(T > 0.0)) throw DomainError("scattering: windows must be positive");
  AxisNodes ax{};
  ax.n_t = quad_nodes;
  ax.h_t = 2.0 * T / static_cast<double>(quad_nodes - 1);
  const double ratio = 2.0 * S / ax.h_t;
  const double r = std::round(ratio);
  if (r >= 1.0 && std::abs(ratio - r) < 1e-9 * std::max(1.0, ratio)) {
    ax.n_s = static_cast<std::size_t>(r) + 1;
    ax.h_s = ax.h_t;
    ax.matched = true;
  } else {
    ax.n_s = quad_nodes;
    ax.h_s = 2.0 * S / static_cast<double>(quad_nodes - 1);
    ax.matched = false;
  }
  return ax;
}

double trap_weight(std::size_t i, std::size_t n, double h) {
  return (i == 0 || i + 1 == n) ? 0.5 * h : h;
}

}  // namespace

MuParts mu_closed_form(const ChannelSpec& spec, double t, const CellUnion& b) {
  return y_moment_parts(spec, t, b.reflected(t));
}

MeasureRepr mu_measure(const ChannelSpec& spec, double t) {
  const SizeDist ft = spec.sizes_at(t);
  const double ey2 = ft.integrate([](double y) { return y * y; });
  const MeasureRepr y_moment = spec.variance.scaled(spec.gain(t)) + spec.intensity.scaled(ey2);
  return y_moment.reflected(t);
}

RhoModel::RhoModel(ChannelSpec spec) : spec_(std::move(spec)) { spec_.validate(); }

double RhoModel::copula(double r, Region r1, double a1, Region r2, double a2) const {
  const auto key = std::make_tuple(r, static_cast<int>(r1), a1, static_cast<int>(r2), a2);
  {
    std::lock_guard<std::mutex> lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  double v;
  if (spec_.sizes.kind() == SizeDist::Kind::point) {
    // q_F is constant, so the copula plays no role.
    const double y = spec_.sizes.points().front();
    v = (in_region(y, r1, a1) && in_region(y, r2, a2)) ? y * y : 0.0;
  } else {
    v = copula_cross_moment(spec_.sizes, r, r1, a1, r2, a2);
  }
  std::lock_guard<std::mutex> lock(mutex_);
  cache_.emplace(key, v);
  return v;
}

RhoParts RhoModel::operator()(double s, double t, const CellUnion& b) const {
  RhoParts p;
  if (s == t) {
    const MuParts m = y_moment_parts(spec_, t, b);
    p.c = m.c;
    p.j = m.j;
    p.small = m.small;
    p.total = m.total;
    return p;
  }
  const double tau = t - s;
  p.c = spec_.rc(tau) * std::sqrt(spec_.gain(s) * spec_.gain(t)) * spec_.variance.mass(b);
  const double lam = spec_.intensity.mass(b);
  if (lam != 0.0) {
    const double r = spec_.rj(tau);
    const double ks = spec_.scale(s);
    const double kt = spec_.scale(t);
    const double at = spec_.truncation / kt;
    const double as = spec_.truncation / ks;
    const double w = lam * ks * kt;
    p.j = w * copula(r, Region::large, at, Region::large, as);
    p.small = w * copula(r, Region::small, at, Region::small, as);
    p.mixing = w * (copula(r, Region::large, at, Region::small, as) +
                    copula(r, Region::small, at, Region::large, as));
  }
  p.total = ((p.c + p.j) + p.small) + p.mixing;
  return p;
}

RhoParts rho_closed_form(const ChannelSpec& spec, double s, double t, const CellUnion& b) {
  return RhoModel(spec)(s, t, b);
}

Estimate mu_empirical(const RealizationSet& reals, double t, const CellUnion& b) {
  const std::size_t ti = time_node(reals.sampler.tgrid(), t);
  auto sq = parallel_map(
      reals.n,
      [&](std::size_t i) {
        const KernelRealization real = reals[i];
        double v = 0.0;
        for (const auto& piece : b.intervals()) v += kernel_increment(real, ti, piece);
        return v * v;
      },
      reals.workers);
  if (sq.empty()) return {};
  return mean_estimate(sq);
}

RhoEstimate rho_empirical(const RealizationSet& reals, double s, double t, const CellUnion& b) {
  const auto& tg = reals.sampler.tgrid();
  const auto& ug = reals.sampler.ugrid();
  const std::size_t ti = time_node(tg, t);
  const std::size_t si = time_node(tg, s);
  std::vector<std::pair<std::size_t, std::size_t>> pieces;
  for (const auto& piece : b.intervals()) {
    pieces.emplace_back(lattice_index(ug, piece.lo), lattice_index(ug, piece.hi));
  }
  struct Row {
    double direct = 0.0;
    double polar = 0.0;
  };
  auto rows = parallel_map(
      reals.n,
      [&](std::size_t i) {
        const KernelRealization real = reals[i];
        Row r;
        double yt = 0.0;
        double ys = 0.0;
        for (const auto& [ka, kb] : pieces) {
          yt += real.y_increment(ti, ka, kb);
          ys += real.y_increment(si, ka, kb);
          for (std::size_t k = ka; k < kb; ++k) {
            const double ct = real.y_increment(ti, k, k + 1);
            const double cs = real.y_increment(si, k, k + 1);
            r.polar += 0.5 * ((ct + cs) * (ct + cs) - ct * ct - cs * cs);
          }
        }
        r.direct = yt * ys;
        return r;
      },
      reals.workers);
  std::vector<double> d(rows.size()), p(rows.size()), diff(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    d[i] = rows[i].direct;
    p[i] = rows[i].polar;
    diff[i] = d[i] - p[i];
  }
  if (rows.empty()) return {};
  return {mean_estimate(d), mean_estimate(p), mean_estimate(diff)};
}

ScatteringEval scattering_eval_direct(const RhoProvider& rho, double gamma, double gamma_tilde,
                                      const CellUnion& b, double S, double T,
                                      std::size_t quad_nodes) {
  const AxisNodes ax = axis_nodes(S, T, quad_nodes);
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t i = 0; i < ax.n_s; ++i) {
    const double s = -S + static_cast<double>(i) * ax.h_s;
    const double ws = trap_weight(i, ax.n_s, ax.h_s);
    for (std::size_t j = 0; j < ax.n_t; ++j) {
      const double t = -T + static_cast<double>(j) * ax.h_t;
      const double wt = trap_weight(j, ax.n_t, ax.h_t);
      acc += ws * wt * cis(kTwoPi * (s * gamma_tilde - t * gamma)) * rho.rho(s, t, b);
    }
  }
  return {gamma, gamma_tilde, S, T, b, acc};
}

ScatteringEval scattering_eval_stationary(const RhoProvider& rho, double gamma,
                                          double gamma_tilde, const CellUnion& b, double S,
                                          double T, std::size_t quad_nodes) {
  if (!rho.stationary) throw DomainError("scattering: provider has no stationary form");
  const AxisNodes ax = axis_nodes(S, T, quad_nodes);
  if (!ax.matched) throw DomainError("scattering: 2S must be a multiple of the t spacing");
  const double h = ax.h_t;
  const auto ns = static_cast<long>(ax.n_s);
  const auto nt = static_cast<long>(ax.n_t);
  const double delta = gamma_tilde - gamma;
  const std::complex<double> z = cis(kTwoPi * h * delta);
  const bool flat = std::abs(1.0 - z) < 1e-6;
  auto zpow = [&](long i) { return cis(kTwoPi * h * delta * static_cast<double>(i)); };
  auto wgt = [&](long i, long n) { return (i == 0 || i == n - 1) ? 0.5 * h : h; };

  std::complex<double> acc{0.0, 0.0};
  for (long d = -(ns - 1); d <= nt - 1; ++d) {
    const long i0 = std::max(0L, -d);
    const long i1 = std::min(ns - 1, nt - 1 - d);
    if (i1 < i0) continue;
    std::complex<double> geo{0.0, 0.0};
    if (flat) {
      for (long i = i0; i <= i1; ++i) geo += zpow(i);
    } else {
      geo = (zpow(i0) - zpow(i1 + 1)) / (1.0 - z);
    }
    std::complex<double> inner = h * h * geo;
    // Half weights at the four possible endpoints of this diagonal.
    long special[4] = {0, ns - 1, -d, nt - 1 - d};
    std::sort(std::begin(special), std::end(special));
    for (long k = 0; k < 4; ++k) {
      const long i = special[k];
      if (i < i0 || i > i1 || (k > 0 && special[k - 1] == i)) continue;
      inner += (wgt(i, ns) * wgt(i + d, nt) - h * h) * zpow(i);
    }
    const double tau = (S - T) + static_cast<double>(d) * h;
    acc += rho.stationary(tau, b) * cis(-kTwoPi * (tau * gamma + S * delta)) * inner;
  }
  return {gamma, gamma_tilde, S, T, b, acc};
}

ScatteringEval scattering_eval(const RhoProvider& rho, double gamma, double gamma_tilde,
                               const CellUnion& b, double S, double T, std::size_t quad_nodes) {
  if (rho.stationary && axis_nodes(S, T, quad_nodes).matched) {
    return scattering_eval_stationary(rho, gamma, gamma_tilde, b, S, T, quad_nodes);
  }
  return scattering_eval_direct(rho, gamma, gamma_tilde, b, S, T, quad_nodes);
}

MeasureRepr convolve_measures(const MeasureRepr& mu, const MeasureRepr& nu) {
  for (const auto& c : nu.cells()) {
    if (c.mass != 0.0) {
      throw UnsupportedRepresentation("convolution: the second measure must be atomic");
    }
  }
  if (nu.is_signed()) throw UnsupportedRepresentation("convolution: atomic measure must be positive");
  if (nu.atoms().empty()) return MeasureRepr::zero(mu.window());
  std::optional<MeasureRepr> acc;
  for (const auto& a : nu.atoms()) {
    MeasureRepr part = mu.shifted(a.point).scaled(a.mass);
    acc = acc ? *acc + part : part;
  }
  return *acc;
}

double weighted_l2(const StepSignal& f, const MeasureRepr& m) {
  double s = 0.0;
  for (std::size_t k = 0; k < f.cells(); ++k) {
    const double c = f.coeff(k);
    if (c == 0.0) continue;
    s += c * c * m.mass(f.cell(k));
  }
  return s;
}

}  // namespace sio
