#include "sio/size_dist.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/erf.hpp>

#include "sio/errors.hpp"

namespace sio {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Normal-score integrals are cut here; the neglected mass is below 1e-16.
constexpr double kScoreCut = 8.5;

template <unsigned N, class T, class Fn>
T gl_panel(const Fn& f, double a, double b) {
  using Rule = boost::math::quadrature::gauss<double, N>;
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  const auto& x = Rule::abscissa();
  const auto& w = Rule::weights();
  T acc{};
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) {
      acc += w[i] * f(mid);
    } else {
      acc += w[i] * (f(mid - half * x[i]) + f(mid + half * x[i]));
    }
  }
  return acc * half;
}

template <unsigned N, class T, class Fn>
T gl_composite(const Fn& f, double a, double b, double max_width) {
  if (!(b > a)) return T{};
  const auto panels = static_cast<std::size_t>(std::ceil((b - a) / max_width));
  const double h = (b - a) / static_cast<double>(panels);
  T acc{};
  for (std::size_t k = 0; k < panels; ++k) {
    const double lo = a + h * static_cast<double>(k);
    const double hi = (k + 1 == panels) ? b : lo + h;
    acc += gl_panel<N, T>(f, lo, hi);
  }
  return acc;
}

// Phi(b) - Phi(a) without cancellation in the upper tail.
double normal_mass(double a, double b) {
  if (!(b > a)) return 0.0;
  if (a > 0.0) {
    return 0.5 * (std::erfc(a / std::numbers::sqrt2) - std::erfc(b / std::numbers::sqrt2));
  }
  return normal_cdf(b) - normal_cdf(a);
}

double z_of(double p) {
  if (p <= 0.0) return -kInf;
  if (p >= 1.0) return kInf;
  return normal_quantile(p);
}

}  // namespace

bool in_region(double y, Region r, double a) {
  switch (r) {
    case Region::all:
      return true;
    case Region::large:
      return std::abs(y) >= a;
    case Region::small:
      return std::abs(y) < a;
  }
  return false;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("normal quantile: p must lie in (0,1)");
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

SizeDist SizeDist::point(double y) { return mixture({y}, {1.0}); }

SizeDist SizeDist::mixture(std::vector<double> points, std::vector<double> weights) {
  if (points.empty() || points.size() != weights.size()) {
    throw DomainError("size law: mixture needs matching, non-empty points and weights");
  }
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto i, auto j) { return points[i] < points[j]; });
  SizeDist d;
  d.kind_ = points.size() == 1 ? Kind::point : Kind::mixture;
  double total = 0.0;
  for (auto i : order) {
    if (!std::isfinite(points[i]) || points[i] == 0.0) {
      throw DomainError("size law: atoms must be finite and nonzero");
    }
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i])) {
      throw DomainError("size law: mixture weights must be positive");
    }
    if (!d.points_.empty() && d.points_.back() == points[i]) {
      d.weights_.back() += weights[i];
    } else {
      d.points_.push_back(points[i]);
      d.weights_.push_back(weights[i]);
    }
    total += weights[i];
  }
  if (std::abs(total - 1.0) > 1e-9) throw DomainError("size law: weights must sum to 1");
  for (auto& w : d.weights_) w /= total;
  if (d.points_.size() == 1) d.kind_ = Kind::point;
  double cum = 0.0;
  for (std::size_t k = 0; k < d.weights_.size(); ++k) {
    cum += d.weights_[k];
    d.score_breaks_.push_back(k + 1 == d.weights_.size() ? kInf : z_of(cum));
  }
  return d;
}

SizeDist SizeDist::uniform(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw DomainError("size law: uniform needs lo < hi");
  }
  SizeDist d;
  d.kind_ = Kind::uniform;
  d.lo_ = lo;
  d.hi_ = hi;
  return d;
}

SizeDist SizeDist::gaussian(double mean, double sd) {
  if (!std::isfinite(mean) || !std::isfinite(sd) || !(sd > 0.0)) {
    throw DomainError("size law: gaussian needs a positive standard deviation");
  }
  SizeDist d;
  d.kind_ = Kind::gaussian;
  d.mean_ = mean;
  d.sd_ = sd;
  return d;
}

template <class T>
T SizeDist::integrate_impl(const std::function<T(double)>& g, Region r, double a,
                           const std::vector<double>& breaks) const {
  if (kind_ == Kind::point || kind_ == Kind::mixture) {
    T acc{};
    for (std::size_t k = 0; k < points_.size(); ++k) {
      if (in_region(points_[k], r, a)) acc += weights_[k] * g(points_[k]);
    }
    return acc;
  }
  double lo, hi, width;
  std::function<double(double)> density;
  if (kind_ == Kind::uniform) {
    lo = lo_;
    hi = hi_;
    width = 1.0;
    const double dens = 1.0 / (hi_ - lo_);
    density = [dens](double) { return dens; };
  } else {
    lo = mean_ - 10.0 * sd_;
    hi = mean_ + 10.0 * sd_;
    width = std::min(0.5 * sd_, 1.0);
    density = [m = mean_, s = sd_](double y) { return normal_pdf((y - m) / s) / s; };
  }
  std::vector<double> edges{lo};
  for (double e : {-a, a}) {
    if (a > 0.0 && e > lo && e < hi) edges.push_back(e);
  }
  for (double e : breaks) {
    if (e > lo && e < hi) edges.push_back(e);
  }
  edges.push_back(hi);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  T acc{};
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    const double mid = 0.5 * (edges[k] + edges[k + 1]);
    if (!in_region(mid, r, a)) continue;
    acc += gl_composite<64, T>([&](double y) { return density(y) * g(y); }, edges[k],
                               edges[k + 1], width);
  }
  return acc;
}

double SizeDist::integrate(const std::function<double(double)>& g, Region r, double a) const {
  return integrate_impl<double>(g, r, a);
}

std::complex<double> SizeDist::integrate_complex(
    const std::function<std::complex<double>(double)>& g, Region r, double a) const {
  return integrate_impl<std::complex<double>>(g, r, a);
}

double SizeDist::integrate_split(const std::function<double(double)>& g,
                                 const std::vector<double>& breaks) const {
  return integrate_impl<double>(g, Region::all, 0.0, breaks);
}

double SizeDist::probability(Region r, double a) const {
  return integrate([](double) { return 1.0; }, r, a);
}

double SizeDist::moment(int k, Region r, double a) const {
  return integrate([k](double y) { return std::pow(y, k); }, r, a);
}

double SizeDist::from_normal_score(double z) const {
  switch (kind_) {
    case Kind::point:
      return points_.front();
    case Kind::mixture: {
      for (std::size_t k = 0; k < points_.size(); ++k) {
        if (z < score_breaks_[k]) return points_[k];
      }
      return points_.back();
    }
    case Kind::uniform:
      return lo_ + (hi_ - lo_) * normal_cdf(z);
    case Kind::gaussian:
      return mean_ + sd_ * z;
  }
  return 0.0;
}

std::vector<SizeDist::ScorePiece> SizeDist::score_pieces(Region r, double a) const {
  std::vector<ScorePiece> out;
  if (kind_ == Kind::point || kind_ == Kind::mixture) {
    double zlo = -kInf;
    for (std::size_t k = 0; k < points_.size(); ++k) {
      if (in_region(points_[k], r, a)) out.push_back({zlo, score_breaks_[k], true, points_[k]});
      zlo = score_breaks_[k];
    }
    return out;
  }
  // Score thresholds at which the continuous branch crosses -a and a.
  double zm, zp;
  if (kind_ == Kind::uniform) {
    zm = z_of((-a - lo_) / (hi_ - lo_));
    zp = z_of((a - lo_) / (hi_ - lo_));
  } else {
    zm = (-a - mean_) / sd_;
    zp = (a - mean_) / sd_;
  }
  switch (r) {
    case Region::all:
      out.push_back({-kInf, kInf, false, 0.0});
      break;
    case Region::large:
      if (zm > -kInf) out.push_back({-kInf, zm, false, 0.0});
      if (zp < kInf) out.push_back({zp, kInf, false, 0.0});
      break;
    case Region::small:
      if (zp > zm) out.push_back({zm, zp, false, 0.0});
      break;
  }
  return out;
}

SizeDist SizeDist::scaled(double kappa) const {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    throw DomainError("size law: scale factor must be positive");
  }
  switch (kind_) {
    case Kind::point:
    case Kind::mixture: {
      std::vector<double> pts = points_;
      for (auto& p : pts) p *= kappa;
      return mixture(std::move(pts), weights_);
    }
    case Kind::uniform:
      return uniform(kappa * lo_, kappa * hi_);
    case Kind::gaussian:
      return gaussian(kappa * mean_, kappa * sd_);
  }
  return *this;
}

double copula_cross_moment(const SizeDist& f, double rho, Region r1, double a1, Region r2,
                           double a2) {
  if (!(rho >= -1.0 && rho <= 1.0)) throw DomainError("copula: correlation outside [-1,1]");
  if (rho >= 1.0 - 1e-14) {
    return f.integrate_split(
        [&](double y) { return in_region(y, r1, a1) && in_region(y, r2, a2) ? y * y : 0.0; },
        {-a1, a1, -a2, a2});
  }
  if (rho == 0.0) {
    const auto m1 = f.integrate([](double y) { return y; }, r1, a1);
    const auto m2 = f.integrate([](double y) { return y; }, r2, a2);
    return m1 * m2;
  }
  const auto p1 = f.score_pieces(r1, a1);
  const auto p2 = f.score_pieces(r2, a2);
  const double s = std::sqrt(1.0 - rho * rho);
  const auto kind = f.kind();

  auto value = [&](const SizeDist::ScorePiece& p, double z) {
    return p.constant ? p.value : f.from_normal_score(z);
  };

  // E[h(rho z1 + s W) 1{z2 in piece}] for fixed z1.
  auto inner = [&](const SizeDist::ScorePiece& p, double z1) -> double {
    const double lo = (p.zlo - rho * z1) / s;
    const double hi = (p.zhi - rho * z1) / s;
    if (p.constant) return p.value * normal_mass(lo, hi);
    if (kind == SizeDist::Kind::gaussian) {
      const double m = f.mean_param();
      const double sd = f.sd_param();
      const double pa = std::isfinite(lo) ? normal_pdf(lo) : 0.0;
      const double pb = std::isfinite(hi) ? normal_pdf(hi) : 0.0;
      return (m + sd * rho * z1) * normal_mass(lo, hi) + sd * s * (pa - pb);
    }
    const double wlo = std::max(lo, -kScoreCut);
    const double whi = std::min(hi, kScoreCut);
    return gl_composite<32, double>(
        [&](double w) { return normal_pdf(w) * f.from_normal_score(rho * z1 + s * w); }, wlo,
        whi, 1.0);
  };

  double acc = 0.0;
  for (const auto& a1 : p1) {
    const double zlo = std::max(a1.zlo, -kScoreCut);
    const double zhi = std::min(a1.zhi, kScoreCut);
    if (!(zhi > zlo)) continue;
    for (const auto& a2 : p2) {
      acc += gl_composite<32, double>(
          [&](double z1) { return normal_pdf(z1) * value(a1, z1) * inner(a2, z1); }, zlo, zhi,
          1.0);
    }
  }
  return acc;
}

}  // namespace sio
