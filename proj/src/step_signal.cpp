#include "sio/step_signal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sio/errors.hpp"

namespace sio {

StepSignal::StepSignal(std::vector<double> breakpoints, std::vector<double> coeffs)
    : breakpoints_(std::move(breakpoints)), coeffs_(std::move(coeffs)) {
  if (coeffs_.empty() || breakpoints_.size() != coeffs_.size() + 1) {
    throw DomainError("step signal: need n >= 1 coefficients and n+1 breakpoints");
  }
  for (std::size_t k = 0; k < breakpoints_.size(); ++k) {
    if (!std::isfinite(breakpoints_[k])) throw DomainError("step signal: non-finite breakpoint");
    if (k > 0 && !(breakpoints_[k - 1] < breakpoints_[k])) {
      throw DomainError("step signal: breakpoints must increase strictly");
    }
  }
  for (double c : coeffs_) {
    if (!std::isfinite(c)) throw DomainError("step signal: non-finite coefficient");
  }
}

StepSignal StepSignal::indicator(double lo, double hi, double value) {
  return StepSignal({lo, hi}, {value});
}

double StepSignal::operator()(double u) const {
  if (u < breakpoints_.front() || u >= breakpoints_.back()) return 0.0;
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), u);
  return coeffs_[static_cast<std::size_t>(it - breakpoints_.begin()) - 1];
}

double StepSignal::shortest_cell() const {
  double w = breakpoints_[1] - breakpoints_[0];
  for (std::size_t k = 1; k < coeffs_.size(); ++k) {
    w = std::min(w, breakpoints_[k + 1] - breakpoints_[k]);
  }
  return w;
}

bool StepSignal::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](double c) { return c == 0.0; });
}

StepSignal StepSignal::reflected(double t) const {
  std::vector<double> bp(breakpoints_.size());
  std::vector<double> cf(coeffs_.size());
  for (std::size_t k = 0; k < bp.size(); ++k) bp[k] = t - breakpoints_[bp.size() - 1 - k];
  for (std::size_t k = 0; k < cf.size(); ++k) cf[k] = coeffs_[cf.size() - 1 - k];
  return StepSignal(std::move(bp), std::move(cf));
}

StepSignal StepSignal::shifted(double tau) const {
  std::vector<double> bp = breakpoints_;
  for (auto& b : bp) b += tau;
  return StepSignal(std::move(bp), coeffs_);
}

StepSignal StepSignal::scaled(double factor) const {
  std::vector<double> cf = coeffs_;
  for (auto& c : cf) c *= factor;
  return StepSignal(breakpoints_, std::move(cf));
}

std::complex<double> StepSignal::fourier(double xi) const {
  using std::numbers::pi;
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    const double a = breakpoints_[k];
    const double b = breakpoints_[k + 1];
    const double w = b - a;
    const double x = pi * w * xi;
    const double sinc = (std::abs(x) < 1e-8) ? 1.0 - x * x / 6.0 : std::sin(x) / x;
    const double phase = -pi * (a + b) * xi;
    acc += coeffs_[k] * w * sinc * std::complex<double>(std::cos(phase), std::sin(phase));
  }
  return acc;
}

std::vector<StepSignal::Jump> StepSignal::jumps() const {
  std::vector<Jump> out;
  double left = 0.0;
  for (std::size_t k = 0; k < breakpoints_.size(); ++k) {
    const double right = k < coeffs_.size() ? coeffs_[k] : 0.0;
    if (right != left) out.push_back({breakpoints_[k], right - left});
    left = right;
  }
  return out;
}

double StepSignal::l2_squared() const {
  double s = 0.0;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    s += coeffs_[k] * coeffs_[k] * (breakpoints_[k + 1] - breakpoints_[k]);
  }
  return s;
}

StepSignal operator+(const StepSignal& a, const StepSignal& b) {
  std::vector<double> edges = a.breakpoints_;
  edges.insert(edges.end(), b.breakpoints_.begin(), b.breakpoints_.end());
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  std::vector<double> cf;
  cf.reserve(edges.size() - 1);
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) cf.push_back(a(edges[k]) + b(edges[k]));
  return StepSignal(std::move(edges), std::move(cf));
}

bool disjoint_support(const StepSignal& f, const StepSignal& g) {
  for (std::size_t i = 0; i < f.cells(); ++i) {
    if (f.coeff(i) == 0.0) continue;
    const auto ci = f.cell(i);
    for (std::size_t j = 0; j < g.cells(); ++j) {
      if (g.coeff(j) == 0.0) continue;
      const auto cj = g.cell(j);
      if (std::max(ci.lo, cj.lo) < std::min(ci.hi, cj.hi)) return false;
    }
  }
  return true;
}

}  // namespace sio
