#ifndef SIO_STEP_SIGNAL_HPP_
#define SIO_STEP_SIGNAL_HPP_

#include <complex>
#include <vector>

#include "sio/measure_repr.hpp"

namespace sio {

// Piecewise-constant probe: value coeffs[k] on [breakpoints[k], breakpoints[k+1]),
// zero outside [breakpoints.front(), breakpoints.back()).
class StepSignal {
 public:
  struct Jump {
    double point;
    double size;  // f(point+) - f(point-)
  };

  StepSignal() = default;
  StepSignal(std::vector<double> breakpoints, std::vector<double> coeffs);

  static StepSignal indicator(double lo, double hi, double value = 1.0);
  // The zero signal, represented on a single cell so it stays a valid probe.
  static StepSignal zero(double lo = 0.0, double hi = 1.0) { return indicator(lo, hi, 0.0); }

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  std::size_t cells() const { return coeffs_.size(); }
  Interval cell(std::size_t k) const { return {breakpoints_[k], breakpoints_[k + 1]}; }
  double coeff(std::size_t k) const { return coeffs_[k]; }

  double operator()(double u) const;
  Interval support() const { return {breakpoints_.front(), breakpoints_.back()}; }
  double shortest_cell() const;
  bool is_zero() const;

  // g(u) = f(t - u), with left-closed cells restored.
  StepSignal reflected(double t) const;
  StepSignal shifted(double tau) const;
  StepSignal scaled(double factor) const;

  // Closed-form transform  \int f(u) e^{-2 pi i u xi} du.
  std::complex<double> fourier(double xi) const;
  // Nonzero jumps of f including the two outer edges.
  std::vector<Jump> jumps() const;
  double l2_squared() const;

  friend StepSignal operator+(const StepSignal& a, const StepSignal& b);

 private:
  std::vector<double> breakpoints_;
  std::vector<double> coeffs_;
};

// True when the open supports of the nonzero parts of f and g do not meet.
bool disjoint_support(const StepSignal& f, const StepSignal& g);

}  // namespace sio

#endif  // SIO_STEP_SIGNAL_HPP_
