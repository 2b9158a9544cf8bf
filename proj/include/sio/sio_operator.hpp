#ifndef SIO_SIO_OPERATOR_HPP_
#define SIO_SIO_OPERATOR_HPP_

#include <complex>
#include <vector>

#include "sio/channel_model.hpp"
#include "sio/step_signal.hpp"

namespace sio {

// Hf(t) = sum_k c_k (X(t, x_k) - X(t, x_{k-1})), ascending in k.
double apply_kernel(const KernelRealization& real, const StepSignal& f, double t);
// \int f(t-u) Y(t, du) summed over the cells of the reflected signal. Uses the
// same increments in the same order as apply_kernel, so the two agree exactly.
double apply_impulse(const KernelRealization& real, const StepSignal& f, double t);
// \int g(u) Y(t, du), ascending in the cells of g.
double integrate_impulse(const KernelRealization& real, const StepSignal& g, double t);

// Uniform frequency nodes symmetric about 0 and, once built, symbol values.
// For the Kohn-Nirenberg path there is one row (the time t); for the
// spreading path one row per delay node.
struct SymbolGrid {
  std::vector<double> freq;
  double half_width_T = 0.0;
  std::size_t rows = 0;
  std::vector<std::complex<double>> values;  // [row * freq.size() + m]

  double spacing() const { return freq.size() > 1 ? freq[1] - freq[0] : 0.0; }
  double span() const { return freq.empty() ? 0.0 : freq.back(); }
};

SymbolGrid frequency_grid(double xi_max, std::size_t n, double T);
// Default: span +-32/w with w the shortest cell of f, at least 4096 nodes, and
// spacing at most 1/(8T) so that the periodized integrand does not alias.
SymbolGrid default_frequency_grid(const StepSignal& f, double T);

struct KnSymbol {
  SymbolGrid grid;
  double t = 0.0;
  std::vector<double> points;  // delays of the point masses of Y(t, du) on [-T, T)
  std::vector<double> masses;
};

// sigma_T(t, xi) = \int_{-T}^{T} e^{-2 pi i u xi} Y(t, du). Gaussian, drift and
// compensator increments of a delay cell sit at the cell midpoint; jumps sit
// at their own delays.
KnSymbol build_kohn_nirenberg_symbol(const KernelRealization& real, double t, SymbolGrid grid);

struct KnResult {
  double value = 0.0;       // trapezoid plus analytic tail
  double trapezoid = 0.0;   // trapezoid over the grid only
  double tail = 0.0;        // \int_{|xi| > span} of the integrand, exact
  double tail_mass = 0.0;   // fraction of \int |f^|^2 outside the grid
};

// \int e^{2 pi i t xi} f^(xi) sigma_T(t, xi) d xi. Throws AccuracyError when the
// grid misses more than `max_tail_mass` of the spectral energy of f or when
// the spacing would alias.
KnResult kohn_nirenberg_apply(const KernelRealization& real, const StepSignal& f, double t,
                              const SymbolGrid& grid, double max_tail_mass = 0.05);
KnResult kohn_nirenberg_apply(const KnSymbol& sigma, const StepSignal& f,
                              double max_tail_mass = 0.05);

// eta_T(u, gamma) = \int_{-T}^{T} e^{-2 pi i t gamma} Y(t, u) dt by the trapezoid
// rule over time nodes in [-T, T], tabulated on one period of gamma.
SymbolGrid build_spreading_symbol(const KernelRealization& real, double T);

// 1_{[-T,T]}(t) \iint e^{2 pi i t gamma} f(t-u) eta_T(du, gamma) d gamma.
double spreading_apply(const KernelRealization& real, const StepSignal& f, double t,
                       const SymbolGrid& eta);

}  // namespace sio

#endif  // SIO_SIO_OPERATOR_HPP_
