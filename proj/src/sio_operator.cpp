#include "sio/sio_operator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <gsl/gsl_sf_expint.h>

#include "sio/errors.hpp"

namespace sio {

namespace {

constexpr double kTol = 1e-9;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::size_t time_index(const KernelRealization& real, double t) {
  const auto ti = real.tgrid().index_of(t);
  if (!ti) throw DomainError("operator: t is not a node of the time grid");
  return *ti;
}

std::size_t delay_index(const KernelRealization& real, double v) {
  const auto& ug = real.ugrid();
  if (v < ug.front() - kTol || v > ug.back() + kTol) {
    throw WindowError("operator: reflected support leaves the sampled delay grid");
  }
  const auto k = ug.index_of(v);
  if (!k) throw DomainError("operator: signal breakpoints are not on the delay lattice");
  return *k;
}

bool jump_in_view(const KernelRealization& real, double y) {
  const auto v = real.view();
  if (!v) return true;
  const double a = real.data().truncation;
  switch (*v) {
    case Component::j:
      return std::abs(y) >= a;
    case Component::small:
      return std::abs(y) < a;
    default:
      return false;
  }
}

std::complex<double> cis(double phase) { return {std::cos(phase), std::sin(phase)}; }

}  // namespace

double apply_kernel(const KernelRealization& real, const StepSignal& f, double t) {
  const std::size_t ti = time_index(real, t);
  double acc = 0.0;
  for (std::size_t k = 0; k < f.cells(); ++k) {
    acc += f.coeff(k) * kernel_increment(real, ti, f.cell(k));
  }
  return acc;
}

double apply_impulse(const KernelRealization& real, const StepSignal& f, double t) {
  const std::size_t ti = time_index(real, t);
  const StepSignal g = f.reflected(t);
  // Cell j of g is cell (n-1-j) of f; walking j downwards keeps f's order.
  double acc = 0.0;
  for (std::size_t j = g.cells(); j-- > 0;) {
    const auto cell = g.cell(j);
    const double inc = real.y_increment(ti, delay_index(real, cell.lo), delay_index(real, cell.hi));
    acc += g.coeff(j) * inc;
  }
  return acc;
}

double integrate_impulse(const KernelRealization& real, const StepSignal& g, double t) {
  const std::size_t ti = time_index(real, t);
  double acc = 0.0;
  for (std::size_t j = 0; j < g.cells(); ++j) {
    const auto cell = g.cell(j);
    acc += g.coeff(j) *
           real.y_increment(ti, delay_index(real, cell.lo), delay_index(real, cell.hi));
  }
  return acc;
}

SymbolGrid frequency_grid(double xi_max, std::size_t n, double T) {
  if (!(xi_max > 0.0) || n < 3 || !(T > 0.0)) {
    throw DomainError("frequency grid: need xi_max > 0, T > 0 and at least 3 nodes");
  }
  if (n % 2 == 0) ++n;
  SymbolGrid g;
  g.half_width_T = T;
  g.freq.resize(n);
  const std::size_t c = n / 2;
  const double h = xi_max / static_cast<double>(c);
  for (std::size_t m = 0; m < n; ++m) {
    g.freq[m] = (static_cast<double>(m) - static_cast<double>(c)) * h;
  }
  return g;
}

SymbolGrid default_frequency_grid(const StepSignal& f, double T) {
  const double xi_max = 32.0 / f.shortest_cell();
  const double need = std::ceil(2.0 * xi_max * 8.0 * T) + 1.0;
  const auto n = static_cast<std::size_t>(std::max(4096.0, need));
  return frequency_grid(xi_max, n, T);
}

KnSymbol build_kohn_nirenberg_symbol(const KernelRealization& real, double t, SymbolGrid grid) {
  const std::size_t ti = time_index(real, t);
  const double T = grid.half_width_T;
  const auto& ug = real.ugrid();
  if (ug.front() > -T + kTol || ug.back() < T - kTol) {
    throw WindowError("kohn-nirenberg: delay grid does not cover [-T, T]");
  }
  KnSymbol s;
  s.t = t;
  const auto& jumps = real.data().jumps;
  for (std::size_t k = 0; k + 1 < ug.size(); ++k) {
    const double lo = ug[k];
    const double hi = ug[k + 1];
    if (lo < -T - kTol || hi > T + kTol) continue;
    double m = real.y_increment(ti, k, k + 1);
    for (const auto& jp : jumps) {
      if (jp.delay >= lo && jp.delay < hi && jump_in_view(real, jp.sizes[ti])) {
        m -= jp.sizes[ti];
        s.points.push_back(jp.delay);
        s.masses.push_back(jp.sizes[ti]);
      }
    }
    s.points.push_back(0.5 * (lo + hi));
    s.masses.push_back(m);
  }
  grid.rows = 1;
  grid.values.assign(grid.freq.size(), {0.0, 0.0});
  for (std::size_t m = 0; m < grid.freq.size(); ++m) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t p = 0; p < s.points.size(); ++p) {
      acc += s.masses[p] * cis(-kTwoPi * s.points[p] * grid.freq[m]);
    }
    grid.values[m] = acc;
  }
  s.grid = std::move(grid);
  return s;
}

KnResult kohn_nirenberg_apply(const KnSymbol& sigma, const StepSignal& f, double max_tail_mass) {
  const auto& g = sigma.grid;
  const double t = sigma.t;
  const double T = g.half_width_T;
  KnResult r;
  if (f.is_zero()) return r;
  const auto supp = f.support();
  if (t - supp.hi < -T - kTol || t - supp.lo > T + kTol) {
    throw DomainError("kohn-nirenberg: f(t - .) is not supported in [-T, T]");
  }
  const double h = g.spacing();
  const double span = g.span();
  const auto edges = f.jumps();

  double energy = 0.0;
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t m = 0; m < g.freq.size(); ++m) {
    const double w = (m == 0 || m + 1 == g.freq.size()) ? 0.5 * h : h;
    const double xi = g.freq[m];
    const auto fh = f.fourier(xi);
    energy += w * std::norm(fh);
    acc += w * cis(kTwoPi * t * xi) * fh * g.values[m];
  }
  r.tail_mass = std::max(0.0, 1.0 - energy / f.l2_squared());
  if (r.tail_mass > max_tail_mass) {
    throw AccuracyError("kohn-nirenberg: frequency grid misses too much of the spectrum of f",
                        r.tail_mass);
  }
  double xmax = 0.0;
  for (double p : sigma.points) {
    for (const auto& e : edges) xmax = std::max(xmax, std::abs(t - p - e.point));
  }
  if (xmax * h >= 1.0) {
    throw AccuracyError("kohn-nirenberg: frequency spacing too coarse, the integrand aliases",
                        r.tail_mass);
  }
  r.trapezoid = acc.real();

  // With f^ = sum_b J_b e^{-2 pi i b xi} / (2 pi i xi), each (edge, mass) pair
  // contributes \int_{|xi|>span} e^{2 pi i x xi} / (2 pi i xi) dxi
  //   = sign(x) (1/2 - Si(2 pi span |x|) / pi).
  double tail = 0.0;
  for (const auto& e : edges) {
    for (std::size_t p = 0; p < sigma.points.size(); ++p) {
      const double x = t - sigma.points[p] - e.point;
      if (x == 0.0) continue;
      const double si = gsl_sf_Si(kTwoPi * span * std::abs(x));
      tail += e.size * sigma.masses[p] * (x > 0.0 ? 1.0 : -1.0) * (0.5 - si / std::numbers::pi);
    }
  }
  r.tail = tail;
  r.value = r.trapezoid + r.tail;
  return r;
}

KnResult kohn_nirenberg_apply(const KernelRealization& real, const StepSignal& f, double t,
                              const SymbolGrid& grid, double max_tail_mass) {
  if (f.is_zero()) return {};
  return kohn_nirenberg_apply(build_kohn_nirenberg_symbol(real, t, grid), f, max_tail_mass);
}

SymbolGrid build_spreading_symbol(const KernelRealization& real, double T) {
  if (!(T > 0.0)) throw DomainError("spreading: T must be positive");
  const auto& tg = real.tgrid();
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < tg.size(); ++i) {
    if (std::abs(tg[i]) <= T + kTol) idx.push_back(i);
  }
  if (idx.size() < 2 || std::abs(tg[idx.front()] + T) > kTol || std::abs(tg[idx.back()] - T) > kTol) {
    throw DomainError("spreading: time grid must have nodes at -T and T");
  }
  const std::size_t n = idx.size();
  const double dt = (tg[idx.back()] - tg[idx.front()]) / static_cast<double>(n - 1);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    if (std::abs(tg[idx[j + 1]] - tg[idx[j]] - dt) > kTol * std::max(1.0, dt)) {
      throw DomainError("spreading: time nodes in [-T, T] must be uniform");
    }
  }
  // 2n-1 gamma nodes over one period 1/dt integrate e^{2 pi i (t - t_j) gamma}
  // exactly for all node differences.
  const std::size_t M = 2 * n - 1;
  SymbolGrid g;
  g.half_width_T = T;
  g.freq.resize(M);
  for (std::size_t m = 0; m < M; ++m) {
    g.freq[m] = (static_cast<double>(m) - static_cast<double>(n - 1)) /
                (static_cast<double>(M) * dt);
  }
  const std::size_t nu = real.ugrid().size();
  g.rows = nu;
  g.values.assign(nu * M, {0.0, 0.0});
  for (std::size_t k = 0; k < nu; ++k) {
    for (std::size_t m = 0; m < M; ++m) {
      std::complex<double> acc{0.0, 0.0};
      for (std::size_t j = 0; j < n; ++j) {
        const double w = (j == 0 || j + 1 == n) ? 0.5 * dt : dt;
        acc += w * cis(-kTwoPi * tg[idx[j]] * g.freq[m]) * real.y_node(idx[j], k);
      }
      g.values[k * M + m] = acc;
    }
  }
  return g;
}

double spreading_apply(const KernelRealization& real, const StepSignal& f, double t,
                       const SymbolGrid& eta) {
  const double T = eta.half_width_T;
  if (std::abs(t) > T + kTol) return 0.0;
  if (f.is_zero()) return 0.0;
  time_index(real, t);
  const std::size_t M = eta.freq.size();
  if (M < 2 || eta.rows != real.ugrid().size()) {
    throw DomainError("spreading: symbol does not match the realization");
  }
  const double dg = eta.freq[1] - eta.freq[0];
  std::vector<std::size_t> lo_idx(f.cells());
  std::vector<std::size_t> hi_idx(f.cells());
  for (std::size_t k = 0; k < f.cells(); ++k) {
    const auto cell = f.cell(k);
    lo_idx[k] = delay_index(real, t - cell.hi);
    hi_idx[k] = delay_index(real, t - cell.lo);
  }
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t m = 0; m < M; ++m) {
    std::complex<double> inner{0.0, 0.0};
    for (std::size_t k = 0; k < f.cells(); ++k) {
      inner += f.coeff(k) * (eta.values[hi_idx[k] * M + m] - eta.values[lo_idx[k] * M + m]);
    }
    acc += dg * cis(kTwoPi * t * eta.freq[m]) * inner;
  }
  return acc.real();
}

}  // namespace sio
