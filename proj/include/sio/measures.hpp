#ifndef SIO_MEASURES_HPP_
#define SIO_MEASURES_HPP_

#include <complex>
#include <functional>
#include <map>
#include <mutex>
#include <tuple>

#include "sio/channel_model.hpp"
#include "sio/mc_stats.hpp"
#include "sio/measure_repr.hpp"
#include "sio/step_signal.hpp"

namespace sio {

struct MuParts {
  double total = 0.0;
  double c = 0.0;
  double j = 0.0;
  double small = 0.0;
};

// mu_t(B) = E|X(t, B)|^2 for a delay set B of the kernel X, split into the
// Gaussian, large-jump and small-jump parts.
MuParts mu_closed_form(const ChannelSpec& spec, double t, const CellUnion& b);
// mu_t as a measure on kernel delays.
MeasureRepr mu_measure(const ChannelSpec& spec, double t);

struct RhoParts {
  double total = 0.0;
  double c = 0.0;
  double j = 0.0;
  double small = 0.0;
  // Covariance between the large part at one time and the small part at
  // the other. It vanishes at s = t and whenever no jump can change class.
  double mixing = 0.0;
};

// Closed-form rho_{s,t}(B) = E[Y(t,B) Y(s,B)] for a delay set B of the
// impulse response. Copula moments are cached per correlation value.
class RhoModel {
 public:
  explicit RhoModel(ChannelSpec spec);
  RhoParts operator()(double s, double t, const CellUnion& b) const;
  const ChannelSpec& spec() const { return spec_; }

 private:
  double copula(double r, Region r1, double a1, Region r2, double a2) const;

  ChannelSpec spec_;
  mutable std::mutex mutex_;
  mutable std::map<std::tuple<double, int, double, int, double>, double> cache_;
};

RhoParts rho_closed_form(const ChannelSpec& spec, double s, double t, const CellUnion& b);

// A family of realizations, generated on demand from a seed lineage.
struct RealizationSet {
  ChannelSampler sampler;
  SeedLineage lineage;
  std::size_t n = 0;
  unsigned workers = 1;

  KernelRealization operator[](std::size_t i) const {
    return sampler.sample(derive_seed(lineage, i));
  }
};

// Mean over realizations of |sum_pieces X(t, piece)|^2.
Estimate mu_empirical(const RealizationSet& reals, double t, const CellUnion& b);

struct RhoEstimate {
  Estimate direct;         // mean of Y(t,B) Y(s,B)
  Estimate polarization;   // sum over delay cells of (beta - rho_tt - rho_ss) / 2
  Estimate difference;     // per-realization direct minus polarization
};
RhoEstimate rho_empirical(const RealizationSet& reals, double s, double t, const CellUnion& b);

// Scattering: S_{S,T}(g, gt, B) = \int_{-S}^{S} \int_{-T}^{T} e^{2 pi i (s gt - t g)} rho_{s,t}(B) dt ds.
struct RhoProvider {
  std::function<double(double s, double t, const CellUnion& b)> rho;
  // Set only for stationary channels: rho_{s,t}(B) = stationary(t - s, B).
  std::function<double(double tau, const CellUnion& b)> stationary;
};

struct ScatteringEval {
  double gamma = 0.0;
  double gamma_tilde = 0.0;
  double window_S = 0.0;
  double window_T = 0.0;
  CellUnion set;
  std::complex<double> value;
};

// Composite trapezoid with quad_nodes nodes on the t axis and the same
// spacing on the s axis.
ScatteringEval scattering_eval_direct(const RhoProvider& rho, double gamma, double gamma_tilde,
                                      const CellUnion& b, double S, double T,
                                      std::size_t quad_nodes);
// The same discrete sum regrouped along lag diagonals, O(n) evaluations of
// the correlation function. Needs a stationary provider and 2S a multiple of
// the spacing 2T / (quad_nodes - 1).
ScatteringEval scattering_eval_stationary(const RhoProvider& rho, double gamma,
                                          double gamma_tilde, const CellUnion& b, double S,
                                          double T, std::size_t quad_nodes);
// Stationary path when available, direct otherwise.
ScatteringEval scattering_eval(const RhoProvider& rho, double gamma, double gamma_tilde,
                               const CellUnion& b, double S, double T, std::size_t quad_nodes);

// mu * nu for atomic nu.
MeasureRepr convolve_measures(const MeasureRepr& mu, const MeasureRepr& nu);
// \int |f|^2 dm.
double weighted_l2(const StepSignal& f, const MeasureRepr& m);

}  // namespace sio

#endif  // SIO_MEASURES_HPP_
