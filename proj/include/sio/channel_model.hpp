#ifndef SIO_CHANNEL_MODEL_HPP_
#define SIO_CHANNEL_MODEL_HPP_

#include <complex>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "sio/levy_core.hpp"
#include "sio/step_signal.hpp"

namespace sio {

// Stationary correlation in time: exp(-|tau|/tc), exp(-tau^2/tc^2) or 1.
struct CorrFn {
  enum class Kind { exponential, gaussian, constant };
  Kind kind = Kind::constant;
  double tau_c = 1.0;

  double operator()(double tau) const;
  void validate() const;
};

class TimeGrid {
 public:
  TimeGrid() = default;
  explicit TimeGrid(std::vector<double> nodes);
  static TimeGrid uniform(double lo, double hi, std::size_t n);

  const std::vector<double>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  double operator[](std::size_t k) const { return nodes_[k]; }
  std::optional<std::size_t> index_of(double t, double tol = 1e-9) const;
  std::optional<double> spacing() const;

 private:
  std::vector<double> nodes_;
};

// Piecewise-constant modulation in time for non-stationary channels: the
// Gaussian variance is multiplied by gain[k] and jump sizes by scale[k] on
// [breaks[k], breaks[k+1]). Times outside the breaks use the nearest piece.
struct TimeGains {
  std::vector<double> breaks;
  std::vector<double> gain;
  std::vector<double> scale;

  void validate() const;
  std::size_t piece(double t) const;
  double gain_at(double t) const { return gain[piece(t)]; }
  double scale_at(double t) const { return scale[piece(t)]; }
};

struct ChannelWindow {
  double t_max = 1.0;
  double u_max = 1.0;
};

enum class Component { d, c, j, small };

// Full generative description. The drift is not free: it is the large-jump
// compensator, which makes every kernel increment zero-mean.
struct ChannelSpec {
  MeasureRepr variance;   // alpha over delay for Y(t, .), before the time gain
  MeasureRepr intensity;  // lambda over delay
  SizeDist sizes = SizeDist::point(1.0);
  double truncation = 1.0;
  CorrFn rc;
  CorrFn rj;
  ChannelWindow window;
  std::optional<TimeGains> gains;

  void validate() const;
  bool stationary() const { return !gains.has_value(); }
  double gain(double t) const { return gains ? gains->gain_at(t) : 1.0; }
  double scale(double t) const { return gains ? gains->scale_at(t) : 1.0; }
  SizeDist sizes_at(double t) const;
  Interval delay_window() const { return {-window.u_max, window.u_max}; }
  // Law of Y(t, .) as an additive process in the delay variable.
  LevyTriplet triplet_at(double t) const;
  // True when no jump can change class between two times, so the large and
  // small jump components are separated at every pair of times.
  bool classification_time_invariant() const;

  static ChannelSpec zero(ChannelWindow w);
};

struct JumpPath {
  double delay;
  std::vector<double> sizes;  // one per time node
};

// Node values of the four parts of Y(t, u). Index [ti * n_u + k].
struct KernelData {
  TimeGrid tgrid;
  DelayGrid ugrid;
  std::vector<double> drift;      // X_d in the Y picture: lambda_u E[y; large]
  std::vector<double> gaussian;
  std::vector<double> large;      // signed sum of large jumps
  std::vector<double> small;      // small jumps minus their compensator
  std::vector<JumpPath> jumps;
  double truncation = 1.0;

  std::size_t at(std::size_t ti, std::size_t k) const { return ti * ugrid.size() + k; }
};

// A sampled channel, or one of its component views. Views share the data.
class KernelRealization {
 public:
  KernelRealization() = default;
  explicit KernelRealization(std::shared_ptr<const KernelData> data,
                             std::optional<Component> view = std::nullopt)
      : data_(std::move(data)), view_(view) {}

  const KernelData& data() const { return *data_; }
  const TimeGrid& tgrid() const { return data_->tgrid; }
  const DelayGrid& ugrid() const { return data_->ugrid; }
  std::optional<Component> view() const { return view_; }
  KernelRealization as_view(Component c) const { return KernelRealization(data_, c); }

  // Y(t_i, u_k) for this view. Node values are anchored at delay 0.
  double y_node(std::size_t ti, std::size_t k) const;
  // Y(t_i, u_b) - Y(t_i, u_a) for this view, combined per component in a
  // fixed order so that views add up to the total bit for bit.
  double y_increment(std::size_t ti, std::size_t ka, std::size_t kb) const;

 private:
  std::shared_ptr<const KernelData> data_;
  std::optional<Component> view_;
};

// ((-d + c) + j) + small, the single combination rule used everywhere.
inline double combine(double d, double c, double j, double small) {
  return ((-d + c) + j) + small;
}

class ChannelSampler {
 public:
  ChannelSampler(ChannelSpec spec, TimeGrid tgrid, DelayGrid ugrid);

  KernelRealization sample(RngSeed seed) const;
  const ChannelSpec& spec() const { return spec_; }
  const TimeGrid& tgrid() const { return tgrid_; }
  const DelayGrid& ugrid() const { return ugrid_; }

 private:
  ChannelSpec spec_;
  TimeGrid tgrid_;
  DelayGrid ugrid_;
  Eigen::MatrixXd mc_;  // factor of the r_c correlation matrix on tgrid
  Eigen::MatrixXd mj_;  // factor of the r_j correlation matrix on tgrid
  std::vector<double> cell_alpha_;
  std::vector<double> gain_sqrt_;
  std::vector<double> scale_;
  std::vector<double> large_mean_;   // E_{F_t}[y; large] per time node
  std::vector<double> small_mean_;   // E_{F_t}[y; small] per time node
  std::vector<double> lambda_node_;  // signed lambda-cumulative per delay node
};

KernelRealization sample_channel(const ChannelSpec& spec, const TimeGrid& tgrid,
                                 const DelayGrid& ugrid, RngSeed seed);

// Increment of X(t_i, .) over the delay cell [x_lo, x_hi), i.e.
// Y(t, t - x_lo) - Y(t, t - x_hi). Cells must map onto delay nodes.
double kernel_increment(const KernelRealization& real, std::size_t ti, Interval cell);

struct ComponentViews {
  KernelRealization d;
  KernelRealization c;
  KernelRealization j;
  KernelRealization small;
};
ComponentViews component_fields(const KernelRealization& real);

// Closed-form characteristic function of H_k f(t) for k in {c, j, small}.
std::complex<double> theoretical_component_cf(const ChannelSpec& spec, Component comp,
                                              const StepSignal& f, double t, double gamma);

Eigen::MatrixXd correlation_factor(const CorrFn& r, const TimeGrid& tgrid);

}  // namespace sio

#endif  // SIO_CHANNEL_MODEL_HPP_
