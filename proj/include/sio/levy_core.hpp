#ifndef SIO_LEVY_CORE_HPP_
#define SIO_LEVY_CORE_HPP_

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "sio/measure_repr.hpp"
#include "sio/size_dist.hpp"

namespace sio {

using RngSeed = std::uint64_t;

// Strictly increasing delay nodes. The origin must be a node, since every
// path is anchored there.
class DelayGrid {
 public:
  DelayGrid() = default;
  explicit DelayGrid(std::vector<double> nodes);
  // n nodes with spacing (hi-lo)/(n-1), stored as exact multiples of the
  // spacing so that 0 is hit exactly.
  static DelayGrid uniform(double lo, double hi, std::size_t n);

  const std::vector<double>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  double operator[](std::size_t k) const { return nodes_[k]; }
  double front() const { return nodes_.front(); }
  double back() const { return nodes_.back(); }
  std::size_t origin() const { return origin_; }
  std::optional<std::size_t> index_of(double v, double tol = 1e-9) const;
  // Common spacing when the grid is uniform to within 1e-9 relative.
  std::optional<double> spacing() const;

 private:
  std::vector<double> nodes_;
  std::size_t origin_ = 0;
};

struct LevyTriplet {
  MeasureRepr drift;      // m(u) = drift.cumulative(u); signed
  MeasureRepr variance;   // alpha(u) = variance.cumulative(u)
  MeasureRepr intensity;  // lambda, no atoms (no fixed jump delays)
  SizeDist sizes = SizeDist::point(1.0);
  double truncation = 1.0;
  Interval window;        // admissible delays, closed; contains 0

  void validate() const;
  double m(double u) const { return drift.cumulative(u); }
  double alpha(double u) const { return variance.cumulative(u); }
  double lambda(double u) const { return intensity.cumulative(u); }
};

enum class JumpClass { large, small };

struct JumpRecord {
  double delay;
  double size;
  JumpClass cls;
};

// One sampled path on a grid. Parts are stored per node so that the total
// is an exact fixed-order combination of them.
struct PathSample {
  DelayGrid grid;
  std::vector<double> gaussian;
  std::vector<JumpRecord> jumps;  // sorted by delay
  std::vector<double> drift;                // m(u_k)
  std::vector<double> small_compensator;    // lambda_u * E[y; |y| < a]
  std::vector<double> large_sum;            // signed sum of large jumps up to u_k
  std::vector<double> small_sum;            // signed sum of small jumps up to u_k

  double value(std::size_t k) const {
    return ((-drift[k] + gaussian[k]) + large_sum[k]) + (small_sum[k] - small_compensator[k]);
  }
  std::vector<double> values() const;
};

struct LevyItoParts {
  std::vector<double> deterministic;  // -m(u)
  std::vector<double> gaussian;
  std::vector<double> large;
  std::vector<double> small_compensated;
};

// Finite union of half-open size intervals whose closure avoids 0.
class SizeSet {
 public:
  explicit SizeSet(std::vector<Interval> pieces);
  static SizeSet single(double y);
  static SizeSet range(double lo, double hi) { return SizeSet({{lo, hi}}); }
  bool contains(double y) const;
  const std::vector<Interval>& pieces() const { return pieces_.intervals(); }

 private:
  CellUnion pieces_;
};

// exp(-i g m(B) - alpha(B) g^2/2 + lambda(B) [ \int_L (e^{iyg}-1) dF
//                                              + \int_S (e^{iyg}-1-iyg) dF ])
std::complex<double> increment_cf(const LevyTriplet& tr, Interval b, double gamma);
std::complex<double> levy_cf(const LevyTriplet& tr, double u, double gamma);

PathSample sample_path(const LevyTriplet& tr, const DelayGrid& grid, RngSeed seed);

// Jumps with delay in (0,u] for u >= 0, or in [u,0) for u < 0, and size in b.
long count_measure(const PathSample& path, double u, const SizeSet& b);

LevyItoParts split_levy_ito(const PathSample& path);

}  // namespace sio

#endif  // SIO_LEVY_CORE_HPP_
