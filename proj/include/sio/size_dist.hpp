#ifndef SIO_SIZE_DIST_HPP_
#define SIO_SIZE_DIST_HPP_

#include <complex>
#include <functional>
#include <limits>
#include <vector>

namespace sio {

// Which part of the size axis an integral runs over, relative to a truncation
// level a: large is |y| >= a, small is |y| < a.
enum class Region { all, large, small };

bool in_region(double y, Region r, double a);

// Jump-size law F on the real line without mass at zero.
class SizeDist {
 public:
  enum class Kind { point, mixture, uniform, gaussian };

  // A piece of the normal-score axis on which the copula quantile map
  // z -> q_F(Phi(z)) is either constant or the continuous branch of F.
  struct ScorePiece {
    double zlo;
    double zhi;
    bool constant;
    double value;  // used when constant
  };

  static SizeDist point(double y);
  static SizeDist mixture(std::vector<double> points, std::vector<double> weights);
  static SizeDist uniform(double lo, double hi);
  static SizeDist gaussian(double mean, double sd);

  Kind kind() const { return kind_; }
  const std::vector<double>& points() const { return points_; }
  const std::vector<double>& weights() const { return weights_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double mean_param() const { return mean_; }
  double sd_param() const { return sd_; }

  // \int_R g dF. Atoms are summed exactly; continuous laws use composite
  // 64-node Gauss-Legendre split at +-a and at the support edges.
  double integrate(const std::function<double(double)>& g, Region r = Region::all,
                   double a = 0.0) const;
  std::complex<double> integrate_complex(const std::function<std::complex<double>(double)>& g,
                                         Region r = Region::all, double a = 0.0) const;

  // \int g dF over the whole line, with the continuous part split at `breaks`.
  double integrate_split(const std::function<double(double)>& g,
                         const std::vector<double>& breaks) const;

  double probability(Region r, double a) const;
  double moment(int k, Region r = Region::all, double a = 0.0) const;

  // Right-continuous generalized inverse of F evaluated at Phi(z).
  double from_normal_score(double z) const;
  std::vector<ScorePiece> score_pieces(Region r, double a) const;

  // Law of kappa * Y for kappa > 0.
  SizeDist scaled(double kappa) const;

 private:
  SizeDist() = default;
  template <class T>
  T integrate_impl(const std::function<T(double)>& g, Region r, double a,
                   const std::vector<double>& breaks = {}) const;

  Kind kind_ = Kind::point;
  std::vector<double> points_;
  std::vector<double> weights_;
  std::vector<double> score_breaks_;  // Phi^{-1} of cumulative weights
  double lo_ = 0.0;
  double hi_ = 0.0;
  double mean_ = 0.0;
  double sd_ = 0.0;
};

// E[ q(Z1) 1_{r1,a1}(q(Z1)) q(Z2) 1_{r2,a2}(q(Z2)) ] for a standard bivariate
// normal (Z1, Z2) with correlation rho, where q = q_F o Phi. Nested
// conditional Gauss-Legendre over the normal-score axis.
double copula_cross_moment(const SizeDist& f, double rho, Region r1, double a1, Region r2,
                           double a2);

double normal_cdf(double z);
double normal_pdf(double z);
double normal_quantile(double p);

}  // namespace sio

#endif  // SIO_SIZE_DIST_HPP_
