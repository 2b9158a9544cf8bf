#ifndef SIO_MEASURE_REPR_HPP_
#define SIO_MEASURE_REPR_HPP_

#include <vector>

namespace sio {

// Half-open interval [lo, hi). Empty when hi <= lo.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi > lo ? hi - lo : 0.0; }
  bool empty() const { return !(lo < hi); }
  bool contains(double x) const { return lo <= x && x < hi; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

// Finite union of half-open intervals, kept sorted with overlapping and
// touching pieces merged.
class CellUnion {
 public:
  CellUnion() = default;
  explicit CellUnion(std::vector<Interval> pieces);
  static CellUnion single(double lo, double hi) { return CellUnion({{lo, hi}}); }

  const std::vector<Interval>& intervals() const { return pieces_; }
  bool empty() const { return pieces_.empty(); }
  double lebesgue() const;
  // Smallest interval containing every piece; {0,0} when empty.
  Interval hull() const;

  // {t - x : x in B}. Half-open orientation is kept as [t-hi, t-lo), which
  // differs from the exact image only on a finite set of endpoints.
  CellUnion reflected(double t) const;
  CellUnion shifted(double tau) const;

  friend bool operator==(const CellUnion&, const CellUnion&) = default;

 private:
  std::vector<Interval> pieces_;
};

struct Cell {
  double lo;
  double hi;
  double mass;
};

struct Atom {
  double point;
  double mass;
};

// A finite Borel measure on a bounded window, stored as cells carrying
// uniformly spread mass plus point atoms. Signed variants allow negative
// masses; positive variants reject them.
class MeasureRepr {
 public:
  enum class Sign { positive, signed_masses };

  MeasureRepr() = default;
  MeasureRepr(Interval window, std::vector<Cell> cells, std::vector<Atom> atoms = {},
              Sign sign = Sign::positive);

  static MeasureRepr zero(Interval window);
  static MeasureRepr uniform(Interval window, double density);
  // Density `densities[k]` on [breakpoints[k], breakpoints[k+1]); the window
  // is the hull of the breakpoints.
  static MeasureRepr piecewise_density(const std::vector<double>& breakpoints,
                                       const std::vector<double>& densities,
                                       Sign sign = Sign::positive);

  const Interval& window() const { return window_; }
  const std::vector<Cell>& cells() const { return cells_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  bool is_signed() const { return sign_ == Sign::signed_masses; }
  bool has_atoms() const { return !atoms_.empty(); }
  bool is_zero() const;

  // Throws WindowError when a non-empty query leaves the (closed) window.
  double mass(Interval b) const;
  double mass(const CellUnion& b) const;
  double total() const;

  // Signed distribution function anchored at the origin:
  // mass([0,u)) for u >= 0 and -mass([u,0)) for u < 0.
  double cumulative(double u) const;

  // Image measures: reflected(t)(B) = this(t - B), shifted(tau)(B) = this(B - tau).
  MeasureRepr reflected(double t) const;
  MeasureRepr shifted(double tau) const;
  MeasureRepr scaled(double factor) const;

  // Sum on the common refinement of both cell structures. The window of the
  // result is the hull of both windows.
  friend MeasureRepr operator+(const MeasureRepr& a, const MeasureRepr& b);

 private:
  bool covers(Interval b) const;

  Interval window_{};
  std::vector<Cell> cells_;
  std::vector<Atom> atoms_;
  Sign sign_ = Sign::positive;
};

}  // namespace sio

#endif  // SIO_MEASURE_REPR_HPP_
