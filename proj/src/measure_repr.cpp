#include "sio/measure_repr.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sio/errors.hpp"

namespace sio {

namespace {

double slack(const Interval& w) {
  return 1e-12 * std::max({1.0, std::abs(w.lo), std::abs(w.hi)});
}

std::string fmt_interval(const Interval& b) {
  return "[" + std::to_string(b.lo) + ", " + std::to_string(b.hi) + ")";
}

}  // namespace

CellUnion::CellUnion(std::vector<Interval> pieces) {
  for (const auto& p : pieces) {
    if (!std::isfinite(p.lo) || !std::isfinite(p.hi)) {
      throw DomainError("cell union: non-finite endpoint");
    }
  }
  std::erase_if(pieces, [](const Interval& p) { return p.empty(); });
  std::sort(pieces.begin(), pieces.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  for (const auto& p : pieces) {
    if (!pieces_.empty() && p.lo <= pieces_.back().hi) {
      pieces_.back().hi = std::max(pieces_.back().hi, p.hi);
    } else {
      pieces_.push_back(p);
    }
  }
}

double CellUnion::lebesgue() const {
  double s = 0.0;
  for (const auto& p : pieces_) s += p.length();
  return s;
}

Interval CellUnion::hull() const {
  if (pieces_.empty()) return {};
  return {pieces_.front().lo, pieces_.back().hi};
}

CellUnion CellUnion::reflected(double t) const {
  std::vector<Interval> out;
  out.reserve(pieces_.size());
  for (const auto& p : pieces_) out.push_back({t - p.hi, t - p.lo});
  return CellUnion(std::move(out));
}

CellUnion CellUnion::shifted(double tau) const {
  std::vector<Interval> out;
  out.reserve(pieces_.size());
  for (const auto& p : pieces_) out.push_back({p.lo + tau, p.hi + tau});
  return CellUnion(std::move(out));
}

MeasureRepr::MeasureRepr(Interval window, std::vector<Cell> cells, std::vector<Atom> atoms,
                         Sign sign)
    : window_(window), cells_(std::move(cells)), atoms_(std::move(atoms)), sign_(sign) {
  if (!std::isfinite(window_.lo) || !std::isfinite(window_.hi) || window_.hi < window_.lo) {
    throw DomainError("measure: window must be a bounded interval");
  }
  const double eps = slack(window_);
  std::sort(cells_.begin(), cells_.end(),
            [](const Cell& a, const Cell& b) { return a.lo < b.lo; });
  for (std::size_t k = 0; k < cells_.size(); ++k) {
    const auto& c = cells_[k];
    if (!std::isfinite(c.mass) || !(c.lo < c.hi)) {
      throw DomainError("measure: cells need lo < hi and a finite mass");
    }
    if (c.lo < window_.lo - eps || c.hi > window_.hi + eps) {
      throw DomainError("measure: cell " + fmt_interval({c.lo, c.hi}) + " leaves the window");
    }
    if (k > 0 && c.lo < cells_[k - 1].hi) {
      throw DomainError("measure: cells overlap");
    }
    if (sign_ == Sign::positive && c.mass < 0.0) {
      throw DomainError("measure: negative cell mass in a positive measure");
    }
  }
  std::sort(atoms_.begin(), atoms_.end(),
            [](const Atom& a, const Atom& b) { return a.point < b.point; });
  for (const auto& a : atoms_) {
    if (!std::isfinite(a.point) || !std::isfinite(a.mass)) {
      throw DomainError("measure: non-finite atom");
    }
    if (a.point < window_.lo - eps || a.point > window_.hi + eps) {
      throw DomainError("measure: atom outside the window");
    }
    if (sign_ == Sign::positive && a.mass < 0.0) {
      throw DomainError("measure: negative atom in a positive measure");
    }
  }
}

MeasureRepr MeasureRepr::zero(Interval window) { return MeasureRepr(window, {}, {}); }

MeasureRepr MeasureRepr::uniform(Interval window, double density) {
  if (window.empty()) return zero(window);
  return MeasureRepr(window, {{window.lo, window.hi, density * window.length()}}, {},
                     density < 0.0 ? Sign::signed_masses : Sign::positive);
}

MeasureRepr MeasureRepr::piecewise_density(const std::vector<double>& breakpoints,
                                           const std::vector<double>& densities, Sign sign) {
  if (breakpoints.size() < 2 || densities.size() + 1 != breakpoints.size()) {
    throw DomainError("measure: need n+1 breakpoints for n densities");
  }
  std::vector<Cell> cells;
  for (std::size_t k = 0; k < densities.size(); ++k) {
    const double lo = breakpoints[k];
    const double hi = breakpoints[k + 1];
    if (!(lo < hi)) throw DomainError("measure: breakpoints must increase strictly");
    cells.push_back({lo, hi, densities[k] * (hi - lo)});
  }
  return MeasureRepr({breakpoints.front(), breakpoints.back()}, std::move(cells), {}, sign);
}

bool MeasureRepr::is_zero() const {
  for (const auto& c : cells_)
    if (c.mass != 0.0) return false;
  for (const auto& a : atoms_)
    if (a.mass != 0.0) return false;
  return true;
}

bool MeasureRepr::covers(Interval b) const {
  const double eps = slack(window_);
  return b.lo >= window_.lo - eps && b.hi <= window_.hi + eps;
}

double MeasureRepr::mass(Interval b) const {
  if (b.empty()) return 0.0;
  if (!covers(b)) {
    throw WindowError("measure: query " + fmt_interval(b) + " outside window " +
                      fmt_interval(window_));
  }
  double s = 0.0;
  for (const auto& c : cells_) {
    const double lo = std::max(c.lo, b.lo);
    const double hi = std::min(c.hi, b.hi);
    if (hi <= lo) continue;
    if (lo == c.lo && hi == c.hi) {
      s += c.mass;
    } else {
      s += c.mass * ((hi - lo) / (c.hi - c.lo));
    }
  }
  for (const auto& a : atoms_) {
    if (b.contains(a.point)) s += a.mass;
  }
  return s;
}

double MeasureRepr::mass(const CellUnion& b) const {
  double s = 0.0;
  for (const auto& piece : b.intervals()) s += mass(piece);
  return s;
}

double MeasureRepr::total() const {
  double s = 0.0;
  for (const auto& c : cells_) s += c.mass;
  for (const auto& a : atoms_) s += a.mass;
  return s;
}

double MeasureRepr::cumulative(double u) const {
  if (u >= 0.0) return mass(Interval{0.0, u});
  return -mass(Interval{u, 0.0});
}

MeasureRepr MeasureRepr::reflected(double t) const {
  std::vector<Cell> cells;
  cells.reserve(cells_.size());
  for (const auto& c : cells_) cells.push_back({t - c.hi, t - c.lo, c.mass});
  std::vector<Atom> atoms;
  atoms.reserve(atoms_.size());
  for (const auto& a : atoms_) atoms.push_back({t - a.point, a.mass});
  return MeasureRepr({t - window_.hi, t - window_.lo}, std::move(cells), std::move(atoms), sign_);
}

MeasureRepr MeasureRepr::shifted(double tau) const {
  std::vector<Cell> cells;
  cells.reserve(cells_.size());
  for (const auto& c : cells_) cells.push_back({c.lo + tau, c.hi + tau, c.mass});
  std::vector<Atom> atoms;
  atoms.reserve(atoms_.size());
  for (const auto& a : atoms_) atoms.push_back({a.point + tau, a.mass});
  return MeasureRepr({window_.lo + tau, window_.hi + tau}, std::move(cells), std::move(atoms),
                     sign_);
}

MeasureRepr MeasureRepr::scaled(double factor) const {
  if (!std::isfinite(factor)) throw DomainError("measure: non-finite scale factor");
  std::vector<Cell> cells = cells_;
  for (auto& c : cells) c.mass *= factor;
  std::vector<Atom> atoms = atoms_;
  for (auto& a : atoms) a.mass *= factor;
  const Sign s = (factor < 0.0) ? Sign::signed_masses : sign_;
  return MeasureRepr(window_, std::move(cells), std::move(atoms), s);
}

MeasureRepr operator+(const MeasureRepr& a, const MeasureRepr& b) {
  const Interval window{std::min(a.window_.lo, b.window_.lo),
                        std::max(a.window_.hi, b.window_.hi)};
  std::vector<double> edges;
  for (const auto* m : {&a, &b}) {
    for (const auto& c : m->cells_) {
      edges.push_back(c.lo);
      edges.push_back(c.hi);
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::vector<Cell> cells;
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    const Interval piece{edges[k], edges[k + 1]};
    double m = 0.0;
    bool covered = false;
    for (const auto* src : {&a, &b}) {
      for (const auto& c : src->cells_) {
        if (c.lo <= piece.lo && piece.hi <= c.hi) {
          covered = true;
          m += (c.lo == piece.lo && c.hi == piece.hi)
                   ? c.mass
                   : c.mass * ((piece.hi - piece.lo) / (c.hi - c.lo));
        }
      }
    }
    if (covered) cells.push_back({piece.lo, piece.hi, m});
  }

  std::vector<Atom> atoms = a.atoms_;
  atoms.insert(atoms.end(), b.atoms_.begin(), b.atoms_.end());
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& x, const Atom& y) { return x.point < y.point; });
  std::vector<Atom> merged;
  for (const auto& at : atoms) {
    if (!merged.empty() && merged.back().point == at.point) {
      merged.back().mass += at.mass;
    } else {
      merged.push_back(at);
    }
  }
  const auto sign = (a.is_signed() || b.is_signed()) ? MeasureRepr::Sign::signed_masses
                                                     : MeasureRepr::Sign::positive;
  return MeasureRepr(window, std::move(cells), std::move(merged), sign);
}

}  // namespace sio
