#include "sio/harness/suites.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <random>

#include <fmt/format.h>

#include "sio/errors.hpp"
#include "sio/levy_core.hpp"
#include "sio/measures.hpp"
#include "sio/sio_operator.hpp"

namespace sio::harness {

namespace {

constexpr double kCfBudget = 1e-6;
constexpr double kSigmaTol = 1e-3;
constexpr double kEtaTol = 5e-3;
constexpr double kScatterTol = 1e-9;
constexpr double kCsTol = 1e-9;
constexpr std::size_t kRepresentationReps = 5;
constexpr std::size_t kCsSamples = 1000;

std::vector<double> cf_grid() {
  std::vector<double> g(33);
  for (std::size_t k = 0; k < g.size(); ++k) g[k] = -4.0 + 0.25 * static_cast<double>(k);
  return g;
}

std::string tlabel(double t) { return fmt::format("{}", t); }

// Per-realization values, one row per replication.
struct Table {
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<std::vector<double>> rows;

  std::vector<double> column(std::size_t j) const {
    std::vector<double> c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = rows[i][j];
    return c;
  }
};

class Runner {
 public:
  Runner(const ExperimentConfig& cfg, const SuiteInfo& info, const RunOptions& opt)
      : cfg_(cfg),
        info_(info),
        workers_(opt.workers),
        tg_(cfg.tgrid()),
        ug_(cfg.ugrid()),
        sampler_(cfg.channel, tg_, ug_) {
    report_.environment = {cfg.master_seed, cfg.n_reps, version_string()};
  }

  Report run();

 private:
  const ChannelSpec& spec() const { return cfg_.channel; }
  std::size_t ti(double t) const { return *tg_.index_of(t); }
  std::uint64_t seed(std::uint64_t i) const { return derive_seed(cfg_.master_seed, info_.id, i); }

  void row(const std::string& check, const Verdict& v, double se) {
    report_.add(info_.id, check, info_.anchor, v, se);
  }
  // Mean of `x` against `target` at 5 standard errors.
  void mean_row(const std::string& check, const std::vector<double>& x, double target) {
    if (x.empty()) {
      row(check, Verdict::make(0.0, target, 0.0, 0), 0.0);
      return;
    }
    const Estimate e = mean_estimate(x);
    row(check, Verdict::make(e.value, target, 5.0 * e.se, e.n), e.se);
  }
  void cf_row(const std::string& check, const std::vector<double>& x,
              const std::function<std::complex<double>(double)>& cf) {
    const auto gammas = cf_grid();
    const CfEstimate e = empirical_cf(x, gammas);
    double sup = 0.0;
    for (std::size_t k = 0; k < gammas.size(); ++k) {
      sup = std::max(sup, std::abs(e.values[k] - cf(gammas[k])));
    }
    row(check, Verdict::make(sup, 0.0, 5.0 * e.se_bound + kCfBudget, x.size()), e.se_bound);
  }

  template <class Fn>
  Table collect(std::size_t m, Fn fn) const {
    Table t;
    t.n = cfg_.n_reps;
    t.m = m;
    t.rows = parallel_map(
        cfg_.n_reps,
        [&](std::size_t i) {
          std::vector<double> out(m, 0.0);
          fn(i, out.data());
          return out;
        },
        workers_);
    return t;
  }

  KernelRealization realization(std::size_t i) const { return sampler_.sample(seed(i)); }

  // Delay sets of the impulse response used by the correlation suites: the
  // probe supports that lie on the delay lattice.
  std::vector<std::pair<std::size_t, std::size_t>> lattice_sets() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (const auto& f : cfg_.probes) {
      const auto a = ug_.index_of(f.support().lo);
      const auto b = ug_.index_of(f.support().hi);
      if (a && b) out.emplace_back(*a, *b);
    }
    return out;
  }
  std::vector<std::pair<double, double>> time_pairs() const {
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 0; i < cfg_.times.size(); ++i) {
      for (std::size_t j = i; j < cfg_.times.size(); ++j) out.emplace_back(cfg_.times[i], cfg_.times[j]);
    }
    return out;
  }

  void sio_isometry();
  void weak_us();
  void cf_components();
  void levy_khinchine();
  void poisson_counts();
  void fubini_sigma();
  void eta_spreading();
  void wssus_isometry();
  void rho_cs();
  void decomposition();

  const ExperimentConfig& cfg_;
  const SuiteInfo& info_;
  unsigned workers_;
  TimeGrid tg_;
  DelayGrid ug_;
  ChannelSampler sampler_;
  Report report_;
};

Report Runner::run() {
  const std::string id = info_.id;
  if (info_.statistical && cfg_.n_reps < 1000) {
    throw ConfigError("$.n_reps", "suite '" + id + "' needs at least 1000 replications");
  }
  if (id == "sio-isometry") sio_isometry();
  else if (id == "weak-us") weak_us();
  else if (id == "cf-components") cf_components();
  else if (id == "levy-khinchine") levy_khinchine();
  else if (id == "poisson-counts") poisson_counts();
  else if (id == "fubini-sigma") fubini_sigma();
  else if (id == "eta-spreading") eta_spreading();
  else if (id == "wssus-isometry") wssus_isometry();
  else if (id == "rho-cs") rho_cs();
  else if (id == "decomposition") decomposition();
  return report_;
}

void Runner::sio_isometry() {
  const auto& P = cfg_.probes;
  const auto& T = cfg_.times;
  const Table tab = collect(P.size() * T.size(), [&](std::size_t i, double* out) {
    const KernelRealization real = realization(i);
    for (std::size_t p = 0; p < P.size(); ++p) {
      for (std::size_t q = 0; q < T.size(); ++q) {
        const double h = apply_kernel(real, P[p], T[q]);
        out[p * T.size() + q] = h * h;
      }
    }
  });
  for (std::size_t p = 0; p < P.size(); ++p) {
    for (std::size_t q = 0; q < T.size(); ++q) {
      const double target = weighted_l2(P[p], mu_measure(spec(), T[q]));
      mean_row(fmt::format("f{} t={}", p, tlabel(T[q])), tab.column(p * T.size() + q), target);
    }
  }
}

void Runner::weak_us() {
  // Disjoint pairs among the probes, plus the two halves of every probe.
  struct Pair {
    std::string name;
    StepSignal f;
    StepSignal g;
  };
  std::vector<Pair> pairs;
  const auto& P = cfg_.probes;
  for (std::size_t a = 0; a < P.size(); ++a) {
    for (std::size_t b = a + 1; b < P.size(); ++b) {
      if (disjoint_support(P[a], P[b])) pairs.push_back({fmt::format("f{}|f{}", a, b), P[a], P[b]});
    }
  }
  for (std::size_t a = 0; a < P.size(); ++a) {
    const auto& bp = P[a].breakpoints();
    const auto& c = P[a].coeffs();
    if (c.size() < 2) continue;
    const std::size_t mid = c.size() / 2;
    StepSignal lo({bp.begin(), bp.begin() + mid + 1}, {c.begin(), c.begin() + mid});
    StepSignal hi({bp.begin() + mid, bp.end()}, {c.begin() + mid, c.end()});
    pairs.push_back({fmt::format("f{} halves", a), lo, hi});
  }
  const auto& T = cfg_.times;
  const Table tab = collect(pairs.size() * T.size(), [&](std::size_t i, double* out) {
    const KernelRealization real = realization(i);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      for (std::size_t q = 0; q < T.size(); ++q) {
        out[p * T.size() + q] = apply_kernel(real, pairs[p].f, T[q]) * apply_kernel(real, pairs[p].g, T[q]);
      }
    }
  });
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    for (std::size_t q = 0; q < T.size(); ++q) {
      mean_row(fmt::format("{} t={}", pairs[p].name, tlabel(T[q])), tab.column(p * T.size() + q), 0.0);
    }
  }
}

void Runner::cf_components() {
  const auto& P = cfg_.probes;
  const auto& T = cfg_.times;
  const Component comps[3] = {Component::c, Component::j, Component::small};
  const char* names[3] = {"c", "j", "small"};
  const Table tab = collect(P.size() * T.size() * 3, [&](std::size_t i, double* out) {
    const KernelRealization real = realization(i);
    for (std::size_t p = 0; p < P.size(); ++p) {
      for (std::size_t q = 0; q < T.size(); ++q) {
        for (std::size_t k = 0; k < 3; ++k) {
          out[(p * T.size() + q) * 3 + k] = apply_kernel(real.as_view(comps[k]), P[p], T[q]);
        }
      }
    }
  });
  for (std::size_t p = 0; p < P.size(); ++p) {
    for (std::size_t q = 0; q < T.size(); ++q) {
      for (std::size_t k = 0; k < 3; ++k) {
        cf_row(fmt::format("{} f{} t={}", names[k], p, tlabel(T[q])),
               tab.column((p * T.size() + q) * 3 + k), [&](double g) {
                 return theoretical_component_cf(spec(), comps[k], P[p], T[q], g);
               });
      }
    }
  }
}

// Delay nodes probed by the path suites: both ends of the grid and the node
// nearest half of the positive end.
std::vector<std::size_t> path_nodes(const DelayGrid& ug) {
  std::vector<std::size_t> out{ug.size() - 1};
  if (ug.origin() > 0) out.push_back(0);
  std::size_t best = ug.origin();
  for (std::size_t k = ug.origin(); k < ug.size(); ++k) {
    if (std::abs(ug[k] - 0.5 * ug.back()) < std::abs(ug[best] - 0.5 * ug.back())) best = k;
  }
  if (best != ug.origin() && best != ug.size() - 1) out.push_back(best);
  return out;
}

void Runner::levy_khinchine() {
  const auto& T = cfg_.times;
  const auto nodes = path_nodes(ug_);
  std::vector<LevyTriplet> trips;
  for (double t : T) trips.push_back(spec().triplet_at(t));
  const std::size_t per_t = nodes.size() + 1;
  const Table tab = collect(T.size() * per_t, [&](std::size_t i, double* out) {
    for (std::size_t q = 0; q < T.size(); ++q) {
      const PathSample path = sample_path(trips[q], ug_, seed(i * T.size() + q));
      for (std::size_t k = 0; k < nodes.size(); ++k) out[q * per_t + k] = path.value(nodes[k]);
      // Largest reconstruction defect of the Levy-Ito split over the grid.
      const LevyItoParts parts = split_levy_ito(path);
      double defect = 0.0;
      for (std::size_t k = 0; k < ug_.size(); ++k) {
        const double r = ((parts.deterministic[k] + parts.gaussian[k]) + parts.large[k]) +
                         parts.small_compensated[k];
        defect = std::max(defect, std::abs(r - path.value(k)));
      }
      out[q * per_t + nodes.size()] = defect;
    }
  });
  for (std::size_t q = 0; q < T.size(); ++q) {
    const LevyTriplet& tr = trips[q];
    const double big = tr.sizes.integrate([](double y) { return y; }, Region::large, tr.truncation);
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      const double u = ug_[nodes[k]];
      const auto x = tab.column(q * per_t + k);
      const std::string where = fmt::format("t={} u={}", tlabel(T[q]), u);
      cf_row("cf " + where, x, [&](double g) { return levy_cf(tr, u, g); });
      mean_row("mean " + where, x, -tr.m(u) + tr.lambda(u) * big);
    }
    const auto d = tab.column(q * per_t + nodes.size());
    const double worst = d.empty() ? 0.0 : *std::max_element(d.begin(), d.end());
    row(fmt::format("levy-ito reconstruction t={}", tlabel(T[q])),
        Verdict::make(worst, 0.0, 0.0, d.size()), 0.0);
  }
}

void Runner::poisson_counts() {
  const auto& T = cfg_.times;
  const double a = spec().truncation;
  const double inf = std::numeric_limits<double>::max();
  // B1 = {|y| >= a}, B2 = {a/2 <= |y| < a}: disjoint, closures avoid 0.
  const SizeSet b1({{-inf, std::nextafter(-a, 0.0)}, {a, inf}});
  const SizeSet b2({{std::nextafter(-a, 0.0), std::nextafter(-0.5 * a, 0.0)}, {0.5 * a, a}});
  std::vector<double> us{ug_.back()};
  if (ug_.front() < 0.0) us.push_back(ug_.front());
  std::vector<LevyTriplet> trips;
  for (double t : T) trips.push_back(spec().triplet_at(t));
  const std::size_t per_t = us.size() * 2;
  const Table tab = collect(T.size() * per_t, [&](std::size_t i, double* out) {
    for (std::size_t q = 0; q < T.size(); ++q) {
      const PathSample path = sample_path(trips[q], ug_, seed(i * T.size() + q));
      for (std::size_t k = 0; k < us.size(); ++k) {
        out[q * per_t + 2 * k] = static_cast<double>(count_measure(path, us[k], b1));
        out[q * per_t + 2 * k + 1] = static_cast<double>(count_measure(path, us[k], b2));
      }
    }
  });
  for (std::size_t q = 0; q < T.size(); ++q) {
    const LevyTriplet& tr = trips[q];
    const double p1 = tr.sizes.probability(Region::large, a);
    const double p2 = tr.sizes.probability(Region::large, 0.5 * a) - p1;
    for (std::size_t k = 0; k < us.size(); ++k) {
      const double u = us[k];
      const double lam = std::abs(tr.lambda(u));
      const auto n1 = tab.column(q * per_t + 2 * k);
      const auto n2 = tab.column(q * per_t + 2 * k + 1);
      const std::string where = fmt::format("t={} u={}", tlabel(T[q]), u);
      mean_row("mean B1 " + where, n1, lam * p1);
      mean_row("mean B2 " + where, n2, lam * p2);
      for (const auto& [name, x, target] :
           {std::tuple{"var B1 ", &n1, lam * p1}, std::tuple{"var B2 ", &n2, lam * p2}}) {
        const Estimate e = variance_estimate(*x);
        row(name + where, Verdict::make(e.value, target, 5.0 * e.se, e.n), e.se);
      }
      const Estimate c = covariance_estimate(n1, n2);
      row("cov B1,B2 " + where, Verdict::make(c.value, 0.0, 5.0 * c.se, c.n), c.se);
    }
  }
}

// |approx - exact| relative to the larger of |exact| and the rms size of Hf(t).
double relative_error(double approx, double exact, double rms) {
  const double scale = std::max(std::abs(exact), rms);
  if (scale == 0.0) return std::abs(approx - exact);
  return std::abs(approx - exact) / scale;
}

void Runner::fubini_sigma() {
  const std::size_t reps = std::min(cfg_.n_reps, kRepresentationReps);
  const double Tw = std::min(-ug_.front(), ug_.back());
  const auto& P = cfg_.probes;
  const auto& T = cfg_.times;
  for (std::size_t p = 0; p < P.size(); ++p) {
    for (double t : T) {
      const auto supp = P[p].support();
      if (t - supp.hi < -Tw - 1e-9 || t - supp.lo > Tw + 1e-9) continue;
      const double rms = std::sqrt(weighted_l2(P[p], mu_measure(spec(), t)));
      const auto errs = parallel_map(
          reps,
          [&](std::size_t i) {
            const KernelRealization real = realization(i);
            try {
              const KnResult r =
                  kohn_nirenberg_apply(real, P[p], t, default_frequency_grid(P[p], Tw));
              return relative_error(r.value, apply_kernel(real, P[p], t), rms);
            } catch (const AccuracyError&) {
              return std::numeric_limits<double>::infinity();
            }
          },
          workers_);
      const double worst = errs.empty() ? 0.0 : *std::max_element(errs.begin(), errs.end());
      row(fmt::format("f{} t={}", p, tlabel(t)), Verdict::make(worst, 0.0, kSigmaTol, reps), 0.0);
    }
  }
}

void Runner::eta_spreading() {
  const std::size_t reps = std::min(cfg_.n_reps, kRepresentationReps);
  const double Tw = std::min(-tg_[0], tg_[tg_.size() - 1]);
  if (!tg_.index_of(-Tw) || !tg_.index_of(Tw)) {
    throw ConfigError("$.grids.time", "eta-spreading needs a time grid symmetric about 0");
  }
  const auto& P = cfg_.probes;
  const auto& T = cfg_.times;
  struct Case {
    std::size_t p;
    double t;
    double rms;
  };
  std::vector<Case> cases;
  for (std::size_t p = 0; p < P.size(); ++p) {
    for (double t : T) {
      cases.push_back({p, t, std::sqrt(weighted_l2(P[p], mu_measure(spec(), t)))});
    }
  }
  const auto errs = parallel_map(
      reps,
      [&](std::size_t i) {
        const KernelRealization real = realization(i);
        const SymbolGrid eta = build_spreading_symbol(real, Tw);
        std::vector<double> out;
        for (const auto& c : cases) {
          const double v = spreading_apply(real, P[c.p], c.t, eta);
          // Inside the open window the identity holds; outside it is 0. The
          // trapezoid halves the weight at t = +-T, which is excluded.
          if (std::abs(c.t) < Tw - 1e-9) {
            out.push_back(relative_error(v, apply_impulse(real, P[c.p], c.t), c.rms));
          } else if (std::abs(c.t) > Tw + 1e-9) {
            out.push_back(std::abs(v));
          } else {
            out.push_back(std::numeric_limits<double>::quiet_NaN());
          }
        }
        return out;
      },
      workers_);
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const double t = cases[k].t;
    if (std::abs(std::abs(t) - Tw) <= 1e-9) continue;
    double worst = 0.0;
    for (const auto& e : errs) worst = std::max(worst, e[k]);
    const bool inside = std::abs(t) < Tw;
    row(fmt::format("f{} t={}{}", cases[k].p, tlabel(t), inside ? "" : " outside"),
        Verdict::make(worst, 0.0, inside ? kEtaTol : 0.0, reps), 0.0);
  }
}

void Runner::wssus_isometry() {
  if (!spec().stationary()) {
    throw ConfigError("$.suites", "wssus-isometry needs a stationary channel");
  }
  std::vector<Atom> nu = cfg_.nu;
  if (nu.empty()) {
    for (double t : cfg_.times) {
      if (nu.size() < 8) nu.push_back({t, 1.0});
    }
  }
  const auto& P = cfg_.probes;
  // Translation law of mu_t, exact in closed form.
  for (std::size_t p = 0; p < P.size(); ++p) {
    const CellUnion b = CellUnion::single(P[p].support().lo, P[p].support().hi);
    double worst = 0.0;
    for (double t : cfg_.times) {
      const double lhs = mu_closed_form(spec(), t, b).total;
      const double rhs = mu_closed_form(spec(), 0.0, b.shifted(-t)).total;
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    row(fmt::format("translation f{}", p), Verdict::make(worst, 0.0, 0.0, 0), 0.0);
  }
  std::vector<Atom> atoms;
  for (const auto& a : nu) atoms.push_back(a);
  std::vector<Cell> no_cells;
  double lo = atoms.front().point;
  double hi = atoms.front().point;
  for (const auto& a : atoms) {
    lo = std::min(lo, a.point);
    hi = std::max(hi, a.point);
  }
  const MeasureRepr nu_m({lo, std::nextafter(hi, hi + 1.0)}, no_cells, atoms);
  const MeasureRepr mnu = convolve_measures(mu_measure(spec(), 0.0), nu_m);
  const Table tab = collect(P.size(), [&](std::size_t i, double* out) {
    const KernelRealization real = realization(i);
    for (std::size_t p = 0; p < P.size(); ++p) {
      double s = 0.0;
      for (const auto& a : nu) {
        const double h = apply_kernel(real, P[p], a.point);
        s += a.mass * h * h;
      }
      out[p] = s;
    }
  });
  for (std::size_t p = 0; p < P.size(); ++p) {
    mean_row(fmt::format("L2(nu) f{} atoms={}", p, nu.size()), tab.column(p), weighted_l2(P[p], mnu));
  }
}

void Runner::rho_cs() {
  const auto model = std::make_shared<RhoModel>(spec());
  // Cauchy-Schwarz on random (s, t, B), closed form.
  std::mt19937_64 rng(derive_seed(cfg_.master_seed, "rho-cs/cauchy-schwarz", 0));
  const double tm = spec().window.t_max;
  const double um = spec().window.u_max;
  std::uniform_real_distribution<double> ut(-tm, tm);
  std::uniform_real_distribution<double> uu(-um, um);
  std::uniform_int_distribution<int> npieces(1, 3);
  double worst = 0.0;
  for (std::size_t k = 0; k < kCsSamples; ++k) {
    const double s = ut(rng);
    const double t = ut(rng);
    std::vector<Interval> pieces;
    const int np = npieces(rng);
    for (int j = 0; j < np; ++j) {
      double x = uu(rng);
      double y = uu(rng);
      if (x > y) std::swap(x, y);
      pieces.push_back({x, y});
    }
    const CellUnion b(pieces);
    const double st = (*model)(s, t, b).total;
    const double ss = (*model)(s, s, b).total;
    const double tt = (*model)(t, t, b).total;
    const double excess = st * st - ss * tt;
    const double scale = ss * tt;
    worst = std::max(worst, scale > 0.0 ? std::max(0.0, excess) / scale : std::max(0.0, excess));
  }
  row(fmt::format("cauchy-schwarz closed form, {} random (s,t,B)", kCsSamples),
      Verdict::make(worst, 0.0, kCsTol, 0), 0.0);

  const auto sets = lattice_sets();
  const auto pairs = time_pairs();
  const std::size_t m = sets.size() * pairs.size();
  const Table tab = collect(2 * m, [&](std::size_t i, double* out) {
    const KernelRealization real = realization(i);
    for (std::size_t b = 0; b < sets.size(); ++b) {
      const auto [ka, kb] = sets[b];
      for (std::size_t q = 0; q < pairs.size(); ++q) {
        const std::size_t si = ti(pairs[q].first);
        const std::size_t tj = ti(pairs[q].second);
        const double direct = real.y_increment(tj, ka, kb) * real.y_increment(si, ka, kb);
        double polar = 0.0;
        for (std::size_t k = ka; k < kb; ++k) {
          const double ct = real.y_increment(tj, k, k + 1);
          const double cs = real.y_increment(si, k, k + 1);
          polar += 0.5 * ((ct + cs) * (ct + cs) - ct * ct - cs * cs);
        }
        out[2 * (b * pairs.size() + q)] = direct;
        out[2 * (b * pairs.size() + q) + 1] = direct - polar;
      }
    }
  });
  for (std::size_t b = 0; b < sets.size(); ++b) {
    const CellUnion B = CellUnion::single(ug_[sets[b].first], ug_[sets[b].second]);
    for (std::size_t q = 0; q < pairs.size(); ++q) {
      const auto [s, t] = pairs[q];
      const std::string where = fmt::format("B=[{},{}) s={} t={}", B.hull().lo, B.hull().hi,
                                            tlabel(s), tlabel(t));
      mean_row("closed form " + where, tab.column(2 * (b * pairs.size() + q)), (*model)(s, t, B).total);
      mean_row("polarization " + where, tab.column(2 * (b * pairs.size() + q) + 1), 0.0);
    }
  }
}

void Runner::decomposition() {
  const auto model = std::make_shared<RhoModel>(spec());
  const auto& P = cfg_.probes;
  const auto& T = cfg_.times;
  const auto sets = lattice_sets();
  const auto pairs = time_pairs();
  const auto nodes = path_nodes(ug_);
  const bool separated = spec().classification_time_invariant();
  const std::size_t nu = ug_.size();

  // Column layout.
  const std::size_t c_recon = 0;
  const std::size_t c_comp = 1;                                   // T x nodes
  const std::size_t c_rho = c_comp + T.size() * nodes.size();     // sets x pairs x 2
  const std::size_t c_ind = c_rho + 2 * sets.size() * pairs.size();  // P x T x 3
  const std::size_t m = c_ind + 3 * P.size() * T.size();

  const Table tab = collect(m, [&](std::size_t i, double* out) {
    const KernelRealization real = realization(i);
    const auto v = component_fields(real);
    double defect = 0.0;
    for (std::size_t q = 0; q < tg_.size(); ++q) {
      for (std::size_t k = 0; k < nu; ++k) {
        const double sum = combine(v.d.y_node(q, k), v.c.y_node(q, k), v.j.y_node(q, k),
                                   v.small.y_node(q, k));
        defect = std::max(defect, std::abs(sum - real.y_node(q, k)));
      }
    }
    out[c_recon] = defect;
    for (std::size_t q = 0; q < T.size(); ++q) {
      for (std::size_t k = 0; k < nodes.size(); ++k) {
        out[c_comp + q * nodes.size() + k] = v.j.y_node(ti(T[q]), nodes[k]);
      }
    }
    for (std::size_t b = 0; b < sets.size(); ++b) {
      const auto [ka, kb] = sets[b];
      for (std::size_t q = 0; q < pairs.size(); ++q) {
        const std::size_t si = ti(pairs[q].first);
        const std::size_t tj = ti(pairs[q].second);
        // Zero-mean parts: c, j - d, small.
        const double ct = v.c.y_increment(tj, ka, kb);
        const double cs = v.c.y_increment(si, ka, kb);
        const double jt = v.j.y_increment(tj, ka, kb) - v.d.y_increment(tj, ka, kb);
        const double js = v.j.y_increment(si, ka, kb) - v.d.y_increment(si, ka, kb);
        const double st = v.small.y_increment(tj, ka, kb);
        const double ss = v.small.y_increment(si, ka, kb);
        const double total = real.y_increment(tj, ka, kb) * real.y_increment(si, ka, kb);
        const std::size_t col = c_rho + 2 * (b * pairs.size() + q);
        out[col] = ((ct * cs + jt * js) + st * ss) - total;
        out[col + 1] = jt * ss + st * js;
      }
    }
    for (std::size_t p = 0; p < P.size(); ++p) {
      for (std::size_t q = 0; q < T.size(); ++q) {
        const std::size_t col = c_ind + 3 * (p * T.size() + q);
        out[col] = apply_kernel(v.c, P[p], T[q]);
        out[col + 1] = apply_kernel(v.j, P[p], T[q]);
        out[col + 2] = apply_kernel(v.small, P[p], T[q]);
      }
    }
  });

  {
    const auto d = tab.column(c_recon);
    const double worst = d.empty() ? 0.0 : *std::max_element(d.begin(), d.end());
    row("pathwise reconstruction d+c+j+small", Verdict::make(worst, 0.0, 0.0, d.size()), 0.0);
  }
  // Compensator identity: the d view is the mean of the large-jump view.
  {
    const KernelRealization probe = realization(0);
    for (std::size_t q = 0; q < T.size(); ++q) {
      for (std::size_t k = 0; k < nodes.size(); ++k) {
        const double d = probe.as_view(Component::d).y_node(ti(T[q]), nodes[k]);
        mean_row(fmt::format("compensator t={} u={}", tlabel(T[q]), ug_[nodes[k]]),
                 tab.column(c_comp + q * nodes.size() + k), d);
      }
    }
  }
  // Closed-form mu splits exactly.
  for (std::size_t p = 0; p < P.size(); ++p) {
    const CellUnion b = CellUnion::single(P[p].support().lo, P[p].support().hi);
    double worst = 0.0;
    for (double t : T) {
      const MuParts mp = mu_closed_form(spec(), t, b);
      worst = std::max(worst, std::abs(mp.total - ((mp.c + mp.j) + mp.small)));
    }
    row(fmt::format("mu = mu_c + mu_j + mu_small f{}", p), Verdict::make(worst, 0.0, 0.0, 0), 0.0);
  }
  // Empirical component correlations against the total, and the mixing term.
  for (std::size_t b = 0; b < sets.size(); ++b) {
    const CellUnion B = CellUnion::single(ug_[sets[b].first], ug_[sets[b].second]);
    for (std::size_t q = 0; q < pairs.size(); ++q) {
      const auto [s, t] = pairs[q];
      const std::string where =
          fmt::format("B=[{},{}) s={} t={}", B.hull().lo, B.hull().hi, tlabel(s), tlabel(t));
      const std::size_t col = c_rho + 2 * (b * pairs.size() + q);
      if (s == t || separated) mean_row("rho component sum " + where, tab.column(col), 0.0);
      if (s != t) mean_row("rho mixing " + where, tab.column(col + 1), (*model)(s, t, B).mixing);
    }
  }
  // Scattering of the parts adds up to the scattering of the total.
  {
    const double W = spec().window.t_max;
    auto provider = [&](auto part) {
      RhoProvider r;
      r.rho = [model, part](double s, double t, const CellUnion& b) { return part((*model)(s, t, b)); };
      if (spec().stationary()) {
        r.stationary = [model, part](double tau, const CellUnion& b) {
          return part((*model)(0.0, tau, b));
        };
      }
      return r;
    };
    const RhoProvider total = provider([](const RhoParts& r) { return r.total; });
    const RhoProvider parts[4] = {provider([](const RhoParts& r) { return r.c; }),
                                  provider([](const RhoParts& r) { return r.j; }),
                                  provider([](const RhoParts& r) { return r.small; }),
                                  provider([](const RhoParts& r) { return r.mixing; })};
    const std::pair<double, double> freqs[3] = {{0.0, 0.0}, {0.5, 0.25}, {1.0, -0.5}};
    for (const auto& f : P) {
      const CellUnion B = CellUnion::single(f.support().lo, f.support().hi);
      double worst = 0.0;
      for (const auto& [g, gt] : freqs) {
        std::complex<double> sum{0.0, 0.0};
        for (const auto& part : parts) sum += scattering_eval(part, g, gt, B, W, W, 64).value;
        worst = std::max(worst, std::abs(sum - scattering_eval(total, g, gt, B, W, W, 64).value));
      }
      row(fmt::format("scattering sum B=[{},{})", B.hull().lo, B.hull().hi),
          Verdict::make(worst, 0.0, kScatterTol, 0), 0.0);
    }
  }
  // Pairwise independence of the c, j and small parts at fixed t.
  const auto grid = default_independence_grid();
  const char* names[3] = {"c", "j", "small"};
  for (std::size_t p = 0; p < P.size(); ++p) {
    for (std::size_t q = 0; q < T.size(); ++q) {
      const std::size_t col = c_ind + 3 * (p * T.size() + q);
      for (std::size_t a = 0; a < 3; ++a) {
        for (std::size_t b = a + 1; b < 3; ++b) {
          const auto r = independence_check(tab.column(col + a), tab.column(col + b), grid);
          row(fmt::format("independence {},{} f{} t={}", names[a], names[b], p, tlabel(T[q])),
              Verdict::make(r.defect, 0.0, r.threshold, tab.n), 0.0);
        }
      }
    }
  }
}

}  // namespace

const std::vector<SuiteInfo>& suite_registry() {
  static const std::vector<SuiteInfo> reg = {
      {"sio-isometry", "E|Hf(t)|^2 = int |f|^2 dmu_t", true},
      {"weak-us", "E[Hf(t) Hg(t)] = 0 for disjoint supports of f and g", true},
      {"cf-components", "E exp(i gamma H_k f(t)) in closed form for k = c, j, small", true},
      {"levy-khinchine",
       "E exp(i gamma Z_u) = exp(-i gamma m(u) - alpha(u) gamma^2/2 + int (e^{i gamma y} - 1 - i "
       "gamma y 1_{|y|<a}) nu_u(dy))",
       true},
      {"poisson-counts", "N(u,B) is Poisson(lambda_u F(B)) and independent over disjoint B", true},
      {"fubini-sigma", "Hf(t) = int e^{2 pi i t xi} f^(xi) sigma_T(t,xi) dxi", false},
      {"eta-spreading",
       "1_[-T,T](t) int f(t-u) Y(t,du) = iint e^{2 pi i t gamma} f(t-u) eta_T(du,gamma) dgamma",
       false},
      {"wssus-isometry", "E ||Hf||^2_{L2(nu)} = ||f||^2_{L2(mu*nu)}", true},
      {"rho-cs", "|rho_{s,t}(B)|^2 <= rho_{s,s}(B) rho_{t,t}(B)", true},
      {"decomposition", "H = H_d + H_c + H_j + H~_j and rho = rho^c + rho^j + rho~^j", true},
  };
  return reg;
}

const SuiteInfo* find_suite(const std::string& id) {
  for (const auto& s : suite_registry()) {
    if (id == s.id) return &s;
  }
  return nullptr;
}

Report run_suite(const ExperimentConfig& cfg, const std::string& id, const RunOptions& opt) {
  const SuiteInfo* info = find_suite(id);
  if (!info) throw ConfigError("--suite", "unknown suite '" + id + "'");
  return Runner(cfg, *info, opt).run();
}

Report run_suites(const ExperimentConfig& cfg, const std::vector<std::string>& ids,
                  const RunOptions& opt) {
  Report out;
  out.environment = {cfg.master_seed, cfg.n_reps, version_string()};
  for (const auto& id : ids) {
    if (id == "all") {
      for (const auto& s : suite_registry()) {
        if (std::string(s.id) == "wssus-isometry" && !cfg.channel.stationary()) continue;
        out.append(run_suite(cfg, s.id, opt));
      }
    } else {
      out.append(run_suite(cfg, id, opt));
    }
  }
  return out;
}

}  // namespace sio::harness
