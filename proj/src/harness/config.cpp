#include "sio/harness/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "sio/errors.hpp"
#include "sio/harness/suites.hpp"

namespace sio::harness {

namespace {

using Json = nlohmann::ordered_json;

// A JSON value together with its path, for diagnostics.
struct Node {
  const Json& v;
  std::string path;

  Node at(const std::string& key) const { return {v.at(key), path + "." + key}; }
  Node at(std::size_t i) const { return {v.at(i), path + "[" + std::to_string(i) + "]"}; }
  bool has(const std::string& key) const { return v.contains(key); }

  [[noreturn]] void fail(const std::string& what) const { throw ConfigError(path, what); }

  void object(std::initializer_list<const char*> required,
              std::initializer_list<const char*> optional = {}) const {
    if (!v.is_object()) fail("expected an object");
    std::set<std::string> known;
    for (const char* k : required) {
      known.insert(k);
      if (!v.contains(k)) fail(std::string("missing key '") + k + "'");
    }
    for (const char* k : optional) known.insert(k);
    for (const auto& [k, _] : v.items()) {
      if (!known.count(k)) throw ConfigError(path + "." + k, "unknown key");
    }
  }

  double number() const {
    if (!v.is_number()) fail("expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail("expected a finite number");
    return x;
  }

  std::uint64_t unsigned_int() const {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      fail("expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  std::string string() const {
    if (!v.is_string()) fail("expected a string");
    return v.get<std::string>();
  }

  std::size_t size() const {
    if (!v.is_array()) fail("expected an array");
    return v.size();
  }

  std::vector<double> numbers() const {
    std::vector<double> out(size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = at(i).number();
    return out;
  }
};

CorrFn parse_corr(const Node& n) {
  CorrFn r;
  const std::string kind = n.has("kind") ? n.at("kind").string() : "";
  if (kind == "constant") {
    n.object({"kind"});
    r.kind = CorrFn::Kind::constant;
    return r;
  }
  n.object({"kind", "tau_c"});
  if (kind == "exponential") {
    r.kind = CorrFn::Kind::exponential;
  } else if (kind == "gaussian") {
    r.kind = CorrFn::Kind::gaussian;
  } else {
    n.at("kind").fail("expected one of exponential, gaussian, constant");
  }
  r.tau_c = n.at("tau_c").number();
  if (!(r.tau_c > 0.0)) n.at("tau_c").fail("must be positive");
  return r;
}

SizeDist parse_sizes(const Node& n) {
  n.object({"kind"}, {"value", "points", "weights", "lo", "hi", "mean", "sd"});
  const std::string kind = n.at("kind").string();
  try {
    if (kind == "point") {
      n.object({"kind", "value"});
      return SizeDist::point(n.at("value").number());
    }
    if (kind == "mixture") {
      n.object({"kind", "points", "weights"});
      return SizeDist::mixture(n.at("points").numbers(), n.at("weights").numbers());
    }
    if (kind == "uniform") {
      n.object({"kind", "lo", "hi"});
      return SizeDist::uniform(n.at("lo").number(), n.at("hi").number());
    }
    if (kind == "gaussian") {
      n.object({"kind", "mean", "sd"});
      return SizeDist::gaussian(n.at("mean").number(), n.at("sd").number());
    }
  } catch (const DomainError& e) {
    n.fail(e.what());
  }
  n.at("kind").fail("expected one of point, mixture, uniform, gaussian");
}

// {"density": d} is uniform on the delay window; {"breaks": [...], "density": [...]}
// is piecewise.
MeasureRepr parse_delay_measure(const Node& n, double u_max) {
  n.object({"density"}, {"breaks"});
  try {
    if (!n.has("breaks")) {
      const double d = n.at("density").number();
      if (d < 0.0) n.at("density").fail("must be non-negative");
      return MeasureRepr::uniform({-u_max, u_max}, d);
    }
    const auto breaks = n.at("breaks").numbers();
    const auto dens = n.at("density").numbers();
    if (breaks.size() != dens.size() + 1) n.fail("need one more break than densities");
    return MeasureRepr::piecewise_density(breaks, dens);
  } catch (const DomainError& e) {
    n.fail(e.what());
  }
}

AxisSpec parse_axis(const Node& n) {
  n.object({"lo", "hi", "n"});
  AxisSpec a{n.at("lo").number(), n.at("hi").number(),
             static_cast<std::size_t>(n.at("n").unsigned_int())};
  if (!(a.lo < a.hi)) n.fail("need lo < hi");
  if (a.n < 2) n.at("n").fail("need at least 2 nodes");
  return a;
}

ChannelSpec parse_channel(const Node& n) {
  n.object({"window", "variance", "intensity", "sizes", "truncation", "rc", "rj"}, {"gains"});
  ChannelSpec s;
  const Node w = n.at("window");
  w.object({"t_max", "u_max"});
  s.window.t_max = w.at("t_max").number();
  s.window.u_max = w.at("u_max").number();
  if (!(s.window.t_max > 0.0)) w.at("t_max").fail("must be positive");
  if (!(s.window.u_max > 0.0)) w.at("u_max").fail("must be positive");
  s.variance = parse_delay_measure(n.at("variance"), s.window.u_max);
  s.intensity = parse_delay_measure(n.at("intensity"), s.window.u_max);
  s.sizes = parse_sizes(n.at("sizes"));
  s.truncation = n.at("truncation").number();
  s.rc = parse_corr(n.at("rc"));
  s.rj = parse_corr(n.at("rj"));
  if (n.has("gains")) {
    const Node g = n.at("gains");
    g.object({"breaks", "gain", "scale"});
    s.gains = TimeGains{g.at("breaks").numbers(), g.at("gain").numbers(), g.at("scale").numbers()};
  }
  try {
    s.validate();
  } catch (const DomainError& e) {
    n.fail(e.what());
  }
  return s;
}

}  // namespace

TimeGrid ExperimentConfig::tgrid() const { return TimeGrid::uniform(time.lo, time.hi, time.n); }
DelayGrid ExperimentConfig::ugrid() const { return DelayGrid::uniform(delay.lo, delay.hi, delay.n); }

ExperimentConfig parse_config(const Json& doc) {
  const Node root{doc, "$"};
  root.object({"channel", "grids", "probes", "times", "n_reps", "master_seed", "suites"}, {"nu"});
  ExperimentConfig c;
  c.source = doc;
  c.channel = parse_channel(root.at("channel"));

  const Node grids = root.at("grids");
  grids.object({"time", "delay"});
  c.time = parse_axis(grids.at("time"));
  c.delay = parse_axis(grids.at("delay"));
  TimeGrid tg;
  DelayGrid ug;
  try {
    tg = c.tgrid();
    ug = c.ugrid();
    ChannelSampler probe(c.channel, tg, ug);
  } catch (const DomainError& e) {
    grids.fail(e.what());
  } catch (const WindowError& e) {
    grids.fail(e.what());
  }

  const Node times = root.at("times");
  c.times = times.numbers();
  if (c.times.empty()) times.fail("need at least one time");
  for (std::size_t i = 0; i < c.times.size(); ++i) {
    if (!tg.index_of(c.times[i])) times.at(i).fail("not a node of the time grid");
  }

  const Node probes = root.at("probes");
  if (probes.size() == 0) probes.fail("need at least one probe");
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const Node p = probes.at(i);
    p.object({"breakpoints", "coeffs"});
    try {
      c.probes.emplace_back(p.at("breakpoints").numbers(), p.at("coeffs").numbers());
    } catch (const DomainError& e) {
      p.fail(e.what());
    }
    // Every probe must map onto the delay lattice at every requested time.
    for (double t : c.times) {
      for (double b : c.probes.back().breakpoints()) {
        const double v = t - b;
        if (v < ug.front() - 1e-9 || v > ug.back() + 1e-9 || !ug.index_of(v)) {
          p.fail("t - breakpoint is not a delay grid node for t = " + std::to_string(t));
        }
      }
    }
  }

  if (root.has("nu")) {
    const Node nu = root.at("nu");
    if (nu.size() == 0 || nu.size() > 8) nu.fail("need between 1 and 8 atoms");
    for (std::size_t i = 0; i < nu.size(); ++i) {
      const Node a = nu.at(i);
      a.object({"point", "mass"});
      const Atom atom{a.at("point").number(), a.at("mass").number()};
      if (!tg.index_of(atom.point)) a.at("point").fail("not a node of the time grid");
      if (!(atom.mass > 0.0)) a.at("mass").fail("must be positive");
      c.nu.push_back(atom);
    }
  }

  c.n_reps = static_cast<std::size_t>(root.at("n_reps").unsigned_int());
  c.master_seed = root.at("master_seed").unsigned_int();

  const Node suites = root.at("suites");
  for (std::size_t i = 0; i < suites.size(); ++i) {
    const std::string id = suites.at(i).string();
    if (id != "all" && !find_suite(id)) suites.at(i).fail("unknown suite '" + id + "'");
    c.suites.push_back(id);
  }
  return c;
}

ExperimentConfig parse_config_text(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError("$", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("$", "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace sio::harness
