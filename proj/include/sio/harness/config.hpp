#ifndef SIO_HARNESS_CONFIG_HPP_
#define SIO_HARNESS_CONFIG_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sio/channel_model.hpp"
#include "sio/measure_repr.hpp"
#include "sio/step_signal.hpp"

namespace sio::harness {

// Invalid configuration. The message starts with the offending field path.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct AxisSpec {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t n = 0;
};

struct ExperimentConfig {
  ChannelSpec channel;
  AxisSpec time;
  AxisSpec delay;
  std::vector<StepSignal> probes;
  std::vector<double> times;
  std::vector<Atom> nu;  // time weights for the L2(nu) isometry; empty: unit mass on `times`
  std::size_t n_reps = 0;
  std::uint64_t master_seed = 0;
  std::vector<std::string> suites;
  nlohmann::ordered_json source;  // the parsed document, for archives

  TimeGrid tgrid() const;
  DelayGrid ugrid() const;
};

ExperimentConfig parse_config(const nlohmann::ordered_json& doc);
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

}  // namespace sio::harness

#endif  // SIO_HARNESS_CONFIG_HPP_
