#include "sio/harness/archive.hpp"

#include <cstring>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <sodium.h>

#include "sio/channel_model.hpp"

namespace sio::harness {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kFormat = "siochan-archive";
constexpr int kFormatVersion = 1;
constexpr const char* kExperiment = "simulate";

std::string checksum(const double* p, std::size_t n) {
  if (sodium_init() < 0) throw std::runtime_error("libsodium failed to initialise");
  unsigned char out[16];
  std::vector<unsigned char> bytes(n * sizeof(double));
  std::memcpy(bytes.data(), p, bytes.size());
  crypto_generichash(out, sizeof out, bytes.data(), bytes.size(), nullptr, 0);
  std::string hex;
  for (unsigned char c : out) hex += fmt::format("{:02x}", c);
  return hex;
}

std::string record_line(const ChannelSampler& sampler, std::uint64_t master, std::size_t i) {
  const std::uint64_t seed = derive_seed(master, kExperiment, i);
  const KernelRealization real = sampler.sample(seed);
  const auto& d = real.data();
  const std::size_t nu = d.ugrid.size();
  Json rec;
  rec["index"] = i;
  rec["seed"] = seed;
  Json jumps = Json::array();
  for (const auto& jp : d.jumps) jumps.push_back({{"delay", jp.delay}, {"sizes", jp.sizes}});
  rec["jumps"] = std::move(jumps);
  Json sums = Json::array();
  for (std::size_t q = 0; q < d.tgrid.size(); ++q) sums.push_back(checksum(&d.gaussian[q * nu], nu));
  rec["gaussian_blake2b"] = std::move(sums);
  return rec.dump();
}

Json header(const ExperimentConfig& cfg, const ChannelSampler& sampler) {
  const auto& spec = cfg.channel;
  const TimeGrid& tg = sampler.tgrid();
  const DelayGrid& ug = sampler.ugrid();
  Json large = Json::array();
  Json small = Json::array();
  for (double t : tg.nodes()) {
    const SizeDist ft = spec.sizes_at(t);
    const double big = ft.integrate([](double y) { return y; }, Region::large, spec.truncation);
    const double sml = ft.integrate([](double y) { return y; }, Region::small, spec.truncation);
    Json lrow = Json::array();
    Json srow = Json::array();
    for (double u : ug.nodes()) {
      lrow.push_back(spec.intensity.cumulative(u) * big);
      srow.push_back(spec.intensity.cumulative(u) * sml);
    }
    large.push_back(std::move(lrow));
    small.push_back(std::move(srow));
  }
  Json h;
  h["format"] = kFormat;
  h["format_version"] = kFormatVersion;
  h["master_seed"] = cfg.master_seed;
  h["experiment"] = kExperiment;
  h["n_reps"] = cfg.n_reps;
  h["config"] = cfg.source;
  h["compensator"] = {{"large", std::move(large)}, {"small", std::move(small)}};
  return h;
}

}  // namespace

std::string write_archive(const ExperimentConfig& cfg, unsigned workers) {
  const ChannelSampler sampler(cfg.channel, cfg.tgrid(), cfg.ugrid());
  std::string out = header(cfg, sampler).dump() + "\n";
  const auto lines = parallel_map(
      cfg.n_reps, [&](std::size_t i) { return record_line(sampler, cfg.master_seed, i); }, workers);
  for (const auto& l : lines) out += l + "\n";
  return out;
}

ArchiveCheck read_archive(const std::string& text, unsigned workers) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("archive", "empty archive");
  Json h;
  try {
    h = Json::parse(line);
  } catch (const Json::parse_error& e) {
    throw ConfigError("archive", std::string("malformed header: ") + e.what());
  }
  if (!h.contains("format") || h["format"] != kFormat || h.value("format_version", 0) != kFormatVersion) {
    throw ConfigError("archive", "not a siochan archive");
  }
  ArchiveCheck r;
  r.config = parse_config(h.at("config"));
  if (h.at("master_seed").get<std::uint64_t>() != r.config.master_seed ||
      h.at("n_reps").get<std::size_t>() != r.config.n_reps) {
    throw ConfigError("archive", "header disagrees with the embedded config");
  }
  const ChannelSampler sampler(r.config.channel, r.config.tgrid(), r.config.ugrid());
  if (!(header(r.config, sampler) == h)) ++r.mismatches;
  std::vector<std::string> stored;
  while (std::getline(in, line)) {
    if (!line.empty()) stored.push_back(line);
  }
  if (stored.size() != r.config.n_reps) {
    throw ConfigError("archive", "record count disagrees with n_reps");
  }
  r.records = stored.size();
  const auto same = parallel_map(
      stored.size(),
      [&](std::size_t i) {
        return record_line(sampler, r.config.master_seed, i) == stored[i] ? 0 : 1;
      },
      workers);
  for (int s : same) r.mismatches += static_cast<std::size_t>(s);
  return r;
}

}  // namespace sio::harness
