#ifndef SIO_HARNESS_ARCHIVE_HPP_
#define SIO_HARNESS_ARCHIVE_HPP_

#include <string>

#include "sio/harness/config.hpp"
#include "sio/mc_stats.hpp"

namespace sio::harness {

// JSON-lines archive: a header with the config, lineage and the deterministic
// compensator fields, then one line per realization with its seed, jump
// records and a BLAKE2b checksum of the Gaussian field per time node.
std::string write_archive(const ExperimentConfig& cfg, unsigned workers = worker_count());

struct ArchiveCheck {
  ExperimentConfig config;
  std::size_t records = 0;
  std::size_t mismatches = 0;  // records that do not regenerate bit for bit
};

// Parses an archive, regenerates every realization from its lineage and
// compares it with the stored summary.
ArchiveCheck read_archive(const std::string& text, unsigned workers = worker_count());

}  // namespace sio::harness

#endif  // SIO_HARNESS_ARCHIVE_HPP_
