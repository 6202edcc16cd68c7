#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>

#include "specklelab/model.hpp"

namespace specklelab {

struct CheckpointMeta {
  int epoch = 0;
  std::uint64_t seed = 0;
  double lambda = 0.0;
  double learning_rate = 0.0;
};

struct Checkpoint {
  Model model;
  CheckpointMeta meta;
};

// File layout: "KLDNN1\n", ASCII "key value" header lines terminated by a
// blank line, then per-layer buffers as little-endian float64, each preceded
// by an ASCII "name count" line. Round-trip is bit-exact (header doubles are
// printed with 17 significant digits).
void save_checkpoint(const Model& model, const CheckpointMeta& meta,
                     const std::filesystem::path& path);

// Throws ParseError (corrupt/truncated, naming the offending section),
// VersionError (unknown format version) or, when `expected` is given,
// ConfigError on any architecture mismatch.
Checkpoint load_checkpoint(const std::filesystem::path& path,
                           const std::optional<ModelConfig>& expected = std::nullopt);

}  // namespace specklelab
