#include "specklelab/checkpoint.hpp"

#include <bit>
#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "specklelab/errors.hpp"

namespace specklelab {

namespace {

constexpr char kMagic[] = "KLDNN1\n";
constexpr int kFormatVersion = 1;

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_buffer(std::ostream& out, const std::string& name, const std::vector<double>& values) {
  out << name << " " << values.size() << "\n";
  std::vector<unsigned char> raw(values.size() * 8);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::uint64_t bits = std::bit_cast<std::uint64_t>(values[i]);
    for (int b = 0; b < 8; ++b) raw[i * 8 + b] = static_cast<unsigned char>(bits >> (8 * b));
  }
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
}

std::vector<double> read_buffer(std::istream& in, const std::string& expected_name,
                                std::size_t expected_count) {
  std::string line;
  if (!std::getline(in, line))
    throw ParseError("checkpoint: missing buffer header for '" + expected_name + "'");
  char name[128] = {};
  unsigned long long count = 0;
  if (std::sscanf(line.c_str(), "%127s %llu", name, &count) != 2)
    throw ParseError("checkpoint: malformed buffer header '" + line + "'");
  if (expected_name != name)
    throw ParseError("checkpoint: expected buffer '" + expected_name + "', found '" + name + "'");
  if (count != expected_count)
    throw ParseError("checkpoint: buffer '" + expected_name + "' has " + std::to_string(count) +
                     " elements, expected " + std::to_string(expected_count));
  std::vector<unsigned char> raw(count * 8);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(in.gcount()) != raw.size())
    throw ParseError("checkpoint: buffer '" + expected_name + "' is truncated");
  std::vector<double> values(count);
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(raw[i * 8 + b]) << (8 * b);
    values[i] = std::bit_cast<double>(bits);
  }
  return values;
}

struct Header {
  std::map<std::string, std::string> kv;

  const std::string& get(const std::string& key) const {
    auto it = kv.find(key);
    if (it == kv.end()) throw ParseError("checkpoint: header key '" + key + "' missing");
    return it->second;
  }
  long long get_int(const std::string& key) const {
    try {
      return std::stoll(get(key));
    } catch (const std::exception&) {
      throw ParseError("checkpoint: header key '" + key + "' is not an integer");
    }
  }
  std::uint64_t get_uint(const std::string& key) const {
    try {
      return std::stoull(get(key));
    } catch (const std::exception&) {
      throw ParseError("checkpoint: header key '" + key + "' is not an integer");
    }
  }
  double get_double(const std::string& key) const {
    try {
      return std::stod(get(key));
    } catch (const std::exception&) {
      throw ParseError("checkpoint: header key '" + key + "' is not a number");
    }
  }
};

}  // namespace

void save_checkpoint(const Model& model, const CheckpointMeta& meta,
                     const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("save_checkpoint: cannot open '" + path.string() + "'");
  const ModelConfig& c = model.config;
  out << kMagic;
  out << "format_version " << kFormatVersion << "\n";
  out << "num_layers " << c.num_layers << "\n";
  out << "hidden_channels " << c.hidden_channels << "\n";
  out << "kernel " << c.kernel << "\n";
  out << "in_channels " << c.in_channels << "\n";
  out << "out_channels " << c.out_channels << "\n";
  out << "bn_epsilon " << fmt_double(c.bn_epsilon) << "\n";
  out << "bn_momentum " << fmt_double(c.bn_momentum) << "\n";
  out << "relu_before_bn " << (c.relu_before_bn ? 1 : 0) << "\n";
  out << "epoch " << meta.epoch << "\n";
  out << "seed " << meta.seed << "\n";
  out << "lambda " << fmt_double(meta.lambda) << "\n";
  out << "learning_rate " << fmt_double(meta.learning_rate) << "\n";
  out << "\n";

  for (int l = 0; l < c.num_layers; ++l) {
    const LayerParams& p = model.layers[l];
    const std::string prefix = "layer" + std::to_string(l) + ".";
    write_buffer(out, prefix + "weights", p.weights.data);
    write_buffer(out, prefix + "bias", p.bias);
    if (p.has_bn) {
      write_buffer(out, prefix + "bn_scale", p.bn_scale);
      write_buffer(out, prefix + "bn_shift", p.bn_shift);
      write_buffer(out, prefix + "bn_running_mean", p.bn_running_mean);
      write_buffer(out, prefix + "bn_running_var", p.bn_running_var);
    }
  }
  out.flush();
  if (!out) throw std::runtime_error("save_checkpoint: write to '" + path.string() + "' failed");
}

Checkpoint load_checkpoint(const std::filesystem::path& path,
                           const std::optional<ModelConfig>& expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("load_checkpoint: cannot open '" + path.string() + "'");

  char magic[7] = {};
  in.read(magic, 7);
  if (in.gcount() != 7 || std::memcmp(magic, kMagic, 7) != 0)
    throw ParseError("checkpoint: bad magic number");

  Header header;
  std::string line;
  bool terminated = false;
  while (std::getline(in, line)) {
    if (line.empty()) {
      terminated = true;
      break;
    }
    const auto space = line.find(' ');
    if (space == std::string::npos)
      throw ParseError("checkpoint: malformed header line '" + line + "'");
    header.kv[line.substr(0, space)] = line.substr(space + 1);
  }
  if (!terminated) throw ParseError("checkpoint: header not terminated by a blank line");

  const long long version = header.get_int("format_version");
  if (version != kFormatVersion)
    throw VersionError("checkpoint: unsupported format_version " + std::to_string(version));

  ModelConfig cfg;
  cfg.num_layers = static_cast<int>(header.get_int("num_layers"));
  cfg.hidden_channels = static_cast<int>(header.get_int("hidden_channels"));
  cfg.kernel = static_cast<int>(header.get_int("kernel"));
  cfg.in_channels = static_cast<int>(header.get_int("in_channels"));
  cfg.out_channels = static_cast<int>(header.get_int("out_channels"));
  cfg.bn_epsilon = header.get_double("bn_epsilon");
  cfg.bn_momentum = header.get_double("bn_momentum");
  cfg.relu_before_bn = header.get_int("relu_before_bn") != 0;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("checkpoint: invalid config: ") + e.what());
  }

  if (expected && !(cfg == *expected))
    throw ConfigError("checkpoint: stored config does not match the requested one");

  Checkpoint ckpt;
  ckpt.meta.epoch = static_cast<int>(header.get_int("epoch"));
  ckpt.meta.seed = static_cast<std::uint64_t>(header.get_int("seed"));
  ckpt.meta.lambda = header.get_double("lambda");
  ckpt.meta.learning_rate = header.get_double("learning_rate");

  ckpt.model.config = cfg;
  ckpt.model.layers.reserve(cfg.num_layers);
  for (int l = 0; l < cfg.num_layers; ++l) {
    const ConvSpec spec = cfg.conv_spec(l);
    const std::string prefix = "layer" + std::to_string(l) + ".";
    LayerParams p;
    p.bn_epsilon = cfg.bn_epsilon;
    p.bn_momentum = cfg.bn_momentum;
    p.weights = Tensor(spec.out_channels, spec.in_channels, spec.kernel, spec.kernel);
    p.weights.data = read_buffer(in, prefix + "weights", p.weights.size());
    p.bias = read_buffer(in, prefix + "bias", spec.out_channels);
    p.has_bn = cfg.bn_on_layer(l);
    if (p.has_bn) {
      const std::size_t m = spec.out_channels;
      p.bn_scale = read_buffer(in, prefix + "bn_scale", m);
      p.bn_shift = read_buffer(in, prefix + "bn_shift", m);
      p.bn_running_mean = read_buffer(in, prefix + "bn_running_mean", m);
      p.bn_running_var = read_buffer(in, prefix + "bn_running_var", m);
    }
    ckpt.model.layers.push_back(std::move(p));
  }
  if (in.peek() != EOF) throw ParseError("checkpoint: trailing data after the last buffer");
  return ckpt;
}

}  // namespace specklelab
