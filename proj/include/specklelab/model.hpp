#pragma once

#include <cstdint>
#include <vector>

#include "specklelab/nn.hpp"

namespace specklelab {

// Plain convolutional chain: BN on every layer except the last, ReLU on every
// layer except the first and the last, same-size outputs throughout.
struct ModelConfig {
  int num_layers = 10;
  int hidden_channels = 64;
  int kernel = 3;
  int in_channels = 1;
  int out_channels = 1;
  double bn_epsilon = 1e-5;
  double bn_momentum = 0.9;
  bool relu_before_bn = false;  // default order: conv -> BN -> ReLU

  void validate() const;
  bool bn_on_layer(int layer) const { return layer < num_layers - 1; }
  bool relu_on_layer(int layer) const { return layer > 0 && layer < num_layers - 1; }
  ConvSpec conv_spec(int layer) const;

  bool operator==(const ModelConfig&) const = default;
};

struct Model {
  ModelConfig config;
  std::vector<LayerParams> layers;
};

// Forward cache; one entry per layer plus a recorded flag guarding backward.
struct Tape {
  struct LayerCache {
    Tensor conv_in;
    BatchNormCache bn;  // filled only when the layer has BN
    Tensor relu_in;     // filled only when the layer has ReLU
  };
  std::vector<LayerCache> layers;
  bool recorded = false;
};

Model build_model(const ModelConfig& cfg, std::uint64_t seed);

// Train mode records the tape (when given) and moves BN running statistics;
// infer mode is pure. Input must be (batch, in_channels, H, W) with H, W >= K.
Tensor model_forward(Model& model, const Tensor& input, Mode mode, Tape* tape = nullptr);

// Reverse-mode gradients of the recorded composition. Throws StateError when
// the tape was not recorded by a train-mode forward.
std::vector<LayerGrads> model_backward(const Model& model, const Tape& tape,
                                       const Tensor& upstream, Tensor* dinput = nullptr);

// Predicted noise field: noisy / max(prediction, floor), elementwise.
GrayImage predict_noise(const GrayImage& noisy, const GrayImage& prediction, double floor = 1e-3);

}  // namespace specklelab
