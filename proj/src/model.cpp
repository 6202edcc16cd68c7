#include "specklelab/model.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "specklelab/errors.hpp"
#include "specklelab/rng.hpp"

namespace specklelab {

void ModelConfig::validate() const {
  if (num_layers < 2) throw std::invalid_argument("ModelConfig: num_layers must be >= 2");
  if (hidden_channels < 1) throw std::invalid_argument("ModelConfig: hidden_channels must be >= 1");
  if (kernel < 1 || kernel % 2 == 0) throw std::invalid_argument("ModelConfig: kernel must be odd and >= 1");
  if (in_channels < 1 || out_channels < 1)
    throw std::invalid_argument("ModelConfig: channel counts must be >= 1");
  if (bn_epsilon <= 0.0) throw std::invalid_argument("ModelConfig: bn_epsilon must be > 0");
  if (bn_momentum <= 0.0 || bn_momentum >= 1.0)
    throw std::invalid_argument("ModelConfig: bn_momentum must be in (0,1)");
}

ConvSpec ModelConfig::conv_spec(int layer) const {
  ConvSpec s;
  s.kernel = kernel;
  s.in_channels = layer == 0 ? in_channels : hidden_channels;
  s.out_channels = layer == num_layers - 1 ? out_channels : hidden_channels;
  return s;
}

Model build_model(const ModelConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  Model model;
  model.config = cfg;
  model.layers.reserve(cfg.num_layers);
  for (int l = 0; l < cfg.num_layers; ++l) {
    LayerParams p = he_init(cfg.conv_spec(l), cfg.bn_on_layer(l), mix_seed(seed, l));
    p.bn_epsilon = cfg.bn_epsilon;
    p.bn_momentum = cfg.bn_momentum;
    model.layers.push_back(std::move(p));
  }
  return model;
}

Tensor model_forward(Model& model, const Tensor& input, Mode mode, Tape* tape) {
  const ModelConfig& cfg = model.config;
  if (input.channels != cfg.in_channels)
    throw ShapeError("model_forward: input has " + std::to_string(input.channels) +
                     " channels, expected " + std::to_string(cfg.in_channels));
  if (input.height < cfg.kernel || input.width < cfg.kernel)
    throw std::invalid_argument("model_forward: input smaller than the kernel");

  if (tape) {
    tape->layers.assign(cfg.num_layers, {});
    tape->recorded = mode == Mode::Train;
  }

  Tensor h = input;
  for (int l = 0; l < cfg.num_layers; ++l) {
    Tape::LayerCache* cache = tape && mode == Mode::Train ? &tape->layers[l] : nullptr;
    if (cache) cache->conv_in = h;
    h = conv2d_forward(h, model.layers[l], cfg.conv_spec(l));

    const bool bn = cfg.bn_on_layer(l);
    const bool relu = cfg.relu_on_layer(l);
    auto apply_bn = [&] {
      h = batchnorm_forward(h, model.layers[l], mode, cache ? &cache->bn : nullptr);
    };
    auto apply_relu = [&] {
      if (cache) cache->relu_in = h;
      h = relu_forward(h);
    };
    if (cfg.relu_before_bn) {
      if (relu) apply_relu();
      if (bn) apply_bn();
    } else {
      if (bn) apply_bn();
      if (relu) apply_relu();
    }
  }
  return h;
}

std::vector<LayerGrads> model_backward(const Model& model, const Tape& tape,
                                       const Tensor& upstream, Tensor* dinput) {
  const ModelConfig& cfg = model.config;
  if (!tape.recorded || static_cast<int>(tape.layers.size()) != cfg.num_layers)
    throw StateError("model_backward: no recorded train-mode forward pass");

  std::vector<LayerGrads> grads(cfg.num_layers);
  Tensor d = upstream;
  for (int l = cfg.num_layers - 1; l >= 0; --l) {
    const Tape::LayerCache& cache = tape.layers[l];
    const bool bn = cfg.bn_on_layer(l);
    const bool relu = cfg.relu_on_layer(l);
    auto back_bn = [&] {
      Tensor dx;
      batchnorm_backward(model.layers[l], cache.bn, d, dx, grads[l].bn_scale, grads[l].bn_shift);
      d = std::move(dx);
    };
    auto back_relu = [&] { d = relu_backward(cache.relu_in, d); };
    if (cfg.relu_before_bn) {
      if (bn) back_bn();
      if (relu) back_relu();
    } else {
      if (relu) back_relu();
      if (bn) back_bn();
    }
    Tensor dx;
    conv2d_backward(cache.conv_in, model.layers[l], cfg.conv_spec(l), d, dx, grads[l].weights,
                    grads[l].bias);
    d = std::move(dx);
  }
  if (dinput) *dinput = std::move(d);
  return grads;
}

GrayImage predict_noise(const GrayImage& noisy, const GrayImage& prediction, double floor) {
  if (!noisy.same_shape(prediction))
    throw ShapeError("predict_noise: noisy and prediction dimensions differ");
  if (floor <= 0.0) throw std::invalid_argument("predict_noise: floor must be > 0");
  GrayImage ratio(noisy.height, noisy.width);
  for (std::size_t i = 0; i < ratio.data.size(); ++i)
    ratio.data[i] = noisy.data[i] / std::max(prediction.data[i], floor);
  return ratio;
}

}  // namespace specklelab
