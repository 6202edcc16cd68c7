#pragma once

#include <cstdint>
#include <vector>

#include "specklelab/tensor.hpp"

namespace specklelab {

enum class Mode { Train, Infer };

struct ConvSpec {
  int in_channels = 1;
  int out_channels = 1;
  int kernel = 3;  // odd; stride fixed at 1

  int padding() const { return (kernel - 1) / 2; }  // same-size output
};

// Learnable state of one conv(+BN) layer. BN buffers are empty when the layer
// carries no batch normalization.
struct LayerParams {
  Tensor weights;            // (M, N, K, K)
  std::vector<double> bias;  // M
  bool has_bn = false;
  std::vector<double> bn_scale;         // gamma, M
  std::vector<double> bn_shift;         // beta, M
  std::vector<double> bn_running_mean;  // M
  std::vector<double> bn_running_var;   // M
  double bn_epsilon = 1e-5;
  double bn_momentum = 0.9;  // running <- momentum*running + (1-momentum)*batch
};

struct LayerGrads {
  Tensor weights;
  std::vector<double> bias;
  std::vector<double> bn_scale;
  std::vector<double> bn_shift;
};

// Per-layer forward cache for the backward pass.
struct BatchNormCache {
  Tensor input;  // pre-normalization activations
  std::vector<double> mean;
  std::vector<double> var;  // biased
};

// Convolution, cross-correlation convention (kernel not flipped), zero padding
// (K-1)/2, stride 1: out(b,m) = sum_n w(m,n) (*) x(b,n) + bias(m).
Tensor conv2d_forward(const Tensor& x, const LayerParams& p, const ConvSpec& spec);

// Gradients of the convolution given upstream dz. dx has the shape of x;
// grads.weights/bias are overwritten (not accumulated).
void conv2d_backward(const Tensor& x, const LayerParams& p, const ConvSpec& spec,
                     const Tensor& dz, Tensor& dx, Tensor& dweights,
                     std::vector<double>& dbias);

Tensor relu_forward(const Tensor& x);
// Subgradient at exactly 0 is 0.
Tensor relu_backward(const Tensor& input, const Tensor& upstream);

// Train mode normalizes by batch statistics (biased variance), applies
// scale/shift, and moves the running statistics; infer mode uses the running
// statistics only. Train mode requires batch*H*W >= 2 per channel.
Tensor batchnorm_forward(const Tensor& x, LayerParams& p, Mode mode,
                         BatchNormCache* cache = nullptr);

void batchnorm_backward(const LayerParams& p, const BatchNormCache& cache,
                        const Tensor& upstream, Tensor& dx,
                        std::vector<double>& dscale, std::vector<double>& dshift);

// He-normal init: weights ~ N(0, 2/(N*K^2)), bias 0, BN scale 1 / shift 0,
// running mean 0 / var 1. Deterministic per seed.
LayerParams he_init(const ConvSpec& spec, bool with_bn, std::uint64_t seed);

// Classical momentum: v <- mu*v + g; p <- p - eta*v.
struct OptimState {
  double learning_rate = 2e-6;
  double momentum = 0.9;
  std::vector<LayerGrads> velocity;  // mirrors the parameter shapes, zero-initialized
};

OptimState make_optim_state(const std::vector<LayerParams>& params, double learning_rate,
                            double momentum);

void sgd_momentum_step(std::vector<LayerParams>& params, const std::vector<LayerGrads>& grads,
                       OptimState& state);

// Single-buffer update used by sgd_momentum_step; exposed for direct testing.
void momentum_update(std::vector<double>& param, const std::vector<double>& grad,
                     std::vector<double>& velocity, double learning_rate, double momentum);

}  // namespace specklelab
