#include "specklelab/nn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "specklelab/errors.hpp"
#include "specklelab/rng.hpp"

namespace specklelab {

namespace {

void check_conv_args(const Tensor& x, const LayerParams& p, const ConvSpec& spec) {
  if (x.channels != spec.in_channels)
    throw ShapeError("conv2d: input has " + std::to_string(x.channels) +
                     " channels, spec expects " + std::to_string(spec.in_channels));
  if (p.weights.batch != spec.out_channels || p.weights.channels != spec.in_channels ||
      p.weights.height != spec.kernel || p.weights.width != spec.kernel)
    throw ShapeError("conv2d: weight tensor does not match spec");
  if (static_cast<int>(p.bias.size()) != spec.out_channels)
    throw ShapeError("conv2d: bias length does not match out_channels");
  if (spec.kernel % 2 == 0) throw std::invalid_argument("conv2d: kernel must be odd");
}

}  // namespace

Tensor conv2d_forward(const Tensor& x, const LayerParams& p, const ConvSpec& spec) {
  check_conv_args(x, p, spec);
  const int B = x.batch, N = spec.in_channels, M = spec.out_channels;
  const int H = x.height, W = x.width, K = spec.kernel, P = spec.padding();

  Tensor out(B, M, H, W);
  for (int b = 0; b < B; ++b) {
    for (int m = 0; m < M; ++m) {
      double* oplane = &out.data[out.index(b, m, 0, 0)];
      std::fill_n(oplane, static_cast<std::size_t>(H) * W, p.bias[m]);
      for (int n = 0; n < N; ++n) {
        const double* xplane = &x.data[x.index(b, n, 0, 0)];
        for (int ky = 0; ky < K; ++ky) {
          const int y0 = std::max(0, P - ky), y1 = std::min(H, H + P - ky);
          for (int kx = 0; kx < K; ++kx) {
            const double wv = p.weights.at(m, n, ky, kx);
            if (wv == 0.0) continue;
            const int x0 = std::max(0, P - kx), x1 = std::min(W, W + P - kx);
            for (int y = y0; y < y1; ++y) {
              double* orow = oplane + static_cast<std::size_t>(y) * W;
              const double* xrow = xplane + static_cast<std::size_t>(y + ky - P) * W + (kx - P);
              for (int xx = x0; xx < x1; ++xx) orow[xx] += wv * xrow[xx];
            }
          }
        }
      }
    }
  }
  return out;
}

void conv2d_backward(const Tensor& x, const LayerParams& p, const ConvSpec& spec,
                     const Tensor& dz, Tensor& dx, Tensor& dweights,
                     std::vector<double>& dbias) {
  check_conv_args(x, p, spec);
  if (dz.batch != x.batch || dz.channels != spec.out_channels || dz.height != x.height ||
      dz.width != x.width)
    throw ShapeError("conv2d_backward: upstream gradient shape mismatch");

  const int B = x.batch, N = spec.in_channels, M = spec.out_channels;
  const int H = x.height, W = x.width, K = spec.kernel, P = spec.padding();

  dx = Tensor(B, N, H, W);
  dweights = Tensor(M, N, K, K);
  dbias.assign(M, 0.0);

  for (int b = 0; b < B; ++b) {
    for (int m = 0; m < M; ++m) {
      const double* zplane = &dz.data[dz.index(b, m, 0, 0)];
      for (std::size_t i = 0; i < static_cast<std::size_t>(H) * W; ++i) dbias[m] += zplane[i];
      for (int n = 0; n < N; ++n) {
        const double* xplane = &x.data[x.index(b, n, 0, 0)];
        double* dxplane = &dx.data[dx.index(b, n, 0, 0)];
        for (int ky = 0; ky < K; ++ky) {
          const int y0 = std::max(0, P - ky), y1 = std::min(H, H + P - ky);
          for (int kx = 0; kx < K; ++kx) {
            const int x0 = std::max(0, P - kx), x1 = std::min(W, W + P - kx);
            const double wv = p.weights.at(m, n, ky, kx);
            double wsum = 0.0;
            for (int y = y0; y < y1; ++y) {
              const double* zrow = zplane + static_cast<std::size_t>(y) * W;
              const double* xrow = xplane + static_cast<std::size_t>(y + ky - P) * W + (kx - P);
              double* dxrow = dxplane + static_cast<std::size_t>(y + ky - P) * W + (kx - P);
              for (int xx = x0; xx < x1; ++xx) {
                wsum += zrow[xx] * xrow[xx];
                dxrow[xx] += wv * zrow[xx];
              }
            }
            dweights.at(m, n, ky, kx) += wsum;
          }
        }
      }
    }
  }
}

Tensor relu_forward(const Tensor& x) {
  Tensor out = x;
  for (double& v : out.data) v = v > 0.0 ? v : 0.0;
  return out;
}

Tensor relu_backward(const Tensor& input, const Tensor& upstream) {
  if (!input.same_shape(upstream)) throw ShapeError("relu_backward: shape mismatch");
  Tensor dx = upstream;
  for (std::size_t i = 0; i < dx.data.size(); ++i)
    if (input.data[i] <= 0.0) dx.data[i] = 0.0;
  return dx;
}

Tensor batchnorm_forward(const Tensor& x, LayerParams& p, Mode mode, BatchNormCache* cache) {
  const int C = x.channels;
  if (!p.has_bn || static_cast<int>(p.bn_scale.size()) != C)
    throw ShapeError("batchnorm_forward: layer has no BN buffers for " + std::to_string(C) +
                     " channels");
  const int B = x.batch, H = x.height, W = x.width;
  const std::size_t plane = static_cast<std::size_t>(H) * W;
  const double count = static_cast<double>(B) * H * W;

  Tensor out(B, C, H, W);
  if (mode == Mode::Train) {
    if (count < 2.0)
      throw std::invalid_argument("batchnorm_forward: train mode needs batch*H*W >= 2");
    std::vector<double> mean(C, 0.0), var(C, 0.0);
    for (int c = 0; c < C; ++c) {
      double s = 0.0;
      for (int b = 0; b < B; ++b) {
        const double* xp = &x.data[x.index(b, c, 0, 0)];
        for (std::size_t i = 0; i < plane; ++i) s += xp[i];
      }
      mean[c] = s / count;
      double sq = 0.0;
      for (int b = 0; b < B; ++b) {
        const double* xp = &x.data[x.index(b, c, 0, 0)];
        for (std::size_t i = 0; i < plane; ++i) {
          const double d = xp[i] - mean[c];
          sq += d * d;
        }
      }
      var[c] = sq / count;  // biased
      const double inv = 1.0 / std::sqrt(var[c] + p.bn_epsilon);
      for (int b = 0; b < B; ++b) {
        const double* xp = &x.data[x.index(b, c, 0, 0)];
        double* op = &out.data[out.index(b, c, 0, 0)];
        for (std::size_t i = 0; i < plane; ++i)
          op[i] = p.bn_scale[c] * (xp[i] - mean[c]) * inv + p.bn_shift[c];
      }
      p.bn_running_mean[c] = p.bn_momentum * p.bn_running_mean[c] + (1.0 - p.bn_momentum) * mean[c];
      p.bn_running_var[c] = p.bn_momentum * p.bn_running_var[c] + (1.0 - p.bn_momentum) * var[c];
    }
    if (cache) {
      cache->input = x;
      cache->mean = std::move(mean);
      cache->var = std::move(var);
    }
  } else {
    for (int c = 0; c < C; ++c) {
      const double inv = 1.0 / std::sqrt(p.bn_running_var[c] + p.bn_epsilon);
      for (int b = 0; b < B; ++b) {
        const double* xp = &x.data[x.index(b, c, 0, 0)];
        double* op = &out.data[out.index(b, c, 0, 0)];
        for (std::size_t i = 0; i < plane; ++i)
          op[i] = p.bn_scale[c] * (xp[i] - p.bn_running_mean[c]) * inv + p.bn_shift[c];
      }
    }
  }
  return out;
}

void batchnorm_backward(const LayerParams& p, const BatchNormCache& cache, const Tensor& upstream,
                        Tensor& dx, std::vector<double>& dscale, std::vector<double>& dshift) {
  const Tensor& x = cache.input;
  if (!x.same_shape(upstream)) throw ShapeError("batchnorm_backward: shape mismatch");
  const int B = x.batch, C = x.channels, H = x.height, W = x.width;
  const std::size_t plane = static_cast<std::size_t>(H) * W;
  const double count = static_cast<double>(B) * H * W;

  dx = Tensor(B, C, H, W);
  dscale.assign(C, 0.0);
  dshift.assign(C, 0.0);

  for (int c = 0; c < C; ++c) {
    const double inv = 1.0 / std::sqrt(cache.var[c] + p.bn_epsilon);
    double sum_dy = 0.0, sum_dy_xhat = 0.0;
    for (int b = 0; b < B; ++b) {
      const double* xp = &x.data[x.index(b, c, 0, 0)];
      const double* up = &upstream.data[upstream.index(b, c, 0, 0)];
      for (std::size_t i = 0; i < plane; ++i) {
        const double xhat = (xp[i] - cache.mean[c]) * inv;
        sum_dy += up[i];
        sum_dy_xhat += up[i] * xhat;
      }
    }
    dshift[c] = sum_dy;
    dscale[c] = sum_dy_xhat;
    const double g = p.bn_scale[c] * inv / count;
    for (int b = 0; b < B; ++b) {
      const double* xp = &x.data[x.index(b, c, 0, 0)];
      const double* up = &upstream.data[upstream.index(b, c, 0, 0)];
      double* dp = &dx.data[dx.index(b, c, 0, 0)];
      for (std::size_t i = 0; i < plane; ++i) {
        const double xhat = (xp[i] - cache.mean[c]) * inv;
        dp[i] = g * (count * up[i] - sum_dy - xhat * sum_dy_xhat);
      }
    }
  }
}

LayerParams he_init(const ConvSpec& spec, bool with_bn, std::uint64_t seed) {
  LayerParams p;
  p.weights = Tensor(spec.out_channels, spec.in_channels, spec.kernel, spec.kernel);
  const double sigma = std::sqrt(2.0 / (static_cast<double>(spec.in_channels) * spec.kernel * spec.kernel));
  Rng rng(seed);
  for (double& w : p.weights.data) w = sigma * rng.normal();
  p.bias.assign(spec.out_channels, 0.0);
  p.has_bn = with_bn;
  if (with_bn) {
    p.bn_scale.assign(spec.out_channels, 1.0);
    p.bn_shift.assign(spec.out_channels, 0.0);
    p.bn_running_mean.assign(spec.out_channels, 0.0);
    p.bn_running_var.assign(spec.out_channels, 1.0);
  }
  return p;
}

OptimState make_optim_state(const std::vector<LayerParams>& params, double learning_rate,
                            double momentum) {
  OptimState state;
  state.learning_rate = learning_rate;
  state.momentum = momentum;
  state.velocity.reserve(params.size());
  for (const auto& p : params) {
    LayerGrads v;
    v.weights = Tensor(p.weights.batch, p.weights.channels, p.weights.height, p.weights.width);
    v.bias.assign(p.bias.size(), 0.0);
    v.bn_scale.assign(p.bn_scale.size(), 0.0);
    v.bn_shift.assign(p.bn_shift.size(), 0.0);
    state.velocity.push_back(std::move(v));
  }
  return state;
}

void momentum_update(std::vector<double>& param, const std::vector<double>& grad,
                     std::vector<double>& velocity, double learning_rate, double momentum) {
  if (param.size() != grad.size() || param.size() != velocity.size())
    throw ShapeError("momentum_update: buffer sizes disagree");
  for (std::size_t i = 0; i < param.size(); ++i) {
    velocity[i] = momentum * velocity[i] + grad[i];
    param[i] -= learning_rate * velocity[i];
  }
}

void sgd_momentum_step(std::vector<LayerParams>& params, const std::vector<LayerGrads>& grads,
                       OptimState& state) {
  if (params.size() != grads.size() || params.size() != state.velocity.size())
    throw ShapeError("sgd_momentum_step: layer counts disagree");
  for (std::size_t l = 0; l < params.size(); ++l) {
    momentum_update(params[l].weights.data, grads[l].weights.data, state.velocity[l].weights.data,
                    state.learning_rate, state.momentum);
    momentum_update(params[l].bias, grads[l].bias, state.velocity[l].bias, state.learning_rate,
                    state.momentum);
    if (params[l].has_bn) {
      momentum_update(params[l].bn_scale, grads[l].bn_scale, state.velocity[l].bn_scale,
                      state.learning_rate, state.momentum);
      momentum_update(params[l].bn_shift, grads[l].bn_shift, state.velocity[l].bn_shift,
                      state.learning_rate, state.momentum);
    }
  }
}

}  // namespace specklelab
