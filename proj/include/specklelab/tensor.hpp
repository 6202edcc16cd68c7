#pragma once

#include <cstddef>
#include <vector>

#include "specklelab/image.hpp"

namespace specklelab {

// Dense (batch, channels, height, width) array of doubles, width fastest.
struct Tensor {
  int batch = 0;
  int channels = 0;
  int height = 0;
  int width = 0;
  std::vector<double> data;

  Tensor() = default;
  Tensor(int b, int c, int h, int w, double fill = 0.0)
      : batch(b), channels(c), height(h), width(w),
        data(static_cast<std::size_t>(b) * c * h * w, fill) {}

  std::size_t size() const { return data.size(); }

  std::size_t index(int b, int c, int y, int x) const {
    return ((static_cast<std::size_t>(b) * channels + c) * height + y) * width + x;
  }
  double& at(int b, int c, int y, int x) { return data[index(b, c, y, x)]; }
  double at(int b, int c, int y, int x) const { return data[index(b, c, y, x)]; }

  bool same_shape(const Tensor& o) const {
    return batch == o.batch && channels == o.channels && height == o.height && width == o.width;
  }
};

// (1, 1, H, W) view of an image, and back. from_tensor takes batch item b of a
// single-channel tensor; negative values are clamped to 0 when materializing.
Tensor to_tensor(const GrayImage& img);
GrayImage from_tensor(const Tensor& t, int b = 0, bool clamp_nonneg = true);

}  // namespace specklelab
