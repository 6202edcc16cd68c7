#include "specklelab/tensor.hpp"

#include <algorithm>
#include <stdexcept>

#include "specklelab/errors.hpp"

namespace specklelab {

Tensor to_tensor(const GrayImage& img) {
  Tensor t(1, 1, img.height, img.width);
  t.data = img.data;
  return t;
}

GrayImage from_tensor(const Tensor& t, int b, bool clamp_nonneg) {
  if (t.channels != 1) throw ShapeError("from_tensor: expected a single-channel tensor");
  if (b < 0 || b >= t.batch) throw std::invalid_argument("from_tensor: batch index out of range");
  GrayImage img(t.height, t.width);
  const std::size_t offset = t.index(b, 0, 0, 0);
  std::copy_n(t.data.begin() + offset, img.size(), img.data.begin());
  if (clamp_nonneg)
    for (double& v : img.data) v = std::max(0.0, v);
  return img;
}

}  // namespace specklelab
