#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace specklelab {

// Single-band intensity image, row-major doubles. Clean images live in [0,1];
// noisy and ratio images are unbounded above but never negative.
struct GrayImage {
  int height = 0;
  int width = 0;
  std::vector<double> data;

  GrayImage() = default;
  GrayImage(int h, int w, double fill = 0.0);

  double& at(int y, int x) { return data[static_cast<std::size_t>(y) * width + x]; }
  double at(int y, int x) const { return data[static_cast<std::size_t>(y) * width + x]; }
  std::size_t size() const { return data.size(); }

  bool same_shape(const GrayImage& other) const {
    return height == other.height && width == other.width;
  }
};

// Throws std::invalid_argument unless dims >= 1, data length matches and
// every value is finite and >= 0.
void check_image(const GrayImage& img, const char* what = "image");

double image_mean(const GrayImage& img);
double image_variance(const GrayImage& img);  // biased (divides by n)

// Deterministic synthetic scene: flat rectangles and disks over a gradient
// background plus a few texture strips. Values in [0.05, 0.95]. Serves as the
// bundled clean test image for demos and the desk-scale training checks.
GrayImage synthetic_phantom(int height, int width, std::uint64_t seed);

}  // namespace specklelab
