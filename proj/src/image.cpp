#include "specklelab/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "specklelab/rng.hpp"

namespace specklelab {

GrayImage::GrayImage(int h, int w, double fill)
    : height(h), width(w), data(static_cast<std::size_t>(h) * (w > 0 ? w : 0), fill) {}

void check_image(const GrayImage& img, const char* what) {
  if (img.height < 1 || img.width < 1)
    throw std::invalid_argument(std::string(what) + ": dimensions must be >= 1");
  if (img.data.size() != static_cast<std::size_t>(img.height) * img.width)
    throw std::invalid_argument(std::string(what) + ": data length does not match dimensions");
  for (double v : img.data) {
    if (!std::isfinite(v) || v < 0.0)
      throw std::invalid_argument(std::string(what) + ": values must be finite and >= 0");
  }
}

double image_mean(const GrayImage& img) {
  double s = 0.0;
  for (double v : img.data) s += v;
  return s / static_cast<double>(img.data.size());
}

double image_variance(const GrayImage& img) {
  const double m = image_mean(img);
  double s = 0.0;
  for (double v : img.data) s += (v - m) * (v - m);
  return s / static_cast<double>(img.data.size());
}

GrayImage synthetic_phantom(int height, int width, std::uint64_t seed) {
  if (height < 1 || width < 1)
    throw std::invalid_argument("synthetic_phantom: dimensions must be >= 1");
  GrayImage img(height, width);

  // Diagonal gradient background.
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      img.at(y, x) = 0.25 + 0.3 * (static_cast<double>(x + y) / (height + width - 2 + 1e-12));

  Rng rng(mix_seed(seed, 0x7061'6e74ULL));
  const int n_rects = 6 + static_cast<int>(rng.below(5));
  for (int i = 0; i < n_rects; ++i) {
    const int rh = 1 + static_cast<int>(rng.below(std::max(1, height / 3)));
    const int rw = 1 + static_cast<int>(rng.below(std::max(1, width / 3)));
    const int y0 = static_cast<int>(rng.below(std::max(1, height - rh + 1)));
    const int x0 = static_cast<int>(rng.below(std::max(1, width - rw + 1)));
    const double v = 0.05 + 0.9 * rng.uniform();
    for (int y = y0; y < y0 + rh; ++y)
      for (int x = x0; x < x0 + rw; ++x) img.at(y, x) = v;
  }

  const int n_disks = 4 + static_cast<int>(rng.below(4));
  for (int i = 0; i < n_disks; ++i) {
    const int cy = static_cast<int>(rng.below(height));
    const int cx = static_cast<int>(rng.below(width));
    const int r = 1 + static_cast<int>(rng.below(std::max(1, std::min(height, width) / 6)));
    const double v = 0.05 + 0.9 * rng.uniform();
    for (int y = std::max(0, cy - r); y < std::min(height, cy + r + 1); ++y)
      for (int x = std::max(0, cx - r); x < std::min(width, cx + r + 1); ++x)
        if ((y - cy) * (y - cy) + (x - cx) * (x - cx) <= r * r) img.at(y, x) = v;
  }

  // Horizontal sinusoid strip for texture.
  const int strip_y = static_cast<int>(rng.below(std::max(1, height - height / 8 + 1)));
  const int strip_h = std::max(1, height / 8);
  const double freq = 0.15 + 0.2 * rng.uniform();
  for (int y = strip_y; y < std::min(height, strip_y + strip_h); ++y)
    for (int x = 0; x < width; ++x)
      img.at(y, x) = 0.5 + 0.4 * std::sin(freq * x);

  for (double& v : img.data) v = std::clamp(v, 0.05, 0.95);
  return img;
}

}  // namespace specklelab
