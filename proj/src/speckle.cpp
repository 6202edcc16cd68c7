#include "specklelab/speckle.hpp"

#include <cmath>
#include <stdexcept>

#include "specklelab/errors.hpp"
#include "specklelab/rng.hpp"

namespace specklelab {

GrayImage gamma_speckle_field(const SpeckleConfig& cfg, int height, int width) {
  if (height < 1 || width < 1)
    throw std::invalid_argument("gamma_speckle_field: dimensions must be >= 1");
  if (cfg.looks < 1)
    throw std::invalid_argument("gamma_speckle_field: looks must be >= 1");
  GrayImage field(height, width);
  Rng rng(cfg.seed);
  const double shape = static_cast<double>(cfg.looks);
  for (double& v : field.data) v = rng.gamma(shape) / shape;
  return field;
}

GrayImage apply_speckle(const GrayImage& clean, const GrayImage& noise) {
  if (!clean.same_shape(noise))
    throw ShapeError("apply_speckle: clean and noise dimensions differ");
  GrayImage out(clean.height, clean.width);
  for (std::size_t i = 0; i < clean.data.size(); ++i)
    out.data[i] = clean.data[i] * noise.data[i];
  return out;
}

double gamma_pdf(double n, int looks) {
  if (n < 0.0) throw std::invalid_argument("gamma_pdf: n must be >= 0");
  if (looks < 1) throw std::invalid_argument("gamma_pdf: looks must be >= 1");
  const double L = static_cast<double>(looks);
  if (n == 0.0) return looks == 1 ? 1.0 : 0.0;
  return std::exp(L * std::log(L) + (L - 1.0) * std::log(n) - L * n - std::lgamma(L));
}

}  // namespace specklelab
