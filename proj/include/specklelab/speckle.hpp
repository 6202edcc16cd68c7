#pragma once

#include <cstdint>

#include "specklelab/image.hpp"

namespace specklelab {

struct SpeckleConfig {
  int looks = 1;           // L, number of looks
  std::uint64_t seed = 0;
};

// Field of i.i.d. unit-mean intensity speckle: each pixel ~ Gamma(shape L,
// rate L), so E[N] = 1 and Var[N] = 1/L. Deterministic per seed.
GrayImage gamma_speckle_field(const SpeckleConfig& cfg, int height, int width);

// Y = X * N, elementwise.
GrayImage apply_speckle(const GrayImage& clean, const GrayImage& noise);

// Unit-mean Gamma density L^L n^(L-1) e^(-Ln) / Gamma(L).
double gamma_pdf(double n, int looks);

}  // namespace specklelab
