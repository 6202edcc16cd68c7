#include "specklelab/patches.hpp"

#include <stdexcept>

#include "specklelab/rng.hpp"

namespace specklelab {

int patch_positions(int dim, int patch_size, int stride) {
  if (patch_size > dim) return 0;
  return (dim - patch_size) / stride + 1;
}

GrayImage crop_patch(const GrayImage& image, int y0, int x0, int size) {
  GrayImage p(size, size);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) p.at(y, x) = image.at(y0 + y, x0 + x);
  return p;
}

std::vector<GrayImage> extract_patches(const GrayImage& image, const PatchSpec& spec) {
  if (spec.patch_size < 1 || spec.patch_size > image.height || spec.patch_size > image.width)
    throw std::invalid_argument("extract_patches: patch_size must fit inside the image");
  if (spec.stride < 1) throw std::invalid_argument("extract_patches: stride must be >= 1");

  const int ny = patch_positions(image.height, spec.patch_size, spec.stride);
  const int nx = patch_positions(image.width, spec.patch_size, spec.stride);
  std::vector<GrayImage> patches;
  patches.reserve(static_cast<std::size_t>(ny) * nx);
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix)
      patches.push_back(crop_patch(image, iy * spec.stride, ix * spec.stride, spec.patch_size));

  if (spec.shuffle && patches.size() > 1) {
    Rng rng(spec.shuffle_seed);
    for (std::size_t i = patches.size() - 1; i > 0; --i)
      std::swap(patches[i], patches[rng.below(i + 1)]);
  }
  if (spec.max_patches > 0 && patches.size() > spec.max_patches)
    patches.resize(spec.max_patches);
  return patches;
}

}  // namespace specklelab
