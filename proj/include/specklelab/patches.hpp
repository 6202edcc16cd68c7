#pragma once

#include <cstdint>
#include <vector>

#include "specklelab/image.hpp"

namespace specklelab {

struct PatchSpec {
  int patch_size = 65;
  int stride = 65;
  std::size_t max_patches = 0;  // 0 = unlimited
  bool shuffle = false;
  std::uint64_t shuffle_seed = 0;
};

// Top-left anchored sliding-window positions, row-major. Anchors past
// (dim - patch_size) are dropped, never padded or reflected.
std::vector<GrayImage> extract_patches(const GrayImage& image, const PatchSpec& spec);

// Anchor grid helper shared with the dataset builder: number of placements
// along one axis of length `dim`.
int patch_positions(int dim, int patch_size, int stride);

GrayImage crop_patch(const GrayImage& image, int y0, int x0, int size);

}  // namespace specklelab
