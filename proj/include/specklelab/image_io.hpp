#pragma once

#include <filesystem>

#include "specklelab/image.hpp"

namespace specklelab {

enum class ImageFormat {
  Gimg,   // native: "GIMG1\n", ASCII "height width\n", LE float64 row-major
  Pgm8,   // binary PGM, maxval 255
  Pgm16,  // binary PGM, maxval 65535, big-endian samples
};

// Sniffs the magic: GIMG1, P5 (grayscale) or P6 (RGB, reduced to luma by the
// ITU-R 601 weights 0.299/0.587/0.114). Integer samples are scaled by 1/maxval
// into [0,1]. Throws ParseError on malformed or truncated input.
GrayImage load_image(const std::filesystem::path& path);

// Explicit format. PGM quantizes with round(v * maxval), clamped to [0, maxval].
void save_image(const GrayImage& img, const std::filesystem::path& path, ImageFormat format);

// Format by extension: ".gimg" native, ".pgm" 8-bit PGM.
void save_image(const GrayImage& img, const std::filesystem::path& path);

}  // namespace specklelab
