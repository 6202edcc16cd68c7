#include "specklelab/image_io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "specklelab/errors.hpp"

namespace specklelab {

namespace {

void write_f64_le(std::ostream& out, const double* values, std::size_t count) {
  std::vector<unsigned char> buf(count * 8);
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t bits = std::bit_cast<std::uint64_t>(values[i]);
    for (int b = 0; b < 8; ++b) buf[i * 8 + b] = static_cast<unsigned char>(bits >> (8 * b));
  }
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
}

void read_f64_le(std::istream& in, double* values, std::size_t count, const char* what) {
  std::vector<unsigned char> buf(count * 8);
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (static_cast<std::size_t>(in.gcount()) != buf.size())
    throw ParseError(std::string(what) + ": truncated float payload");
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(buf[i * 8 + b]) << (8 * b);
    values[i] = std::bit_cast<double>(bits);
  }
}

// PNM token reader: skips whitespace and '#' comments.
std::string pnm_token(std::istream& in, const char* what) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
    } else if (!std::isspace(c)) {
      tok.push_back(static_cast<char>(c));
      while ((c = in.peek()) != EOF && !std::isspace(c) && c != '#') tok.push_back(static_cast<char>(in.get()));
      return tok;
    }
  }
  throw ParseError(std::string(what) + ": unexpected end of header");
}

int pnm_int(std::istream& in, const char* what) {
  const std::string tok = pnm_token(in, what);
  try {
    std::size_t pos = 0;
    const int v = std::stoi(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError(std::string(what) + ": expected integer, got '" + tok + "'");
  }
}

GrayImage load_pnm(std::istream& in, bool rgb) {
  const char* what = rgb ? "ppm" : "pgm";
  const int width = pnm_int(in, what);
  const int height = pnm_int(in, what);
  const int maxval = pnm_int(in, what);
  if (width < 1 || height < 1) throw ParseError(std::string(what) + ": non-positive dimensions");
  if (maxval < 1 || maxval > 65535) throw ParseError(std::string(what) + ": maxval out of range");
  in.get();  // single whitespace after maxval

  const int samples = rgb ? 3 : 1;
  const std::size_t n = static_cast<std::size_t>(width) * height * samples;
  const int bytes_per = maxval > 255 ? 2 : 1;
  std::vector<unsigned char> raw(n * bytes_per);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(in.gcount()) != raw.size())
    throw ParseError(std::string(what) + ": truncated pixel payload");

  std::vector<double> vals(n);
  for (std::size_t i = 0; i < n; ++i) {
    const unsigned v = bytes_per == 1
                           ? raw[i]
                           : (static_cast<unsigned>(raw[2 * i]) << 8) | raw[2 * i + 1];  // big-endian
    vals[i] = static_cast<double>(v) / maxval;
  }

  GrayImage img(height, width);
  if (rgb) {
    for (std::size_t p = 0; p < img.size(); ++p)
      img.data[p] = 0.299 * vals[3 * p] + 0.587 * vals[3 * p + 1] + 0.114 * vals[3 * p + 2];
  } else {
    img.data = std::move(vals);
  }
  return img;
}

GrayImage load_gimg(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("gimg: missing dimension line");
  int height = 0, width = 0;
  if (std::sscanf(line.c_str(), "%d %d", &height, &width) != 2)
    throw ParseError("gimg: malformed dimension line '" + line + "'");
  if (height < 1 || width < 1) throw ParseError("gimg: non-positive dimensions");
  GrayImage img(height, width);
  read_f64_le(in, img.data.data(), img.size(), "gimg");
  if (in.peek() != EOF) throw ParseError("gimg: trailing data after pixel payload");
  return img;
}

void save_pgm(const GrayImage& img, std::ostream& out, int maxval) {
  out << "P5\n" << img.width << " " << img.height << "\n" << maxval << "\n";
  const int bytes_per = maxval > 255 ? 2 : 1;
  std::vector<unsigned char> raw(img.size() * bytes_per);
  for (std::size_t i = 0; i < img.size(); ++i) {
    long q = std::lround(img.data[i] * maxval);
    q = std::clamp(q, 0L, static_cast<long>(maxval));
    if (bytes_per == 1) {
      raw[i] = static_cast<unsigned char>(q);
    } else {
      raw[2 * i] = static_cast<unsigned char>(q >> 8);
      raw[2 * i + 1] = static_cast<unsigned char>(q & 0xff);
    }
  }
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
}

}  // namespace

GrayImage load_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  char magic[6] = {};
  in.read(magic, 2);
  if (in.gcount() != 2) throw ParseError(path.string() + ": file too short for a magic number");

  GrayImage img;
  if (magic[0] == 'P' && magic[1] == '5') {
    img = load_pnm(in, false);
  } else if (magic[0] == 'P' && magic[1] == '6') {
    img = load_pnm(in, true);
  } else if (magic[0] == 'G' && magic[1] == 'I') {
    in.read(magic + 2, 4);
    if (in.gcount() != 4 || std::memcmp(magic, "GIMG1\n", 6) != 0)
      throw ParseError(path.string() + ": unrecognized magic number");
    img = load_gimg(in);
  } else {
    throw ParseError(path.string() + ": unsupported format (expected GIMG1, P5 or P6)");
  }
  try {
    check_image(img, "loaded image");
  } catch (const std::invalid_argument& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return img;
}

void save_image(const GrayImage& img, const std::filesystem::path& path, ImageFormat format) {
  check_image(img, "save_image");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("save_image: cannot open '" + path.string() + "' for writing");
  switch (format) {
    case ImageFormat::Gimg:
      out << "GIMG1\n" << img.height << " " << img.width << "\n";
      write_f64_le(out, img.data.data(), img.size());
      break;
    case ImageFormat::Pgm8:
      save_pgm(img, out, 255);
      break;
    case ImageFormat::Pgm16:
      save_pgm(img, out, 65535);
      break;
  }
  out.flush();
  if (!out) throw std::runtime_error("save_image: write to '" + path.string() + "' failed");
}

void save_image(const GrayImage& img, const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".pgm") {
    save_image(img, path, ImageFormat::Pgm8);
  } else {
    save_image(img, path, ImageFormat::Gimg);
  }
}

}  // namespace specklelab
