#include "wkm/image.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace wkm {

namespace {

// Skips whitespace and '#' comments; returns the next token.
std::string next_token(std::istream& in) {
  std::string tok;
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (std::isspace(c)) {
      c = in.get();
    } else {
      break;
    }
  }
  while (c != EOF && !std::isspace(c)) {
    tok.push_back(static_cast<char>(c));
    c = in.get();
  }
  if (c != EOF) in.unget();
  return tok;
}

size_t parse_dim(const std::string& tok, const char* what) {
  if (tok.empty()) fail(errc::malformed_header, std::string("missing ") + what);
  size_t value = 0;
  for (char ch : tok) {
    if (ch < '0' || ch > '9') {
      fail(errc::malformed_header, std::string("invalid ") + what + " '" + tok + "'");
    }
    value = value * 10 + static_cast<size_t>(ch - '0');
  }
  if (value == 0) fail(errc::malformed_header, std::string(what) + " must be positive");
  return value;
}

std::vector<uint8_t> read_binary_raster(std::istream& in, const std::string& magic,
                                        size_t& width, size_t& height, size_t bytes_per_pixel) {
  const std::string got_magic = next_token(in);
  if (got_magic.size() == 2 && got_magic[0] == 'P' && got_magic != magic) {
    fail(errc::unsupported_format, "expected " + magic + ", got " + got_magic);
  }
  if (got_magic != magic) fail(errc::malformed_header, "bad magic '" + got_magic + "'");
  width = parse_dim(next_token(in), "width");
  height = parse_dim(next_token(in), "height");
  const std::string maxval = next_token(in);
  if (maxval != "255") fail(errc::unsupported_format, "maxval " + maxval + " (only 255)");
  // Exactly one whitespace byte separates the header from the raster.
  const int sep = in.get();
  if (sep == EOF || !std::isspace(sep)) fail(errc::malformed_header, "missing raster separator");
  std::vector<uint8_t> data(width * height * bytes_per_pixel);
  in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (static_cast<size_t>(in.gcount()) != data.size()) {
    fail(errc::malformed_header, "truncated pixel data");
  }
  return data;
}

void write_binary_raster(const std::string& path, const std::string& magic, size_t width,
                         size_t height, const std::vector<uint8_t>& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::io_error, "cannot open '" + path + "' for writing");
  out << magic << "\n" << width << " " << height << "\n255 ";
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!out) fail(errc::io_error, "failed writing '" + path + "'");
}

}  // namespace

RgbImage read_ppm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::io_error, "cannot open '" + path + "'");
  RgbImage img;
  img.data = read_binary_raster(in, "P6", img.width, img.height, 3);
  return img;
}

void write_ppm(const std::string& path, const RgbImage& img) {
  if (img.data.size() != img.width * img.height * 3) {
    fail(errc::size_mismatch, "image buffer does not match its dimensions");
  }
  write_binary_raster(path, "P6", img.width, img.height, img.data);
}

GrayImage read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::io_error, "cannot open '" + path + "'");
  GrayImage img;
  img.data = read_binary_raster(in, "P5", img.width, img.height, 1);
  return img;
}

void write_pgm(const std::string& path, const GrayImage& img) {
  if (img.data.size() != img.width * img.height) {
    fail(errc::size_mismatch, "image buffer does not match its dimensions");
  }
  write_binary_raster(path, "P5", img.width, img.height, img.data);
}

GrayImage labels_to_gray(const LabelGrid& labels, size_t label_count) {
  if (label_count < 2) fail(errc::too_few_flats, "need at least two labels to scale");
  GrayImage img;
  img.width = labels.width;
  img.height = labels.height;
  img.data.resize(labels.width * labels.height);
  const double scale = 255.0 / static_cast<double>(label_count - 1);
  for (size_t j = 0; j < labels.height; ++j) {
    const size_t row = labels.height - 1 - j;  // math y-up to image top-down
    for (size_t i = 0; i < labels.width; ++i) {
      const double g = std::floor(static_cast<double>(labels.at(i, j)) * scale + 0.5);
      img.data[row * labels.width + i] = static_cast<uint8_t>(std::min(g, 255.0));
    }
  }
  return img;
}

GrayImage boundary_to_gray(const BinaryGrid& boundary) {
  GrayImage img;
  img.width = boundary.width;
  img.height = boundary.height;
  img.data.resize(boundary.width * boundary.height);
  for (size_t j = 0; j < boundary.height; ++j) {
    const size_t row = boundary.height - 1 - j;
    for (size_t i = 0; i < boundary.width; ++i) {
      img.data[row * boundary.width + i] = boundary.at(i, j) ? 255 : 0;
    }
  }
  return img;
}

}  // namespace wkm
