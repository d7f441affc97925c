#include "wkm/codec.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

namespace wkm {

BlockImage blockify(const RgbImage& img) {
  if (img.width == 0 || img.height == 0) fail(errc::empty_image, "image has no pixels");
  if (img.data.size() != img.width * img.height * 3) {
    fail(errc::size_mismatch, "image buffer does not match its dimensions");
  }
  BlockImage out;
  out.width = img.width;
  out.height = img.height;
  out.pad_right = static_cast<uint8_t>((kBlockSize - img.width % kBlockSize) % kBlockSize);
  out.pad_bottom = static_cast<uint8_t>((kBlockSize - img.height % kBlockSize) % kBlockSize);

  const size_t bx = out.blocks_x();
  const size_t by = out.blocks_y();
  out.blocks.reserve(bx * by);
  for (size_t block_y = 0; block_y < by; ++block_y) {
    for (size_t block_x = 0; block_x < bx; ++block_x) {
      Vec block(kBlockDim);
      for (size_t row = 0; row < kBlockSize; ++row) {
        const size_t y = std::min(block_y * kBlockSize + row, img.height - 1);
        for (size_t col = 0; col < kBlockSize; ++col) {
          const size_t x = std::min(block_x * kBlockSize + col, img.width - 1);
          for (size_t ch = 0; ch < 3; ++ch) {
            block[3 * (kBlockSize * row + col) + ch] = static_cast<double>(img.at(x, y, ch));
          }
        }
      }
      out.blocks.push_back(std::move(block));
    }
  }
  return out;
}

CompressedImage compress(const RgbImage& img, const ClusteringConfig& cfg) {
  if (cfg.n >= kBlockDim) {
    fail(errc::dimension_too_large, "flat dimension must be below " + std::to_string(kBlockDim));
  }
  if (cfg.k > std::numeric_limits<uint16_t>::max()) {
    fail(errc::invalid_config, "k does not fit the 16-bit model field");
  }
  BlockImage blocks = blockify(img);
  const Dataset data(std::move(blocks.blocks));
  const RunResult result = run(data, cfg);
  const Clustering& clustering = result.clustering;

  CompressedImage model;
  model.width = static_cast<uint32_t>(blocks.width);
  model.height = static_cast<uint32_t>(blocks.height);
  model.pad_right = blocks.pad_right;
  model.pad_bottom = blocks.pad_bottom;
  model.k = static_cast<uint16_t>(cfg.k);
  model.n = static_cast<uint16_t>(cfg.n);
  model.weights = cfg.weights.values();
  model.flats = clustering.flats;
  model.block_cluster.resize(data.size());
  model.coefficients.resize(data.size() * cfg.n);
  for (size_t b = 0; b < data.size(); ++b) {
    const uint32_t cluster = clustering.assignments[b];
    model.block_cluster[b] = static_cast<uint16_t>(cluster);
    const Flat& flat = clustering.flats[cluster];
    const Vec& x = data[b];
    for (size_t i = 0; i < cfg.n; ++i) {
      const Vec& basis = flat.basis()[i];
      double c = 0.0;
      for (size_t d = 0; d < kBlockDim; ++d) c += (x[d] - flat.center()[d]) * basis[d];
      model.coefficients[b * cfg.n + i] = static_cast<float>(c);
    }
  }
  return model;
}

namespace {

void validate_model(const CompressedImage& model) {
  if (model.width == 0 || model.height == 0) fail(errc::malformed_model, "empty dimensions");
  if (model.pad_right >= kBlockSize || model.pad_bottom >= kBlockSize ||
      (model.width + model.pad_right) % kBlockSize != 0 ||
      (model.height + model.pad_bottom) % kBlockSize != 0) {
    fail(errc::malformed_model, "padding does not complete the block grid");
  }
  if (model.k == 0) fail(errc::malformed_model, "no clusters");
  if (model.flats.size() != model.k) fail(errc::malformed_model, "flat count != k");
  if (model.weights.size() != static_cast<size_t>(model.n) + 1) {
    fail(errc::malformed_model, "weight count != n+1");
  }
  for (double w : model.weights) {
    if (!std::isfinite(w)) fail(errc::malformed_model, "non-finite weight");
  }
  const size_t blocks = ((model.width + model.pad_right) / kBlockSize) *
                        ((model.height + model.pad_bottom) / kBlockSize);
  if (model.block_cluster.size() != blocks) fail(errc::malformed_model, "block count mismatch");
  if (model.coefficients.size() != blocks * model.n) {
    fail(errc::malformed_model, "coefficient count mismatch");
  }
  for (const Flat& f : model.flats) {
    if (f.ambient_dim() != kBlockDim || f.flat_dim() != model.n) {
      fail(errc::malformed_model, "flat dimensions do not match the model header");
    }
  }
  for (uint16_t c : model.block_cluster) {
    if (c >= model.k) fail(errc::malformed_model, "cluster id out of range");
  }
}

}  // namespace

DoubleImage reconstruct(const CompressedImage& model) {
  validate_model(model);
  const size_t padded_w = model.width + model.pad_right;
  const size_t bx = padded_w / kBlockSize;

  DoubleImage out;
  out.width = model.width;
  out.height = model.height;
  out.data.resize(out.width * out.height * 3);

  Vec block(kBlockDim);
  for (size_t b = 0; b < model.block_cluster.size(); ++b) {
    const Flat& flat = model.flats[model.block_cluster[b]];
    block = flat.center();
    for (size_t i = 0; i < model.n; ++i) {
      const double c = static_cast<double>(model.coefficients[b * model.n + i]);
      const Vec& basis = flat.basis()[i];
      for (size_t d = 0; d < kBlockDim; ++d) block[d] += c * basis[d];
    }
    const size_t block_x = b % bx;
    const size_t block_y = b / bx;
    for (size_t row = 0; row < kBlockSize; ++row) {
      const size_t y = block_y * kBlockSize + row;
      if (y >= out.height) break;
      for (size_t col = 0; col < kBlockSize; ++col) {
        const size_t x = block_x * kBlockSize + col;
        if (x >= out.width) continue;
        for (size_t ch = 0; ch < 3; ++ch) {
          out.data[(y * out.width + x) * 3 + ch] = block[3 * (kBlockSize * row + col) + ch];
        }
      }
    }
  }
  return out;
}

RgbImage decompress(const CompressedImage& model) {
  const DoubleImage pre = reconstruct(model);
  RgbImage out;
  out.width = pre.width;
  out.height = pre.height;
  out.data.resize(pre.data.size());
  for (size_t i = 0; i < pre.data.size(); ++i) {
    double v = pre.data[i];
    v = std::min(std::max(v, 0.0), 255.0);
    out.data[i] = static_cast<uint8_t>(std::floor(v + 0.5));  // round half-up
  }
  return out;
}

double image_error(const RgbImage& a, const RgbImage& b) {
  if (a.width != b.width || a.height != b.height) {
    fail(errc::size_mismatch, "image dimensions differ");
  }
  double sum = 0.0;
  for (size_t i = 0; i < a.data.size(); ++i) {
    const double d = static_cast<double>(a.data[i]) - static_cast<double>(b.data[i]);
    sum += d * d;
  }
  return std::sqrt(sum);
}

double image_error(const RgbImage& a, const DoubleImage& b) {
  if (a.width != b.width || a.height != b.height) {
    fail(errc::size_mismatch, "image dimensions differ");
  }
  double sum = 0.0;
  for (size_t i = 0; i < a.data.size(); ++i) {
    const double d = static_cast<double>(a.data[i]) - b.data[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

ErrorTable error_table(const RgbImage& img, size_t kmax, size_t nmax,
                       const ClusteringConfig& cfg) {
  if (kmax == 0) fail(errc::invalid_config, "kmax must be at least 1");
  ErrorTable table;
  table.kmax = kmax;
  table.nmax = nmax;
  table.error.resize(kmax * (nmax + 1));
  table.error_pre.resize(kmax * (nmax + 1));
  for (size_t k = 1; k <= kmax; ++k) {
    for (size_t n = 0; n <= nmax; ++n) {
      ClusteringConfig cell = cfg;
      cell.k = k;
      cell.n = n;
      std::vector<double> w(n + 1, 0.0);
      w.back() = 1.0;
      cell.weights = validate_weights(std::move(w));
      const CompressedImage model = compress(img, cell);
      table.error[(k - 1) * (nmax + 1) + n] = image_error(img, decompress(model));
      table.error_pre[(k - 1) * (nmax + 1) + n] = image_error(img, reconstruct(model));
    }
  }
  return table;
}

namespace {

void put_u16(std::string& buf, uint16_t v) {
  buf.push_back(static_cast<char>(v & 0xff));
  buf.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put_u32(std::string& buf, uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& buf, uint64_t v) {
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& buf, double v) { put_u64(buf, std::bit_cast<uint64_t>(v)); }

void put_f32(std::string& buf, float v) { put_u32(buf, std::bit_cast<uint32_t>(v)); }

class Reader {
public:
  Reader(const uint8_t* data, size_t size) : data_(data), size_(size) {}

  uint8_t u8() { return take(1)[0]; }
  uint16_t u16() {
    const uint8_t* p = take(2);
    return static_cast<uint16_t>(p[0] | (p[1] << 8));
  }
  uint32_t u32() {
    const uint8_t* p = take(4);
    return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
           (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
  }
  uint64_t u64() {
    uint64_t lo = u32();
    uint64_t hi = u32();
    return lo | (hi << 32);
  }
  double f64() { return std::bit_cast<double>(u64()); }
  float f32() { return std::bit_cast<float>(u32()); }
  bool exhausted() const { return pos_ == size_; }

private:
  const uint8_t* take(size_t count) {
    if (pos_ + count > size_) fail(errc::malformed_model, "truncated model file");
    const uint8_t* p = data_ + pos_;
    pos_ += count;
    return p;
  }
  const uint8_t* data_;
  size_t size_;
  size_t pos_ = 0;
};

}  // namespace

void write_wkc(const std::string& path, const CompressedImage& model) {
  validate_model(model);
  std::string buf;
  buf += "WKC1";
  put_u32(buf, model.width);
  put_u32(buf, model.height);
  buf.push_back(static_cast<char>(model.pad_right));
  buf.push_back(static_cast<char>(model.pad_bottom));
  put_u16(buf, model.k);
  put_u16(buf, model.n);
  put_u16(buf, static_cast<uint16_t>(model.weights.size()));
  for (double w : model.weights) put_f64(buf, w);
  for (const Flat& f : model.flats) {
    for (double v : f.center()) put_f64(buf, v);
    for (const Vec& row : f.basis()) {
      for (double v : row) put_f64(buf, v);
    }
  }
  for (size_t b = 0; b < model.block_cluster.size(); ++b) {
    put_u16(buf, model.block_cluster[b]);
    for (size_t i = 0; i < model.n; ++i) put_f32(buf, model.coefficients[b * model.n + i]);
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::io_error, "cannot open '" + path + "' for writing");
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) fail(errc::io_error, "failed writing '" + path + "'");
}

CompressedImage read_wkc(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::io_error, "cannot open '" + path + "'");
  std::string contents((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  Reader r(reinterpret_cast<const uint8_t*>(contents.data()), contents.size());

  char magic[4];
  for (char& c : magic) c = static_cast<char>(r.u8());
  if (std::memcmp(magic, "WKC1", 4) != 0) fail(errc::malformed_model, "bad magic");

  CompressedImage model;
  model.width = r.u32();
  model.height = r.u32();
  model.pad_right = r.u8();
  model.pad_bottom = r.u8();
  model.k = r.u16();
  model.n = r.u16();
  const uint16_t weight_count = r.u16();
  if (weight_count != model.n + 1) fail(errc::malformed_model, "weight count != n+1");
  model.weights.resize(weight_count);
  for (double& w : model.weights) w = r.f64();

  if (model.width == 0 || model.height == 0 || model.k == 0 || model.pad_right >= kBlockSize ||
      model.pad_bottom >= kBlockSize || (model.width + model.pad_right) % kBlockSize != 0 ||
      (model.height + model.pad_bottom) % kBlockSize != 0) {
    fail(errc::malformed_model, "inconsistent header");
  }

  model.flats.reserve(model.k);
  for (size_t j = 0; j < model.k; ++j) {
    Vec center(kBlockDim);
    for (double& v : center) v = r.f64();
    std::vector<Vec> basis(model.n, Vec(kBlockDim));
    for (Vec& row : basis) {
      for (double& v : row) v = r.f64();
    }
    try {
      model.flats.emplace_back(std::move(center), std::move(basis));
    } catch (const Error& e) {
      fail(errc::malformed_model, std::string("flat ") + std::to_string(j) + ": " + e.what());
    }
  }

  const size_t blocks = ((model.width + model.pad_right) / kBlockSize) *
                        ((model.height + model.pad_bottom) / kBlockSize);
  model.block_cluster.resize(blocks);
  model.coefficients.resize(blocks * model.n);
  for (size_t b = 0; b < blocks; ++b) {
    model.block_cluster[b] = r.u16();
    if (model.block_cluster[b] >= model.k) fail(errc::malformed_model, "cluster id out of range");
    for (size_t i = 0; i < model.n; ++i) model.coefficients[b * model.n + i] = r.f32();
  }
  if (!r.exhausted()) fail(errc::malformed_model, "trailing bytes");
  validate_model(model);
  return model;
}

}  // namespace wkm
