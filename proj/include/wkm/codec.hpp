#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wkm/image.hpp"
#include "wkm/types.hpp"
#include "wkm/wkmeans.hpp"

namespace wkm {

inline constexpr size_t kBlockSize = 8;
inline constexpr size_t kBlockDim = kBlockSize * kBlockSize * 3;  // 192

/// An RGB raster cut into 8x8 blocks, each flattened to a vector with layout
/// index = 3*(8*row + col) + channel. The raster is edge-replicated up to
/// multiples of 8 before cutting; the pad sizes are recorded.
struct BlockImage {
  size_t width = 0, height = 0;  // original pixel dimensions
  uint8_t pad_right = 0, pad_bottom = 0;
  std::vector<Vec> blocks;  // row-major block order

  size_t blocks_x() const { return (width + pad_right) / kBlockSize; }
  size_t blocks_y() const { return (height + pad_bottom) / kBlockSize; }
};

/// Cluster-wise PCA model of a block image: one flat per cluster plus a
/// cluster id and n projection coefficients per block.
struct CompressedImage {
  uint32_t width = 0, height = 0;
  uint8_t pad_right = 0, pad_bottom = 0;
  uint16_t k = 0, n = 0;
  std::vector<double> weights;        // n+1 entries
  std::vector<Flat> flats;            // k flats in R^192
  std::vector<uint16_t> block_cluster;
  std::vector<float> coefficients;    // n per block, block-major

  size_t block_count() const { return block_cluster.size(); }
};

/// Pre-rounding reconstruction: doubles, already cropped to the original size.
struct DoubleImage {
  size_t width = 0, height = 0;
  std::vector<double> data;  // 3 per pixel, row-major top-down
};

BlockImage blockify(const RgbImage& img);

/// Clusters the image blocks with the given configuration (cfg.k clusters of
/// flat dimension cfg.n in R^192) and stores flats, assignments and the
/// per-block projection coefficients <x - v0, v_i> (kept as 32-bit floats).
CompressedImage compress(const RgbImage& img, const ClusteringConfig& cfg);

/// Per-block v0 + sum c_i * v_i, before any clamping or rounding.
DoubleImage reconstruct(const CompressedImage& model);

/// reconstruct() with channels clamped to [0,255] and rounded half-up.
RgbImage decompress(const CompressedImage& model);

/// Euclidean norm of the channel-wise difference over all pixels.
double image_error(const RgbImage& a, const RgbImage& b);
double image_error(const RgbImage& a, const DoubleImage& b);

/// Grid of decompression errors for k = 1..kmax and n = 0..nmax. Every cell
/// uses the weight vector (0,...,0,1) of arity n+1 and the clustering options
/// from cfg (epsilon, max_iters, restarts, seed, threads). `error` holds the
/// error after rounding to 8-bit output; `error_pre` the pre-rounding error.
struct ErrorTable {
  size_t kmax = 0, nmax = 0;
  std::vector<double> error;      // (kmax)x(nmax+1), row-major by k then n
  std::vector<double> error_pre;

  double at(size_t k, size_t n) const { return error[(k - 1) * (nmax + 1) + n]; }
  double pre(size_t k, size_t n) const { return error_pre[(k - 1) * (nmax + 1) + n]; }
};

ErrorTable error_table(const RgbImage& img, size_t kmax, size_t nmax,
                       const ClusteringConfig& cfg);

/// Binary model file, little-endian: magic "WKC1"; u32 width, u32 height;
/// u8 pad_right, u8 pad_bottom; u16 k; u16 n; u16 weight count then that many
/// f64 weights; k flats (192 f64 center, then n rows of 192 f64); then per
/// block a u16 cluster id followed by n f32 coefficients.
void write_wkc(const std::string& path, const CompressedImage& model);
CompressedImage read_wkc(const std::string& path);

}  // namespace wkm
