#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wkm/codec.hpp"
#include "wkm/image.hpp"
#include "wkm/model_io.hpp"
#include "wkm/voronoi.hpp"
#include "wkm/wkmeans.hpp"

namespace {

std::vector<double> parse_number_list(const std::string& text, const std::string& flag) {
  std::vector<double> values;
  size_t start = 0;
  while (true) {
    const size_t pos = text.find(',', start);
    const std::string field =
        text.substr(start, pos == std::string::npos ? pos : pos - start);
    try {
      size_t used = 0;
      values.push_back(std::stod(field, &used));
      if (used != field.size()) throw std::invalid_argument(field);
    } catch (const std::exception&) {
      throw CLI::ValidationError(flag, "invalid number '" + field + "'");
    }
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return values;
}

wkm::WeightVector make_weights(const std::string& text, bool normalize, size_t flat_dim) {
  if (text.empty()) {
    std::vector<double> w(flat_dim + 1, 0.0);
    w.back() = 1.0;
    return wkm::validate_weights(std::move(w));
  }
  return wkm::validate_weights(parse_number_list(text, "--weights"), normalize);
}

struct ClusterFlags {
  double epsilon = 1e-9;
  bool relative_epsilon = false;
  size_t max_iters = 100;
  size_t restarts = 16;
  uint64_t seed = 0;
  unsigned threads = 1;
  std::string init = "random";
};

void add_cluster_flags(CLI::App* cmd, ClusterFlags& flags, bool with_init) {
  cmd->add_option("--epsilon", flags.epsilon, "Stop when the energy decrease falls below this");
  cmd->add_flag("--relative-epsilon", flags.relative_epsilon,
                "Interpret --epsilon relative to the current energy");
  cmd->add_option("--max-iters", flags.max_iters, "Iteration cap per restart");
  cmd->add_option("--restarts", flags.restarts, "Independent seeded restarts; best energy wins");
  cmd->add_option("--seed", flags.seed, "Seed for the deterministic generator");
  cmd->add_option("--threads", flags.threads, "Worker threads (results are thread-count independent)");
  if (with_init) {
    cmd->add_option("--init", flags.init, "random | kmeans++ | file:ASSIGN.csv");
  }
}

void apply_cluster_flags(wkm::ClusteringConfig& cfg, const ClusterFlags& flags, size_t expected_points) {
  cfg.epsilon = flags.epsilon;
  cfg.relative_epsilon = flags.relative_epsilon;
  cfg.max_iters = flags.max_iters;
  cfg.restarts = flags.restarts;
  cfg.seed = flags.seed;
  cfg.threads = flags.threads;
  if (flags.init == "random") {
    cfg.init = wkm::InitMethod::random_points;
  } else if (flags.init == "kmeans++") {
    cfg.init = wkm::InitMethod::kmeanspp;
  } else if (flags.init.rfind("file:", 0) == 0) {
    cfg.init = wkm::InitMethod::given_partition;
    cfg.given_assignments = wkm::read_assignments_csv(flags.init.substr(5));
    if (cfg.given_assignments.size() != expected_points) {
      wkm::fail(wkm::errc::invalid_config,
                "assignment file has " + std::to_string(cfg.given_assignments.size()) +
                    " rows for " + std::to_string(expected_points) + " points");
    }
  } else {
    throw CLI::ValidationError("--init", "expected random, kmeans++ or file:PATH");
  }
}

void write_trace(const std::string& path, const wkm::RunTrace& trace) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (f == nullptr) wkm::fail(wkm::errc::io_error, "cannot open '" + path + "' for writing");
  for (size_t r = 0; r < trace.restarts.size(); ++r) {
    const wkm::RestartTrace& rt = trace.restarts[r];
    for (size_t t = 0; t < rt.energies.size(); ++t) {
      std::fprintf(f, "restart %zu iter %zu energy %.17g", r, t, rt.energies[t]);
      if (t > 0 && rt.repairs[t - 1] > 0) std::fprintf(f, " repairs %u", rt.repairs[t - 1]);
      std::fprintf(f, "\n");
    }
  }
  std::fprintf(f, "best %zu\n", trace.best_restart);
  std::fclose(f);
}

int cmd_cluster(const std::string& input, size_t k, size_t dim, const std::string& weights,
                bool normalize, const ClusterFlags& flags, const std::string& model_path,
                const std::string& assignments_path, const std::string& trace_path) {
  const wkm::Dataset data = wkm::read_points_csv(input);
  wkm::ClusteringConfig cfg;
  cfg.k = k;
  cfg.n = dim;
  cfg.weights = make_weights(weights, normalize, dim);
  apply_cluster_flags(cfg, flags, data.size());

  const wkm::RunResult result = wkm::run(data, cfg);
  wkm::write_model(model_path, result.clustering, cfg.weights, data.dim());
  if (!assignments_path.empty()) {
    wkm::write_assignments_csv(assignments_path, result.clustering.assignments);
  }
  if (!trace_path.empty()) write_trace(trace_path, result.trace);

  std::printf("energy %.17g restart %zu iterations %u converged %s\n", result.clustering.energy,
              result.trace.best_restart, result.clustering.iterations_run,
              result.clustering.converged ? "yes" : "no");
  return 0;
}

wkm::SlicePlane parse_slice(const std::string& text) {
  std::vector<std::string> parts;
  size_t start = 0;
  while (true) {
    const size_t pos = text.find(';', start);
    parts.push_back(text.substr(start, pos == std::string::npos ? pos : pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  if (parts.size() != 3) {
    throw CLI::ValidationError("--slice", "expected origin;axis1;axis2");
  }
  wkm::SlicePlane slice;
  slice.origin = parse_number_list(parts[0], "--slice");
  slice.axis_u = parse_number_list(parts[1], "--slice");
  slice.axis_v = parse_number_list(parts[2], "--slice");
  return slice;
}

int cmd_voronoi(const std::string& flats_path, const std::string& weights, bool normalize,
                const std::string& bounds_text, const std::string& size_text,
                const std::string& labels_path, const std::string& boundary_path,
                const std::string& slice_text, unsigned threads) {
  const wkm::FlatsFile flats = wkm::read_flats(flats_path);
  const wkm::WeightVector w = make_weights(weights, normalize, flats.flat_dim);

  const std::vector<double> bounds = parse_number_list(bounds_text, "--bounds");
  if (bounds.size() != 4) {
    throw CLI::ValidationError("--bounds", "expected xmin,ymin,xmax,ymax");
  }
  wkm::GridSpec grid;
  grid.xmin = bounds[0];
  grid.ymin = bounds[1];
  grid.xmax = bounds[2];
  grid.ymax = bounds[3];
  {
    const size_t x = size_text.find('x');
    bool ok = x != std::string::npos;
    if (ok) {
      try {
        size_t used = 0;
        grid.width = std::stoul(size_text.substr(0, x), &used);
        ok = used == x;
        grid.height = std::stoul(size_text.substr(x + 1), &used);
        ok = ok && used == size_text.size() - x - 1;
      } catch (const std::exception&) {
        ok = false;
      }
    }
    if (!ok) throw CLI::ValidationError("--size", "expected WxH, e.g. 400x300");
  }

  wkm::LabelGrid labels;
  if (slice_text.empty()) {
    labels = wkm::rasterize(flats.flats, w, grid, threads);
  } else {
    labels = wkm::rasterize_slice(flats.flats, w, grid, parse_slice(slice_text), threads);
  }
  wkm::write_pgm(labels_path, wkm::labels_to_gray(labels, flats.flats.size()));
  if (!boundary_path.empty()) {
    wkm::write_pgm(boundary_path, wkm::boundary_to_gray(wkm::extract_boundary(labels)));
  }
  return 0;
}

int cmd_compress(const std::string& image_path, size_t k, size_t dim, const std::string& weights,
                 bool normalize, const ClusterFlags& flags, const std::string& output) {
  const wkm::RgbImage img = wkm::read_ppm(image_path);
  wkm::ClusteringConfig cfg;
  cfg.k = k;
  cfg.n = dim;
  cfg.weights = make_weights(weights, normalize, dim);
  const size_t blocks = ((img.width + 7) / 8) * ((img.height + 7) / 8);
  apply_cluster_flags(cfg, flags, blocks);
  const wkm::CompressedImage model = wkm::compress(img, cfg);
  wkm::write_wkc(output, model);
  std::printf("compressed %zux%zu into %zu blocks, k=%u n=%u\n", img.width, img.height,
              model.block_count(), static_cast<unsigned>(model.k),
              static_cast<unsigned>(model.n));
  return 0;
}

int cmd_errortable(const std::string& image_path, size_t kmax, size_t nmax,
                   const ClusterFlags& flags, const std::string& csv_path) {
  const wkm::RgbImage img = wkm::read_ppm(image_path);
  wkm::ClusteringConfig cfg;
  apply_cluster_flags(cfg, flags, 0);
  if (cfg.init == wkm::InitMethod::given_partition) {
    throw CLI::ValidationError("--init", "errortable supports random or kmeans++ only");
  }
  const wkm::ErrorTable table = wkm::error_table(img, kmax, nmax, cfg);

  std::printf("%6s", "k\\n");
  for (size_t n = 0; n <= nmax; ++n) std::printf(" %11zu", n);
  std::printf("\n");
  for (size_t k = 1; k <= kmax; ++k) {
    std::printf("%6zu", k);
    for (size_t n = 0; n <= nmax; ++n) std::printf(" %11.1f", table.at(k, n));
    std::printf("\n");
  }

  if (!csv_path.empty()) {
    std::FILE* f = std::fopen(csv_path.c_str(), "w");
    if (f == nullptr) wkm::fail(wkm::errc::io_error, "cannot open '" + csv_path + "'");
    std::fprintf(f, "k,n,error\n");
    for (size_t k = 1; k <= kmax; ++k) {
      for (size_t n = 0; n <= nmax; ++n) {
        std::fprintf(f, "%zu,%zu,%.17g\n", k, n, table.at(k, n));
      }
    }
    std::fclose(f);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"(omega,k)-means: cluster points with affine flats, rasterize generalized "
               "Voronoi diagrams, compress images block-wise"};
  app.require_subcommand(1);

  // cluster
  auto* cluster = app.add_subcommand("cluster", "Cluster CSV points with k flats of dimension n");
  std::string cl_input, cl_weights, cl_model, cl_assignments, cl_trace;
  size_t cl_k = 0, cl_dim = 0;
  bool cl_normalize = false;
  ClusterFlags cl_flags;
  cluster->add_option("--input", cl_input, "Input CSV, one point per line")->required();
  cluster->add_option("--k", cl_k, "Number of clusters")->required();
  cluster->add_option("--dim", cl_dim, "Flat dimension n (0 = points)")->required();
  cluster->add_option("--weights", cl_weights, "Comma list w0,...,wn (default 0,...,0,1)");
  cluster->add_flag("--normalize-weights", cl_normalize, "Rescale weights to sum to 1");
  add_cluster_flags(cluster, cl_flags, true);
  cluster->add_option("--model", cl_model, "Output model file")->required();
  cluster->add_option("--assignments", cl_assignments, "Optional assignment CSV output");
  cluster->add_option("--trace", cl_trace, "Optional per-iteration energy trace output");

  // voronoi
  auto* voronoi = app.add_subcommand("voronoi", "Rasterize generalized Voronoi regions of flats");
  std::string vo_flats, vo_weights, vo_bounds, vo_size, vo_labels, vo_boundary, vo_slice;
  bool vo_normalize = false;
  unsigned vo_threads = 1;
  voronoi->add_option("--flats", vo_flats, "Flats file")->required();
  voronoi->add_option("--weights", vo_weights, "Comma list w0,...,wn (default 0,...,0,1)");
  voronoi->add_flag("--normalize-weights", vo_normalize, "Rescale weights to sum to 1");
  voronoi->add_option("--bounds", vo_bounds, "xmin,ymin,xmax,ymax")->required();
  voronoi->add_option("--size", vo_size, "Raster size WxH")->required();
  voronoi->add_option("--labels", vo_labels, "Output label PGM")->required();
  voronoi->add_option("--boundary", vo_boundary, "Optional boundary PGM");
  voronoi->add_option("--slice", vo_slice, "origin;axis1;axis2 to rasterize a 2D slice");
  voronoi->add_option("--threads", vo_threads, "Worker threads");

  // compress
  auto* compress = app.add_subcommand("compress", "Compress a PPM image block-wise");
  std::string co_image, co_weights, co_output;
  size_t co_k = 0, co_dim = 0;
  bool co_normalize = false;
  ClusterFlags co_flags;
  compress->add_option("--image", co_image, "Input PPM (P6)")->required();
  compress->add_option("--k", co_k, "Number of clusters")->required();
  compress->add_option("--dim", co_dim, "Flat dimension n")->required();
  compress->add_option("--weights", co_weights, "Comma list w0,...,wn (default 0,...,0,1)");
  compress->add_flag("--normalize-weights", co_normalize, "Rescale weights to sum to 1");
  add_cluster_flags(compress, co_flags, true);
  compress->add_option("--output", co_output, "Output .wkc file")->required();

  // decompress
  auto* decompress = app.add_subcommand("decompress", "Reconstruct a PPM from a .wkc file");
  std::string de_input, de_output;
  decompress->add_option("--input", de_input, "Input .wkc file")->required();
  decompress->add_option("--output", de_output, "Output PPM")->required();

  // imgerror
  auto* imgerror = app.add_subcommand("imgerror", "Euclidean pixel error between two PPMs");
  std::string ie_a, ie_b;
  imgerror->add_option("--a", ie_a, "First image")->required();
  imgerror->add_option("--b", ie_b, "Second image")->required();

  // errortable
  auto* errortable = app.add_subcommand("errortable", "Decompression error grid over k and n");
  std::string et_image, et_csv;
  size_t et_kmax = 5, et_nmax = 5;
  ClusterFlags et_flags;
  errortable->add_option("--image", et_image, "Input PPM (P6)")->required();
  errortable->add_option("--kmax", et_kmax, "Largest cluster count");
  errortable->add_option("--nmax", et_nmax, "Largest flat dimension");
  add_cluster_flags(errortable, et_flags, false);
  errortable->add_option("--csv", et_csv, "Optional CSV output of the grid");

  try {
    app.parse(argc, argv);

    if (cluster->parsed()) {
      return cmd_cluster(cl_input, cl_k, cl_dim, cl_weights, cl_normalize, cl_flags, cl_model,
                         cl_assignments, cl_trace);
    }
    if (voronoi->parsed()) {
      return cmd_voronoi(vo_flats, vo_weights, vo_normalize, vo_bounds, vo_size, vo_labels,
                         vo_boundary, vo_slice, vo_threads);
    }
    if (compress->parsed()) {
      return cmd_compress(co_image, co_k, co_dim, co_weights, co_normalize, co_flags, co_output);
    }
    if (decompress->parsed()) {
      wkm::write_ppm(de_output, wkm::decompress(wkm::read_wkc(de_input)));
      return 0;
    }
    if (imgerror->parsed()) {
      std::printf("%.6g\n", wkm::image_error(wkm::read_ppm(ie_a), wkm::read_ppm(ie_b)));
      return 0;
    }
    if (errortable->parsed()) {
      return cmd_errortable(et_image, et_kmax, et_nmax, et_flags, et_csv);
    }
    return 1;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const wkm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
