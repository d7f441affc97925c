#include "wkm/model_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace wkm {

namespace {

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::io_error, "cannot open '" + path + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

bool is_blank(const std::string& s) {
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_double(const std::string& field, size_t line_no) {
  const std::string t = trim(field);
  double value = 0.0;
  const char* begin = t.data();
  const char* end = begin + t.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || t.empty()) {
    fail(errc::parse_error, "line " + std::to_string(line_no) + ": invalid number '" + t + "'");
  }
  if (!std::isfinite(value)) {
    fail(errc::parse_error, "line " + std::to_string(line_no) + ": non-finite value '" + t + "'");
  }
  return value;
}

std::vector<double> parse_fields(const std::string& line, char sep, size_t line_no) {
  std::vector<double> values;
  size_t start = 0;
  if (sep == ' ') {
    std::istringstream iss(line);
    std::string tok;
    while (iss >> tok) values.push_back(parse_double(tok, line_no));
    return values;
  }
  while (true) {
    const size_t pos = line.find(sep, start);
    const std::string field = line.substr(start, pos == std::string::npos ? pos : pos - start);
    values.push_back(parse_double(field, line_no));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return values;
}

std::string format_row(const std::vector<double>& values) {
  std::string out;
  char buf[40];
  for (size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out.push_back(' ');
    std::snprintf(buf, sizeof(buf), "%.17g", values[i]);
    out += buf;
  }
  return out;
}

uint64_t parse_uint(const std::string& field, size_t line_no) {
  const std::string t = trim(field);
  uint64_t value = 0;
  const char* begin = t.data();
  const char* end = begin + t.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || t.empty()) {
    fail(errc::parse_error, "line " + std::to_string(line_no) + ": invalid count '" + t + "'");
  }
  return value;
}

}  // namespace

Dataset read_points_csv(const std::string& path) {
  const std::vector<std::string> lines = read_lines(path);
  std::vector<Vec> points;
  size_t arity = 0;
  for (size_t li = 0; li < lines.size(); ++li) {
    const std::string& line = lines[li];
    if (is_blank(line)) continue;
    const std::string t = trim(line);
    if (!t.empty() && t[0] == '#') continue;
    std::vector<double> row = parse_fields(line, ',', li + 1);
    if (arity == 0) {
      arity = row.size();
    } else if (row.size() != arity) {
      fail(errc::ragged_rows, "line " + std::to_string(li + 1) + ": got " +
                                  std::to_string(row.size()) + " fields, expected " +
                                  std::to_string(arity));
    }
    points.push_back(std::move(row));
  }
  if (points.empty()) fail(errc::empty_file, "'" + path + "' contains no data rows");
  return Dataset(std::move(points));
}

FlatsFile read_flats(const std::string& path) {
  const std::vector<std::string> lines = read_lines(path);
  size_t li = 0;
  while (li < lines.size() && is_blank(lines[li])) ++li;
  if (li == lines.size()) fail(errc::empty_file, "'" + path + "' is empty");

  std::istringstream header(lines[li]);
  long long ambient = -1, flat_dim = -1;
  if (!(header >> ambient >> flat_dim) || ambient < 1 || flat_dim < 0 || flat_dim >= ambient) {
    fail(errc::parse_error,
         "line " + std::to_string(li + 1) + ": header must be 'N n' with 0 <= n < N");
  }
  std::string extra;
  if (header >> extra) {
    fail(errc::parse_error, "line " + std::to_string(li + 1) + ": trailing content in header");
  }
  ++li;

  FlatsFile out;
  out.ambient_dim = static_cast<size_t>(ambient);
  out.flat_dim = static_cast<size_t>(flat_dim);
  const size_t group = out.flat_dim + 1;

  std::vector<std::vector<double>> rows;
  std::vector<size_t> row_lines;
  auto flush_group = [&]() {
    if (rows.empty()) return;
    if (rows.size() != group) {
      fail(errc::parse_error, "line " + std::to_string(row_lines.front() + 1) + ": flat needs " +
                                  std::to_string(group) + " coordinate lines, got " +
                                  std::to_string(rows.size()));
    }
    Vec center = std::move(rows[0]);
    std::vector<Vec> basis(rows.begin() + 1, rows.end());
    out.flats.emplace_back(std::move(center), std::move(basis));
    rows.clear();
    row_lines.clear();
  };

  for (; li < lines.size(); ++li) {
    if (is_blank(lines[li])) {
      flush_group();
      continue;
    }
    std::vector<double> row = parse_fields(lines[li], ' ', li + 1);
    if (row.size() != out.ambient_dim) {
      fail(errc::parse_error, "line " + std::to_string(li + 1) + ": expected " +
                                  std::to_string(out.ambient_dim) + " coordinates, got " +
                                  std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
    row_lines.push_back(li);
  }
  flush_group();
  if (out.flats.empty()) fail(errc::empty_file, "'" + path + "' defines no flats");
  return out;
}

std::vector<uint32_t> read_assignments_csv(const std::string& path) {
  const std::vector<std::string> lines = read_lines(path);
  std::vector<uint32_t> assignments;
  for (size_t li = 0; li < lines.size(); ++li) {
    if (is_blank(lines[li])) continue;
    const std::string t = trim(lines[li]);
    if (!t.empty() && t[0] == '#') continue;
    const uint64_t v = parse_uint(t, li + 1);
    if (v > UINT32_MAX) {
      fail(errc::parse_error, "line " + std::to_string(li + 1) + ": cluster index too large");
    }
    assignments.push_back(static_cast<uint32_t>(v));
  }
  if (assignments.empty()) fail(errc::empty_file, "'" + path + "' contains no assignments");
  return assignments;
}

void write_assignments_csv(const std::string& path, const std::vector<uint32_t>& assignments) {
  std::ofstream out(path);
  if (!out) fail(errc::io_error, "cannot open '" + path + "' for writing");
  for (uint32_t a : assignments) out << a << "\n";
  if (!out) fail(errc::io_error, "failed writing '" + path + "'");
}

void write_model(const std::string& path, const Clustering& clustering, const WeightVector& w,
                 size_t ambient_dim) {
  const size_t k = clustering.flats.size();
  if (k == 0) fail(errc::invalid_config, "clustering has no flats");
  const size_t n = clustering.flats[0].flat_dim();
  std::ofstream out(path);
  if (!out) fail(errc::io_error, "cannot open '" + path + "' for writing");
  out << "WKMEANS 1\n";
  out << ambient_dim << " " << n << " " << k << " " << clustering.assignments.size() << " "
      << clustering.iterations_run << " " << (clustering.converged ? 1 : 0) << "\n";
  out << format_row(w.values()) << "\n";
  out << format_row({clustering.energy}) << "\n";
  for (const Flat& f : clustering.flats) {
    out << format_row(f.center()) << "\n";
    for (const Vec& row : f.basis()) out << format_row(row) << "\n";
  }
  for (uint32_t a : clustering.assignments) out << a << "\n";
  if (!out) fail(errc::io_error, "failed writing '" + path + "'");
}

ModelFile read_model(const std::string& path) {
  const std::vector<std::string> lines = read_lines(path);
  size_t li = 0;
  auto need_line = [&]() -> const std::string& {
    if (li >= lines.size()) fail(errc::malformed_model, "unexpected end of file");
    return lines[li];
  };

  if (trim(need_line()) != "WKMEANS 1") fail(errc::malformed_model, "bad header line");
  ++li;

  std::istringstream counts(need_line());
  size_t ambient = 0, n = 0, k = 0, m = 0, iterations = 0;
  int converged = 0;
  if (!(counts >> ambient >> n >> k >> m >> iterations >> converged) || ambient == 0 || k == 0 ||
      m == 0 || n >= ambient || (converged != 0 && converged != 1)) {
    fail(errc::malformed_model, "line " + std::to_string(li + 1) + ": bad counts line");
  }
  ++li;

  std::vector<double> weights = parse_fields(need_line(), ' ', li + 1);
  if (weights.size() != n + 1) {
    fail(errc::malformed_model, "line " + std::to_string(li + 1) + ": expected " +
                                    std::to_string(n + 1) + " weights");
  }
  ++li;

  const std::vector<double> energy_row = parse_fields(need_line(), ' ', li + 1);
  if (energy_row.size() != 1) fail(errc::malformed_model, "energy line must hold one value");
  ++li;

  ModelFile out;
  out.ambient_dim = ambient;
  out.weights = validate_weights(std::move(weights));
  out.clustering.energy = energy_row[0];
  out.clustering.iterations_run = static_cast<uint32_t>(iterations);
  out.clustering.converged = converged == 1;

  for (size_t j = 0; j < k; ++j) {
    std::vector<std::vector<double>> rows;
    for (size_t r = 0; r < n + 1; ++r) {
      rows.push_back(parse_fields(need_line(), ' ', li + 1));
      if (rows.back().size() != ambient) {
        fail(errc::malformed_model, "line " + std::to_string(li + 1) + ": expected " +
                                        std::to_string(ambient) + " coordinates");
      }
      ++li;
    }
    Vec center = std::move(rows[0]);
    std::vector<Vec> basis(rows.begin() + 1, rows.end());
    try {
      out.clustering.flats.emplace_back(std::move(center), std::move(basis));
    } catch (const Error& e) {
      fail(errc::malformed_model, std::string("flat ") + std::to_string(j) + ": " + e.what());
    }
  }

  out.clustering.assignments.reserve(m);
  for (size_t i = 0; i < m; ++i) {
    const uint64_t a = parse_uint(need_line(), li + 1);
    if (a >= k) {
      fail(errc::malformed_model, "line " + std::to_string(li + 1) + ": assignment out of range");
    }
    out.clustering.assignments.push_back(static_cast<uint32_t>(a));
    ++li;
  }
  for (; li < lines.size(); ++li) {
    if (!is_blank(lines[li])) fail(errc::malformed_model, "trailing content");
  }
  return out;
}

}  // namespace wkm
