#include "deev/grid_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

namespace deev {

namespace {

constexpr std::array<const char*, 6> kAxisLabels = {"x", "y", "px", "py", "r", "s"};

void validate_axis(const Axis& a, const char* which) {
  const bool known = std::find(kAxisLabels.begin(), kAxisLabels.end(), a.label) != kAxisLabels.end();
  std::string prefix = std::string(which) + " ";
  if (!known) throw std::invalid_argument(prefix + "label '" + a.label + "' is not one of x,y,px,py,r,s");
  if (a.count < 2) throw std::invalid_argument(prefix + "needs at least 2 nodes");
  if (!std::isfinite(a.min) || !std::isfinite(a.max)) {
    throw std::invalid_argument(prefix + "bounds must be finite");
  }
  if (!(a.min < a.max)) throw std::invalid_argument(prefix + "requires min < max");
}

std::string axis_token(const Axis& a) {
  return a.label + ":" + format_real(a.min) + ":" + format_real(a.max) + ":" + std::to_string(a.count);
}

Axis parse_axis_token(const std::string& token) {
  std::vector<std::string> parts;
  std::stringstream ss(token);
  std::string part;
  while (std::getline(ss, part, ':')) parts.push_back(part);
  if (parts.size() != 4) throw IoError("malformed axis token '" + token + "'");
  return Axis{parts[0], parse_real(parts[1]), parse_real(parts[2]), std::stoi(parts[3])};
}

bool has_space(const std::string& s) {
  return std::any_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

}  // namespace

double Axis::node(int i) const {
  if (i == count - 1) return max;
  return std::lerp(min, max, static_cast<double>(i) / (count - 1));
}

void GridSpec::validate() const {
  validate_axis(axis1, "axis1");
  validate_axis(axis2, "axis2");
}

std::string GridSpec::describe() const { return axis_token(axis1) + " " + axis_token(axis2); }

std::pair<int, int> Field2D::nearest(double c1, double c2) const {
  auto idx = [](const Axis& a, double c) {
    const double t = (c - a.min) / (a.max - a.min) * (a.count - 1);
    return std::clamp(static_cast<int>(std::lround(t)), 0, a.count - 1);
  };
  return {idx(spec.axis1, c1), idx(spec.axis2, c2)};
}

unsigned Parallelism::resolved() const {
  if (threads > 0) return threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

Field2D sample_field(const GridSpec& spec, const std::function<double(double, double)>& fn,
                     Parallelism par) {
  spec.validate();
  Field2D field{spec, std::vector<double>(spec.size()), {}};
  const int rows = spec.axis1.count;
  const int cols = spec.axis2.count;
  std::vector<double> col_nodes(cols);
  for (int j = 0; j < cols; ++j) col_nodes[j] = spec.axis2.node(j);

  auto work = [&](int row_begin, int row_end) {
    for (int i = row_begin; i < row_end; ++i) {
      const double a = spec.axis1.node(i);
      double* out = field.values.data() + static_cast<std::size_t>(i) * cols;
      for (int j = 0; j < cols; ++j) out[j] = fn(a, col_nodes[j]);
    }
  };

  const unsigned workers = std::min<unsigned>(par.resolved(), static_cast<unsigned>(rows));
  if (workers <= 1) {
    work(0, rows);
    return field;
  }
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      const int begin = static_cast<int>(static_cast<long>(rows) * w / workers);
      const int end = static_cast<int>(static_cast<long>(rows) * (w + 1) / workers);
      pool.emplace_back(work, begin, end);
    }
  }
  return field;
}

void write_file_atomic(const std::filesystem::path& dest, const std::string& bytes) {
  namespace fs = std::filesystem;
  fs::path tmp = dest;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      out.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, dest, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move output into place at '" + dest.string() + "'");
  }
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_real(const std::string& token) {
  if (token == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (token == "inf") return std::numeric_limits<double>::infinity();
  if (token == "-inf") return -std::numeric_limits<double>::infinity();
  // from_chars keeps subnormals, which strtod-based parsing reports as range errors.
  double v = 0.0;
  const char* first = token.data();
  const char* last = first + token.size();
  if (first != last && *first == '+') ++first;
  const auto [end, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || end == first) throw IoError("not a number: '" + token + "'");
  if (end != last) throw IoError("trailing characters in number '" + token + "'");
  return v;
}

std::string csv_text(const Field2D& field) {
  field.spec.validate();
  if (field.values.size() != field.spec.size()) {
    throw std::invalid_argument("field value count does not match its grid");
  }
  std::string out = "# axis1=" + axis_token(field.spec.axis1) + " axis2=" + axis_token(field.spec.axis2);
  for (const auto& [key, value] : field.metadata) {
    if (key.empty() || has_space(key) || has_space(value) || key.find('=') != std::string::npos) {
      throw std::invalid_argument("metadata entry '" + key + "' is not a single token");
    }
    if (key == "axis1" || key == "axis2") continue;
    out += " " + key + "=" + value;
  }
  out += "\n" + field.spec.axis1.label + "," + field.spec.axis2.label + ",value\n";
  const int n1 = field.spec.axis1.count;
  const int n2 = field.spec.axis2.count;
  for (int i = 0; i < n1; ++i) {
    const std::string a = format_real(field.spec.axis1.node(i)) + ",";
    for (int j = 0; j < n2; ++j) {
      out += a;
      out += format_real(field.spec.axis2.node(j));
      out += ',';
      out += format_real(field.at(i, j));
      out += '\n';
    }
  }
  return out;
}

Field2D parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0) throw IoError("missing metadata line");
  Field2D field;
  bool seen1 = false;
  bool seen2 = false;
  std::istringstream meta(line.substr(2));
  std::string pair;
  while (meta >> pair) {
    const auto eq = pair.find('=');
    if (eq == std::string::npos) throw IoError("metadata token without '=': " + pair);
    const std::string key = pair.substr(0, eq);
    const std::string value = pair.substr(eq + 1);
    if (key == "axis1") {
      field.spec.axis1 = parse_axis_token(value);
      seen1 = true;
    } else if (key == "axis2") {
      field.spec.axis2 = parse_axis_token(value);
      seen2 = true;
    } else {
      field.metadata[key] = value;
    }
  }
  if (!seen1 || !seen2) throw IoError("metadata line lacks axis descriptions");
  field.spec.validate();
  if (!std::getline(in, line)) throw IoError("missing header line");
  const int n1 = field.spec.axis1.count;
  const int n2 = field.spec.axis2.count;
  field.values.reserve(field.spec.size());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c2 = line.rfind(',');
    if (c2 == std::string::npos) throw IoError("malformed data row: " + line);
    field.values.push_back(parse_real(line.substr(c2 + 1)));
  }
  if (field.values.size() != static_cast<std::size_t>(n1) * n2) {
    throw IoError("data row count does not match the grid");
  }
  return field;
}

void write_csv(const Field2D& field, const std::filesystem::path& dest) {
  write_file_atomic(dest, csv_text(field));
}

Field2D read_csv(const std::filesystem::path& src) {
  std::ifstream in(src, std::ios::binary);
  if (!in) throw IoError("cannot open '" + src.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str());
}

PgmMapping pgm_mapping(const Field2D& field, std::optional<double> clamp) {
  if (clamp) {
    if (!(*clamp > 0.0) || !std::isfinite(*clamp)) {
      throw std::invalid_argument("pgm clamp must be positive and finite");
    }
    return {-*clamp, *clamp};
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double v : field.values) {
    if (!std::isfinite(v)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!(lo <= hi)) return {-1.0, 1.0};  // no finite data
  if (lo == hi) {
    const double pad = lo == 0.0 ? 1.0 : std::abs(lo);
    return {lo - pad, hi + pad};
  }
  return {lo, hi};
}

std::string pgm_bytes(const Field2D& field, const PgmMapping& mapping) {
  const int w = field.spec.axis1.count;
  const int h = field.spec.axis2.count;
  std::string out = "P5\n" + std::to_string(w) + " " + std::to_string(h) + "\n65535\n";
  out.reserve(out.size() + 2 * field.values.size());
  const double span = mapping.hi - mapping.lo;
  for (int row = 0; row < h; ++row) {
    const int j = h - 1 - row;
    for (int i = 0; i < w; ++i) {
      double v = field.at(i, j);
      double t = std::isnan(v) ? 0.5 : (v - mapping.lo) / span;
      t = std::clamp(t, 0.0, 1.0);
      const auto level = static_cast<unsigned>(std::lround(t * 65535.0));
      out.push_back(static_cast<char>((level >> 8) & 0xff));
      out.push_back(static_cast<char>(level & 0xff));
    }
  }
  return out;
}

void write_pgm(const Field2D& field, const std::filesystem::path& dest,
               std::optional<double> clamp) {
  field.spec.validate();
  const PgmMapping mapping = pgm_mapping(field, clamp);
  const std::string bytes = pgm_bytes(field, mapping);
  std::filesystem::path side = dest;
  side += ".map";
  const std::string sidecar = "# map lo=" + format_real(mapping.lo) + " hi=" + format_real(mapping.hi) +
                              " levels=0:65535 clamp=" + (clamp ? format_real(*clamp) : "auto") + "\n";
  write_file_atomic(dest, bytes);
  write_file_atomic(side, sidecar);
}

}  // namespace deev
