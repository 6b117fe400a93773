#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace deev {

struct Axis {
  std::string label;  ///< one of x, y, px, py, r, s
  double min = 0.0;
  double max = 1.0;
  int count = 2;

  double node(int i) const;
};

/// Rectangular sampling grid; axis2 varies fastest in the value array.
struct GridSpec {
  Axis axis1;
  Axis axis2;

  void validate() const;
  std::size_t size() const {
    return static_cast<std::size_t>(axis1.count) * static_cast<std::size_t>(axis2.count);
  }
  std::string describe() const;
};

using Metadata = std::map<std::string, std::string>;

struct Field2D {
  GridSpec spec;
  std::vector<double> values;  ///< row-major, index i1 * count2 + i2
  Metadata metadata;

  double at(int i1, int i2) const {
    return values[static_cast<std::size_t>(i1) * spec.axis2.count + i2];
  }
  /// Node index nearest to the coordinate pair, clamped to the grid.
  std::pair<int, int> nearest(double c1, double c2) const;
};

/// Number of worker threads for grid sampling; 0 means available parallelism.
struct Parallelism {
  unsigned threads = 0;
  unsigned resolved() const;
};

/// Samples fn(axis1 value, axis2 value) on every node. Rows are distributed
/// over threads; each node is written exactly once so the result does not
/// depend on the thread count.
Field2D sample_field(const GridSpec& spec, const std::function<double(double, double)>& fn,
                     Parallelism par = {});

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Writes to a temporary sibling and renames into place, so a failed write
/// never leaves a partial file behind.
void write_file_atomic(const std::filesystem::path& dest, const std::string& bytes);

/// Formats a double with 17 significant digits; non-finite values become
/// inf, -inf or nan.
std::string format_real(double v);
double parse_real(const std::string& token);

std::string csv_text(const Field2D& field);
Field2D parse_csv(const std::string& text);
void write_csv(const Field2D& field, const std::filesystem::path& dest);
Field2D read_csv(const std::filesystem::path& src);

/// Value range mapped onto [0, 65535]: symmetric [-clamp, clamp] or the
/// finite data range when clamp is empty ("auto").
struct PgmMapping {
  double lo;
  double hi;
};
PgmMapping pgm_mapping(const Field2D& field, std::optional<double> clamp);

/// Binary 16-bit PGM bytes. Image columns follow axis1, rows follow axis2
/// with the largest axis2 value on the top row. Values outside the mapping
/// saturate; NaN maps to the middle of the range.
std::string pgm_bytes(const Field2D& field, const PgmMapping& mapping);

/// Writes dest and a one-line sidecar dest + ".map" recording the mapping.
void write_pgm(const Field2D& field, const std::filesystem::path& dest,
               std::optional<double> clamp);

}  // namespace deev
