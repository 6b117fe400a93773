#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "deev/coupling.hpp"
#include "deev/grid_io.hpp"
#include "deev/quadrature.hpp"
#include "deev/state.hpp"
#include "deev/wigner.hpp"

namespace deev::cli {

/// Malformed or out-of-range configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CouplerConfig {
  std::string type;  ///< "bs" or "dcdc"
  double theta = 0.0;
  double phi = 0.0;
  double g = 1.0;
  double delta = 0.0;
  std::optional<double> t;
  std::optional<double> ratio;

  /// Coupler coefficients; a dcdc block with a ratio is solved for t first.
  ModeCoupler build() const;
  /// Interaction time actually used by a dcdc block.
  double dcdc_time() const;
};

struct VerifyConfig {
  int random_points = 8;
  int marginal_points = 2;
  unsigned long long seed = 1;
};

struct RunConfig {
  DeevParams params = DeevParams::tied(0, 1.0, 1.0);
  std::optional<CouplerConfig> coupler;
  std::map<std::string, Axis> axes;  ///< keyed by label, defaults filled in
  QuadratureSpec quadrature;
  std::vector<int> sit_orders{1, 2, 3, 4};
  SitForm sit_form = SitForm::Sum;
  VerifyConfig verify;
  std::optional<std::filesystem::path> output;

  GridSpec grid(const std::string& label1, const std::string& label2) const;
};

/// JSON document with sections state, coupler, grid, quadrature, sit, verify
/// and an optional output directory. Unknown keys anywhere are rejected.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace deev::cli
