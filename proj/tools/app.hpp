#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"

namespace deev::cli {

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitBadConfig = 2;
inline constexpr int kExitIo = 3;

struct Options {
  std::filesystem::path out = ".";
  std::optional<std::string> plane;
  std::optional<int> m;
  Parallelism par;
  std::optional<double> clamp;  ///< empty means auto
};

/// Each command writes its files under opts.out and returns an exit code.
int cmd_field(const RunConfig& cfg, const Options& opts, std::ostream& out, std::ostream& err);
int cmd_wigner(const RunConfig& cfg, const Options& opts, std::ostream& out, std::ostream& err);
int cmd_sit(const RunConfig& cfg, const Options& opts, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& cfg, const Options& opts, std::ostream& out, std::ostream& err);
int cmd_coupler(const RunConfig& cfg, const Options& opts, std::ostream& out, std::ostream& err);

/// Full command line without the program name, e.g. {"field", "--config", "a.json"}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace deev::cli
