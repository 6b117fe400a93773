#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace deev {

enum class Verdict { Match, ConstantOnlyMismatch, ShapeMismatch };

std::string_view verdict_name(Verdict v);

/// Relative deviation above which closed form and oracle disagree.
inline constexpr double kMatchTolerance = 1e-6;

struct ProbeRecord {
  double x, y, px, py;
  double closed_form;  ///< printed constant times shape
  double shape;        ///< closed form without its constant
  double oracle;
  double oracle_error;
  double ratio;        ///< oracle / shape
};

struct DiscrepancyReport {
  std::string label;
  std::vector<ProbeRecord> probes;
  double printed_constant = 0.0;
  double calibrated_constant = 0.0;
  /// max |calibrated * shape - oracle| / |oracle| over the probes.
  double max_relative_deviation = 0.0;
  Verdict verdict = Verdict::ShapeMismatch;
  std::vector<std::string> notes;
};

/// Verdict rule: shape-mismatch when the calibrated closed form deviates by
/// more than kMatchTolerance anywhere; otherwise match when the calibrated
/// constant equals the printed one to kMatchTolerance, else
/// constant-only-mismatch.
Verdict classify(double max_relative_deviation, double calibrated_constant, double printed_constant);

/// Human-readable table followed by key=value lines; the verdict is the
/// final line.
std::string report_text(const DiscrepancyReport& r);
void write_report(const DiscrepancyReport& r, const std::filesystem::path& dest);

}  // namespace deev
