#include "deev/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "deev/grid_io.hpp"

namespace deev {

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Match: return "match";
    case Verdict::ConstantOnlyMismatch: return "constant-only-mismatch";
    case Verdict::ShapeMismatch: return "shape-mismatch";
  }
  return "shape-mismatch";
}

Verdict classify(double max_relative_deviation, double calibrated_constant, double printed_constant) {
  if (!(max_relative_deviation <= kMatchTolerance)) return Verdict::ShapeMismatch;
  const double rel = std::abs(calibrated_constant - printed_constant) / std::abs(calibrated_constant);
  return rel <= kMatchTolerance ? Verdict::Match : Verdict::ConstantOnlyMismatch;
}

std::string report_text(const DiscrepancyReport& r) {
  std::ostringstream os;
  os << "Closed form vs numerical Wigner transform: " << r.label << "\n\n";
  char line[256];
  std::snprintf(line, sizeof line, "%10s %10s %10s %10s %14s %14s %12s %14s\n", "x", "y", "px", "py",
                "closed_form", "oracle", "oracle_err", "ratio");
  os << line;
  for (const auto& p : r.probes) {
    std::snprintf(line, sizeof line, "%10.4g %10.4g %10.4g %10.4g %14.6e %14.6e %12.3e %14.6e\n", p.x, p.y,
                  p.px, p.py, p.closed_form, p.oracle, p.oracle_error, p.ratio);
    os << line;
  }
  os << "\n";
  for (const auto& n : r.notes) os << "note: " << n << "\n";
  if (!r.notes.empty()) os << "\n";

  os << "label=" << r.label << "\n";
  os << "probe_count=" << r.probes.size() << "\n";
  for (std::size_t i = 0; i < r.probes.size(); ++i) {
    const auto& p = r.probes[i];
    os << "probe." << i << "=" << format_real(p.x) << "," << format_real(p.y) << ","
       << format_real(p.px) << "," << format_real(p.py) << "\n";
    os << "closed_form." << i << "=" << format_real(p.closed_form) << "\n";
    os << "oracle." << i << "=" << format_real(p.oracle) << "\n";
    os << "oracle_error." << i << "=" << format_real(p.oracle_error) << "\n";
    os << "ratio." << i << "=" << format_real(p.ratio) << "\n";
  }
  os << "printed_constant=" << format_real(r.printed_constant) << "\n";
  os << "calibrated_constant=" << format_real(r.calibrated_constant) << "\n";
  os << "max_relative_deviation=" << format_real(r.max_relative_deviation) << "\n";
  os << "verdict=" << verdict_name(r.verdict) << "\n";
  return os.str();
}

void write_report(const DiscrepancyReport& r, const std::filesystem::path& dest) {
  write_file_atomic(dest, report_text(r));
}

}  // namespace deev
