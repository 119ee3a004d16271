#pragma once

// Metrics export: per-run CSV, its .summary companion, and the merged
// long-format comparison file.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wbasn/engine.hpp"

namespace wbasn {

class IoError : public std::runtime_error {
 public:
  IoError(std::string path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

inline constexpr const char* kMetricsHeader =
    "round,alive,dead,total_energy_j,generated,received,dropped,pdr,hot_links,handovers";
inline constexpr const char* kSummaryHeader = "protocol,stability_period,lifetime,instability_period,final_pdr";
inline constexpr const char* kComparisonHeader =
    "protocol,seed,round,alive,dead,total_energy_j,generated,received,dropped,pdr,hot_links,handovers";

/// Nine significant digits, locale-independent.
inline std::string format_g9(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

inline std::string metrics_line(const MetricsRow& r) {
  std::ostringstream o;
  o << r.round << ',' << r.alive << ',' << r.dead << ',' << format_g9(r.total_energy) << ',' << r.generated << ','
    << r.received << ',' << r.dropped_total() << ',' << format_g9(r.pdr) << ',' << r.hot_links << ','
    << r.handovers;
  return o.str();
}

inline std::string metrics_csv(const std::vector<MetricsRow>& rows) {
  std::string out = kMetricsHeader;
  out += '\n';
  for (const MetricsRow& r : rows) {
    out += metrics_line(r);
    out += '\n';
  }
  return out;
}

inline std::string summary_csv(const RunSummary& s) {
  std::ostringstream o;
  o << kSummaryHeader << '\n'
    << to_string(s.protocol) << ',' << s.stability_period << ',' << s.lifetime << ',' << s.instability_period << ','
    << format_g9(s.final_pdr) << '\n';
  return o.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path, "cannot open for writing");
  out << text;
  out.flush();
  if (!out) throw IoError(path, "write failed");
}

/// Writes `path` and `path.summary`.
inline void write_metrics_csv(const std::vector<MetricsRow>& rows, const RunSummary& summary,
                              const std::string& path) {
  write_text_file(path, metrics_csv(rows));
  write_text_file(path + ".summary", summary_csv(summary));
}

struct LabeledRun {
  Protocol protocol;
  std::uint64_t seed;
  const std::vector<MetricsRow>* rows;
};

inline std::string comparison_csv(const std::vector<LabeledRun>& runs) {
  std::string out = kComparisonHeader;
  out += '\n';
  for (const LabeledRun& run : runs) {
    const std::string prefix = std::string(to_string(run.protocol)) + ',' + std::to_string(run.seed) + ',';
    for (const MetricsRow& r : *run.rows) {
      out += prefix;
      out += metrics_line(r);
      out += '\n';
    }
  }
  return out;
}

}  // namespace wbasn
