#pragma once

#include <optional>
#include <string>
#include <vector>

#include "irsolve/bira.hpp"
#include "irsolve/diagnostics.hpp"

namespace irsolve {

inline constexpr int kTraceVersion = 1;

/// Trace JSON. Keys are sorted and no wall-clock data is written, so equal
/// reports serialize to equal bytes. NaN and infinities are written as null
/// and read back as NaN.
[[nodiscard]] std::string report_to_json(const RunReport& report);
/// Throws SchemaError on a missing or mistyped field or a version mismatch.
[[nodiscard]] RunReport report_from_json(const std::string& text);

[[nodiscard]] std::string audit_to_json(const AuditReport& audit,
                                        const TheoreticalConstants& constants);

/// One flat JSON object: problem id, AlgorithmParams fields by name,
/// tolerances, budget and CLI settings.
struct RunConfig {
  std::string problem = "p1";
  AlgorithmParams params;
  Tolerances tol;
  int budget = 500;
  HessianPolicy hessian = HessianPolicy::zero;
  std::optional<std::vector<double>> x0;
  std::optional<PrecisionLevel> y0;
  std::string out;
  int jobs = 1;
  /// eps_opt values swept by the complexity command.
  std::vector<double> eps_grid = {1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
};

/// Throws ConfigError naming the offending key; unknown keys are rejected and
/// parameter ranges are validated.
[[nodiscard]] RunConfig parse_config(const std::string& text);
[[nodiscard]] RunConfig load_config(const std::string& path);

[[nodiscard]] std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace irsolve
