#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "irsolve/bira.hpp"
#include "irsolve/oracle.hpp"

namespace irsolve {

/// Upper bound on the noise scales assumed when the suite declares its
/// Lipschitz constants and bounds.
inline constexpr double kSuiteNoiseCap = 1e-6;

/// A built-in problem together with its default start and expected outcome.
struct SuiteEntry {
  std::shared_ptr<const SyntheticProblem> problem;
  DecisionPoint x0;
  PrecisionLevel y0;
  std::optional<DecisionPoint> minimizer;
  RunStatus expected = RunStatus::Converged;
  std::string description;
};

/// "p1", "p2", "p3", "p4", "p1pdp"
[[nodiscard]] std::vector<std::string> problem_ids();

/// Parameters the suite is calibrated with.
[[nodiscard]] AlgorithmParams suite_params();

/// Builds one suite problem. Noise scales depend on `params` through the
/// penalty lower bound, so the same params must be used for the run.
[[nodiscard]] SuiteEntry make_problem(const std::string& id,
                                      const AlgorithmParams& params = suite_params());

[[nodiscard]] std::vector<SuiteEntry> make_suite(const AlgorithmParams& params = suite_params());

}  // namespace irsolve
