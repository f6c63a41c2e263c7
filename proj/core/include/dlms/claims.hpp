#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dlms/error.hpp"
#include "dlms/metrics.hpp"
#include "dlms/runner.hpp"
#include "dlms/scenario.hpp"

namespace dlms {

/// Qualitative two-agent behaviours checked as statistical predicates.
enum class Claim {
  /// Symmetric trust: psi_a == psi_b and a follows the averaging agent.
  Merge,
  /// Heterogeneous mu: cooperative agents converge before the averaging agent.
  Speedup,
  /// Selfish trust delays the point where a and b coincide.
  Delay,
  /// Cooperation lowers the steady-state jitter of the noisier agent.
  Stabilize,
};

std::string_view to_string(Claim claim);
/// Throws LookupError listing the valid names.
Claim parse_claim(std::string_view text);

/// The claim does not apply to the scenario (wrong topology or parameters).
class IncompatibleClaimError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Agents of the canonical two-agent experiment: cooperative pair p, q,
/// their standalone twins and the averaging agent over the twins.
struct PairLayout {
  std::size_t p = 0;
  std::size_t q = 0;
  std::optional<std::size_t> twin_p;
  std::optional<std::size_t> twin_q;
  std::optional<std::size_t> average;
};

/// Throws IncompatibleClaimError unless the scenario has exactly two
/// cooperative agents.
PairLayout find_pair_layout(const Scenario& scenario);

// Thresholds of the predicates.
inline constexpr std::size_t kMergeFromIteration = 10;
inline constexpr double kMergeRelativeGap = 0.05;
inline constexpr double kSpeedupFraction = 0.9;
inline constexpr double kDelayRelativeGap = 0.01;
inline constexpr double kDelayFraction = 0.9;
inline constexpr double kStabilizeFraction = 0.95;
inline constexpr double kStabilizeWindow = 0.2;

struct Quantity {
  std::string name;
  double value = 0.0;
};

struct ClaimResult {
  Claim claim = Claim::Merge;
  bool pass = false;
  std::string predicate;
  std::vector<Quantity> quantities;
};

/// Runs the scenario ensemble (and, for Delay, the symmetric-trust control
/// with the same seeds) and evaluates the claim. Throws
/// IncompatibleClaimError when the claim does not apply and
/// DivergenceError if a run diverges.
ClaimResult verify_claim(const Scenario& scenario, Claim claim,
                         const RunOptions& options = {});

/// First iteration with |w_p(i) - w_q(i)| < threshold.
std::optional<std::size_t> first_agreement(const RunRecord& record, std::size_t p,
                                           std::size_t q, double threshold);

}  // namespace dlms
