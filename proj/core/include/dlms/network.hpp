#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dlms/filter.hpp"
#include "dlms/signal.hpp"

namespace dlms {

/// Tolerance on the sum of a trust row.
inline constexpr double kTrustRowTolerance = 1e-12;

/// Row-stochastic matrix of trust coefficients. Entry (a, b) is the weight
/// agent a gives to agent b's previous estimate; zero means b is not in a's
/// neighbourhood. Construction does not validate; call validate() once the
/// matrix is fully populated.
class TrustMatrix {
 public:
  TrustMatrix() = default;
  explicit TrustMatrix(std::size_t n) : n_(n), s_(n * n, 0.0) {}
  /// Throws ConfigError if the rows are not all of length rows.size().
  explicit TrustMatrix(const std::vector<std::vector<double>>& rows);

  static TrustMatrix identity(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t a, std::size_t b) const { return s_[a * n_ + b]; }
  void set(std::size_t a, std::size_t b, double value) { s_[a * n_ + b] = value; }
  std::span<const double> row(std::size_t a) const {
    return std::span<const double>(s_).subspan(a * n_, n_);
  }
  bool row_is_identity(std::size_t a) const;

  /// Throws ValidationError naming the first bad row.
  void validate() const;

  friend bool operator==(const TrustMatrix&, const TrustMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> s_;
};

/// Checks entries lie in [0, 1] and sum to 1 within kTrustRowTolerance.
/// Throws ValidationError with `label` as the field name.
void validate_trust_row(std::span<const double> row, std::string_view label);

enum class AgentKind { Cooperative, Standalone, Averaging };

std::string_view to_string(AgentKind kind);
/// Throws LookupError for anything but cooperative|standalone|averaging.
AgentKind parse_agent_kind(std::string_view text);

struct AgentState {
  WeightVector w;
  /// Combined estimate the last adaptation started from.
  WeightVector psi;
  /// Last instantaneous error; NaN for averaging agents.
  double e = 0.0;

  friend bool operator==(const AgentState&, const AgentState&) = default;
};

/// psi = sum_b row[b] * previous[b]. Throws ConfigError on a bad row.
WeightVector combine(std::span<const double> trust_row,
                     std::span<const WeightVector> previous);

/// Two-agent form w_a + s_ab (w_b - w_a).
WeightVector pairwise_combine(std::span<const double> w_a,
                              std::span<const double> w_b, double s_ab);

/// Component-wise arithmetic mean. Throws ConfigError if empty.
WeightVector averaging_update(std::span<const WeightVector> sources);

struct NetworkAgent {
  std::string id;
  AgentKind kind = AgentKind::Cooperative;
  double mu = 0.0;
  /// Agent indices averaged by an Averaging agent.
  std::vector<std::size_t> sources;
};

/// Static topology: agents plus the trust matrix over the adaptive
/// (cooperative and standalone) agents, indexed in agent order.
class Network {
 public:
  /// Validates the trust matrix, sizes and averaging sources.
  Network(std::vector<NetworkAgent> agents, TrustMatrix trust);

  std::size_t size() const noexcept { return agents_.size(); }
  const NetworkAgent& agent(std::size_t i) const { return agents_[i]; }
  const TrustMatrix& trust() const noexcept { return trust_; }
  /// Row/column of agent i in the trust matrix; empty for averaging agents.
  std::optional<std::size_t> trust_index(std::size_t i) const {
    return trust_index_[i];
  }
  /// Agent index of trust row r.
  std::size_t agent_of_trust_index(std::size_t r) const { return adaptive_[r]; }

 private:
  std::vector<NetworkAgent> agents_;
  TrustMatrix trust_;
  std::vector<std::optional<std::size_t>> trust_index_;
  std::vector<std::size_t> adaptive_;
};

/// One combine-then-adapt iteration.
///
/// Phase 1 forms psi for every adaptive agent from the weights in `states`
/// (iteration i-1); phase 2 runs lms_step on each. Standalone agents combine
/// with identity trust. Averaging agents then take the mean of their
/// sources' new weights. `samples[k]` is agent k's observation; entries for
/// averaging agents are ignored. DivergenceError gets the agent id attached.
std::vector<AgentState> cta_iteration(std::span<const AgentState> states,
                                      const Network& network,
                                      std::span<const SignalSample> samples);

/// Same iteration, visiting agents within each phase in `visit_order` (a
/// permutation of agent indices). The result does not depend on the order.
std::vector<AgentState> cta_iteration(std::span<const AgentState> states,
                                      const Network& network,
                                      std::span<const SignalSample> samples,
                                      std::span<const std::size_t> visit_order);

}  // namespace dlms
