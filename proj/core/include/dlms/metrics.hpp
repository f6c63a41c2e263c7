#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dlms/filter.hpp"
#include "dlms/network.hpp"

namespace dlms {

/// Trajectory of one simulation run: w, psi and e for every agent at every
/// iteration i in [1, L]. The initial estimates w(0) are not stored.
class RunRecord {
 public:
  RunRecord(std::vector<std::string> agent_ids, WeightVector w_opt,
            std::size_t iterations, std::uint64_t seed, std::size_t run);

  /// Stores agent's state at 1-based `iteration`.
  void set(std::size_t iteration, std::size_t agent, const AgentState& state);

  std::span<const double> w(std::size_t iteration, std::size_t agent) const {
    return {w_.data() + offset(iteration, agent) * dim_, dim_};
  }
  std::span<const double> psi(std::size_t iteration, std::size_t agent) const {
    return {psi_.data() + offset(iteration, agent) * dim_, dim_};
  }
  double e(std::size_t iteration, std::size_t agent) const {
    return e_[offset(iteration, agent)];
  }
  /// Euclidean distance |w(i) - w_opt|.
  double distance(std::size_t iteration, std::size_t agent) const;
  double squared_distance(std::size_t iteration, std::size_t agent) const;

  std::size_t iterations() const noexcept { return iterations_; }
  std::size_t agent_count() const noexcept { return ids_.size(); }
  std::size_t dimension() const noexcept { return dim_; }
  const std::vector<std::string>& agent_ids() const noexcept { return ids_; }
  /// Throws LookupError for an unknown id.
  std::size_t agent_index(std::string_view id) const;
  const WeightVector& w_opt() const noexcept { return w_opt_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t run() const noexcept { return run_; }

 private:
  std::size_t offset(std::size_t iteration, std::size_t agent) const {
    return (iteration - 1) * ids_.size() + agent;
  }

  std::vector<std::string> ids_;
  WeightVector w_opt_;
  std::size_t iterations_;
  std::size_t dim_;
  std::uint64_t seed_;
  std::size_t run_;
  std::vector<double> w_;
  std::vector<double> psi_;
  std::vector<double> e_;
};

/// Ensemble mean of |w(i) - w_opt|^2 for i = 1..L. Per-iteration terms are
/// summed in sorted order, so the result does not depend on record order.
std::vector<double> msd_series(std::span<const RunRecord> records,
                               std::string_view agent);

/// Number of trailing iterations in a steady-state window.
std::size_t steady_state_window(std::size_t iterations, double window_fraction);

/// Sample variance of w over the last ceil(window_fraction * L) iterations,
/// summed over components.
double steady_state_variance(const RunRecord& record, std::string_view agent,
                             double window_fraction = 0.2);

/// Smallest i with |w(j) - w_opt| <= band for every j >= i.
std::optional<std::size_t> convergence_iteration(const RunRecord& record,
                                                 std::string_view agent,
                                                 double band);

/// First i at which the sign of |w_p(i) - w_opt| - |w_q(i) - w_opt| differs
/// from its sign at i = 1. Scalar weights only.
std::optional<std::size_t> crossing_iteration(const RunRecord& record,
                                              std::string_view agent_p,
                                              std::string_view agent_q);

/// Var[s_ab x + s_ba y].
double weighted_sum_variance(double s_ab, double s_ba, double var_x,
                             double var_y, double cov_xy);

/// 0.1 |mean(w0) - w_opt|, falling back to 0.1 max(|w_opt|, 1) when the
/// mean initial estimate already sits on w_opt.
double default_convergence_band(std::span<const WeightVector> initial_weights,
                                std::span<const double> w_opt);

struct MetricsOptions {
  double band = 0.1;
  double window_fraction = 0.2;
};

struct CrossingResult {
  std::string agent_p;
  std::string agent_q;
  std::optional<std::size_t> iteration;
};

struct RunMetrics {
  std::size_t run = 0;
  /// Empty when the horizon is too short for a two-sample window.
  std::vector<std::optional<double>> steady_state_var;
  std::vector<std::optional<std::size_t>> convergence_iter;
  std::vector<CrossingResult> crossings;
};

struct MetricsReport {
  std::vector<std::string> agents;
  std::vector<std::vector<double>> msd;
  std::vector<RunMetrics> runs;
};

/// Metrics for every agent of every record. Crossings are computed for all
/// agent pairs when weights are scalar.
MetricsReport summarize(std::span<const RunRecord> records,
                        const MetricsOptions& options);

}  // namespace dlms
