#include "dlms/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "dlms/error.hpp"

namespace dlms {

RunRecord::RunRecord(std::vector<std::string> agent_ids, WeightVector w_opt,
                     std::size_t iterations, std::uint64_t seed, std::size_t run)
    : ids_(std::move(agent_ids)),
      w_opt_(std::move(w_opt)),
      iterations_(iterations),
      dim_(w_opt_.size()),
      seed_(seed),
      run_(run) {
  if (iterations_ == 0) throw ConfigError("a run record needs at least one iteration");
  const std::size_t slots = iterations_ * ids_.size();
  w_.assign(slots * dim_, 0.0);
  psi_.assign(slots * dim_, 0.0);
  e_.assign(slots, 0.0);
}

void RunRecord::set(std::size_t iteration, std::size_t agent,
                    const AgentState& state) {
  if (iteration < 1 || iteration > iterations_ || agent >= ids_.size()) {
    throw ConfigError("run record index out of range");
  }
  if (state.w.size() != dim_ || state.psi.size() != dim_) {
    throw ConfigError("state dimension does not match w_opt");
  }
  const std::size_t at = offset(iteration, agent);
  std::copy(state.w.begin(), state.w.end(), w_.begin() + at * dim_);
  std::copy(state.psi.begin(), state.psi.end(), psi_.begin() + at * dim_);
  e_[at] = state.e;
}

double RunRecord::squared_distance(std::size_t iteration, std::size_t agent) const {
  const auto wi = w(iteration, agent);
  double sum = 0.0;
  for (std::size_t m = 0; m < dim_; ++m) {
    const double d = wi[m] - w_opt_[m];
    sum += d * d;
  }
  return sum;
}

double RunRecord::distance(std::size_t iteration, std::size_t agent) const {
  if (dim_ == 1) return std::abs(w(iteration, agent)[0] - w_opt_[0]);
  return std::sqrt(squared_distance(iteration, agent));
}

std::size_t RunRecord::agent_index(std::string_view id) const {
  const auto it = std::find(ids_.begin(), ids_.end(), id);
  if (it == ids_.end()) throw LookupError("unknown agent '" + std::string(id) + "'");
  return static_cast<std::size_t>(it - ids_.begin());
}

std::vector<double> msd_series(std::span<const RunRecord> records,
                               std::string_view agent) {
  if (records.empty()) throw ConfigError("msd_series: empty record list");
  const RunRecord& first = records.front();
  for (const auto& r : records) {
    if (r.iterations() != first.iterations() || r.agent_ids() != first.agent_ids() ||
        r.w_opt() != first.w_opt()) {
      throw ConfigError("msd_series: records do not share a scenario shape");
    }
  }
  const std::size_t k = first.agent_index(agent);
  std::vector<double> series(first.iterations());
  std::vector<double> terms(records.size());
  for (std::size_t i = 1; i <= first.iterations(); ++i) {
    for (std::size_t r = 0; r < records.size(); ++r) {
      terms[r] = records[r].squared_distance(i, k);
    }
    std::sort(terms.begin(), terms.end());
    double sum = 0.0;
    for (double t : terms) sum += t;
    series[i - 1] = sum / static_cast<double>(records.size());
  }
  return series;
}

std::size_t steady_state_window(std::size_t iterations, double window_fraction) {
  if (!(window_fraction > 0.0 && window_fraction <= 1.0)) {
    throw ConfigError("window fraction must be in (0, 1]");
  }
  // Guard against 0.2 * 1000 landing a hair above 200.
  const double raw = window_fraction * static_cast<double>(iterations);
  const auto window = static_cast<std::size_t>(std::ceil(raw - 1e-9 * raw));
  return std::min(window, iterations);
}

double steady_state_variance(const RunRecord& record, std::string_view agent,
                             double window_fraction) {
  const std::size_t k = record.agent_index(agent);
  const std::size_t L = record.iterations();
  const std::size_t window = steady_state_window(L, window_fraction);
  if (window < 2) {
    throw ConfigError("steady-state window holds " + std::to_string(window) +
                      " samples; need at least 2");
  }
  const std::size_t start = L - window + 1;
  double total = 0.0;
  for (std::size_t m = 0; m < record.dimension(); ++m) {
    double mean = 0.0;
    for (std::size_t i = start; i <= L; ++i) mean += record.w(i, k)[m];
    mean /= static_cast<double>(window);
    double ss = 0.0;
    for (std::size_t i = start; i <= L; ++i) {
      const double d = record.w(i, k)[m] - mean;
      ss += d * d;
    }
    total += ss / static_cast<double>(window - 1);
  }
  return total;
}

std::optional<std::size_t> convergence_iteration(const RunRecord& record,
                                                 std::string_view agent,
                                                 double band) {
  if (!(band > 0.0)) throw ConfigError("convergence band must be > 0");
  const std::size_t k = record.agent_index(agent);
  std::size_t i = record.iterations();
  while (i >= 1 && record.distance(i, k) <= band) --i;
  if (i == record.iterations()) return std::nullopt;
  return i + 1;
}

std::optional<std::size_t> crossing_iteration(const RunRecord& record,
                                              std::string_view agent_p,
                                              std::string_view agent_q) {
  if (record.dimension() != 1) {
    throw ConfigError("crossing_iteration supports scalar weights only, got M = " +
                      std::to_string(record.dimension()));
  }
  const std::size_t p = record.agent_index(agent_p);
  const std::size_t q = record.agent_index(agent_q);
  auto sign_at = [&](std::size_t i) {
    const double gap = record.distance(i, p) - record.distance(i, q);
    return (gap > 0.0) - (gap < 0.0);
  };
  const int initial = sign_at(1);
  for (std::size_t i = 2; i <= record.iterations(); ++i) {
    if (sign_at(i) != initial) return i;
  }
  return std::nullopt;
}

double weighted_sum_variance(double s_ab, double s_ba, double var_x,
                             double var_y, double cov_xy) {
  if (var_x < 0.0 || var_y < 0.0) throw ConfigError("variances must be >= 0");
  return s_ab * s_ab * var_x + s_ba * s_ba * var_y + 2.0 * s_ab * s_ba * cov_xy;
}

double default_convergence_band(std::span<const WeightVector> initial_weights,
                                std::span<const double> w_opt) {
  if (initial_weights.empty()) throw ConfigError("no adaptive agents");
  double dist2 = 0.0;
  double norm2 = 0.0;
  for (std::size_t m = 0; m < w_opt.size(); ++m) {
    double mean = 0.0;
    for (const auto& w0 : initial_weights) mean += w0[m];
    mean /= static_cast<double>(initial_weights.size());
    dist2 += (mean - w_opt[m]) * (mean - w_opt[m]);
    norm2 += w_opt[m] * w_opt[m];
  }
  if (dist2 > 0.0) return 0.1 * std::sqrt(dist2);
  return 0.1 * std::max(std::sqrt(norm2), 1.0);
}

MetricsReport summarize(std::span<const RunRecord> records,
                        const MetricsOptions& options) {
  MetricsReport report;
  if (records.empty()) return report;
  report.agents = records.front().agent_ids();
  for (const auto& id : report.agents) report.msd.push_back(msd_series(records, id));

  const bool scalar = records.front().dimension() == 1;
  for (const auto& record : records) {
    RunMetrics m;
    m.run = record.run();
    for (const auto& id : report.agents) {
      std::optional<double> var;
      if (steady_state_window(record.iterations(), options.window_fraction) >= 2) {
        var = steady_state_variance(record, id, options.window_fraction);
      }
      m.steady_state_var.push_back(var);
      m.convergence_iter.push_back(convergence_iteration(record, id, options.band));
    }
    if (scalar) {
      for (std::size_t p = 0; p < report.agents.size(); ++p) {
        for (std::size_t q = p + 1; q < report.agents.size(); ++q) {
          m.crossings.push_back({report.agents[p], report.agents[q],
                                 crossing_iteration(record, report.agents[p],
                                                    report.agents[q])});
        }
      }
    }
    report.runs.push_back(std::move(m));
  }
  return report;
}

}  // namespace dlms
