#include "dlms/network.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include "dlms/error.hpp"

namespace dlms {
namespace {

std::string shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

WeightVector combine_row(std::span<const double> row,
                         std::span<const WeightVector> previous) {
  WeightVector psi(previous.front().size(), 0.0);
  for (std::size_t b = 0; b < row.size(); ++b) {
    const double s = row[b];
    if (s == 0.0) continue;
    const WeightVector& w = previous[b];
    for (std::size_t m = 0; m < psi.size(); ++m) psi[m] += s * w[m];
  }
  return psi;
}

}  // namespace

TrustMatrix::TrustMatrix(const std::vector<std::vector<double>>& rows)
    : n_(rows.size()) {
  s_.reserve(n_ * n_);
  for (const auto& r : rows) {
    if (r.size() != n_) {
      throw ConfigError("trust matrix must be square: row of length " +
                        std::to_string(r.size()) + " in a " +
                        std::to_string(n_) + "-agent matrix");
    }
    s_.insert(s_.end(), r.begin(), r.end());
  }
}

TrustMatrix TrustMatrix::identity(std::size_t n) {
  TrustMatrix t(n);
  for (std::size_t a = 0; a < n; ++a) t.set(a, a, 1.0);
  return t;
}

bool TrustMatrix::row_is_identity(std::size_t a) const {
  for (std::size_t b = 0; b < n_; ++b) {
    if ((*this)(a, b) != (a == b ? 1.0 : 0.0)) return false;
  }
  return true;
}

void TrustMatrix::validate() const {
  for (std::size_t a = 0; a < n_; ++a) {
    validate_trust_row(row(a), "trust row " + std::to_string(a));
  }
}

void validate_trust_row(std::span<const double> row, std::string_view label) {
  double sum = 0.0;
  for (double s : row) {
    if (!(s >= 0.0 && s <= 1.0)) {
      throw ValidationError(std::string(label),
                            "trust coefficient " + shortest(s) +
                                " outside [0, 1]");
    }
    sum += s;
  }
  if (!(std::abs(sum - 1.0) <= kTrustRowTolerance)) {
    throw ValidationError(std::string(label),
                          "trust row sum " + shortest(sum) + " ≠ 1");
  }
}

std::string_view to_string(AgentKind kind) {
  switch (kind) {
    case AgentKind::Cooperative: return "cooperative";
    case AgentKind::Standalone: return "standalone";
    case AgentKind::Averaging: return "averaging";
  }
  return "unknown";
}

AgentKind parse_agent_kind(std::string_view text) {
  if (text == "cooperative") return AgentKind::Cooperative;
  if (text == "standalone") return AgentKind::Standalone;
  if (text == "averaging") return AgentKind::Averaging;
  throw LookupError("unknown agent kind '" + std::string(text) +
                    "' (expected cooperative, standalone or averaging)");
}

WeightVector combine(std::span<const double> trust_row,
                     std::span<const WeightVector> previous) {
  if (trust_row.size() != previous.size()) {
    throw ConfigError("combine: trust row has " +
                      std::to_string(trust_row.size()) + " entries for " +
                      std::to_string(previous.size()) + " estimates");
  }
  if (previous.empty()) throw ConfigError("combine: no estimates");
  validate_trust_row(trust_row, "trust row");
  for (const auto& w : previous) {
    if (w.size() != previous.front().size()) {
      throw ConfigError("combine: estimates differ in length");
    }
  }
  return combine_row(trust_row, previous);
}

WeightVector pairwise_combine(std::span<const double> w_a,
                              std::span<const double> w_b, double s_ab) {
  if (w_a.size() != w_b.size()) {
    throw ConfigError("pairwise_combine: estimates differ in length");
  }
  WeightVector psi(w_a.begin(), w_a.end());
  for (std::size_t m = 0; m < psi.size(); ++m) psi[m] += s_ab * (w_b[m] - w_a[m]);
  return psi;
}

WeightVector averaging_update(std::span<const WeightVector> sources) {
  if (sources.empty()) throw ConfigError("averaging agent needs at least one source");
  WeightVector mean(sources.front().size(), 0.0);
  for (const auto& w : sources) {
    if (w.size() != mean.size()) {
      throw ConfigError("averaging_update: sources differ in length");
    }
    for (std::size_t m = 0; m < mean.size(); ++m) mean[m] += w[m];
  }
  const double n = static_cast<double>(sources.size());
  for (double& c : mean) c /= n;
  return mean;
}

Network::Network(std::vector<NetworkAgent> agents, TrustMatrix trust)
    : agents_(std::move(agents)), trust_(std::move(trust)) {
  trust_index_.resize(agents_.size());
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    if (agents_[i].kind != AgentKind::Averaging) {
      trust_index_[i] = adaptive_.size();
      adaptive_.push_back(i);
    }
  }
  if (trust_.size() != adaptive_.size()) {
    throw ValidationError("trust", "matrix is " + std::to_string(trust_.size()) +
                                       "x" + std::to_string(trust_.size()) +
                                       " but the network has " +
                                       std::to_string(adaptive_.size()) +
                                       " adaptive agents");
  }
  trust_.validate();
  for (const auto& a : agents_) {
    if (a.kind == AgentKind::Averaging) {
      if (a.sources.empty()) {
        throw ValidationError(a.id + ".sources", "averaging agent needs at least one source");
      }
      for (std::size_t s : a.sources) {
        if (s >= agents_.size() || agents_[s].kind == AgentKind::Averaging) {
          throw ValidationError(a.id + ".sources",
                                "sources must be cooperative or standalone agents");
        }
      }
    } else if (!(a.mu >= 0.0) || !std::isfinite(a.mu)) {
      throw ValidationError(a.id + ".mu", "learning rate must be finite and >= 0");
    }
  }
}

std::vector<AgentState> cta_iteration(std::span<const AgentState> states,
                                      const Network& network,
                                      std::span<const SignalSample> samples) {
  std::vector<std::size_t> order(network.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  return cta_iteration(states, network, samples, order);
}

std::vector<AgentState> cta_iteration(std::span<const AgentState> states,
                                      const Network& network,
                                      std::span<const SignalSample> samples,
                                      std::span<const std::size_t> visit_order) {
  const std::size_t n = network.size();
  if (states.size() != n || samples.size() != n || visit_order.size() != n) {
    throw ConfigError("cta_iteration: expected " + std::to_string(n) +
                      " states, samples and visit positions");
  }
  std::vector<bool> seen(n, false);
  for (std::size_t k : visit_order) {
    if (k >= n || seen[k]) throw ConfigError("cta_iteration: visit order is not a permutation");
    seen[k] = true;
  }

  // Previous estimates of the adaptive agents, in trust-matrix order.
  const std::size_t n_adaptive = network.trust().size();
  std::vector<WeightVector> previous;
  previous.reserve(n_adaptive);
  for (std::size_t r = 0; r < n_adaptive; ++r) {
    previous.push_back(states[network.agent_of_trust_index(r)].w);
  }

  std::vector<AgentState> next(n);

  // Phase 1: combine. Reads only iteration i-1 weights.
  for (std::size_t k : visit_order) {
    const auto r = network.trust_index(k);
    if (!r) continue;
    if (network.agent(k).kind == AgentKind::Standalone) {
      next[k].psi = previous[*r];
    } else {
      next[k].psi = combine_row(network.trust().row(*r), previous);
    }
  }

  // Phase 2: adapt.
  for (std::size_t k : visit_order) {
    const NetworkAgent& agent = network.agent(k);
    if (agent.kind == AgentKind::Averaging) continue;
    try {
      auto update = lms_step(next[k].psi, samples[k].x, samples[k].y, agent.mu);
      next[k].w = std::move(update.w);
      next[k].e = update.e;
    } catch (const DivergenceError& err) {
      throw err.with_agent(agent.id);
    }
  }

  for (std::size_t k : visit_order) {
    const NetworkAgent& agent = network.agent(k);
    if (agent.kind != AgentKind::Averaging) continue;
    std::vector<WeightVector> sources;
    sources.reserve(agent.sources.size());
    for (std::size_t s : agent.sources) sources.push_back(next[s].w);
    next[k].w = averaging_update(sources);
    next[k].psi = next[k].w;
    next[k].e = std::numeric_limits<double>::quiet_NaN();
  }
  return next;
}

}  // namespace dlms
