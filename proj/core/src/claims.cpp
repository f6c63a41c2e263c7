#include "dlms/claims.hpp"

#include <cmath>
#include <limits>

#include "text.hpp"

namespace dlms {
namespace {

constexpr std::size_t kNever = std::numeric_limits<std::size_t>::max();

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double c : v) s += c * c;
  return std::sqrt(s);
}

double gap(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t m = 0; m < a.size(); ++m) s += (a[m] - b[m]) * (a[m] - b[m]);
  return std::sqrt(s);
}

std::size_t or_never(std::optional<std::size_t> i) { return i.value_or(kNever); }

double trust(const Scenario& s, std::size_t from, std::size_t to) {
  return s.trust_between(s.agents[from].id, s.agents[to].id);
}

ClaimResult verify_merge(const Scenario& s, const PairLayout& pair, const RunOptions& options) {
  if (!pair.average) throw IncompatibleClaimError("merge needs an averaging agent over the twins");
  const auto p = pair.p, q = pair.q, e = *pair.average;
  for (auto [from, to] : {std::pair{p, q}, {q, p}, {p, p}, {q, q}}) {
    if (trust(s, from, to) != 0.5) {
      throw IncompatibleClaimError("merge needs symmetric 0.5/0.5 trust between the cooperative agents");
    }
  }
  if (s.iterations < kMergeFromIteration) {
    throw IncompatibleClaimError("merge needs at least 10 iterations");
  }
  WeightVector mid(s.dimension());
  for (std::size_t m = 0; m < mid.size(); ++m) {
    mid[m] = 0.5 * (s.agents[p].w0[m] + s.agents[q].w0[m]) - s.w_opt[m];
  }
  const double threshold = kMergeRelativeGap * norm(mid);
  if (!(threshold > 0.0)) {
    throw IncompatibleClaimError("merge needs the mean initial estimate away from w_opt");
  }

  const auto records = run(s, options);
  double psi_mismatches = 0.0;
  for (const auto& r : records) {
    for (std::size_t i = 1; i <= r.iterations(); ++i) {
      const auto a = r.psi(i, p), b = r.psi(i, q);
      if (!std::equal(a.begin(), a.end(), b.begin())) psi_mismatches += 1.0;
    }
  }
  double max_gap_p = 0.0, max_gap_q = 0.0;
  for (std::size_t i = kMergeFromIteration; i <= s.iterations; ++i) {
    double sum_p = 0.0, sum_q = 0.0;
    for (const auto& r : records) {
      sum_p += gap(r.w(i, p), r.w(i, e));
      sum_q += gap(r.w(i, q), r.w(i, e));
    }
    max_gap_p = std::max(max_gap_p, sum_p / static_cast<double>(records.size()));
    max_gap_q = std::max(max_gap_q, sum_q / static_cast<double>(records.size()));
  }

  ClaimResult result;
  result.claim = Claim::Merge;
  result.predicate = "psi_" + s.agents[p].id + " == psi_" + s.agents[q].id +
                     " at every iteration, and ensemble-mean |w - w_" + s.agents[e].id +
                     "| < " + text::format_double(threshold) + " for every i >= 10";
  result.pass = psi_mismatches == 0.0 && max_gap_p < threshold && max_gap_q < threshold;
  result.quantities = {{"psi_mismatches", psi_mismatches},
                       {"max_mean_gap_" + s.agents[p].id, max_gap_p},
                       {"max_mean_gap_" + s.agents[q].id, max_gap_q},
                       {"threshold", threshold}};
  return result;
}

ClaimResult verify_speedup(const Scenario& s, const PairLayout& pair, const RunOptions& options) {
  if (!pair.average) throw IncompatibleClaimError("speedup needs an averaging agent over the twins");
  if (s.agents[pair.p].mu == s.agents[pair.q].mu) {
    throw IncompatibleClaimError("speedup needs heterogeneous learning rates");
  }
  const auto& ids = s.agents;
  const double band = default_band(s);
  const auto records = run(s, options);
  std::size_t wins = 0;
  double converged_e = 0.0;
  for (const auto& r : records) {
    const auto cp = or_never(convergence_iteration(r, ids[pair.p].id, band));
    const auto cq = or_never(convergence_iteration(r, ids[pair.q].id, band));
    const auto ce = or_never(convergence_iteration(r, ids[*pair.average].id, band));
    if (ce != kNever) converged_e += 1.0;
    if (cp < ce && cq < ce) ++wins;
  }
  const double fraction = static_cast<double>(wins) / static_cast<double>(records.size());

  ClaimResult result;
  result.claim = Claim::Speedup;
  result.predicate = "convergence_iter(" + ids[pair.p].id + ") and convergence_iter(" +
                     ids[pair.q].id + ") < convergence_iter(" + ids[*pair.average].id +
                     ") in >= 90% of runs";
  result.pass = fraction >= kSpeedupFraction;
  result.quantities = {{"fraction", fraction},
                       {"band", band},
                       {"runs_where_" + ids[*pair.average].id + "_converged", converged_e}};
  return result;
}

ClaimResult verify_delay(const Scenario& s, const PairLayout& pair, const RunOptions& options) {
  const auto p = pair.p, q = pair.q;
  if (!(trust(s, p, q) < trust(s, p, p) && trust(s, q, p) < trust(s, q, q))) {
    throw IncompatibleClaimError(
        "delay needs selfish trust (each cooperative agent trusting itself more than its neighbour)");
  }
  const double threshold = kDelayRelativeGap * norm(s.w_opt);
  if (!(threshold > 0.0)) throw IncompatibleClaimError("delay needs a non-zero w_opt");

  Scenario control = s;
  const auto tp = s.trust_index(s.agents[p].id), tq = s.trust_index(s.agents[q].id);
  for (std::size_t c = 0; c < control.trust.size(); ++c) {
    control.trust.set(tp, c, 0.0);
    control.trust.set(tq, c, 0.0);
  }
  for (auto [a, b] : {std::pair{tp, tp}, {tp, tq}, {tq, tq}, {tq, tp}}) control.trust.set(a, b, 0.5);

  const auto selfish = run(s, options);
  const auto symmetric = run(control, options);
  std::size_t wins = 0;
  double mean_selfish = 0.0, mean_symmetric = 0.0;
  double n_selfish = 0.0, n_symmetric = 0.0;
  for (std::size_t r = 0; r < selfish.size(); ++r) {
    const auto a = first_agreement(selfish[r], p, q, threshold);
    const auto b = first_agreement(symmetric[r], p, q, threshold);
    if (a) {
      mean_selfish += static_cast<double>(*a);
      n_selfish += 1.0;
    }
    if (b) {
      mean_symmetric += static_cast<double>(*b);
      n_symmetric += 1.0;
    }
    if (or_never(a) > or_never(b)) ++wins;
  }
  const double fraction = static_cast<double>(wins) / static_cast<double>(selfish.size());

  ClaimResult result;
  result.claim = Claim::Delay;
  result.predicate = "first i with |w_" + s.agents[p].id + " - w_" + s.agents[q].id + "| < " +
                     text::format_double(threshold) +
                     " is later than under 0.5/0.5 trust in >= 90% of paired runs";
  result.pass = fraction >= kDelayFraction;
  result.quantities = {
      {"fraction", fraction},
      {"mean_first_agreement_selfish", n_selfish > 0 ? mean_selfish / n_selfish : NAN},
      {"mean_first_agreement_symmetric", n_symmetric > 0 ? mean_symmetric / n_symmetric : NAN},
      {"threshold", threshold}};
  return result;
}

ClaimResult verify_stabilize(const Scenario& s, const PairLayout& pair, const RunOptions& options) {
  const auto& ap = s.agents[pair.p];
  const auto& aq = s.agents[pair.q];
  if (ap.noise.sd == aq.noise.sd) {
    throw IncompatibleClaimError("stabilize needs cooperative agents with different noise levels");
  }
  const bool q_noisier = aq.noise.sd > ap.noise.sd;
  const std::size_t noisy = q_noisier ? pair.q : pair.p;
  const auto twin = q_noisier ? pair.twin_q : pair.twin_p;
  if (!twin) throw IncompatibleClaimError("stabilize needs a standalone twin of the noisier agent");
  if (steady_state_window(s.iterations, kStabilizeWindow) < 2) {
    throw IncompatibleClaimError("horizon too short for a two-sample steady-state window");
  }

  const auto records = run(s, options);
  std::size_t wins = 0;
  double ratio_sum = 0.0;
  for (const auto& r : records) {
    const double coop = steady_state_variance(r, s.agents[noisy].id, kStabilizeWindow);
    const double alone = steady_state_variance(r, s.agents[*twin].id, kStabilizeWindow);
    if (coop < alone) ++wins;
    ratio_sum += coop / alone;
  }
  const double n = static_cast<double>(records.size());

  ClaimResult result;
  result.claim = Claim::Stabilize;
  result.predicate = "steady-state variance of " + s.agents[noisy].id + " < that of " +
                     s.agents[*twin].id + " (last 20%) in >= 95% of runs";
  result.pass = static_cast<double>(wins) / n >= kStabilizeFraction;
  result.quantities = {{"fraction", static_cast<double>(wins) / n},
                       {"mean_variance_ratio", ratio_sum / n}};
  return result;
}

}  // namespace

std::string_view to_string(Claim claim) {
  switch (claim) {
    case Claim::Merge: return "merge";
    case Claim::Speedup: return "speedup";
    case Claim::Delay: return "delay";
    case Claim::Stabilize: return "stabilize";
  }
  return "unknown";
}

Claim parse_claim(std::string_view text) {
  for (Claim c : {Claim::Merge, Claim::Speedup, Claim::Delay, Claim::Stabilize}) {
    if (text == to_string(c)) return c;
  }
  throw LookupError("unknown claim '" + std::string(text) +
                    "' (valid: merge, speedup, delay, stabilize)");
}

PairLayout find_pair_layout(const Scenario& s) {
  std::vector<std::size_t> coop;
  for (std::size_t i = 0; i < s.agents.size(); ++i) {
    if (s.agents[i].kind == AgentKind::Cooperative) coop.push_back(i);
  }
  if (coop.size() != 2) {
    throw IncompatibleClaimError("claims need exactly two cooperative agents, found " +
                                 std::to_string(coop.size()));
  }
  PairLayout layout;
  layout.p = coop[0];
  layout.q = coop[1];
  for (std::size_t i = 0; i < s.agents.size(); ++i) {
    const auto& a = s.agents[i];
    if (a.kind != AgentKind::Standalone || !a.counterpart) continue;
    if (*a.counterpart == s.agents[layout.p].id && !layout.twin_p) layout.twin_p = i;
    if (*a.counterpart == s.agents[layout.q].id && !layout.twin_q) layout.twin_q = i;
  }
  if (layout.twin_p && layout.twin_q) {
    for (std::size_t i = 0; i < s.agents.size(); ++i) {
      const auto& a = s.agents[i];
      if (a.kind != AgentKind::Averaging || a.sources.size() != 2) continue;
      const auto s0 = s.agent_index(a.sources[0]), s1 = s.agent_index(a.sources[1]);
      if ((s0 == *layout.twin_p && s1 == *layout.twin_q) ||
          (s0 == *layout.twin_q && s1 == *layout.twin_p)) {
        layout.average = i;
        break;
      }
    }
  }
  return layout;
}

std::optional<std::size_t> first_agreement(const RunRecord& record, std::size_t p,
                                           std::size_t q, double threshold) {
  for (std::size_t i = 1; i <= record.iterations(); ++i) {
    if (gap(record.w(i, p), record.w(i, q)) < threshold) return i;
  }
  return std::nullopt;
}

ClaimResult verify_claim(const Scenario& scenario, Claim claim, const RunOptions& options) {
  validate(scenario);
  const PairLayout pair = find_pair_layout(scenario);
  switch (claim) {
    case Claim::Merge: return verify_merge(scenario, pair, options);
    case Claim::Speedup: return verify_speedup(scenario, pair, options);
    case Claim::Delay: return verify_delay(scenario, pair, options);
    case Claim::Stabilize: return verify_stabilize(scenario, pair, options);
  }
  throw LookupError("unknown claim");
}

}  // namespace dlms
