#include "dlms/scenario.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include "dlms/error.hpp"
#include "dlms/metrics.hpp"
#include "text.hpp"

namespace dlms {
namespace {

bool finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double c) { return std::isfinite(c); });
}

void validate_gaussian(const GaussianParams& g, const std::string& field) {
  if (!std::isfinite(g.mean)) throw ValidationError(field + "_mean", "must be finite");
  if (!(g.sd >= 0.0) || !std::isfinite(g.sd)) {
    throw ValidationError(field + "_sd", "standard deviation must be finite and >= 0, got " +
                                             text::format_double(g.sd));
  }
}

bool valid_id(std::string_view id) {
  return !id.empty() && id.find_first_of(" \t\r\n.,#=[]") == std::string_view::npos;
}

struct TwoAgentTable {
  double mu_a, mu_b;
  double w0_a, w0_b;
  double self_trust;
  double noise_a, noise_b;
};

// a, b cooperate; c and d replay a's and b's signals alone; e averages c, d.
Scenario two_agent_scenario(std::string name, const TwoAgentTable& t) {
  constexpr double kInputSd = 0.09;
  Scenario s;
  s.name = std::move(name);
  auto adaptive = [&](std::string id, AgentKind kind, double mu, double w0,
                      double noise_sd, std::optional<std::string> counterpart) {
    AgentConfig a;
    a.id = std::move(id);
    a.kind = kind;
    a.mu = mu;
    a.w0 = {w0};
    a.input = {0.0, kInputSd};
    a.noise = {0.0, noise_sd};
    a.counterpart = std::move(counterpart);
    return a;
  };
  s.agents.push_back(adaptive("a", AgentKind::Cooperative, t.mu_a, t.w0_a, t.noise_a, {}));
  s.agents.push_back(adaptive("b", AgentKind::Cooperative, t.mu_b, t.w0_b, t.noise_b, {}));
  s.agents.push_back(adaptive("c", AgentKind::Standalone, t.mu_a, t.w0_a, t.noise_a, "a"));
  s.agents.push_back(adaptive("d", AgentKind::Standalone, t.mu_b, t.w0_b, t.noise_b, "b"));
  AgentConfig e;
  e.id = "e";
  e.kind = AgentKind::Averaging;
  e.sources = {"c", "d"};
  s.agents.push_back(e);

  s.trust = TrustMatrix::identity(4);
  s.trust.set(0, 0, t.self_trust);
  s.trust.set(0, 1, 1.0 - t.self_trust);
  s.trust.set(1, 1, t.self_trust);
  s.trust.set(1, 0, 1.0 - t.self_trust);
  return s;
}

constexpr std::array<BuiltinInfo, 5> kCatalog{{
    {"table1", "agents differing by initial estimate (w0 0 vs 1), symmetric trust 0.5/0.5"},
    {"table2", "heterogeneous learning rates (mu 0.2 vs 0.8) from the same initial estimate"},
    {"table3", "heterogeneous learning rates and initial estimates (mu 0.8/w0 0 vs mu 0.2/w0 1): standalone c passes d"},
    {"table4", "selfish trust 0.9/0.1 between agents differing by initial estimate: delayed merge"},
    {"table5", "different measurement noise (sd 0.01 vs 0.2): cooperation stabilizes the noisy agent"},
}};

}  // namespace

std::size_t Scenario::agent_index(std::string_view id) const {
  for (std::size_t i = 0; i < agents.size(); ++i) {
    if (agents[i].id == id) return i;
  }
  throw LookupError("unknown agent '" + std::string(id) + "'");
}

std::size_t Scenario::trust_index(std::string_view id) const {
  std::size_t row = 0;
  for (const auto& agent : agents) {
    if (agent.id == id) {
      if (!agent.adaptive()) {
        throw LookupError("agent '" + std::string(id) + "' has no trust row");
      }
      return row;
    }
    if (agent.adaptive()) ++row;
  }
  throw LookupError("unknown agent '" + std::string(id) + "'");
}

std::vector<std::size_t> Scenario::adaptive_agents() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    if (agents[i].adaptive()) out.push_back(i);
  }
  return out;
}

double Scenario::trust_between(std::string_view from, std::string_view to) const {
  return trust(trust_index(from), trust_index(to));
}

void validate(const Scenario& s) {
  if (s.w_opt.empty()) throw ValidationError("w_opt", "needs at least one component");
  if (!finite(s.w_opt)) throw ValidationError("w_opt", "must be finite");
  if (s.iterations < 1) throw ValidationError("iterations", "must be >= 1");
  if (s.ensemble < 1) throw ValidationError("ensemble", "must be >= 1");
  if (s.agents.empty()) throw ValidationError("agents", "scenario has no agents");

  std::set<std::string_view> ids;
  for (std::size_t i = 0; i < s.agents.size(); ++i) {
    const auto& id = s.agents[i].id;
    if (!valid_id(id)) {
      throw ValidationError("agent[" + std::to_string(i) + "].id",
                            "ids must be non-empty and free of whitespace and . , # = [ ]");
    }
    if (!ids.insert(id).second) {
      throw ValidationError("agent[" + std::to_string(i) + "].id", "duplicate id '" + id + "'");
    }
  }

  const std::size_t M = s.dimension();
  std::size_t n_adaptive = 0;
  for (const auto& a : s.agents) {
    if (a.kind == AgentKind::Averaging) {
      if (a.mu != 0.0 || !a.w0.empty() || a.input != GaussianParams{} ||
          a.noise != GaussianParams{} || a.counterpart) {
        throw ValidationError(a.id, "averaging agents take no mu, w0, input, noise or counterpart");
      }
      if (a.sources.empty()) {
        throw ValidationError(a.id + ".sources", "averaging agent needs at least one source");
      }
      for (const auto& src : a.sources) {
        const auto it = std::find_if(s.agents.begin(), s.agents.end(),
                                     [&](const AgentConfig& c) { return c.id == src; });
        if (it == s.agents.end()) {
          throw ValidationError(a.id + ".sources", "unknown agent '" + src + "'");
        }
        if (!it->adaptive()) {
          throw ValidationError(a.id + ".sources", "source '" + src +
                                                       "' must be cooperative or standalone");
        }
      }
      continue;
    }
    ++n_adaptive;
    if (!(a.mu >= 0.0) || !std::isfinite(a.mu)) {
      throw ValidationError(a.id + ".mu", "learning rate must be finite and >= 0");
    }
    if (a.w0.size() != M) {
      throw ValidationError(a.id + ".w0", "has " + std::to_string(a.w0.size()) +
                                              " components but w_opt has " + std::to_string(M));
    }
    if (!finite(a.w0)) throw ValidationError(a.id + ".w0", "must be finite");
    validate_gaussian(a.input, a.id + ".input");
    validate_gaussian(a.noise, a.id + ".noise");
    if (!a.sources.empty()) {
      throw ValidationError(a.id + ".sources", "only averaging agents take sources");
    }
    if (a.counterpart) {
      const std::string field = a.id + ".counterpart";
      if (*a.counterpart == a.id) throw ValidationError(field, "agent cannot be its own counterpart");
      std::size_t idx = 0;
      try {
        idx = s.agent_index(*a.counterpart);
      } catch (const LookupError&) {
        throw ValidationError(field, "unknown agent '" + *a.counterpart + "'");
      }
      const auto& c = s.agents[idx];
      if (!c.adaptive() || c.counterpart) {
        throw ValidationError(field, "counterpart must be an adaptive agent without its own counterpart");
      }
      if (c.input != a.input || c.noise != a.noise) {
        throw ValidationError(field, "counterpart '" + c.id +
                                         "' has different input/noise parameters");
      }
    }
  }
  if (n_adaptive == 0) throw ValidationError("agents", "scenario has no adaptive agents");

  if (s.trust.size() != n_adaptive) {
    throw ValidationError("trust", "matrix is " + std::to_string(s.trust.size()) + "x" +
                                       std::to_string(s.trust.size()) + " but there are " +
                                       std::to_string(n_adaptive) + " adaptive agents");
  }
  const auto adaptive = s.adaptive_agents();
  for (std::size_t r = 0; r < n_adaptive; ++r) {
    const auto& agent = s.agents[adaptive[r]];
    validate_trust_row(s.trust.row(r), "trust." + agent.id);
    if (agent.kind == AgentKind::Standalone && !s.trust.row_is_identity(r)) {
      throw ValidationError("trust." + agent.id, "standalone agents must trust only themselves");
    }
  }
}

Network make_network(const Scenario& s) {
  std::vector<NetworkAgent> agents;
  agents.reserve(s.agents.size());
  for (const auto& a : s.agents) {
    NetworkAgent n{a.id, a.kind, a.mu, {}};
    for (const auto& src : a.sources) n.sources.push_back(s.agent_index(src));
    agents.push_back(std::move(n));
  }
  return Network(std::move(agents), s.trust);
}

std::vector<std::optional<std::size_t>> stream_indices(const Scenario& s) {
  std::vector<std::optional<std::size_t>> out(s.agents.size());
  for (std::size_t i = 0; i < s.agents.size(); ++i) {
    const auto& a = s.agents[i];
    if (!a.adaptive()) continue;
    out[i] = s.trust_index(a.counterpart ? std::string_view(*a.counterpart)
                                         : std::string_view(a.id));
  }
  return out;
}

double default_band(const Scenario& s) {
  std::vector<WeightVector> initial;
  for (const auto& a : s.agents) {
    if (a.adaptive()) initial.push_back(a.w0);
  }
  return default_convergence_band(initial, s.w_opt);
}

std::span<const BuiltinInfo> builtin_catalog() { return kCatalog; }

Scenario builtin(std::string_view name) {
  if (name == "table1") return two_agent_scenario("table1", {0.5, 0.5, 0.0, 1.0, 0.5, 0.03, 0.03});
  if (name == "table2") return two_agent_scenario("table2", {0.2, 0.8, 0.0, 0.0, 0.5, 0.03, 0.03});
  if (name == "table3") return two_agent_scenario("table3", {0.8, 0.2, 0.0, 1.0, 0.5, 0.03, 0.03});
  if (name == "table4") return two_agent_scenario("table4", {0.5, 0.5, 0.0, 1.0, 0.9, 0.03, 0.03});
  if (name == "table5") return two_agent_scenario("table5", {0.5, 0.5, 0.0, 1.0, 0.5, 0.01, 0.2});

  std::string valid;
  for (const auto& info : kCatalog) {
    if (!valid.empty()) valid += ", ";
    valid += info.name;
  }
  throw LookupError("unknown builtin scenario '" + std::string(name) + "' (valid: " + valid + ")");
}

void apply_override(Scenario& s, std::string_view key, std::string_view value) {
  const auto dot = key.find('.');
  if (dot == std::string_view::npos) {
    text::set_network_field(s, key, value);
    return;
  }
  const auto head = key.substr(0, dot);
  const auto rest = key.substr(dot + 1);
  if (head == "trust") {
    const auto dot2 = rest.find('.');
    if (dot2 == std::string_view::npos) {
      throw ConfigError("trust overrides are trust.<from>.<to>=<coefficient>");
    }
    const auto from = s.trust_index(rest.substr(0, dot2));
    const auto to = s.trust_index(rest.substr(dot2 + 1));
    if (from >= s.trust.size() || to >= s.trust.size()) {
      throw ConfigError("trust matrix does not cover the adaptive agents");
    }
    s.trust.set(from, to, text::parse_double(value));
    return;
  }
  auto& agent = s.agents[s.agent_index(head)];
  if (rest == "id" || rest == "kind") {
    throw ConfigError("override cannot change '" + std::string(rest) + "' of an agent");
  }
  text::set_agent_field(agent, rest, value);
}

}  // namespace dlms
