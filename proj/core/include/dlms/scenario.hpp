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
#include "dlms/signal.hpp"

namespace dlms {

struct AgentConfig {
  std::string id;
  AgentKind kind = AgentKind::Cooperative;
  double mu = 0.0;
  WeightVector w0;
  GaussianParams input;
  GaussianParams noise;
  /// Agent whose signal realizations this one shares.
  std::optional<std::string> counterpart;
  /// Agents averaged by an averaging agent.
  std::vector<std::string> sources;

  bool adaptive() const noexcept { return kind != AgentKind::Averaging; }

  friend bool operator==(const AgentConfig&, const AgentConfig&) = default;
};

/// Full experiment description. `trust` covers the adaptive agents in the
/// order they appear in `agents`.
struct Scenario {
  std::string name;
  std::vector<AgentConfig> agents;
  TrustMatrix trust;
  WeightVector w_opt{2.0};
  std::size_t iterations = 1000;
  std::uint64_t seed = 42;
  std::size_t ensemble = 100;

  std::size_t dimension() const noexcept { return w_opt.size(); }
  /// Throws LookupError for an unknown id.
  std::size_t agent_index(std::string_view id) const;
  /// Position of agent `id` among the adaptive agents (its trust row).
  std::size_t trust_index(std::string_view id) const;
  std::vector<std::size_t> adaptive_agents() const;
  /// Trust coefficient s_{from,to} between two adaptive agents.
  double trust_between(std::string_view from, std::string_view to) const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Checks every scenario invariant. Throws ValidationError naming the field.
void validate(const Scenario& scenario);

/// Builds the simulation topology of a validated scenario.
Network make_network(const Scenario& scenario);

/// Stream index of every agent: adaptive agents use their trust index, or
/// their counterpart's; averaging agents have none.
std::vector<std::optional<std::size_t>> stream_indices(const Scenario& scenario);

/// Default convergence band of a scenario (see default_convergence_band).
double default_band(const Scenario& scenario);

struct BuiltinInfo {
  std::string_view name;
  std::string_view description;
};

/// The five built-in two-agent experiments, in order.
std::span<const BuiltinInfo> builtin_catalog();

/// Throws LookupError listing the valid names.
Scenario builtin(std::string_view name);

/// Parses the line-oriented scenario format and validates the result.
/// Syntax problems raise ParseError (with line), invariant violations
/// raise ValidationError.
Scenario parse(std::string_view text);

/// Parses without the final validation pass.
Scenario parse_unvalidated(std::string_view text);

/// Writes `scenario` in the format read by parse(); numbers use the
/// shortest round-trip representation.
std::string serialize(const Scenario& scenario);

/// Applies one override. Keys: name, w_opt, iterations, seed, ensemble,
/// <agent>.<field> with a field name from the [agent] section, and
/// trust.<from>.<to>. The scenario is left unvalidated.
void apply_override(Scenario& scenario, std::string_view key, std::string_view value);

}  // namespace dlms
