#pragma once

// Number and token helpers shared by the config reader and overrides.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dlms/scenario.hpp"

namespace dlms::text {

std::string_view trim(std::string_view s);

/// Splits on `sep`, trimming each piece. Empty input yields no pieces.
std::vector<std::string_view> split(std::string_view s, char sep);

/// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);
std::string format_vector(const std::vector<double>& v);

// The parsers throw ConfigError describing the offending text.
double parse_double(std::string_view s);
std::uint64_t parse_u64(std::string_view s);
std::vector<double> parse_vector(std::string_view s);

/// Sets one [agent] field by key; throws LookupError on an unknown key.
void set_agent_field(AgentConfig& agent, std::string_view key, std::string_view value);

/// Sets one [network] field by key; throws LookupError on an unknown key.
void set_network_field(Scenario& scenario, std::string_view key, std::string_view value);

}  // namespace dlms::text
