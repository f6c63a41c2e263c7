#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "dlms/error.hpp"
#include "dlms/scenario.hpp"
#include "text.hpp"

namespace dlms {
namespace text {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  if (trim(s).empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string format_vector(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_double(v[i]);
  }
  return out;
}

double parse_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw ConfigError("expected a number, got '" + std::string(s) + "'");
  }
  return v;
}

std::uint64_t parse_u64(std::string_view s) {
  s = trim(s);
  int base = 10;
  if (s.starts_with("0x") || s.starts_with("0X")) {
    s.remove_prefix(2);
    base = 16;
  }
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v, base);
  if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw ConfigError("expected a non-negative integer, got '" + std::string(s) + "'");
  }
  return v;
}

std::vector<double> parse_vector(std::string_view s) {
  std::vector<double> out;
  for (auto piece : split(s, ',')) out.push_back(parse_double(piece));
  if (out.empty()) throw ConfigError("expected at least one number");
  return out;
}

void set_agent_field(AgentConfig& agent, std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "id") {
    agent.id = std::string(value);
  } else if (key == "kind") {
    agent.kind = parse_agent_kind(value);
  } else if (key == "mu") {
    agent.mu = parse_double(value);
  } else if (key == "w0") {
    agent.w0 = parse_vector(value);
  } else if (key == "input_mean") {
    agent.input.mean = parse_double(value);
  } else if (key == "input_sd") {
    agent.input.sd = parse_double(value);
  } else if (key == "noise_mean") {
    agent.noise.mean = parse_double(value);
  } else if (key == "noise_sd") {
    agent.noise.sd = parse_double(value);
  } else if (key == "counterpart") {
    if (value.empty()) {
      agent.counterpart.reset();
    } else {
      agent.counterpart = std::string(value);
    }
  } else if (key == "sources") {
    agent.sources.clear();
    for (auto id : split(value, ',')) agent.sources.emplace_back(id);
  } else {
    throw LookupError("unknown agent key '" + std::string(key) + "'");
  }
}

void set_network_field(Scenario& scenario, std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "name") {
    scenario.name = std::string(value);
  } else if (key == "w_opt") {
    scenario.w_opt = parse_vector(value);
  } else if (key == "iterations") {
    scenario.iterations = parse_u64(value);
  } else if (key == "seed") {
    scenario.seed = parse_u64(value);
  } else if (key == "ensemble") {
    scenario.ensemble = parse_u64(value);
  } else {
    throw LookupError("unknown network key '" + std::string(key) + "'");
  }
}

}  // namespace text

namespace {

enum class Section { None, Network, Agent, Trust };

struct TrustEntry {
  std::string from;
  std::string to;
  double value;
  std::size_t line;
};

}  // namespace

Scenario parse_unvalidated(std::string_view input) {
  Scenario scenario;
  scenario.agents.clear();
  Section section = Section::None;
  std::vector<TrustEntry> entries;
  std::set<std::string> seen_keys;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= input.size()) {
    const auto end = input.find('\n', pos);
    std::string_view line = input.substr(pos, end == std::string_view::npos
                                                  ? std::string_view::npos
                                                  : end - pos);
    pos = end == std::string_view::npos ? input.size() + 1 : end + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = text::trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(line_no, "unterminated section header");
      const auto name = text::trim(line.substr(1, line.size() - 2));
      seen_keys.clear();
      if (name == "network") {
        section = Section::Network;
      } else if (name == "agent") {
        section = Section::Agent;
        scenario.agents.emplace_back();
      } else if (name == "trust") {
        section = Section::Trust;
      } else {
        throw ParseError(line_no, "unknown section [" + std::string(name) + "]");
      }
      continue;
    }

    try {
      if (section == Section::Trust) {
        std::istringstream fields{std::string(line)};
        std::string from, to, coef, extra;
        if (!(fields >> from >> to >> coef) || (fields >> extra)) {
          throw ParseError(line_no, "trust rows are 'from to coefficient'");
        }
        entries.push_back({from, to, text::parse_double(coef), line_no});
        continue;
      }

      const auto eq = line.find('=');
      if (eq == std::string_view::npos) throw ParseError(line_no, "expected key = value");
      const auto key = text::trim(line.substr(0, eq));
      const auto value = line.substr(eq + 1);
      if (key.empty()) throw ParseError(line_no, "missing key before '='");
      if (!seen_keys.insert(std::string(key)).second) {
        throw ParseError(line_no, "duplicate key '" + std::string(key) + "'");
      }

      switch (section) {
        case Section::None:
          throw ParseError(line_no, "key '" + std::string(key) + "' outside a section");
        case Section::Network:
          text::set_network_field(scenario, key, value);
          break;
        case Section::Agent:
          text::set_agent_field(scenario.agents.back(), key, value);
          break;
        case Section::Trust:
          break;
      }
    } catch (const ParseError&) {
      throw;
    } catch (const ConfigError& err) {
      throw ParseError(line_no, err.what());
    }
  }

  // Resolve trust triples against the adaptive agents.
  std::map<std::string, std::size_t> row_of;
  for (const auto& agent : scenario.agents) {
    if (agent.adaptive() && !agent.id.empty()) {
      row_of.emplace(agent.id, row_of.size());
    }
  }
  const std::size_t n = row_of.size();
  scenario.trust = TrustMatrix(n);
  std::vector<bool> has_row(n, false);
  std::set<std::pair<std::size_t, std::size_t>> assigned;
  for (const auto& entry : entries) {
    const auto from = row_of.find(entry.from);
    const auto to = row_of.find(entry.to);
    if (from == row_of.end()) {
      throw ParseError(entry.line, "trust row names unknown adaptive agent '" + entry.from + "'");
    }
    if (to == row_of.end()) {
      throw ParseError(entry.line, "trust row names unknown adaptive agent '" + entry.to + "'");
    }
    if (!assigned.emplace(from->second, to->second).second) {
      throw ParseError(entry.line, "duplicate trust entry " + entry.from + " -> " + entry.to);
    }
    scenario.trust.set(from->second, to->second, entry.value);
    has_row[from->second] = true;
  }
  for (std::size_t r = 0; r < n; ++r) {
    if (!has_row[r]) scenario.trust.set(r, r, 1.0);
  }
  return scenario;
}

Scenario parse(std::string_view text) {
  Scenario scenario = parse_unvalidated(text);
  validate(scenario);
  return scenario;
}

std::string serialize(const Scenario& scenario) {
  using text::format_double;
  using text::format_vector;
  std::ostringstream out;
  out << "[network]\n";
  if (!scenario.name.empty()) out << "name = " << scenario.name << "\n";
  out << "w_opt = " << format_vector(scenario.w_opt) << "\n"
      << "iterations = " << scenario.iterations << "\n"
      << "seed = " << scenario.seed << "\n"
      << "ensemble = " << scenario.ensemble << "\n";

  for (const auto& agent : scenario.agents) {
    out << "\n[agent]\n"
        << "id = " << agent.id << "\n"
        << "kind = " << to_string(agent.kind) << "\n";
    if (agent.kind == AgentKind::Averaging) {
      out << "sources = ";
      for (std::size_t i = 0; i < agent.sources.size(); ++i) {
        out << (i ? ", " : "") << agent.sources[i];
      }
      out << "\n";
      continue;
    }
    out << "mu = " << format_double(agent.mu) << "\n"
        << "w0 = " << format_vector(agent.w0) << "\n"
        << "input_mean = " << format_double(agent.input.mean) << "\n"
        << "input_sd = " << format_double(agent.input.sd) << "\n"
        << "noise_mean = " << format_double(agent.noise.mean) << "\n"
        << "noise_sd = " << format_double(agent.noise.sd) << "\n";
    if (agent.counterpart) out << "counterpart = " << *agent.counterpart << "\n";
  }

  const auto adaptive = scenario.adaptive_agents();
  out << "\n[trust]\n";
  for (std::size_t r = 0; r < scenario.trust.size() && r < adaptive.size(); ++r) {
    for (std::size_t c = 0; c < scenario.trust.size() && c < adaptive.size(); ++c) {
      const double s = scenario.trust(r, c);
      if (s == 0.0) continue;
      out << scenario.agents[adaptive[r]].id << " " << scenario.agents[adaptive[c]].id
          << " " << format_double(s) << "\n";
    }
  }
  return out.str();
}

}  // namespace dlms
