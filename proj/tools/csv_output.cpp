#include "csv_output.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <ostream>

namespace dlms::cli {
namespace {

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

template <class T>
std::string optional_cell(const std::optional<T>& v) {
  if (!v) return {};
  if constexpr (std::is_floating_point_v<T>) {
    return format_real(*v);
  } else {
    return std::to_string(*v);
  }
}

std::vector<std::size_t> sorted_agents(const std::vector<std::string>& ids) {
  std::vector<std::size_t> order(ids.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return ids[a] < ids[b]; });
  return order;
}

}  // namespace

std::string format_real(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_trajectory_csv(std::ostream& out, std::span<const RunRecord> records) {
  const std::size_t M = records.empty() ? 1 : records.front().dimension();
  out << "run,iteration,agent";
  for (std::size_t m = 0; m < M; ++m) out << ",w" << m;
  out << ",e,dist_opt\n";
  if (records.empty()) return;

  const auto order = sorted_agents(records.front().agent_ids());
  std::string line;
  for (const auto& r : records) {
    for (std::size_t i = 1; i <= r.iterations(); ++i) {
      for (std::size_t k : order) {
        line.clear();
        line += std::to_string(r.run());
        line += ',';
        line += std::to_string(i);
        line += ',';
        line += r.agent_ids()[k];
        for (double c : r.w(i, k)) {
          line += ',';
          line += format_real(c);
        }
        line += ',';
        if (const double e = r.e(i, k); !std::isnan(e)) line += format_real(e);
        line += ',';
        line += format_real(r.distance(i, k));
        line += '\n';
        out << line;
      }
    }
  }
}

void write_metrics_csv(std::ostream& out, const MetricsReport& report, double band,
                       double window_fraction) {
  out << "metric,run,agent,peer,iteration,value\n";
  out << "convergence_band,,,,," << format_real(band) << "\n";
  out << "steady_state_window,,,,," << format_real(window_fraction) << "\n";
  const auto order = sorted_agents(report.agents);
  for (std::size_t k : order) {
    const auto& series = report.msd[k];
    for (std::size_t i = 0; i < series.size(); ++i) {
      out << "msd,," << report.agents[k] << ",," << (i + 1) << "," << format_real(series[i])
          << "\n";
    }
  }
  for (const auto& run : report.runs) {
    for (std::size_t k : order) {
      out << "convergence_iter," << run.run << "," << report.agents[k] << ",,,"
          << optional_cell(run.convergence_iter[k]) << "\n";
    }
    for (std::size_t k : order) {
      out << "steady_state_var," << run.run << "," << report.agents[k] << ",,,"
          << optional_cell(run.steady_state_var[k]) << "\n";
    }
    for (const auto& c : run.crossings) {
      out << "crossing_iter," << run.run << "," << c.agent_p << "," << c.agent_q << ",,"
          << optional_cell(c.iteration) << "\n";
    }
  }
}

void write_error_manifest(std::ostream& out, std::span<const DivergenceError> failures) {
  out << "run,agent,iteration,message\n";
  for (const auto& f : failures) {
    const auto& c = f.context();
    out << optional_cell(c.run) << "," << (c.agent ? quote(*c.agent) : "") << ","
        << optional_cell(c.iteration) << "," << quote(f.detail()) << "\n";
  }
}

std::filesystem::path sibling_path(const std::filesystem::path& out, const std::string& tag) {
  std::filesystem::path stem = out;
  if (stem.extension() == ".csv") stem.replace_extension();
  return stem.string() + "." + tag + ".csv";
}

}  // namespace dlms::cli
