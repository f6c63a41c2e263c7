#include "dlms/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>

#include "text.hpp"

namespace dlms {

SampleSource::SampleSource(const Scenario& scenario, std::size_t run)
    : scenario_(&scenario), index_of_agent_(stream_indices(scenario)) {
  const std::size_t n_streams = scenario.trust.size();
  streams_.reserve(n_streams);
  for (std::size_t k = 0; k < n_streams; ++k) {
    streams_.emplace_back(stream_seed(scenario.seed, run, k));
  }
  stream_owner_.assign(n_streams, nullptr);
  for (std::size_t i = 0; i < scenario.agents.size(); ++i) {
    const auto& k = index_of_agent_[i];
    if (k && !stream_owner_[*k]) stream_owner_[*k] = &scenario.agents[i];
  }
  by_stream_.resize(n_streams);
  by_agent_.resize(scenario.agents.size());
}

const std::vector<SignalSample>& SampleSource::next() {
  for (std::size_t k = 0; k < streams_.size(); ++k) {
    if (const AgentConfig* owner = stream_owner_[k]) {
      by_stream_[k] = generate_sample(streams_[k], scenario_->w_opt, owner->input, owner->noise);
    }
  }
  for (std::size_t i = 0; i < by_agent_.size(); ++i) {
    if (const auto& k = index_of_agent_[i]) by_agent_[i] = by_stream_[*k];
  }
  return by_agent_;
}

std::vector<AgentState> initial_states(const Scenario& scenario) {
  std::vector<AgentState> states(scenario.agents.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto& a = scenario.agents[i];
    if (a.adaptive()) states[i] = {a.w0, a.w0, 0.0};
  }
  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto& a = scenario.agents[i];
    if (a.adaptive()) continue;
    std::vector<WeightVector> sources;
    for (const auto& src : a.sources) sources.push_back(states[scenario.agent_index(src)].w);
    states[i].w = averaging_update(sources);
    states[i].psi = states[i].w;
  }
  return states;
}

RunRecord run_single(const Scenario& scenario, std::size_t run) {
  validate(scenario);
  const Network network = make_network(scenario);
  std::vector<std::string> ids;
  for (const auto& a : scenario.agents) ids.push_back(a.id);
  RunRecord record(std::move(ids), scenario.w_opt, scenario.iterations, scenario.seed, run);

  SampleSource source(scenario, run);
  std::vector<AgentState> states = initial_states(scenario);
  for (std::size_t i = 1; i <= scenario.iterations; ++i) {
    try {
      states = cta_iteration(states, network, source.next());
    } catch (const DivergenceError& err) {
      throw err.with_run(run).with_iteration(i);
    }
    for (std::size_t k = 0; k < states.size(); ++k) record.set(i, k, states[k]);
  }
  return record;
}

std::size_t worker_count(const RunOptions& options, std::size_t jobs) {
  std::size_t threads = options.threads;
  if (threads == 0) {
    if (const char* env = std::getenv(kThreadsEnvVar); env && *env) {
      try {
        threads = static_cast<std::size_t>(text::parse_u64(env));
      } catch (const ConfigError&) {
        throw ConfigError(std::string(kThreadsEnvVar) + " must be a positive integer");
      }
    }
  }
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  return std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(jobs, 1));
}

EnsembleResult run_ensemble(const Scenario& scenario, const RunOptions& options) {
  validate(scenario);
  const std::size_t runs = scenario.ensemble;
  std::vector<std::optional<RunRecord>> records(runs);
  std::vector<std::optional<DivergenceError>> failures(runs);

  std::atomic<std::size_t> next_run{0};
  auto worker = [&] {
    for (std::size_t r = next_run++; r < runs; r = next_run++) {
      try {
        records[r].emplace(run_single(scenario, r));
      } catch (const DivergenceError& err) {
        failures[r].emplace(err);
      }
    }
  };

  const std::size_t n_workers = worker_count(options, runs);
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_workers);
    for (std::size_t t = 0; t < n_workers; ++t) pool.emplace_back(worker);
  }

  EnsembleResult result;
  for (std::size_t r = 0; r < runs; ++r) {
    if (records[r]) result.records.push_back(std::move(*records[r]));
    if (failures[r]) result.failures.push_back(std::move(*failures[r]));
  }
  return result;
}

std::vector<RunRecord> run(const Scenario& scenario, const RunOptions& options) {
  EnsembleResult result = run_ensemble(scenario, options);
  if (!result.failures.empty()) throw result.failures.front();
  return std::move(result.records);
}

}  // namespace dlms
