#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "dlms/error.hpp"
#include "dlms/metrics.hpp"
#include "dlms/prng.hpp"
#include "dlms/scenario.hpp"
#include "dlms/signal.hpp"

namespace dlms {

/// Environment variable capping the number of worker threads.
inline constexpr const char* kThreadsEnvVar = "DLMS_THREADS";

struct RunOptions {
  /// 0 picks DLMS_THREADS if set, else the hardware concurrency.
  std::size_t threads = 0;
};

/// Per-agent observations of one run. Stream k of run r is seeded with
/// stream_seed(scenario.seed, r, k); an agent with a counterpart reads the
/// counterpart's stream, so both see the same samples.
class SampleSource {
 public:
  SampleSource(const Scenario& scenario, std::size_t run);

  /// Draws the next iteration's samples, one per agent. Averaging agents
  /// get an empty sample.
  const std::vector<SignalSample>& next();

  const RandomStream& stream(std::size_t index) const { return streams_[index]; }
  std::size_t stream_count() const noexcept { return streams_.size(); }

 private:
  const Scenario* scenario_;
  std::vector<std::optional<std::size_t>> index_of_agent_;
  std::vector<RandomStream> streams_;
  std::vector<const AgentConfig*> stream_owner_;
  std::vector<SignalSample> by_stream_;
  std::vector<SignalSample> by_agent_;
};

/// Initial state of every agent: w = psi = w0, e = 0; averaging agents
/// start at the mean of their sources.
std::vector<AgentState> initial_states(const Scenario& scenario);

/// One run of a validated scenario. Throws DivergenceError carrying the
/// run, agent and iteration.
RunRecord run_single(const Scenario& scenario, std::size_t run);

struct EnsembleResult {
  /// Completed runs in run order.
  std::vector<RunRecord> records;
  /// One entry per diverged run, in run order.
  std::vector<DivergenceError> failures;
};

/// Validates, then executes every ensemble run, possibly in parallel.
EnsembleResult run_ensemble(const Scenario& scenario, const RunOptions& options = {});

/// As run_ensemble, but throws the first DivergenceError instead of
/// returning partial results.
std::vector<RunRecord> run(const Scenario& scenario, const RunOptions& options = {});

/// Resolved worker count for `options`.
std::size_t worker_count(const RunOptions& options, std::size_t jobs);

}  // namespace dlms
