#pragma once

#include <span>
#include <vector>

#include "dlms/prng.hpp"

namespace dlms {

struct GaussianParams {
  double mean = 0.0;
  double sd = 0.0;

  friend bool operator==(const GaussianParams&, const GaussianParams&) = default;
};

/// One observation of the linear model y = w_opt . x + q.
struct SignalSample {
  std::vector<double> x;
  double y = 0.0;
  /// Noise realization; kept for diagnostics, never read by agents.
  double q = 0.0;

  friend bool operator==(const SignalSample&, const SignalSample&) = default;
};

/// Draws x component by component, then q, from `stream`: exactly
/// w_opt.size() + 1 Gaussian deviates per call.
SignalSample generate_sample(RandomStream& stream, std::span<const double> w_opt,
                             const GaussianParams& input,
                             const GaussianParams& noise);

}  // namespace dlms
