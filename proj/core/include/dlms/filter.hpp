#pragma once

#include <span>
#include <vector>

namespace dlms {

/// Parameter estimate w (length M).
using WeightVector = std::vector<double>;

/// Any weight component beyond this magnitude counts as divergence.
inline constexpr double kDivergenceBound = 1e12;

/// Throws DivergenceError if a component is non-finite or above the bound.
void check_weights(std::span<const double> w);

/// Linear prediction w . x. Throws ConfigError on length mismatch.
double predict(std::span<const double> w, std::span<const double> x);

// Batch reference operations. `inputs` holds one regressor x(k) per time
// instant k, `targets` the matching y(k). These serve as oracles; the
// simulator loop only uses lms_step.

/// Sum-of-squares cost (1/2L) sum_k (y(k) - w . x(k))^2.
double cost(std::span<const double> w, std::span<const std::vector<double>> inputs,
            std::span<const double> targets);

/// One full-batch gradient descent step w + mu (1/L) sum_k e(k) x(k).
WeightVector batch_gd_step(std::span<const double> w,
                           std::span<const std::vector<double>> inputs,
                           std::span<const double> targets, double mu);

struct LmsUpdate {
  WeightVector w;
  double e = 0.0;
};

/// Instantaneous-gradient step from the combined estimate psi:
/// e = y - psi . x, w = psi + mu e x.
///
/// Throws DivergenceError when an input or the result is non-finite or the
/// result exceeds kDivergenceBound.
LmsUpdate lms_step(std::span<const double> psi, std::span<const double> x,
                   double y, double mu);

}  // namespace dlms
