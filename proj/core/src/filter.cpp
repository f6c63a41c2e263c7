#include "dlms/filter.hpp"

#include <cmath>
#include <string>

#include "dlms/error.hpp"

namespace dlms {
namespace {

void check_dataset(std::span<const double> w,
                   std::span<const std::vector<double>> inputs,
                   std::span<const double> targets) {
  if (inputs.empty()) throw ConfigError("empty dataset: L must be >= 1");
  if (inputs.size() != targets.size()) {
    throw ConfigError("dataset has " + std::to_string(inputs.size()) +
                      " regressors but " + std::to_string(targets.size()) +
                      " targets");
  }
  for (const auto& x : inputs) {
    if (x.size() != w.size()) {
      throw ConfigError("regressor length " + std::to_string(x.size()) +
                        " does not match weight length " +
                        std::to_string(w.size()));
    }
  }
}

bool all_finite(std::span<const double> v) {
  for (double c : v) {
    if (!std::isfinite(c)) return false;
  }
  return true;
}

}  // namespace

void check_weights(std::span<const double> w) {
  for (std::size_t m = 0; m < w.size(); ++m) {
    if (!std::isfinite(w[m])) {
      throw DivergenceError("weight component " + std::to_string(m) +
                            " is not finite");
    }
    if (std::abs(w[m]) > kDivergenceBound) {
      throw DivergenceError("weight component " + std::to_string(m) +
                            " exceeds 1e12 in magnitude");
    }
  }
}

double predict(std::span<const double> w, std::span<const double> x) {
  if (w.size() != x.size()) {
    throw ConfigError("predict: weight length " + std::to_string(w.size()) +
                      " != input length " + std::to_string(x.size()));
  }
  double sum = 0.0;
  for (std::size_t m = 0; m < w.size(); ++m) sum += w[m] * x[m];
  return sum;
}

double cost(std::span<const double> w, std::span<const std::vector<double>> inputs,
            std::span<const double> targets) {
  check_dataset(w, inputs, targets);
  double sum = 0.0;
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    const double r = targets[k] - predict(w, inputs[k]);
    sum += r * r;
  }
  return sum / (2.0 * static_cast<double>(inputs.size()));
}

WeightVector batch_gd_step(std::span<const double> w,
                           std::span<const std::vector<double>> inputs,
                           std::span<const double> targets, double mu) {
  if (!(mu > 0.0)) throw ConfigError("batch_gd_step: mu must be > 0");
  check_dataset(w, inputs, targets);

  std::vector<double> direction(w.size(), 0.0);
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    const double r = targets[k] - predict(w, inputs[k]);
    for (std::size_t m = 0; m < w.size(); ++m) direction[m] += r * inputs[k][m];
  }
  const double scale = mu / static_cast<double>(inputs.size());
  WeightVector next(w.begin(), w.end());
  for (std::size_t m = 0; m < w.size(); ++m) next[m] += scale * direction[m];
  return next;
}

LmsUpdate lms_step(std::span<const double> psi, std::span<const double> x,
                   double y, double mu) {
  if (!(mu >= 0.0)) throw ConfigError("lms_step: mu must be >= 0");
  if (!all_finite(psi) || !all_finite(x) || !std::isfinite(y)) {
    throw DivergenceError("non-finite input to LMS step");
  }
  LmsUpdate out;
  out.e = y - predict(psi, x);
  out.w.assign(psi.begin(), psi.end());
  for (std::size_t m = 0; m < x.size(); ++m) out.w[m] += mu * out.e * x[m];
  check_weights(out.w);
  return out;
}

}  // namespace dlms
