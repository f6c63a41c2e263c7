#include "dlms/prng.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "dlms/error.hpp"

namespace dlms {

std::pair<double, double> box_muller(double u1, double u2) {
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

double RandomStream::next_gaussian(double mean, double sd) {
  if (!(sd >= 0.0)) {
    throw ConfigError("gaussian standard deviation must be >= 0, got " +
                      std::to_string(sd));
  }
  double z;
  if (cached_) {
    z = *cached_;
    cached_.reset();
  } else {
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const auto [z0, z1] = box_muller(u1, u2);
    cached_ = z1;
    z = z0;
  }
  return mean + sd * z;
}

}  // namespace dlms
