#include "dlms/signal.hpp"

#include "dlms/error.hpp"

namespace dlms {

SignalSample generate_sample(RandomStream& stream, std::span<const double> w_opt,
                             const GaussianParams& input,
                             const GaussianParams& noise) {
  if (w_opt.empty()) throw ConfigError("w_opt must have at least one component");

  SignalSample sample;
  sample.x.reserve(w_opt.size());
  for (std::size_t m = 0; m < w_opt.size(); ++m) {
    sample.x.push_back(stream.next_gaussian(input.mean, input.sd));
  }
  sample.q = stream.next_gaussian(noise.mean, noise.sd);

  double clean = 0.0;
  for (std::size_t m = 0; m < w_opt.size(); ++m) clean += w_opt[m] * sample.x[m];
  sample.y = clean + sample.q;
  return sample;
}

}  // namespace dlms
