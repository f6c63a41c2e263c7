#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace dlms {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters or inconsistent configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A scenario failed validation. `field()` names the offending field.
class ValidationError : public ConfigError {
 public:
  ValidationError(std::string field, const std::string& message)
      : ConfigError(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Malformed scenario text. Line numbers are 1-based.
class ParseError : public ConfigError {
 public:
  ParseError(std::size_t line, const std::string& message)
      : ConfigError("line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Unknown builtin scenario, agent id, or similar name lookup failure.
class LookupError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Where in a simulation a divergence happened. Fields are filled in as
/// the error propagates outward: the network layer sets the agent, the
/// runner sets the run and iteration.
struct DivergenceContext {
  std::optional<std::string> agent;
  std::optional<std::size_t> iteration;
  std::optional<std::size_t> run;
};

/// A weight estimate became non-finite or exceeded the divergence bound.
class DivergenceError : public Error {
 public:
  explicit DivergenceError(std::string detail, DivergenceContext context = {})
      : Error(describe(detail, context)),
        detail_(std::move(detail)),
        context_(std::move(context)) {}

  DivergenceError with_agent(std::string agent) const {
    DivergenceContext c = context_;
    c.agent = std::move(agent);
    return DivergenceError(detail_, std::move(c));
  }
  DivergenceError with_iteration(std::size_t iteration) const {
    DivergenceContext c = context_;
    c.iteration = iteration;
    return DivergenceError(detail_, std::move(c));
  }
  DivergenceError with_run(std::size_t run) const {
    DivergenceContext c = context_;
    c.run = run;
    return DivergenceError(detail_, std::move(c));
  }

  const std::string& detail() const noexcept { return detail_; }
  const DivergenceContext& context() const noexcept { return context_; }

 private:
  static std::string describe(const std::string& detail,
                              const DivergenceContext& c) {
    std::string message = "divergence";
    if (c.run) message += " in run " + std::to_string(*c.run);
    if (c.agent) message += " at agent '" + *c.agent + "'";
    if (c.iteration) message += " at iteration " + std::to_string(*c.iteration);
    return message + ": " + detail;
  }

  std::string detail_;
  DivergenceContext context_;
};

}  // namespace dlms
